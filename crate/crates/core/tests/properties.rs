mod common;

use common::{condition_ratio, gaussian, random_orthonormal};
use proptest::prelude::*;
use voronoi_cur_core::cssp::{deim_select, reconstruction_error, select_columns, Method, SelectionConfig};
use voronoi_cur_core::partition::{init_partition, update_centroids_adapt, Algorithm};

fn methods() -> impl Strategy<Value = Method> {
    prop::sample::select(Method::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn deim_indices_distinct(n in 2usize..24, r in 1usize..7, seed in any::<u64>()) {
        let r = r.min(n);
        let mut p = deim_select(&random_orthonormal(n, r, seed)).unwrap();
        p.sort();
        p.dedup();
        prop_assert_eq!(p.len(), r);
        prop_assert!(p.iter().all(|&i| i < n));
    }

    #[test]
    fn reconstruction_error_in_unit_interval(m in 2usize..10, n in 2usize..10, seed in any::<u64>()) {
        let a = gaussian(m, n, seed);
        let e = reconstruction_error(&a, &a.select_columns(&[0])).unwrap();
        prop_assert!((0.0..=1.0 + f64::EPSILON).contains(&e));
    }

    #[test]
    fn init_partition_covers_every_set(n in 1usize..60, k in 1usize..10, seed in any::<u64>()) {
        let k = k.min(n);
        let p = init_partition(n, k, seed).unwrap();
        prop_assert_eq!(p.num_columns(), n);
        prop_assert!(p.sizes().iter().all(|&s| s > 0));
    }

    #[test]
    fn adaptive_dims_sum_to_rank(sizes in prop::collection::vec(1usize..6, 1..5), seed in any::<u64>()) {
        let parts: Vec<_> = sizes.iter().enumerate()
            .map(|(i, &c)| gaussian(6, c, seed.wrapping_add(i as u64))).collect();
        let pooled: usize = sizes.iter().map(|&c| c.min(6)).sum();
        let up = update_centroids_adapt(&parts, pooled).unwrap();
        prop_assert_eq!(up.dims.iter().sum::<usize>(), pooled);
        for (d, p) in up.dims.iter().zip(&parts) {
            prop_assert!(*d <= p.cols());
        }
    }

    #[test]
    fn selections_are_interpretable_and_full_rank(
        method in methods(), (k, r) in (1usize..4).prop_flat_map(|k| (Just(k), k..7)), seed in 0u64..1000,
    ) {
        let a = gaussian(10, 14, seed);
        let cfg = SelectionConfig::new(method, k, r).with_seed(seed);
        let out = select_columns(&a, &cfg).unwrap();
        let sel = &out.selection;
        prop_assert!(sel.rank() <= r);
        if !matches!(method, Method::Partitioned(Algorithm::Vqpca | Algorithm::AdaptVqpca)) {
            prop_assert_eq!(sel.rank(), r);
        }
        for (&g, col) in sel.indices.iter().zip(sel.c.columns()) {
            prop_assert_eq!(a.col(g), col);
        }
        prop_assert!(condition_ratio(&sel.c) > 1e-8);
        prop_assert!(out.report.intermediate.slack() >= -1e-12);
    }
}
