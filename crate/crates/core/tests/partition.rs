mod common;

use common::{desk_snn, fro, gaussian, random_orthonormal, sym_eigen};
use rand_distr::{Distribution, StandardNormal};
use voronoi_cur_core::data::{rng_for, Stream};
use voronoi_cur_core::linalg::{singular_values, thin_svd, OrthonormalBasis};
use voronoi_cur_core::partition::{
    energy_g1, energy_g2, find_voronoi_sets, lloyd_run, lloyd_run_from, update_centroids_adapt,
    update_centroids_fixed, Algorithm, Centroid, CentroidSet, PartitionConfig, VoronoiPartition,
};
use voronoi_cur_core::DenseMatrix;

fn column_loop_energy(a: &DenseMatrix, p: &VoronoiPartition, cs: &CentroidSet, shift: bool) -> f64 {
    let mut total = 0.0;
    for j in 0..a.cols() {
        let c = cs.get(p.label(j));
        let mut x = a.col(j).to_vec();
        if let (true, Some(z)) = (shift, &c.shift) {
            x.iter_mut().zip(z).for_each(|(v, s)| *v -= s);
        }
        let u = c.basis.matrix();
        let mut r = x.clone();
        for t in 0..u.cols() {
            let d: f64 = (0..x.len()).map(|i| u[(i, t)] * x[i]).sum();
            for i in 0..x.len() {
                r[i] -= d * u[(i, t)];
            }
        }
        total += r.iter().map(|v| v * v).sum::<f64>();
    }
    total
}

fn seeded_centroids(m: usize, dims: &[usize], seed: u64, shifts: bool) -> CentroidSet {
    let centroids = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| Centroid {
            basis: if d == 0 {
                OrthonormalBasis::empty(m)
            } else {
                OrthonormalBasis::new(random_orthonormal(m, d, seed + i as u64)).unwrap()
            },
            shift: shifts.then(|| gaussian(m, 1, seed + 50 + i as u64).into_vec()),
        })
        .collect();
    CentroidSet::new(m, centroids).unwrap()
}

#[test]
fn energies_match_column_loop_oracle() {
    let a = gaussian(8, 30, 3);
    let p = VoronoiPartition::new(3, (0..30).map(|j| (j * 7) % 3).collect()).unwrap();
    let cs = seeded_centroids(8, &[2, 0, 3], 10, true);
    let g1 = energy_g1(&a, &p, &cs).unwrap();
    let g2 = energy_g2(&a, &p, &cs).unwrap();
    assert!((g1 - column_loop_energy(&a, &p, &cs, false)).abs() < 1e-10 * g1);
    assert!((g2 - column_loop_energy(&a, &p, &cs, true)).abs() < 1e-10 * g2);
}

#[test]
fn g2_of_singleton_sets_is_zero() {
    let a = gaussian(4, 3, 1);
    let p = VoronoiPartition::new(3, vec![0, 1, 2]).unwrap();
    let cs = CentroidSet::new(
        4,
        (0..3)
            .map(|j| Centroid {
                basis: OrthonormalBasis::empty(4),
                shift: Some(a.col(j).to_vec()),
            })
            .collect(),
    )
    .unwrap();
    assert_eq!(energy_g2(&a, &p, &cs).unwrap(), 0.0);
}

#[test]
fn fixed_update_matches_eigen_oracle() {
    let part = gaussian(6, 10, 17);
    let up = update_centroids_fixed(std::slice::from_ref(&part), &[2]).unwrap();
    let (_, evecs) = sym_eigen(&part.matmul(&part.transpose()).unwrap());
    let u = up.centroids.get(0).basis.matrix();
    for t in 0..2 {
        let dot: f64 = (0..6).map(|i| u[(i, t)] * evecs[(i, t)]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-8);
        // Sign convention: the largest-magnitude entry is positive.
        let col = u.col(t);
        let big = col.iter().copied().fold(0.0f64, |b, x| if x.abs() > b.abs() { x } else { b });
        assert!(big > 0.0);
    }
}

#[test]
fn adaptive_update_matches_pooled_sort_oracle() {
    let parts: Vec<DenseMatrix> = (0..5).map(|i| gaussian(7, 2 + i, 60 + i as u64)).collect();
    let up = update_centroids_adapt(&parts, 12).unwrap();
    let mut triples = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for (c, s) in singular_values(p).into_iter().enumerate() {
            triples.push((s, i, c));
        }
    }
    triples.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut dims = vec![0; 5];
    for &(_, i, _) in &triples[..12] {
        dims[i] += 1;
    }
    assert_eq!(up.dims, dims);
    assert_eq!(up.dims.iter().sum::<usize>(), 12);
    assert_eq!(up.contributing, dims.iter().filter(|&&d| d > 0).count());
}

#[test]
fn single_set_energy_is_svd_tail() {
    let a = desk_snn(4);
    let cfg = PartitionConfig::new(Algorithm::Cvod, 1, 10);
    let out = lloyd_run(&a, &cfg).unwrap();
    let sv = singular_values(&a);
    let tail: f64 = sv[10..].iter().map(|s| s * s).sum();
    let g = out.trace.final_energy().unwrap();
    assert!((g - tail).abs() < 1e-9 * tail, "{g} vs {tail}");
    assert_eq!(out.final_sets(), 1);
}

/// Columns near span(e1) or span(e2) in ℝ³; returns the matrix and the true labels.
fn two_clusters() -> (DenseMatrix, Vec<usize>) {
    let mut rng = rng_for(9, Stream::Test(1));
    let mut cols = Vec::new();
    let mut truth = Vec::new();
    for j in 0..40 {
        let axis = j % 2;
        let mut x = [0.0; 3];
        for v in x.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut rng);
            *v = 0.01 * g;
        }
        let s: f64 = StandardNormal.sample(&mut rng);
        x[axis] += 1.0 + s.abs();
        cols.push(x.to_vec());
        truth.push(axis);
    }
    (DenseMatrix::from_columns(3, &cols).unwrap(), truth)
}

#[test]
fn adaptive_run_separates_two_clusters() {
    let (a, truth) = two_clusters();
    let cfg = PartitionConfig::new(Algorithm::AdaptCvod, 2, 2).with_epsilon(1e-12);
    let out = lloyd_run(&a, &cfg).unwrap();
    let labels = out.partition.labels();
    let flipped: Vec<usize> = truth.iter().map(|&t| 1 - t).collect();
    assert!(labels == truth.as_slice() || labels == flipped.as_slice(), "{labels:?}");

    let single = lloyd_run(&a, &PartitionConfig::new(Algorithm::Cvod, 1, 1)).unwrap();
    assert!(out.trace.final_energy().unwrap() < single.trace.final_energy().unwrap());
}

#[test]
fn energy_is_monotone_for_every_algorithm() {
    for seed in 0..3 {
        let a = desk_snn(seed);
        for alg in Algorithm::ALL {
            let cfg = PartitionConfig::new(alg, 5, 20).with_seed(seed).with_epsilon(1e-8);
            let out = lloyd_run(&a, &cfg).unwrap();
            let g1 = out.trace.records[0].energy;
            assert!(out.trace.is_monotone(1e-10 * g1.abs()), "{alg} seed {seed}");
            if alg.is_adaptive() {
                for rec in &out.trace.records {
                    assert_eq!(rec.dims.iter().sum::<usize>(), 20);
                }
                assert!(out.final_sets() <= 5);
            }
        }
    }
}

// Instances where a set falls short of its nominal dimension mid-run.
#[test]
fn lent_dimensions_stay_lent() {
    for (seed, alg, r) in [(19, Algorithm::Cvod, 20), (40, Algorithm::Vqpca, 10)] {
        let a = desk_snn(seed);
        let out = lloyd_run(&a, &PartitionConfig::new(alg, 5, r).with_seed(seed)).unwrap();
        let e = out.trace.energies();
        assert!(out.trace.is_monotone(1e-10 * e[0].abs()), "{alg} seed {seed}: {e:?}");
        assert!(out.trace.records.iter().any(|rec| rec.dims != vec![r / 5; 5]));
        for rec in &out.trace.records {
            assert_eq!(rec.dims.iter().sum::<usize>(), r);
        }
    }
}

#[test]
fn vqpca_is_translation_invariant() {
    let a = desk_snn(2);
    let t: Vec<f64> = (0..a.rows()).map(|i| ((i * 37) % 11) as f64 * 0.3).collect();
    let moved = DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] + t[i]);
    for alg in [Algorithm::Vqpca, Algorithm::AdaptVqpca] {
        let cfg = PartitionConfig::new(alg, 4, 12).with_seed(5);
        let x = lloyd_run(&a, &cfg).unwrap();
        let y = lloyd_run(&moved, &cfg).unwrap();
        assert_eq!(x.partition, y.partition, "{alg}");
        let (ex, ey) = (x.trace.energies(), y.trace.energies());
        assert_eq!(ex.len(), ey.len());
        for (u, v) in ex.iter().zip(&ey) {
            assert!((u - v).abs() <= 1e-8 * u.abs(), "{alg}: {u} vs {v}");
        }
    }
}

#[test]
fn converged_partition_is_a_fixed_point() {
    let a = desk_snn(6);
    for alg in [Algorithm::Cvod, Algorithm::AdaptCvod] {
        let cfg = PartitionConfig::new(alg, 5, 15).with_epsilon(1e-300).with_max_iters(300);
        let out = lloyd_run(&a, &cfg).unwrap();
        assert!(!out.truncated, "{alg} did not settle");
        let again = find_voronoi_sets(&a, &out.centroids).unwrap();
        assert_eq!(again.labels(), out.partition.labels(), "{alg}");
        assert_eq!(find_voronoi_sets(&a, &out.centroids).unwrap(), again);
    }
}

#[test]
fn run_from_explicit_partition() {
    let a = gaussian(6, 12, 2);
    let init = VoronoiPartition::new(2, (0..12).map(|j| j / 6).collect()).unwrap();
    let cfg = PartitionConfig::new(Algorithm::Cvod, 2, 4);
    let out = lloyd_run_from(&a, &cfg, init.clone()).unwrap();
    assert_eq!(out.trace.records[0].dims, vec![2, 2]);
    assert!(lloyd_run_from(&a, &PartitionConfig::new(Algorithm::Cvod, 3, 3), init).is_err());
}

#[test]
fn final_centroids_fit_final_sets() {
    let a = desk_snn(8);
    let out = lloyd_run(&a, &PartitionConfig::new(Algorithm::AdaptVqpca, 5, 20)).unwrap();
    for (i, cols) in out.partition.all_members().iter().enumerate() {
        let part = a.select_columns(cols);
        let c = out.centroids.get(i);
        assert!(c.dim() <= cols.len());
        let mean = part.column_mean();
        let svd = thin_svd(&part.shifted(&mean));
        let proj = c.basis.matrix().t_matmul(&svd.left.leading_columns(c.dim())).unwrap();
        // Same subspace: |det| of the cross-Gram is 1, checked through its Frobenius norm.
        assert!((fro(&proj).powi(2) - c.dim() as f64).abs() < 1e-8);
    }
}
