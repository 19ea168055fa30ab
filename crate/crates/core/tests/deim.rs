mod common;

use common::{dense_solve, random_orthonormal};
use voronoi_cur_core::cssp::deim_select;
use voronoi_cur_core::{DenseMatrix, Error};

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

/// Textbook DEIM: each residual from an explicit solve of the pivot-row system.
fn deim_oracle(w: &DenseMatrix) -> Vec<usize> {
    let mut p = vec![argmax_abs(w.col(0))];
    for j in 1..w.cols() {
        let basis = w.leading_columns(j);
        let sys = DenseMatrix::from_fn(j, j, |a, b| basis[(p[a], b)]);
        let rhs: Vec<f64> = p.iter().map(|&i| w[(i, j)]).collect();
        let c = dense_solve(&sys, &rhs);
        let r: Vec<f64> = (0..w.rows())
            .map(|i| w[(i, j)] - (0..j).map(|t| basis[(i, t)] * c[t]).sum::<f64>())
            .collect();
        p.push(argmax_abs(&r));
    }
    p
}

#[test]
fn canonical_columns() {
    let w = DenseMatrix::from_fn(5, 2, |i, j| if i == j { 1.0 } else { 0.0 });
    assert_eq!(deim_select(&w).unwrap(), vec![0, 1]);
}

#[test]
fn single_column_argmax() {
    let w = DenseMatrix::from_columns(3, &[vec![0.2, -0.9, 0.1]]).unwrap();
    assert_eq!(deim_select(&w).unwrap(), vec![1]);
}

#[test]
fn six_by_three_matches_oracle() {
    let w = random_orthonormal(6, 3, 42);
    assert_eq!(deim_select(&w).unwrap(), deim_oracle(&w));
}

#[test]
fn hundred_orthonormal_bases_match_oracle() {
    for seed in 0..100u64 {
        let n = 6 + (seed as usize % 15);
        let r = 1 + (seed as usize % 6);
        let w = random_orthonormal(n, r, 1000 + seed);
        assert_eq!(deim_select(&w).unwrap(), deim_oracle(&w), "seed {seed} ({n}x{r})");
    }
}

#[test]
fn indices_are_distinct() {
    let w = random_orthonormal(20, 6, 7);
    let mut p = deim_select(&w).unwrap();
    p.sort();
    p.dedup();
    assert_eq!(p.len(), 6);
}

#[test]
fn dependent_column_is_named() {
    let w = DenseMatrix::from_columns(3, &[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap();
    assert_eq!(deim_select(&w), Err(Error::RankDeficient { column: 1 }));
}
