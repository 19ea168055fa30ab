#![allow(dead_code)]

use rand_distr::{Distribution, StandardNormal};
use voronoi_cur_core::data::{gen_snn, rng_for, SnnConfig, Stream};
use voronoi_cur_core::DenseMatrix;

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = rng_for(seed, Stream::Test(0));
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(StandardNormal.sample(&mut rng));
    }
    DenseMatrix::from_col_major(rows, cols, data).unwrap()
}

pub fn desk_snn(seed: u64) -> DenseMatrix {
    gen_snn(&SnnConfig {
        m: 200,
        n: 200,
        l: 20,
        density: 0.05,
        seed,
    })
    .unwrap()
}

/// `X Yᵀ` with Gaussian factors: rank exactly `rank` almost surely.
pub fn low_rank(rows: usize, cols: usize, rank: usize, seed: u64) -> DenseMatrix {
    let x = gaussian(rows, rank, seed);
    let y = gaussian(cols, rank, seed.wrapping_add(1_000_003));
    x.matmul(&y.transpose()).unwrap()
}

/// Modified Gram-Schmidt, twice.
pub fn orthonormalize(a: &DenseMatrix) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = a.columns().map(|c| c.to_vec()).collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for i in 0..j {
                let d: f64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
                let qi = cols[i].clone();
                cols[j].iter_mut().zip(&qi).for_each(|(y, x)| *y -= d * x);
            }
        }
        let n = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|x| *x /= n);
    }
    DenseMatrix::from_columns(a.rows(), &cols).unwrap()
}

pub fn random_orthonormal(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    orthonormalize(&gaussian(rows, cols, seed))
}

/// Cyclic Jacobi eigensolver for a symmetric matrix; eigenpairs sorted by
/// descending eigenvalue, eigenvectors as columns.
pub fn sym_eigen(s: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = s.rows();
    let mut a = s.clone();
    let mut v = DenseMatrix::identity(n);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    (values, v.select_columns(&order))
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve(m: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i)).collect();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        x.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (x[k] - s) / a[k][k];
    }
    x
}

/// `I − C (CᵀC)⁻¹ Cᵀ` materialized densely (full column rank `C`).
pub fn dense_complement_projector(c: &DenseMatrix) -> DenseMatrix {
    let m = c.rows();
    let gram = c.t_matmul(c).unwrap();
    let mut solved = Vec::with_capacity(c.cols() * m);
    for i in 0..m {
        solved.push(dense_solve(&gram, &c.row(i)));
    }
    // solved[i] = (CᵀC)⁻¹ C(i,:)ᵀ
    DenseMatrix::from_fn(m, m, |i, j| {
        let cj: f64 = (0..c.cols()).map(|t| c[(i, t)] * solved[j][t]).sum();
        (if i == j { 1.0 } else { 0.0 }) - cj
    })
}

pub fn fro(a: &DenseMatrix) -> f64 {
    a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `σ_min(C) / σ_max(C)`.
pub fn condition_ratio(c: &DenseMatrix) -> f64 {
    let s = voronoi_cur_core::linalg::singular_values(c);
    s.last().copied().unwrap_or(0.0) / s[0]
}
