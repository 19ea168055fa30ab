use alloc::vec::Vec;

use super::qr::HouseholderQr;
use super::{norm2, numerical_rank};
use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, DenseMatrix};

/// Leading singular triplets, `A ≈ left · diag(singular_values) · rightᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub left: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub right: DenseMatrix,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `left · diag(σ) · rightᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut scaled = self.left.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            scaled.col_mut(j).iter_mut().for_each(|v| *v *= s);
        }
        scaled
            .matmul(&self.right.transpose())
            .expect("factor shapes agree")
    }
}

/// Top `d` singular triplets of `A`. When the numerical rank is smaller than
/// `d`, only that many triplets come back.
///
/// Each left singular vector is signed so that its largest-magnitude entry
/// is positive (the first such entry on exact ties).
pub fn truncated_svd(a: &DenseMatrix, d: usize) -> Result<TruncatedSvd> {
    let p = a.rows().min(a.cols());
    if d < 1 || d > p {
        return Err(Error::param(
            "d",
            alloc::format!("must lie in 1..={p} for a {}x{} matrix", a.rows(), a.cols()),
        ));
    }
    let mut svd = thin_svd(a);
    truncate(&mut svd, d);
    Ok(svd)
}

/// All singular triplets above the numerical-rank cutoff.
pub fn thin_svd(a: &DenseMatrix) -> TruncatedSvd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return TruncatedSvd {
            left: DenseMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            right: DenseMatrix::zeros(n, 0),
        };
    }
    let raw = if m >= n {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.transpose());
        Raw {
            left: t.right,
            sigma: t.sigma,
            right: t.left,
            left_is_normalized: !t.left_is_normalized,
        }
    };
    finish(raw, m, n)
}

/// Every singular value, `min(m, n)` of them, nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let mut s = if m >= n {
        tall_svd(a).sigma
    } else {
        tall_svd(&a.transpose()).sigma
    };
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

struct Raw {
    left: DenseMatrix,
    sigma: Vec<f64>,
    right: DenseMatrix,
    left_is_normalized: bool,
}

struct Tall {
    /// `B W Σ⁻¹`, columns in Jacobi order (unsorted). Zero where `σ = 0`.
    normalized: DenseMatrix,
    sigma: Vec<f64>,
    /// Accumulated rotations `W`, orthogonal to working precision.
    rotations: DenseMatrix,
}

/// `A P = Q R` with column pivoting, then Jacobi on `Rᵀ`: from
/// `Rᵀ W = N Σ` we get `A = (Q W) Σ (P N)ᵀ`. The pivoted triangle is close to
/// graded, so the sweeps converge quickly, and the left factor inherits the
/// orthogonality of the rotations.
fn tall_svd(a: &DenseMatrix) -> Raw {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let qr = HouseholderQr::pivoted(a);
    let inner = jacobi(qr.r(n).transpose());
    let mut left = DenseMatrix::zeros(m, n);
    for j in 0..n {
        left.col_mut(j)[..n].copy_from_slice(inner.rotations.col(j));
    }
    qr.apply_q(&mut left);
    let perm = qr.permutation();
    let mut right = DenseMatrix::zeros(n, n);
    for (pos, &orig) in perm.iter().enumerate() {
        for j in 0..n {
            right[(orig, j)] = inner.normalized[(pos, j)];
        }
    }
    Raw {
        left,
        sigma: inner.sigma,
        right,
        left_is_normalized: false,
    }
}

/// One-sided (Hestenes) Jacobi on a matrix with at least as many rows as
/// columns. Cyclic row-by-row pair ordering.
fn jacobi(mut b: DenseMatrix) -> Tall {
    const MAX_SWEEPS: usize = 80;
    let (m, n) = b.shape();
    let tol = libm::sqrt(m as f64) * f64::EPSILON;
    let mut v = DenseMatrix::identity(n);
    let mut norms: Vec<f64> = b.columns().map(|c| dot(c, c)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(b.col(p), b.col(q));
                if gamma == 0.0 || gamma.abs() <= tol * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut b, p, q, c, s);
                rotate(&mut v, p, q, c, s);
                norms[p] = dot(b.col(p), b.col(p));
                norms[q] = dot(b.col(q), b.col(q));
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = Vec::with_capacity(n);
    for j in 0..n {
        let s = norm2(b.col(j));
        sigma.push(s);
        let col = b.col_mut(j);
        if s > 0.0 {
            let inv = 1.0 / s;
            col.iter_mut().for_each(|x| *x *= inv);
        } else {
            col.iter_mut().for_each(|x| *x = 0.0);
        }
    }
    Tall {
        normalized: b,
        sigma,
        rotations: v,
    }
}

/// Columns `p, q` ← `(c·p − s·q, s·p + c·q)`.
#[inline]
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let m = a.rows();
    let data = a.as_mut_slice();
    let (left, right) = data.split_at_mut(q * m);
    let cp = &mut left[p * m..(p + 1) * m];
    let cq = &mut right[..m];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

fn finish(raw: Raw, m: usize, n: usize) -> TruncatedSvd {
    // Sort nonincreasing; ties keep the Jacobi column order.
    let mut order: Vec<usize> = (0..raw.sigma.len()).collect();
    order.sort_by(|&i, &j| raw.sigma[j].total_cmp(&raw.sigma[i]));
    let sorted: Vec<f64> = order.iter().map(|&i| raw.sigma[i]).collect();
    let rank = numerical_rank(&sorted, m, n);
    let keep = &order[..rank];

    let mut left = raw.left.select_columns(keep);
    let mut right = raw.right.select_columns(keep);
    if raw.left_is_normalized {
        reorthonormalize(&mut left);
    } else {
        reorthonormalize(&mut right);
    }
    for j in 0..rank {
        let flip = {
            let col = left.col(j);
            let mut best = 0;
            for (i, x) in col.iter().enumerate() {
                if x.abs() > col[best].abs() {
                    best = i;
                }
            }
            col[best] < 0.0
        };
        if flip {
            left.col_mut(j).iter_mut().for_each(|x| *x = -*x);
            right.col_mut(j).iter_mut().for_each(|x| *x = -*x);
        }
    }
    TruncatedSvd {
        left,
        singular_values: sorted[..rank].to_vec(),
        right,
    }
}

/// Two passes of modified Gram-Schmidt in column order. The normalized side of
/// one-sided Jacobi loses orthogonality for small singular values; the leading
/// columns are already accurate, so this only repairs the tail.
fn reorthonormalize(q: &mut DenseMatrix) {
    for j in 0..q.cols() {
        for _ in 0..2 {
            let (prev, cur) = split_at_column(q, j);
            for l in 0..j {
                let ql = &prev[l * cur.len()..(l + 1) * cur.len()];
                let c = dot(ql, cur);
                if c != 0.0 {
                    axpy(-c, ql, cur);
                }
            }
        }
        let nrm = norm2(q.col(j));
        if nrm > 0.0 {
            let inv = 1.0 / nrm;
            q.col_mut(j).iter_mut().for_each(|x| *x *= inv);
        }
    }
}

fn split_at_column(q: &mut DenseMatrix, j: usize) -> (&[f64], &mut [f64]) {
    let m = q.rows();
    let (prev, rest) = q.as_mut_slice().split_at_mut(j * m);
    (prev, &mut rest[..m])
}

pub(crate) fn truncate(svd: &mut TruncatedSvd, d: usize) {
    if svd.rank() <= d {
        return;
    }
    svd.singular_values.truncate(d);
    svd.left = svd.left.leading_columns(d);
    svd.right = svd.right.leading_columns(d);
}
