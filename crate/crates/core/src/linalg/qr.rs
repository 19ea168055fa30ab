use alloc::vec::Vec;

use super::{fro_norm, norm2, rank_cutoff, thin_svd, OrthonormalBasis};
use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, DenseMatrix};

/// Householder QR, optionally with greedy column pivoting, `A P = Q R`.
///
/// Reflector `k` is stored below the diagonal of column `k` with an implicit
/// leading one; `R` occupies the upper triangle.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    factors: DenseMatrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
}

impl HouseholderQr {
    pub fn new(a: &DenseMatrix) -> Self {
        Self::factor(a, false)
    }

    /// Pivots the column with the largest remaining norm to the front at
    /// every step (ties go to the smaller column index).
    pub fn pivoted(a: &DenseMatrix) -> Self {
        Self::factor(a, true)
    }

    fn factor(a: &DenseMatrix, pivot: bool) -> Self {
        let (m, n) = a.shape();
        let steps = m.min(n);
        let mut f = a.clone();
        let mut tau = Vec::with_capacity(steps);
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..steps {
            if pivot {
                let mut best = k;
                let mut best_norm = -1.0;
                for j in k..n {
                    let nj = norm2(&f.col(j)[k..]);
                    if nj > best_norm {
                        best_norm = nj;
                        best = j;
                    }
                }
                if best != k {
                    swap_columns(&mut f, k, best);
                    perm.swap(k, best);
                }
            }

            let col = &mut f.col_mut(k)[k..];
            let alpha = col[0];
            let xnorm = norm2(&col[1..]);
            let t = if xnorm == 0.0 {
                0.0
            } else {
                let beta = -libm::copysign(libm::hypot(alpha, xnorm), alpha);
                let scale = 1.0 / (alpha - beta);
                col[1..].iter_mut().for_each(|v| *v *= scale);
                col[0] = beta;
                (beta - alpha) / beta
            };
            tau.push(t);
            if t == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let (head, tail) = split_two_columns(&mut f, k, j);
                apply_reflector(&head[k..], t, &mut tail[k..]);
            }
        }
        HouseholderQr {
            factors: f,
            tau,
            perm,
        }
    }

    pub fn rows(&self) -> usize {
        self.factors.rows()
    }

    pub fn cols(&self) -> usize {
        self.factors.cols()
    }

    /// Column permutation: position `j` of `A P` holds column `perm[j]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn r_diag(&self, j: usize) -> f64 {
        self.factors[(j, j)]
    }

    /// Leading `count` x `cols` block of `R`.
    pub fn r(&self, count: usize) -> DenseMatrix {
        DenseMatrix::from_fn(count, self.cols(), |i, j| {
            if i <= j {
                self.factors[(i, j)]
            } else {
                0.0
            }
        })
    }

    /// Rank estimate from the pivoted diagonal, `|R_jj| > max(m,n) |R_00| 2^-52`.
    /// Only meaningful for a pivoted factorization.
    pub fn rank(&self) -> usize {
        let steps = self.tau.len();
        if steps == 0 {
            return 0;
        }
        let top = self.r_diag(0).abs();
        if top == 0.0 {
            return 0;
        }
        let cut = rank_cutoff(self.rows(), self.cols(), top);
        (0..steps).take_while(|&j| self.r_diag(j).abs() > cut).count()
    }

    /// Overwrites `x` with `Qᵀ x`.
    pub fn apply_qt(&self, x: &mut DenseMatrix) {
        assert_eq!(x.rows(), self.rows());
        for (k, &t) in self.tau.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let v = &self.factors.col(k)[k..];
            for j in 0..x.cols() {
                apply_reflector(v, t, &mut x.col_mut(j)[k..]);
            }
        }
    }

    /// Overwrites `x` with `Q x`.
    pub fn apply_q(&self, x: &mut DenseMatrix) {
        assert_eq!(x.rows(), self.rows());
        for (k, &t) in self.tau.iter().enumerate().rev() {
            if t == 0.0 {
                continue;
            }
            let v = &self.factors.col(k)[k..];
            for j in 0..x.cols() {
                apply_reflector(v, t, &mut x.col_mut(j)[k..]);
            }
        }
    }

    /// First `count` columns of `Q`.
    pub fn thin_q(&self, count: usize) -> DenseMatrix {
        let mut q = DenseMatrix::zeros(self.rows(), count);
        for j in 0..count {
            q[(j, j)] = 1.0;
        }
        self.apply_q(&mut q);
        q
    }
}

/// `x -= tau * v (vᵀ x)` with `v[0]` treated as one.
#[inline]
fn apply_reflector(v: &[f64], tau: f64, x: &mut [f64]) {
    let w = x[0] + dot(&v[1..], &x[1..]);
    if w == 0.0 {
        return;
    }
    let s = tau * w;
    x[0] -= s;
    axpy(-s, &v[1..], &mut x[1..]);
}

fn swap_columns(a: &mut DenseMatrix, p: usize, q: usize) {
    for i in 0..a.rows() {
        let t = a[(i, p)];
        a[(i, p)] = a[(i, q)];
        a[(i, q)] = t;
    }
}

/// Borrows column `p` immutably and column `q > p` mutably.
fn split_two_columns(a: &mut DenseMatrix, p: usize, q: usize) -> (&[f64], &mut [f64]) {
    debug_assert!(p < q);
    let m = a.rows();
    let (left, right) = a.as_mut_slice().split_at_mut(q * m);
    (&left[p * m..(p + 1) * m], &mut right[..m])
}

/// Orthonormal basis for `range(A)` of dimension equal to its numerical rank,
/// via column-pivoted Householder QR.
pub fn thin_qr(a: &DenseMatrix) -> Result<OrthonormalBasis> {
    if a.cols() == 0 || fro_norm(a) == 0.0 {
        return Err(Error::Degenerate("thin_qr of an all-zero matrix"));
    }
    let qr = HouseholderQr::pivoted(a);
    let rank = qr.rank();
    Ok(OrthonormalBasis::from_orthonormal(qr.thin_q(rank)))
}

/// `C† B` through least squares. Full column rank uses pivoted QR; a
/// rank-deficient `C` falls back to the minimum-norm solution from the SVD.
pub fn pinv_apply(c: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if c.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "pinv_apply",
            expected: (c.rows(), b.cols()),
            found: b.shape(),
        });
    }
    let n = c.cols();
    if n == 0 || fro_norm(c) == 0.0 {
        return Ok(DenseMatrix::zeros(n, b.cols()));
    }
    let qr = HouseholderQr::pivoted(c);
    if qr.rank() == n {
        let mut qtb = b.clone();
        qr.apply_qt(&mut qtb);
        let mut x = DenseMatrix::zeros(n, b.cols());
        let perm = qr.permutation();
        let mut z = alloc::vec![0.0; n];
        for j in 0..b.cols() {
            let rhs = qtb.col(j);
            for i in (0..n).rev() {
                let mut s = rhs[i];
                for l in i + 1..n {
                    s -= qr.factors[(i, l)] * z[l];
                }
                z[i] = s / qr.factors[(i, i)];
            }
            for (pos, &orig) in perm.iter().enumerate() {
                x[(orig, j)] = z[pos];
            }
        }
        return Ok(x);
    }
    let svd = thin_svd(c);
    let mut coeff = svd.left.t_matmul(b)?;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        for j in 0..coeff.cols() {
            coeff[(i, j)] /= s;
        }
    }
    svd.right.matmul(&coeff)
}
