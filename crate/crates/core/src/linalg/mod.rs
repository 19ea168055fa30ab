//! Dense kernels: Jacobi SVD, Householder QR, least squares and norms.
//!
//! Everything here is sequential with a fixed operation order, so equal
//! inputs give bit-identical outputs.

mod qr;
mod svd;

use alloc::vec::Vec;

pub use qr::{pinv_apply, thin_qr, HouseholderQr};
pub use svd::{singular_values, thin_svd, truncated_svd, TruncatedSvd};

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, DenseMatrix};

/// Unit roundoff used in rank decisions.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON; // 2^-52

/// Cutoff below which a singular value (or pivoted-QR diagonal) counts as zero:
/// `max(m, n) * sigma_max * 2^-52`.
#[inline]
pub fn rank_cutoff(rows: usize, cols: usize, largest: f64) -> f64 {
    rows.max(cols) as f64 * largest * UNIT_ROUNDOFF
}

/// Number of singular values above [`rank_cutoff`]. Expects a nonincreasing slice.
pub fn numerical_rank(singular_values: &[f64], rows: usize, cols: usize) -> usize {
    let Some(&top) = singular_values.first() else {
        return 0;
    };
    if top <= 0.0 {
        return 0;
    }
    let cut = rank_cutoff(rows, cols, top);
    singular_values.iter().take_while(|&&s| s > cut).count()
}

/// Frobenius norm with a fixed pairwise summation tree.
pub fn fro_norm(a: &DenseMatrix) -> f64 {
    libm::sqrt(pairwise_sum_sq(a.as_slice()))
}

/// Squared Frobenius norm, same reduction tree as [`fro_norm`].
pub fn fro_norm_sq(a: &DenseMatrix) -> f64 {
    pairwise_sum_sq(a.as_slice())
}

pub(crate) fn pairwise_sum_sq(x: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if x.len() <= LEAF {
        let mut s = 0.0;
        for v in x {
            s += v * v;
        }
        return s;
    }
    let mid = x.len() / 2;
    pairwise_sum_sq(&x[..mid]) + pairwise_sum_sq(&x[mid..])
}

#[inline]
pub(crate) fn norm2(x: &[f64]) -> f64 {
    libm::sqrt(pairwise_sum_sq(x))
}

/// Matrix with orthonormal columns spanning a subspace of `R^ambient_dim`.
/// A basis of dimension zero is allowed and projects everything to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    basis: DenseMatrix,
}

impl OrthonormalBasis {
    /// Checks orthonormality to within `1e-10` entrywise.
    pub fn new(basis: DenseMatrix) -> Result<Self> {
        let gram = basis.t_matmul(&basis)?;
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - target).abs() > 1e-10 {
                    return Err(Error::param("basis", "columns are not orthonormal"));
                }
            }
        }
        Ok(OrthonormalBasis { basis })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        OrthonormalBasis {
            basis: DenseMatrix::zeros(ambient_dim, 0),
        }
    }

    pub(crate) fn from_orthonormal(basis: DenseMatrix) -> Self {
        OrthonormalBasis { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.basis
    }

    /// Writes `(I - QQᵀ) x` into `out`.
    pub fn residual_into(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
        for q in self.basis.columns() {
            let c = dot(q, x);
            if c != 0.0 {
                axpy(-c, q, out);
            }
        }
    }

    /// `‖(I - QQᵀ) x‖²`, formed from the explicit residual vector.
    pub fn residual_norm_sq(&self, x: &[f64], scratch: &mut Vec<f64>) -> f64 {
        scratch.resize(x.len(), 0.0);
        self.residual_into(x, scratch);
        pairwise_sum_sq(scratch)
    }
}

/// `(I - QQᵀ) A`. A zero-dimensional basis returns `A` unchanged.
pub fn orthonormal_residual(a: &DenseMatrix, q: &OrthonormalBasis) -> Result<DenseMatrix> {
    if q.ambient_dim() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "orthonormal_residual",
            expected: (q.ambient_dim(), a.cols()),
            found: a.shape(),
        });
    }
    let mut out = a.clone();
    if q.dim() == 0 {
        return Ok(out);
    }
    // Project all columns against the fixed Q computed up front (classical
    // Gram-Schmidt against an orthonormal set).
    let coeffs = q.matrix().t_matmul(a)?;
    for j in 0..a.cols() {
        let dst = out.col_mut(j);
        for (l, qcol) in q.matrix().columns().enumerate() {
            let c = coeffs[(l, j)];
            if c != 0.0 {
                axpy(-c, qcol, dst);
            }
        }
    }
    Ok(out)
}
