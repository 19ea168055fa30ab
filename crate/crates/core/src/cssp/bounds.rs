use alloc::vec::Vec;

use super::partitioned::SelectionResult;
use crate::error::{Error, Result};
use crate::linalg::{fro_norm, fro_norm_sq, orthonormal_residual, singular_values, thin_qr};
use crate::matrix::DenseMatrix;
use crate::partition::VoronoiPartition;

/// `lhs <= rhs`, with the relative slack `(rhs - lhs) / rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn slack(&self) -> f64 {
        if self.rhs > 0.0 {
            (self.rhs - self.lhs) / self.rhs
        } else if self.lhs <= 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Holds up to a relative tolerance: `slack >= -tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

/// Error diagnostics for one column selection.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Nonempty sets in the final partition (`k̃`).
    pub final_sets: usize,
    /// `γ = max_i ‖(I − C_iC_i†)V_i‖_F²`.
    pub gamma: f64,
    /// Per-set `‖(I − C_iC_i†)V_i‖_F²`, indexed like the partition (0 for empty sets).
    pub set_residuals: Vec<f64>,
    pub rank: usize,
    /// `E_r = ‖A − A_r‖_F`.
    pub tail_error: f64,
    /// `‖(I − CC†)A‖_F`.
    pub residual: f64,
    /// `‖(I − CC†)A‖_F / ‖A‖_F`.
    pub normalized_error: f64,
    /// `‖(I − CC†)A‖_F² <= k̃ γ`; projector nesting makes this always hold.
    pub intermediate: Inequality,
    /// `‖(I − CC†)A‖_F <= sqrt(2 k̃ γ) E_r`, reported only: the derivation
    /// needs `E_r >= 1`.
    pub column_bound: Inequality,
}

/// `‖(I − CC†)A‖_F / ‖A‖_F`, through an orthonormal basis of `range(C)`.
pub fn reconstruction_error(a: &DenseMatrix, c: &DenseMatrix) -> Result<f64> {
    if c.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "reconstruction_error",
            expected: (a.rows(), c.cols()),
            found: c.shape(),
        });
    }
    if c.cols() == 0 {
        return Err(Error::param("c", "selection must contain at least one column"));
    }
    let total = fro_norm(a);
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(projection_residual(a, c)? / total)
}

/// `‖(I − CC†)A‖_F`; an empty or all-zero `C` leaves `A` untouched.
pub(crate) fn projection_residual(a: &DenseMatrix, c: &DenseMatrix) -> Result<f64> {
    if c.cols() == 0 || fro_norm(c) == 0.0 {
        return Ok(fro_norm(a));
    }
    let q = thin_qr(c)?;
    Ok(fro_norm(&orthonormal_residual(a, &q)?))
}

/// Square root of the singular-value tail beyond `rank`.
pub fn tail_error(spectrum: &[f64], rank: usize) -> f64 {
    let tail: f64 = spectrum.iter().skip(rank).map(|s| s * s).sum();
    libm::sqrt(tail)
}

pub fn bound_report(
    a: &DenseMatrix,
    selection: &SelectionResult,
    partition: &VoronoiPartition,
    rank: usize,
) -> Result<BoundReport> {
    bound_report_with_spectrum(a, selection, partition, rank, &singular_values(a))
}

/// [`bound_report`] with the singular values of `a` supplied by the caller.
pub fn bound_report_with_spectrum(
    a: &DenseMatrix,
    selection: &SelectionResult,
    partition: &VoronoiPartition,
    rank: usize,
    spectrum: &[f64],
) -> Result<BoundReport> {
    if partition.num_columns() != a.cols() || selection.c.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "bound_report",
            expected: (a.rows(), partition.num_columns()),
            found: a.shape(),
        });
    }
    let members = partition.all_members();
    let mut chosen: Vec<Vec<usize>> = alloc::vec![Vec::new(); partition.num_sets()];
    for &g in &selection.indices {
        chosen[partition.label(g)].push(g);
    }
    let mut set_residuals = Vec::with_capacity(members.len());
    for (cols, picked) in members.iter().zip(&chosen) {
        if cols.is_empty() {
            set_residuals.push(0.0);
            continue;
        }
        let v = a.select_columns(cols);
        let r = if picked.is_empty() {
            fro_norm_sq(&v)
        } else {
            let r = projection_residual(&v, &a.select_columns(picked))?;
            r * r
        };
        set_residuals.push(r);
    }
    let final_sets = partition.nonempty_sets();
    let gamma = set_residuals.iter().copied().fold(0.0, f64::max);
    let residual = projection_residual(a, &selection.c)?;
    let total = fro_norm(a);
    let tail = tail_error(spectrum, rank);
    let k = final_sets as f64;
    Ok(BoundReport {
        final_sets,
        gamma,
        set_residuals,
        rank,
        tail_error: tail,
        residual,
        normalized_error: if total > 0.0 { residual / total } else { 0.0 },
        intermediate: Inequality {
            lhs: residual * residual,
            rhs: k * gamma,
        },
        column_bound: Inequality {
            lhs: residual,
            rhs: libm::sqrt(2.0 * k * gamma) * tail,
        },
    })
}
