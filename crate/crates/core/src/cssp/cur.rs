use super::bounds::{Inequality, BoundReport};
use super::partitioned::SelectionResult;
use super::select::{select_columns_with_spectrum, ColumnSelection, SelectionConfig};
use crate::error::Result;
use crate::linalg::{fro_norm, pinv_apply, singular_values};
use crate::matrix::DenseMatrix;

/// `A ≈ C U R` with `C` columns of `A` and `R` rows of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurDecomposition {
    pub columns: ColumnSelection,
    /// Selection on `Aᵀ`; its `c` holds the selected rows transposed.
    pub rows: ColumnSelection,
    /// `U = C†(AR†)`.
    pub u: DenseMatrix,
}

impl CurDecomposition {
    pub fn c(&self) -> &DenseMatrix {
        &self.columns.selection.c
    }

    /// `R`, one selected row of `A` per row.
    pub fn r(&self) -> DenseMatrix {
        self.rows.selection.c.transpose()
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.rows.selection.indices
    }

    pub fn column_indices(&self) -> &[usize] {
        &self.columns.selection.indices
    }

    pub fn reconstruct(&self) -> Result<DenseMatrix> {
        self.c().matmul(&self.u)?.matmul(&self.r())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurReport {
    /// `‖A − CUR‖_F`.
    pub error: f64,
    pub normalized_error: f64,
    pub column: BoundReport,
    pub row: BoundReport,
    /// `‖A − CUR‖_F <= (sqrt(2 k₁ γ_C) + sqrt(2 k₂ γ_R)) E_r`; reported only,
    /// with the same `E_r >= 1` caveat as the column bound.
    pub cur_bound: Inequality,
}

/// Columns from `a`, rows from `aᵀ` with the same config, and the linking
/// matrix from two least-squares solves.
pub fn cur_decompose(a: &DenseMatrix, cfg: &SelectionConfig) -> Result<(CurDecomposition, CurReport)> {
    let spectrum = singular_values(a);
    let at = a.transpose();
    let columns = select_columns_with_spectrum(a, cfg, &spectrum)?;
    let rows = select_columns_with_spectrum(&at, cfg, &spectrum)?;
    let u = linking_matrix(a, &at, &columns.selection, &rows.selection)?;
    let cur = CurDecomposition { columns, rows, u };

    let error = fro_norm(&a.sub(&cur.reconstruct()?)?);
    let total = fro_norm(a);
    let col = cur.columns.report.clone();
    let row = cur.rows.report.clone();
    let rhs = (libm::sqrt(2.0 * col.final_sets as f64 * col.gamma)
        + libm::sqrt(2.0 * row.final_sets as f64 * row.gamma))
        * col.tail_error;
    let report = CurReport {
        error,
        normalized_error: if total > 0.0 { error / total } else { 0.0 },
        column: col,
        row,
        cur_bound: Inequality { lhs: error, rhs },
    };
    Ok((cur, report))
}

/// `C†(AR†)`, computed as `C† ((Rᵀ)† Aᵀ)ᵀ`.
fn linking_matrix(
    a: &DenseMatrix,
    at: &DenseMatrix,
    cols: &SelectionResult,
    rows: &SelectionResult,
) -> Result<DenseMatrix> {
    // rows.c is Rᵀ (n × r̃).
    let ar = pinv_apply(&rows.c, at)?.transpose();
    debug_assert_eq!(ar.rows(), a.rows());
    pinv_apply(&cols.c, &ar)
}
