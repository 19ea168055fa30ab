use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// DEIM pivot rows of a full-column-rank `n x r` basis `W`.
///
/// `p_1 = argmax |W(:,1)|`; pivot `j` is the argmax of the interpolation
/// residual of `W(:,j)` against the earlier columns restricted to the earlier
/// pivots. The residuals are carried by Gaussian elimination on the columns
/// of `W`, which yields them in `O(n r²)`. Ties go to the smaller index.
pub fn deim_select(w: &DenseMatrix) -> Result<Vec<usize>> {
    let (n, r) = w.shape();
    if r == 0 {
        return Ok(Vec::new());
    }
    if r > n {
        return Err(Error::RankDeficient { column: n });
    }
    let mut res = w.clone();
    let mut pivots: Vec<usize> = Vec::with_capacity(r);
    let mut taken = alloc::vec![false; n];

    for j in 0..r {
        let scale = w.col(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let col = res.col(j);
        let mut best = usize::MAX;
        let mut best_val = 0.0;
        for (i, v) in col.iter().enumerate() {
            if !taken[i] && v.abs() > best_val {
                best_val = v.abs();
                best = i;
            }
        }
        if best == usize::MAX || best_val <= n as f64 * f64::EPSILON * scale {
            return Err(Error::RankDeficient { column: j });
        }
        pivots.push(best);
        taken[best] = true;

        // Eliminate column j from the later columns at the new pivot row.
        let pivot_col: Vec<f64> = res.col(j).to_vec();
        let pivot_val = pivot_col[best];
        for l in j + 1..r {
            let dst = res.col_mut(l);
            let factor = dst[best] / pivot_val;
            if factor != 0.0 {
                for (d, p) in dst.iter_mut().zip(&pivot_col) {
                    *d -= factor * p;
                }
                dst[best] = 0.0;
            }
        }
    }
    Ok(pivots)
}
