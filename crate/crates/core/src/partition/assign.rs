use alloc::vec::Vec;

use super::{CentroidSet, VoronoiPartition};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Assigns every column to its nearest centroid; ties go to the smallest set
/// index. Also returns each column's winning residual.
pub(crate) fn assign(
    a: &DenseMatrix,
    centroids: &CentroidSet,
) -> Result<(VoronoiPartition, Vec<f64>)> {
    if centroids.is_empty() {
        return Err(Error::param("centroids", "need at least one centroid"));
    }
    if centroids.ambient_dim() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "find_voronoi_sets",
            expected: (centroids.ambient_dim(), a.cols()),
            found: a.shape(),
        });
    }
    let mut labels = Vec::with_capacity(a.cols());
    let mut residuals = Vec::with_capacity(a.cols());
    let mut scratch = Vec::new();
    let mut shifted = Vec::new();
    for x in a.columns() {
        let mut best = 0;
        let mut best_res = f64::INFINITY;
        for (i, c) in centroids.iter().enumerate() {
            let res = c.residual_sq(x, &mut scratch, &mut shifted);
            if res < best_res {
                best_res = res;
                best = i;
            }
        }
        labels.push(best);
        residuals.push(best_res);
    }
    Ok((
        VoronoiPartition::new(centroids.len(), labels)?,
        residuals,
    ))
}

/// Voronoi sets of the columns of `a` for the given centroids.
pub fn find_voronoi_sets(a: &DenseMatrix, centroids: &CentroidSet) -> Result<VoronoiPartition> {
    assign(a, centroids).map(|(p, _)| p)
}

fn energy(
    a: &DenseMatrix,
    partition: &VoronoiPartition,
    centroids: &CentroidSet,
    use_shift: bool,
) -> Result<f64> {
    if partition.num_columns() != a.cols()
        || centroids.len() < partition.num_sets()
        || centroids.ambient_dim() != a.rows()
    {
        return Err(Error::DimensionMismatch {
            op: "energy",
            expected: (centroids.ambient_dim(), partition.num_columns()),
            found: a.shape(),
        });
    }
    let mut scratch = Vec::new();
    let mut shifted = Vec::new();
    let mut total = 0.0;
    for (j, x) in a.columns().enumerate() {
        let c = centroids.get(partition.label(j));
        total += if use_shift {
            c.residual_sq(x, &mut scratch, &mut shifted)
        } else {
            c.basis.residual_norm_sq(x, &mut scratch)
        };
    }
    Ok(total)
}

/// `G₁ = Σ_i Σ_{x∈V_i} ‖(I − U_iU_iᵀ)x‖²`; centroid shifts are ignored.
pub fn energy_g1(
    a: &DenseMatrix,
    partition: &VoronoiPartition,
    centroids: &CentroidSet,
) -> Result<f64> {
    energy(a, partition, centroids, false)
}

/// `G₂ = Σ_i Σ_{x∈V_i} ‖(I − U_iU_iᵀ)(x − z_i)‖²` with the centroid shifts
/// `z_i` (the set means for the VQPCA family).
pub fn energy_g2(
    a: &DenseMatrix,
    partition: &VoronoiPartition,
    centroids: &CentroidSet,
) -> Result<f64> {
    energy(a, partition, centroids, true)
}
