use alloc::vec::Vec;

use super::deim::deim_select;
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_residual, thin_qr, thin_svd};
use crate::matrix::DenseMatrix;
use crate::partition::{CentroidSet, VoronoiPartition};

/// Columns contributed by one Voronoi set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetBlock {
    pub set: usize,
    /// Centroid dimension `d_i` the set was asked for.
    pub requested: usize,
    /// Global column indices, in selection order.
    pub indices: Vec<usize>,
}

/// Selected columns of `A`. `c` holds exact copies of those columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub indices: Vec<usize>,
    pub c: DenseMatrix,
    pub blocks: Vec<SetBlock>,
    pub requested_rank: usize,
}

impl SelectionResult {
    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    /// Columns requested but not delivered because a deflated set ran out of rank.
    pub fn shortfall(&self) -> usize {
        self.requested_rank - self.indices.len()
    }

    /// Rebuilds `c` from the same indices of another matrix with the same
    /// columns (used when selection ran on a sketch of `source`).
    pub fn with_source(mut self, source: &DenseMatrix) -> Self {
        self.c = source.select_columns(&self.indices);
        self
    }

    pub(crate) fn single_block(a: &DenseMatrix, indices: Vec<usize>, requested: usize) -> Self {
        SelectionResult {
            c: a.select_columns(&indices),
            blocks: alloc::vec![SetBlock {
                set: 0,
                requested,
                indices: indices.clone(),
            }],
            indices,
            requested_rank: requested,
        }
    }
}

/// Runs DEIM set by set, deflating every later set against the columns
/// already chosen so the combined selection keeps full column rank.
///
/// Sets are visited in ascending order of centroid dimension (set index on
/// ties). The first contributing set runs DEIM on `V_1ᵀ U_1`; every later
/// one takes the leading right singular vectors of `(I - QQᵀ)V_i`, where
/// `Q` spans the current selection. If that projection has rank below `d_i`
/// the set contributes only its rank.
pub fn partitioned_deim(
    a: &DenseMatrix,
    partition: &VoronoiPartition,
    centroids: &CentroidSet,
    rank: usize,
) -> Result<SelectionResult> {
    if partition.num_columns() != a.cols() {
        return Err(Error::DimensionMismatch {
            op: "partitioned_deim",
            expected: (a.rows(), partition.num_columns()),
            found: a.shape(),
        });
    }
    if centroids.len() != partition.num_sets() || centroids.ambient_dim() != a.rows() {
        return Err(Error::param(
            "centroids",
            "need one centroid per set in the column space of A",
        ));
    }
    let dims = centroids.dims();
    // A centroid shortfall upstream leaves `Σ d_i < r`; it surfaces as
    // `SelectionResult::shortfall`.
    if dims.iter().sum::<usize>() > rank {
        return Err(Error::param("rank", "centroid dimensions exceed the rank"));
    }
    let members = partition.all_members();
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.sort_by_key(|&i| dims[i]);

    let mut c = DenseMatrix::zeros(a.rows(), 0);
    let mut indices = Vec::with_capacity(rank);
    let mut blocks = Vec::with_capacity(order.len());
    for set in order {
        let d = dims[set];
        let cols = &members[set];
        if d == 0 {
            continue;
        }
        if cols.len() < d {
            return Err(Error::SetTooSmall {
                set,
                size: cols.len(),
                dim: d,
            });
        }
        let v = a.select_columns(cols);
        let local = if c.cols() == 0 {
            let w = v.t_matmul(centroids.get(set).basis.matrix())?;
            deim_select(&w)?
        } else {
            let q = thin_qr(&c)?;
            let deflated = orthonormal_residual(&v, &q)?;
            let svd = thin_svd(&deflated);
            let take = d.min(svd.rank());
            deim_select(&svd.right.leading_columns(take))?
        };
        let global: Vec<usize> = local.iter().map(|&l| cols[l]).collect();
        for &g in &global {
            c.push_column(a.col(g));
        }
        indices.extend_from_slice(&global);
        blocks.push(SetBlock {
            set,
            requested: d,
            indices: global,
        });
    }
    Ok(SelectionResult {
        indices,
        c,
        blocks,
        requested_rank: rank,
    })
}
