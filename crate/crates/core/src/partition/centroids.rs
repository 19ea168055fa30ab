use alloc::vec::Vec;

use super::CentroidSet;
use crate::error::{Error, Result};
use crate::linalg::{thin_svd, OrthonormalBasis, TruncatedSvd};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedUpdate {
    /// Unshifted centroids; the Lloyd driver attaches means for VQPCA.
    pub centroids: CentroidSet,
    /// Dimensions actually used, after shortfall redistribution.
    pub dims: Vec<usize>,
    /// Dimensions that could not be placed anywhere (`Σ dims = r - shortfall`).
    pub shortfall: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveUpdate {
    pub centroids: CentroidSet,
    pub dims: Vec<usize>,
    /// Sets that received at least one singular vector.
    pub contributing: usize,
}

fn part_svds(parts: &[DenseMatrix]) -> Result<(usize, Vec<TruncatedSvd>)> {
    let Some(first) = parts.first() else {
        return Err(Error::param("parts", "need at least one part"));
    };
    let m = first.rows();
    if let Some(bad) = parts.iter().find(|p| p.rows() != m) {
        return Err(Error::DimensionMismatch {
            op: "update_centroids",
            expected: (m, bad.cols()),
            found: bad.shape(),
        });
    }
    Ok((m, parts.iter().map(thin_svd).collect()))
}

fn bases(m: usize, svds: &[TruncatedSvd], dims: &[usize]) -> Result<CentroidSet> {
    CentroidSet::from_bases(
        m,
        svds.iter()
            .zip(dims)
            .map(|(s, &d)| OrthonormalBasis::from_orthonormal(s.left.leading_columns(d)))
            .collect(),
    )
}

/// `U_i` = top `d_i` left singular vectors of each part.
///
/// A part whose rank is below `d_i` keeps only its rank; the missing
/// dimensions go one at a time to whichever set has the largest next unused
/// singular value (smaller set index on ties), so `Σ d_i = r` whenever the
/// parts have enough rank between them.
pub fn update_centroids_fixed(parts: &[DenseMatrix], dims: &[usize]) -> Result<FixedUpdate> {
    if parts.len() != dims.len() {
        return Err(Error::param("dims", "need one dimension per part"));
    }
    if dims.contains(&0) {
        return Err(Error::param("dims", "fixed centroids need every d_i >= 1"));
    }
    update_centroids_carried(parts, dims)
}

/// [`update_centroids_fixed`] for dimensions carried over from an earlier
/// update, where a set may already be down to `d_i = 0`.
pub(crate) fn update_centroids_carried(parts: &[DenseMatrix], dims: &[usize]) -> Result<FixedUpdate> {
    if parts.len() != dims.len() {
        return Err(Error::param("dims", "need one dimension per part"));
    }
    for (set, (p, &d)) in parts.iter().zip(dims).enumerate() {
        if p.cols() == 0 {
            return Err(Error::EmptySet { set, dim: d });
        }
    }
    let (m, svds) = part_svds(parts)?;
    let mut eff: Vec<usize> = svds.iter().zip(dims).map(|(s, &d)| d.min(s.rank())).collect();
    let mut shortfall: usize = dims.iter().zip(&eff).map(|(d, e)| d - e).sum();
    while shortfall > 0 {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in svds.iter().enumerate() {
            if eff[i] < s.rank() {
                let next = s.singular_values[eff[i]];
                if best.is_none_or(|(_, b)| next > b) {
                    best = Some((i, next));
                }
            }
        }
        let Some((i, _)) = best else { break };
        eff[i] += 1;
        shortfall -= 1;
    }
    Ok(FixedUpdate {
        centroids: bases(m, &svds, &eff)?,
        dims: eff,
        shortfall,
    })
}

/// Pools the singular values of every part and keeps the `r` largest; each
/// set gets the left singular vectors paired with its selected values.
/// Ties order by smaller set index, then smaller column index.
pub fn update_centroids_adapt(parts: &[DenseMatrix], rank: usize) -> Result<AdaptiveUpdate> {
    if rank == 0 {
        return Err(Error::param("rank", "must be at least 1"));
    }
    let (m, svds) = part_svds(parts)?;
    let mut pool: Vec<(f64, usize, usize)> = svds
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.singular_values.iter().enumerate().map(move |(c, &v)| (v, i, c)))
        .collect();
    if pool.len() < rank {
        return Err(Error::PooledRankTooSmall {
            requested: rank,
            available: pool.len(),
        });
    }
    pool.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut dims = alloc::vec![0usize; parts.len()];
    for &(_, set, _) in &pool[..rank] {
        dims[set] += 1;
    }
    let contributing = dims.iter().filter(|&&d| d > 0).count();
    Ok(AdaptiveUpdate {
        centroids: bases(m, &svds, &dims)?,
        dims,
        contributing,
    })
}
