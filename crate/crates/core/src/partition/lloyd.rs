use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::assign::assign;
use super::centroids::{update_centroids_adapt, update_centroids_carried};
use super::{
    Algorithm, CentroidSet, EnergyTrace, PartitionConfig, StopRule, TraceRecord, VoronoiPartition,
};
use crate::data::{rng_for, Stream};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Final state of a Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydOutcome {
    pub partition: VoronoiPartition,
    /// Centroids recomputed from the final partition, so every `U_i` holds
    /// the leading left singular vectors of its own set.
    pub centroids: CentroidSet,
    pub trace: EnergyTrace,
    pub initial_sets: usize,
    /// The iteration cap stopped the run before the decrement test did.
    pub truncated: bool,
}

impl LloydOutcome {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// Sets with at least one column.
    pub fn final_sets(&self) -> usize {
        self.partition.nonempty_sets()
    }

    /// Sets whose final centroid has dimension at least one.
    pub fn contributing_sets(&self) -> usize {
        self.centroids.dims().iter().filter(|&&d| d > 0).count()
    }
}

/// Uniform random labels from the `InitPartition` substream, then any empty
/// set takes the highest-index column of the currently largest set
/// (smallest set index on ties).
pub fn init_partition(columns: usize, k: usize, seed: u64) -> Result<VoronoiPartition> {
    if k < 1 || k > columns {
        return Err(Error::param(
            "k",
            alloc::format!("must satisfy 1 <= k <= n = {columns}, got {k}"),
        ));
    }
    let mut rng = rng_for(seed, Stream::InitPartition);
    let mut labels: Vec<usize> = (0..columns).map(|_| rng.random_range(0..k)).collect();
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut donor = 0;
        for s in 1..k {
            if sizes[s] > sizes[donor] {
                donor = s;
            }
        }
        let col = (0..columns).rev().find(|&j| labels[j] == donor).unwrap();
        labels[col] = empty;
        sizes[donor] -= 1;
        sizes[empty] += 1;
    }
    VoronoiPartition::new(k, labels)
}

/// Runs the configured Lloyd iteration from a seeded random partition.
pub fn lloyd_run(a: &DenseMatrix, cfg: &PartitionConfig) -> Result<LloydOutcome> {
    cfg.validate(a.rows(), a.cols())?;
    let initial = init_partition(a.cols(), cfg.k, cfg.seed)?;
    lloyd_run_from(a, cfg, initial)
}

/// Runs the configured Lloyd iteration from a caller-supplied partition.
///
/// Each iteration updates the centroids from the current sets, reassigns
/// every column, and records the energy of the new assignment against those
/// centroids. The first iteration never stops the run; afterwards the loop
/// ends once the decrement (absolute or relative, per the stop rule) drops
/// to `ε` or below, or after `max_iters` iterations.
///
/// Fixed variants start from the nominal multi-index and carry each
/// update's dimensions (after shortfall redistribution) into the next one,
/// so a set that lent out dimensions does not take them back. Reverting to
/// the nominal split would let the energy rise.
pub fn lloyd_run_from(
    a: &DenseMatrix,
    cfg: &PartitionConfig,
    initial: VoronoiPartition,
) -> Result<LloydOutcome> {
    cfg.validate(a.rows(), a.cols())?;
    if initial.num_columns() != a.cols() || initial.num_sets() != cfg.k {
        return Err(Error::param(
            "initial",
            "partition must cover every column with k sets",
        ));
    }
    let mut partition = initial;
    let relative = cfg.stop_rule() == StopRule::Relative;
    let mut trace = EnergyTrace::default();
    let mut prev_energy = 0.0;
    let mut delta = cfg.epsilon + 1.0;
    let mut iteration = 1;
    let mut carried = cfg.dims();

    while delta > cfg.epsilon && iteration <= cfg.max_iters {
        let (mut centroids, dims) = centroid_step(a, &partition, cfg, &carried)?;
        if !cfg.algorithm.is_adaptive() {
            carried.clone_from(&dims);
        }
        let (mut next, residuals) = assign(a, &centroids)?;
        let energy: f64 = residuals.iter().sum();

        if cfg.algorithm.is_adaptive() {
            let kept = next.compact();
            centroids.retain_sets(&kept);
        } else {
            repair_empty_sets(&mut next, &residuals);
        }

        trace.records.push(TraceRecord {
            iteration,
            energy,
            dims,
            active_sets: next.nonempty_sets(),
        });

        if iteration >= 2 {
            let decrement = prev_energy - energy;
            delta = if !relative {
                decrement
            } else if prev_energy > 0.0 {
                decrement / prev_energy
            } else {
                0.0
            };
        }
        prev_energy = energy;
        partition = next;
        iteration += 1;
    }

    let truncated = delta > cfg.epsilon;
    let (centroids, _) = centroid_step(a, &partition, cfg, &carried)?;
    Ok(LloydOutcome {
        partition,
        centroids,
        trace,
        initial_sets: cfg.k,
        truncated,
    })
}

/// Fixed or adaptive centroid update on the (mean-shifted, for VQPCA) sets.
fn centroid_step(
    a: &DenseMatrix,
    partition: &VoronoiPartition,
    cfg: &PartitionConfig,
    fixed_dims: &[usize],
) -> Result<(CentroidSet, Vec<usize>)> {
    let members = partition.all_members();
    let shift = cfg.algorithm.is_mean_shifted();
    let mut means = Vec::new();
    let parts: Vec<DenseMatrix> = members
        .iter()
        .map(|cols| {
            let part = a.select_columns(cols);
            if shift {
                let mean = part.column_mean();
                let centered = part.shifted(&mean);
                means.push(mean);
                centered
            } else {
                part
            }
        })
        .collect();

    let (mut centroids, dims) = match cfg.algorithm {
        Algorithm::Cvod | Algorithm::Vqpca => {
            let up = update_centroids_carried(&parts, fixed_dims)?;
            (up.centroids, up.dims)
        }
        Algorithm::AdaptCvod | Algorithm::AdaptVqpca => {
            let up = update_centroids_adapt(&parts, cfg.rank)?;
            (up.centroids, up.dims)
        }
    };
    if shift {
        centroids.set_shifts(means);
    }
    Ok((centroids, dims))
}

/// Refills every empty set with the single column of largest residual taken
/// from a set that keeps at least one member.
fn repair_empty_sets(partition: &mut VoronoiPartition, residuals: &[f64]) {
    let mut sizes = partition.sizes();
    let mut moved = vec![false; residuals.len()];
    for empty in 0..sizes.len() {
        if sizes[empty] > 0 {
            continue;
        }
        let mut pick: Option<usize> = None;
        for (j, &r) in residuals.iter().enumerate() {
            if moved[j] || sizes[partition.label(j)] < 2 {
                continue;
            }
            if pick.is_none_or(|p| r > residuals[p]) {
                pick = Some(j);
            }
        }
        let Some(j) = pick else { return };
        sizes[partition.label(j)] -= 1;
        sizes[empty] += 1;
        partition.relabel(j, empty);
        moved[j] = true;
    }
}
