//! Lloyd-style column partitioning with subspace centroids.
//!
//! A centroid is an orthonormal basis `U_i` plus an optional shift `z_i`;
//! column `x` is charged `‖(x - z_i) - U_i U_iᵀ (x - z_i)‖²` against it.
//! CVOD and adaptive CVOD use `z_i = 0`, VQPCA and adaptive VQPCA use the
//! set mean. The fixed variants keep a prescribed multi-index of centroid
//! dimensions; the adaptive ones redistribute a total rank `r` across sets
//! every iteration by pooling singular values.

mod assign;
mod centroids;
mod lloyd;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use assign::{energy_g1, energy_g2, find_voronoi_sets};
pub use centroids::{update_centroids_adapt, update_centroids_fixed, AdaptiveUpdate, FixedUpdate};
pub use lloyd::{init_partition, lloyd_run, lloyd_run_from, LloydOutcome};

use crate::error::{Error, Result};
use crate::linalg::OrthonormalBasis;

/// Assignment of every column to one of `num_sets` sets (labels are 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiPartition {
    num_sets: usize,
    labels: Vec<usize>,
}

impl VoronoiPartition {
    pub fn new(num_sets: usize, labels: Vec<usize>) -> Result<Self> {
        if num_sets == 0 {
            return Err(Error::param("num_sets", "need at least one set"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= num_sets) {
            return Err(Error::param(
                "labels",
                format!("label {bad} out of range for {num_sets} sets"),
            ));
        }
        Ok(VoronoiPartition { num_sets, labels })
    }

    /// Every column in one set.
    pub fn single(columns: usize) -> Self {
        VoronoiPartition {
            num_sets: 1,
            labels: vec![0; columns],
        }
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn num_columns(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, column: usize) -> usize {
        self.labels[column]
    }

    /// Column indices of `set`, ascending.
    pub fn members(&self, set: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == set)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn all_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_sets];
        for (j, &l) in self.labels.iter().enumerate() {
            out[l].push(j);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_sets];
        for &l in &self.labels {
            out[l] += 1;
        }
        out
    }

    pub fn nonempty_sets(&self) -> usize {
        self.sizes().iter().filter(|&&s| s > 0).count()
    }

    /// Drops empty sets and relabels the rest in order. Returns the old
    /// index of every surviving set.
    pub(crate) fn compact(&mut self) -> Vec<usize> {
        let sizes = self.sizes();
        let kept: Vec<usize> = (0..self.num_sets).filter(|&s| sizes[s] > 0).collect();
        if kept.len() == self.num_sets {
            return kept;
        }
        let mut remap = vec![usize::MAX; self.num_sets];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        self.labels.iter_mut().for_each(|l| *l = remap[*l]);
        self.num_sets = kept.len();
        kept
    }

    pub(crate) fn relabel(&mut self, column: usize, set: usize) {
        self.labels[column] = set;
    }
}

/// Generalized centroid of one Voronoi set.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub basis: OrthonormalBasis,
    /// `None` stands for the zero shift.
    pub shift: Option<Vec<f64>>,
}

impl Centroid {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `‖(x − z) − UUᵀ(x − z)‖²`.
    pub fn residual_sq(&self, x: &[f64], scratch: &mut Vec<f64>, shifted: &mut Vec<f64>) -> f64 {
        match &self.shift {
            None => self.basis.residual_norm_sq(x, scratch),
            Some(z) => {
                shifted.clear();
                shifted.extend(x.iter().zip(z).map(|(a, b)| a - b));
                self.basis.residual_norm_sq(shifted, scratch)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    ambient_dim: usize,
    centroids: Vec<Centroid>,
}

impl CentroidSet {
    pub fn new(ambient_dim: usize, centroids: Vec<Centroid>) -> Result<Self> {
        for c in &centroids {
            if c.basis.ambient_dim() != ambient_dim
                || c.shift.as_ref().is_some_and(|z| z.len() != ambient_dim)
            {
                return Err(Error::DimensionMismatch {
                    op: "CentroidSet::new",
                    expected: (ambient_dim, c.dim()),
                    found: (c.basis.ambient_dim(), c.dim()),
                });
            }
        }
        Ok(CentroidSet {
            ambient_dim,
            centroids,
        })
    }

    /// Unshifted centroids from bare bases.
    pub fn from_bases(ambient_dim: usize, bases: Vec<OrthonormalBasis>) -> Result<Self> {
        Self::new(
            ambient_dim,
            bases
                .into_iter()
                .map(|basis| Centroid { basis, shift: None })
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    pub fn get(&self, set: usize) -> &Centroid {
        &self.centroids[set]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Centroid> {
        self.centroids.iter()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.centroids.iter().map(Centroid::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.centroids.iter().map(Centroid::dim).sum()
    }

    pub(crate) fn set_shifts(&mut self, shifts: Vec<Vec<f64>>) {
        for (c, z) in self.centroids.iter_mut().zip(shifts) {
            c.shift = Some(z);
        }
    }

    pub(crate) fn retain_sets(&mut self, kept: &[usize]) {
        if kept.len() == self.centroids.len() {
            return;
        }
        let old = core::mem::take(&mut self.centroids);
        let mut slots: Vec<Option<Centroid>> = old.into_iter().map(Some).collect();
        self.centroids = kept.iter().map(|&i| slots[i].take().unwrap()).collect();
    }
}

/// The four partitioning schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Cvod,
    Vqpca,
    AdaptCvod,
    AdaptVqpca,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Cvod,
        Algorithm::Vqpca,
        Algorithm::AdaptCvod,
        Algorithm::AdaptVqpca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cvod => "cvod",
            Algorithm::Vqpca => "vqpca",
            Algorithm::AdaptCvod => "adapt_cvod",
            Algorithm::AdaptVqpca => "adapt_vqpca",
        }
    }

    pub fn is_adaptive(self) -> bool {
        matches!(self, Algorithm::AdaptCvod | Algorithm::AdaptVqpca)
    }

    /// VQPCA family: centroids carry the set mean as their shift.
    pub fn is_mean_shifted(self) -> bool {
        matches!(self, Algorithm::Vqpca | Algorithm::AdaptVqpca)
    }

    /// Absolute energy decrement for the CVOD family, relative for VQPCA.
    pub fn default_stop_rule(self) -> StopRule {
        if self.is_mean_shifted() {
            StopRule::Relative
        } else {
            StopRule::Absolute
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::param(
                    "algorithm",
                    format!("unknown `{s}`; expected cvod, vqpca, adapt_cvod or adapt_vqpca"),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Stop once `G^{j-1} - G^j <= ε`.
    Absolute,
    /// Stop once `(G^{j-1} - G^j) / G^{j-1} <= ε`.
    Relative,
}

/// `⌊r/k⌋` per set, with the first `r mod k` sets taking one more.
pub fn default_multi_index(rank: usize, k: usize) -> Vec<usize> {
    let base = rank / k;
    let extra = rank % k;
    (0..k).map(|i| base + usize::from(i < extra)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionConfig {
    pub algorithm: Algorithm,
    /// Initial number of sets.
    pub k: usize,
    /// Target rank `r`, the total centroid dimension.
    pub rank: usize,
    /// Fixed variants only; defaults to [`default_multi_index`].
    pub multi_index: Option<Vec<usize>>,
    pub epsilon: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Overrides [`Algorithm::default_stop_rule`].
    pub stop_rule: Option<StopRule>,
}

impl PartitionConfig {
    pub const DEFAULT_EPSILON: f64 = 0.1;
    pub const DEFAULT_MAX_ITERS: usize = 100;

    pub fn new(algorithm: Algorithm, k: usize, rank: usize) -> Self {
        PartitionConfig {
            algorithm,
            k,
            rank,
            multi_index: None,
            epsilon: Self::DEFAULT_EPSILON,
            max_iters: Self::DEFAULT_MAX_ITERS,
            seed: 0,
            stop_rule: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_multi_index(mut self, dims: Vec<usize>) -> Self {
        self.multi_index = Some(dims);
        self
    }

    pub fn stop_rule(&self) -> StopRule {
        self.stop_rule
            .unwrap_or_else(|| self.algorithm.default_stop_rule())
    }

    /// Multi-index used by the fixed variants.
    pub fn dims(&self) -> Vec<usize> {
        self.multi_index
            .clone()
            .unwrap_or_else(|| default_multi_index(self.rank, self.k))
    }

    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        if self.k < 1 || self.k > cols {
            return Err(Error::param(
                "k",
                format!("must satisfy 1 <= k <= n = {cols}, got {}", self.k),
            ));
        }
        if self.rank < 1 || self.rank > rows.min(cols) {
            return Err(Error::param(
                "rank",
                format!("must satisfy 1 <= r <= min(m, n) = {}", rows.min(cols)),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::param("epsilon", "must be positive and finite"));
        }
        if self.max_iters < 1 {
            return Err(Error::param("max_iters", "must be at least 1"));
        }
        if !self.algorithm.is_adaptive() {
            let dims = self.dims();
            if dims.len() != self.k {
                return Err(Error::param(
                    "multi_index",
                    format!("has {} entries for k = {}", dims.len(), self.k),
                ));
            }
            if dims.iter().sum::<usize>() != self.rank {
                return Err(Error::param("multi_index", "entries must sum to the rank"));
            }
            if dims.contains(&0) {
                return Err(Error::param(
                    "multi_index",
                    "fixed variants need every d_i >= 1 (k <= rank)",
                ));
            }
        }
        Ok(())
    }
}

/// Per-iteration record of a Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    pub energy: f64,
    /// Centroid dimensions used in this iteration's assignment.
    pub dims: Vec<usize>,
    /// Nonempty sets after the assignment (and compaction or repair).
    pub active_sets: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyTrace {
    pub records: Vec<TraceRecord>,
}

impl EnergyTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.records.last().map(|r| r.energy)
    }

    /// Largest increase `G^j - G^{j-1}` relative to `|G^1|` (≤ 0 when monotone).
    pub fn worst_increase(&self) -> f64 {
        let Some(first) = self.records.first() else {
            return 0.0;
        };
        let scale = first.energy.abs().max(f64::MIN_POSITIVE);
        self.records
            .windows(2)
            .map(|w| (w[1].energy - w[0].energy) / scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `G^j <= G^{j-1} + slack·|G^1|` for every iteration.
    pub fn is_monotone(&self, slack: f64) -> bool {
        let Some(first) = self.records.first() else {
            return true;
        };
        let tol = slack * first.energy.abs();
        self.records
            .windows(2)
            .all(|w| w[1].energy <= w[0].energy + tol)
    }
}
