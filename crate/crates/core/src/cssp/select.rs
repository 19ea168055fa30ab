use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::bounds::{bound_report_with_spectrum, BoundReport};
use super::deim::deim_select;
use super::partitioned::{partitioned_deim, SelectionResult};
use crate::data::{SketchOperator, Stream};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, truncated_svd};
use crate::matrix::DenseMatrix;
use crate::partition::{
    lloyd_run, Algorithm, EnergyTrace, LloydOutcome, PartitionConfig, StopRule, VoronoiPartition,
};

/// Column selector: plain DEIM or one of the partitioned variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Deim,
    Partitioned(Algorithm),
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Deim,
        Method::Partitioned(Algorithm::Cvod),
        Method::Partitioned(Algorithm::Vqpca),
        Method::Partitioned(Algorithm::AdaptCvod),
        Method::Partitioned(Algorithm::AdaptVqpca),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Deim => "deim",
            Method::Partitioned(a) => a.name(),
        }
    }

    pub fn names() -> Vec<&'static str> {
        Method::ALL.iter().map(|m| m.name()).collect()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("deim") {
            return Ok(Method::Deim);
        }
        s.parse().map(Method::Partitioned).map_err(|_| {
            Error::param(
                "method",
                alloc::format!("unknown method {s:?}; expected one of {}", Method::names().join(", ")),
            )
        })
    }
}

/// How sketch matrices relate across ranks of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SketchMode {
    /// A fresh `Γ` for every rank.
    #[default]
    PerRank,
    /// One stream for all ranks; the rank-`r` sketch is the first `r` rows.
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchSpec {
    pub seed: u64,
    pub mode: SketchMode,
}

impl SketchSpec {
    pub fn operator(&self, rank: usize, source_dim: usize) -> Result<SketchOperator> {
        let stream = match self.mode {
            SketchMode::PerRank => Stream::Sketch(rank as u64),
            SketchMode::Shared => Stream::Sketch(0),
        };
        SketchOperator::gaussian(rank, source_dim, self.seed, stream)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    pub method: Method,
    pub k: usize,
    pub rank: usize,
    pub multi_index: Option<Vec<usize>>,
    pub epsilon: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub stop_rule: Option<StopRule>,
    /// Run selection on `ΓA` instead of `A`.
    pub sketch: Option<SketchSpec>,
}

impl SelectionConfig {
    pub fn new(method: Method, k: usize, rank: usize) -> Self {
        let base = PartitionConfig::new(Algorithm::Cvod, k, rank);
        SelectionConfig {
            method,
            k,
            rank,
            multi_index: None,
            epsilon: base.epsilon,
            max_iters: base.max_iters,
            seed: 0,
            stop_rule: None,
            sketch: None,
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

    pub fn with_sketch(mut self, sketch: SketchSpec) -> Self {
        self.sketch = Some(sketch);
        self
    }

    pub fn partition_config(&self, algorithm: Algorithm) -> PartitionConfig {
        PartitionConfig {
            algorithm,
            k: self.k,
            rank: self.rank,
            multi_index: self.multi_index.clone(),
            epsilon: self.epsilon,
            max_iters: self.max_iters,
            seed: self.seed,
            stop_rule: self.stop_rule,
        }
    }
}

/// Everything a selection run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSelection {
    pub selection: SelectionResult,
    /// Empty for plain DEIM.
    pub trace: EnergyTrace,
    pub report: BoundReport,
    /// The single set for plain DEIM.
    pub partition: VoronoiPartition,
    pub outcome: Option<LloydOutcome>,
}

impl ColumnSelection {
    pub fn error(&self) -> f64 {
        self.report.normalized_error
    }
}

/// Partition (unless plain DEIM), select, and evaluate against `a`.
pub fn select_columns(a: &DenseMatrix, cfg: &SelectionConfig) -> Result<ColumnSelection> {
    select_columns_with_spectrum(a, cfg, &singular_values(a))
}

/// [`select_columns`] with the singular values of `a` supplied, for sweeps
/// that evaluate many ranks on one matrix.
pub fn select_columns_with_spectrum(
    a: &DenseMatrix,
    cfg: &SelectionConfig,
    spectrum: &[f64],
) -> Result<ColumnSelection> {
    let rank = cfg.rank;
    if rank < 1 || rank > a.rows().min(a.cols()) {
        return Err(Error::param(
            "rank",
            alloc::format!(
                "must satisfy 1 <= r <= min(m, n) = {}, got {rank}",
                a.rows().min(a.cols())
            ),
        ));
    }
    let sketched;
    let b = match &cfg.sketch {
        Some(spec) => {
            sketched = spec.operator(rank, a.rows())?.apply(a)?;
            &sketched
        }
        None => a,
    };

    let (selection, partition, outcome) = match cfg.method {
        Method::Deim => {
            let svd = truncated_svd(b, rank)?;
            let take = svd.rank().min(rank);
            let indices = deim_select(&svd.right.leading_columns(take))?;
            let sel = SelectionResult::single_block(a, indices, rank);
            (sel, VoronoiPartition::single(a.cols()), None)
        }
        Method::Partitioned(algorithm) => {
            let outcome = lloyd_run(b, &cfg.partition_config(algorithm))?;
            let sel = partitioned_deim(b, &outcome.partition, &outcome.centroids, rank)?
                .with_source(a);
            (sel, outcome.partition.clone(), Some(outcome))
        }
    };
    let report = bound_report_with_spectrum(a, &selection, &partition, rank, spectrum)?;
    Ok(ColumnSelection {
        selection,
        trace: outcome.as_ref().map(|o| o.trace.clone()).unwrap_or_default(),
        report,
        partition,
        outcome,
    })
}
