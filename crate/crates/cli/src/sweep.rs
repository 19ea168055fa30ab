use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use voronoi_cur_core::cssp::{
    select_columns_with_spectrum, ColumnSelection, Method, SelectionConfig, SketchMode, SketchSpec,
};
use voronoi_cur_core::linalg::singular_values;
use voronoi_cur_core::DenseMatrix;

use crate::error::{CliError, Result};

pub const SWEEP_HEADER: [&str; 12] = [
    "dataset", "algo", "rank", "k_init", "k_final", "eps", "seed", "sketched", "error", "energy",
    "iters", "seconds",
];

pub const THREADS_ENV: &str = "VORONOI_CUR_THREADS";

/// Inclusive `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankRange {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl RankRange {
    pub fn ranks(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step).collect()
    }
}

impl FromStr for RankRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Option<Vec<usize>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
        let r = match nums.as_deref() {
            Some([r]) => RankRange { start: *r, stop: *r, step: 1 },
            Some([a, b]) => RankRange { start: *a, stop: *b, step: 1 },
            Some([a, b, c]) => RankRange { start: *a, stop: *b, step: *c },
            _ => return Err(format!("expected start:stop:step, got {s:?}")),
        };
        if r.start == 0 || r.step == 0 || r.stop < r.start {
            return Err(format!("need 1 <= start <= stop and step >= 1, got {s:?}"));
        }
        Ok(r)
    }
}

impl fmt::Display for RankRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub methods: Vec<Method>,
    pub ranks: Vec<usize>,
    pub k: usize,
    pub epsilon: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub repeats: usize,
    pub sketch: Option<SketchMode>,
    /// Record wall time; off by default so reruns are byte-identical.
    pub timing: bool,
}

impl SweepSpec {
    fn config(&self, method: Method, rank: usize, seed: u64) -> SelectionConfig {
        let mut cfg = SelectionConfig::new(method, self.k, rank)
            .with_epsilon(self.epsilon)
            .with_max_iters(self.max_iters)
            .with_seed(seed);
        if let Some(mode) = self.sketch {
            cfg = cfg.with_sketch(SketchSpec { seed, mode });
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub method: Method,
    pub rank: usize,
    pub k_init: usize,
    pub k_final: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub sketched: bool,
    pub error: f64,
    pub energy: f64,
    pub iters: usize,
    pub seconds: f64,
}

impl RunRecord {
    fn from_selection(dataset: &str, cfg: &SelectionConfig, out: &ColumnSelection, seconds: f64) -> Self {
        // Plain DEIM has one set whose energy is the rank-r tail.
        let (k_init, k_final, energy, iters) = match &out.outcome {
            Some(o) => (
                o.initial_sets,
                o.final_sets(),
                o.trace.final_energy().unwrap_or(0.0),
                o.iterations(),
            ),
            None => (1, 1, out.report.tail_error * out.report.tail_error, 0),
        };
        RunRecord {
            dataset: dataset.to_string(),
            method: cfg.method,
            rank: cfg.rank,
            k_init,
            k_final,
            epsilon: cfg.epsilon,
            seed: cfg.seed,
            sketched: cfg.sketch.is_some(),
            error: out.error(),
            energy,
            iters,
            seconds,
        }
    }

    pub fn fields(&self) -> [String; 12] {
        [
            self.dataset.clone(),
            self.method.to_string(),
            self.rank.to_string(),
            self.k_init.to_string(),
            self.k_final.to_string(),
            self.epsilon.to_string(),
            self.seed.to_string(),
            self.sketched.to_string(),
            format!("{:e}", self.error),
            format!("{:e}", self.energy),
            self.iters.to_string(),
            format!("{:.6}", self.seconds),
        ]
    }
}

/// Worker count: `VORONOI_CUR_THREADS` if set, else the available parallelism,
/// never more than the number of jobs.
pub fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

/// Runs `f` on every job in a scoped pool and returns results in job order.
pub fn parallel_map<T, R, F>(jobs: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..worker_count(jobs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let r = f(job);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every job ran"))
        .collect()
}

/// One record per (method, rank, seed), ordered by method as listed, then
/// rank, then seed. Every algorithm starts from the same initial partition
/// for a given seed.
pub fn run_sweep(dataset: &str, a: &DenseMatrix, spec: &SweepSpec) -> Result<Vec<RunRecord>> {
    if spec.methods.is_empty() || spec.ranks.is_empty() || spec.repeats == 0 {
        return Err(CliError::Usage("sweep needs at least one algorithm, rank and repeat".into()));
    }
    let spectrum = singular_values(a);
    let mut cells = Vec::new();
    for &m in &spec.methods {
        for &r in &spec.ranks {
            for rep in 0..spec.repeats as u64 {
                cells.push(spec.config(m, r, spec.seed.wrapping_add(rep)));
            }
        }
    }
    parallel_map(&cells, |cfg| {
        let t = Instant::now();
        let out = select_columns_with_spectrum(a, cfg, &spectrum)?;
        let secs = if spec.timing { t.elapsed().as_secs_f64() } else { 0.0 };
        Ok(RunRecord::from_selection(dataset, cfg, &out, secs))
    })
    .into_iter()
    .collect()
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[RunRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
