//! Command-line harness for Voronoi-partitioned column selection: SNN
//! generation, rank sweeps, Lloyd traces and CUR export.

pub mod config;
pub mod dataset;
pub mod error;
pub mod idx;
pub mod report;
pub mod svg;
pub mod sweep;
pub mod textfmt;
pub mod trace;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use voronoi_cur_core::cssp::{cur_decompose, Method, SelectionConfig, SketchMode, SketchSpec};
use voronoi_cur_core::data::{gen_snn, SnnConfig};
use voronoi_cur_core::partition::{lloyd_run, Algorithm, PartitionConfig, StopRule};

use crate::dataset::{parse_snn_spec, write_matrix, DatasetHandle, FileFormat};
use crate::error::{CliError, Result};
use crate::sweep::{run_sweep, write_sweep_csv, RankRange, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "voronoi-cur", version, about, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a sparse nonnegative test matrix.
    #[command(args_override_self = true)]
    GenSnn(GenSnnArgs),
    /// Normalized reconstruction error over a range of ranks.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Per-iteration energy and centroid dimensions of one Lloyd run.
    #[command(args_override_self = true)]
    Trace(TraceArgs),
    /// CUR factors and the bound report.
    #[command(args_override_self = true)]
    Cur(CurArgs),
}

fn density(s: &str) -> std::result::Result<f64, String> {
    let d: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if d > 0.0 && d <= 1.0 {
        Ok(d)
    } else {
        Err("must lie in (0, 1]".into())
    }
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive number".into())
    }
}

fn method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|_| {
        format!("unknown algorithm {s:?}; valid names: {}", Method::names().join(", "))
    })
}

fn algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    match method(s)? {
        Method::Partitioned(a) => Ok(a),
        Method::Deim => Err(format!(
            "plain deim has no Lloyd trace; valid names: {}",
            Algorithm::ALL.map(|a| a.name()).join(", ")
        )),
    }
}

#[derive(Debug, Args)]
pub struct GenSnnArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Leading terms with the doubled coefficient.
    #[arg(long)]
    pub l: usize,
    #[arg(long, value_parser = density)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Read defaults from a key = value file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Matrix file (text, idx or csv).
    #[arg(long, required_unless_present = "snn", conflicts_with = "snn")]
    pub input: Option<PathBuf>,
    /// Generate the input instead: m,n,l,density,seed.
    #[arg(long, value_parser = parse_snn_spec)]
    pub snn: Option<SnnConfig>,
    /// Input format; guessed from the extension by default.
    #[arg(long, value_enum)]
    pub format: Option<FileFormat>,
    /// Transpose after loading (default: yes for idx, no otherwise).
    #[arg(long)]
    pub transpose: Option<bool>,
}

impl InputArgs {
    pub fn handle(&self) -> DatasetHandle {
        match (&self.input, &self.snn) {
            (Some(p), _) => DatasetHandle::file(p, self.format, self.transpose),
            (None, Some(cfg)) => {
                let mut h = DatasetHandle::snn(*cfg);
                h.transpose = self.transpose.unwrap_or(false);
                h
            }
            (None, None) => unreachable!("clap requires one of --input/--snn"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SketchModeArg {
    PerRank,
    Shared,
}

impl From<SketchModeArg> for SketchMode {
    fn from(m: SketchModeArg) -> Self {
        match m {
            SketchModeArg::PerRank => SketchMode::PerRank,
            SketchModeArg::Shared => SketchMode::Shared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StopArg {
    Absolute,
    Relative,
}

impl From<StopArg> for StopRule {
    fn from(s: StopArg) -> Self {
        match s {
            StopArg::Absolute => StopRule::Absolute,
            StopArg::Relative => StopRule::Relative,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Initial number of Voronoi sets.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    /// Stopping tolerance on the energy decrement.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub eps: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Override the algorithm's default stopping test.
    #[arg(long, value_enum)]
    pub stop: Option<StopArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Select on a Gaussian sketch of the input.
    #[arg(long)]
    pub sketch: bool,
    #[arg(long, value_enum, default_value = "per-rank")]
    pub sketch_mode: SketchModeArg,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    fn selection(&self, method: Method, rank: usize) -> SelectionConfig {
        let mut cfg = SelectionConfig::new(method, self.k, rank)
            .with_epsilon(self.eps)
            .with_max_iters(self.max_iters)
            .with_seed(self.seed);
        cfg.stop_rule = self.stop.map(Into::into);
        if self.sketch {
            cfg = cfg.with_sketch(SketchSpec {
                seed: self.seed,
                mode: self.sketch_mode.into(),
            });
        }
        cfg
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated algorithms; plain deim is added unless --no-baseline.
    #[arg(long, value_delimiter = ',', value_parser = method,
          default_value = "deim,cvod,vqpca,adapt_cvod,adapt_vqpca")]
    pub algos: Vec<Method>,
    #[arg(long)]
    pub no_baseline: bool,
    /// Ranks as start:stop:step (inclusive).
    #[arg(long)]
    pub ranks: RankRange,
    /// Seeds seed, seed+1, ... one row each.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Record wall seconds (otherwise 0, keeping reruns byte-identical).
    #[arg(long)]
    pub timing: bool,
    /// CSV destination; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an error-versus-rank chart.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_parser = algorithm)]
    pub algo: Algorithm,
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_parser = method, default_value = "deim")]
    pub algo: Method,
    #[arg(long)]
    pub rank: usize,
    /// Writes PREFIX.C.txt, PREFIX.U.txt, PREFIX.R.txt and PREFIX.report.txt.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_error(path: Option<&Path>, e: csv::Error) -> CliError {
    let path = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        other => CliError::Csv {
            path,
            reason: format!("{other:?}"),
        },
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_gen_snn(args: &GenSnnArgs) -> Result<()> {
    let cfg = SnnConfig {
        m: args.m,
        n: args.n,
        l: args.l,
        density: args.density,
        seed: args.seed,
    };
    let a = gen_snn(&cfg).map_err(|e| CliError::Usage(format!("--m/--n/--l/--density: {e}")))?;
    write_matrix(&args.out, &a)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let handle = args.input.handle();
    let a = handle.load()?;
    let mut methods = args.algos.clone();
    methods.dedup();
    if !args.no_baseline && !methods.contains(&Method::Deim) {
        methods.insert(0, Method::Deim);
    }
    let spec = SweepSpec {
        methods,
        ranks: args.ranks.ranks(),
        k: args.run.k,
        epsilon: args.run.eps,
        max_iters: args.run.max_iters,
        seed: args.run.seed,
        repeats: args.repeats,
        sketch: args.run.sketch.then(|| args.run.sketch_mode.into()),
        timing: args.timing,
    };
    let records = run_sweep(&handle.id(), &a, &spec)?;
    let out = args.out.as_deref();
    write_sweep_csv(writer(out)?, &records).map_err(|e| csv_error(out, e))?;
    if let Some(p) = &args.svg {
        let title = format!("{} (k = {})", handle.id(), args.run.k);
        std::fs::write(p, svg::render_sweep_svg(&title, &records)).map_err(|e| CliError::io(p, e))?;
    }
    Ok(())
}

pub fn cmd_trace(args: &TraceArgs) -> Result<()> {
    let a = args.input.handle().load()?;
    let sel = args.run.selection(Method::Partitioned(args.algo), args.rank);
    let cfg: PartitionConfig = sel.partition_config(args.algo);
    let b = match &sel.sketch {
        Some(spec) => spec.operator(args.rank, a.rows())?.apply(&a)?,
        None => a,
    };
    let outcome = lloyd_run(&b, &cfg)?;
    let out = args.out.as_deref();
    trace::write_trace_csv(writer(out)?, &outcome.trace, cfg.k).map_err(|e| csv_error(out, e))
}

pub fn cmd_cur(args: &CurArgs) -> Result<()> {
    let a = args.input.handle().load()?;
    let cfg = args.run.selection(args.algo, args.rank);
    let (cur, rep) = cur_decompose(&a, &cfg)?;
    let p = &args.out_prefix;
    write_matrix(&with_suffix(p, ".C.txt"), cur.c())?;
    write_matrix(&with_suffix(p, ".U.txt"), &cur.u)?;
    write_matrix(&with_suffix(p, ".R.txt"), &cur.r())?;
    let path = with_suffix(p, ".report.txt");
    std::fs::write(&path, report::cur_report(&cur, &rep)).map_err(|e| CliError::io(&path, e))
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::GenSnn(a) => cmd_gen_snn(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Cur(a) => cmd_cur(a),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("voronoi-cur: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("voronoi-cur: {e}");
            e.exit_code()
        }
    }
}
