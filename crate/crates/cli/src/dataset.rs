use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use voronoi_cur_core::data::{gen_snn, SnnConfig};
use voronoi_cur_core::DenseMatrix;

use crate::error::{CliError, Result};
use crate::idx::parse_idx;
use crate::textfmt::{format_matrix, parse_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FileFormat {
    /// `rows cols` header followed by whitespace-separated rows.
    Text,
    /// Unsigned-byte IDX tensor.
    Idx,
    /// Comma-separated numbers, one matrix row per record, no header.
    Csv,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> FileFormat {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if ext.eq_ignore_ascii_case("csv") {
            FileFormat::Csv
        } else if ext.eq_ignore_ascii_case("idx") || name.contains("-idx") || name.contains(".idx") {
            FileFormat::Idx
        } else {
            FileFormat::Text
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Snn(SnnConfig),
    File { path: PathBuf, format: FileFormat },
}

/// A matrix source plus the orientation that makes columns the selection targets.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetHandle {
    pub source: Source,
    /// Transpose after loading. IDX files store samples as rows, so the
    /// default for them is `true`.
    pub transpose: bool,
}

impl DatasetHandle {
    pub fn file(path: impl Into<PathBuf>, format: Option<FileFormat>, transpose: Option<bool>) -> Self {
        let path = path.into();
        let format = format.unwrap_or_else(|| FileFormat::from_path(&path));
        DatasetHandle {
            transpose: transpose.unwrap_or(format == FileFormat::Idx),
            source: Source::File { path, format },
        }
    }

    pub fn snn(cfg: SnnConfig) -> Self {
        DatasetHandle {
            source: Source::Snn(cfg),
            transpose: false,
        }
    }

    /// Short identifier for CSV output.
    pub fn id(&self) -> String {
        match &self.source {
            Source::Snn(c) => format!("snn-{}x{}-l{}-d{}-s{}", c.m, c.n, c.l, c.density, c.seed),
            Source::File { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    pub fn load(&self) -> Result<DenseMatrix> {
        let a = match &self.source {
            Source::Snn(cfg) => gen_snn(cfg)?,
            Source::File { path, format } => read_matrix(path, *format)?,
        };
        Ok(if self.transpose { a.transpose() } else { a })
    }
}

impl fmt::Display for DatasetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// `m,n,l,density,seed`, as taken by `--snn`.
pub fn parse_snn_spec(spec: &str) -> std::result::Result<SnnConfig, String> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("expected m,n,l,density,seed, got {spec:?}"));
    }
    fn num<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
        s.parse().map_err(|_| format!("{what} {s:?} is not a number"))
    }
    let cfg = SnnConfig {
        m: num(parts[0], "m")?,
        n: num(parts[1], "n")?,
        l: num(parts[2], "l")?,
        density: num(parts[3], "density")?,
        seed: num(parts[4], "seed")?,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

pub fn read_matrix(path: &Path, format: FileFormat) -> Result<DenseMatrix> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    match format {
        FileFormat::Idx => parse_idx(&bytes)
            .map(|t| t.to_matrix(false))
            .map_err(|source| CliError::Idx {
                path: path.into(),
                source,
            }),
        FileFormat::Text => {
            let text = String::from_utf8(bytes).map_err(|_| {
                CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, "not valid UTF-8"))
            })?;
            parse_matrix(&text).map_err(|source| CliError::Text {
                path: path.into(),
                source,
            })
        }
        FileFormat::Csv => read_csv(path, &bytes),
    }
}

fn read_csv(path: &Path, bytes: &[u8]) -> Result<DenseMatrix> {
    let fail = |reason: String| CliError::Csv {
        path: path.into(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| fail(e.to_string()))?;
        let row = rec
            .iter()
            .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| fail(format!("record {}: non-numeric field", i + 1)))?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(fail(format!(
                    "record {}: expected {} fields, found {}",
                    i + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(fail("no records".into()));
    }
    let flat: Vec<f64> = rows.concat();
    Ok(DenseMatrix::from_row_major(rows.len(), rows[0].len(), &flat)?)
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    fs::write(path, format_matrix(a)).map_err(|e| CliError::io(path, e))
}
