//! Headered text matrices: a `rows cols` line, then one row per line with
//! 17 significant digits, which round-trips every finite `f64`.

use std::fmt::Write as _;

use thiserror::Error;
use voronoi_cur_core::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextFormatError {
    #[error("empty input: expected a `rows cols` header")]
    Empty,
    #[error("line {line}: {reason}")]
    Header { line: usize, reason: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse {token:?} as a finite number")]
    Value { line: usize, token: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = String::with_capacity(24 * a.rows() * a.cols() + 16);
    writeln!(out, "{} {}", a.rows(), a.cols()).unwrap();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{:.16e}", a[(i, j)]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix, TextFormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (h, header) = lines.next().ok_or(TextFormatError::Empty)?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |reason: &str| TextFormatError::Header {
        line: h + 1,
        reason: reason.to_string(),
    };
    if dims.len() != 2 {
        return Err(bad_header("header must be `rows cols`"));
    }
    let rows: usize = dims[0].parse().map_err(|_| bad_header("rows is not a count"))?;
    let cols: usize = dims[1].parse().map_err(|_| bad_header("cols is not a count"))?;

    let mut data = vec![0.0; rows * cols];
    let mut seen = 0;
    for (n, line) in lines {
        if seen == rows {
            return Err(TextFormatError::RowCount {
                expected: rows,
                found: seen + 1,
            });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(TextFormatError::RowLength {
                line: n + 1,
                expected: cols,
                found: tokens.len(),
            });
        }
        for (j, t) in tokens.iter().enumerate() {
            let v: f64 = t
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| TextFormatError::Value {
                    line: n + 1,
                    token: t.to_string(),
                })?;
            data[j * rows + seen] = v;
        }
        seen += 1;
    }
    if seen != rows {
        return Err(TextFormatError::RowCount {
            expected: rows,
            found: seen,
        });
    }
    Ok(DenseMatrix::from_col_major(rows, cols, data).expect("validated above"))
}
