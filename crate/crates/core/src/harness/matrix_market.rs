//! Matrix Market reader and writer for real square matrices.
//!
//! Reads `coordinate` and `array` storage with `real` or `integer` fields and
//! `general` or `symmetric` symmetry. General input must be symmetric within
//! the [`SymMatrix`] tolerance.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymMatrix};

fn mm_err(line: usize, msg: impl Into<String>) -> Error {
    Error::MatrixMarket { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SymMatrix<f64>> {
    parse_matrix_market(BufReader::new(File::open(path)?))
}

pub fn parse_matrix_market(reader: impl BufRead) -> Result<SymMatrix<f64>> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| mm_err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(mm_err(1, format!("malformed header {header:?}")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(mm_err(1, format!("unsupported format {other:?}"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" => {}
        other => return Err(mm_err(1, format!("field must be real or integer, got {other:?}"))),
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(mm_err(1, format!("unsupported symmetry {other:?}"))),
    };

    let mut data = lines.filter_map(|(no, l)| match l {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((no, t.to_string())))
            }
        }
        Err(e) => Some(Err(Error::from(e))),
    });

    let (size_line, size) = data.next().ok_or_else(|| mm_err(1, "missing size line"))??;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| mm_err(size_line, format!("bad size token {t:?}"))))
        .collect::<Result<_>>()?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(mm_err(size_line, format!("size line needs {expected} integers")));
    }
    if dims[0] != dims[1] {
        return Err(mm_err(size_line, format!("matrix is {}x{}, not square", dims[0], dims[1])));
    }
    let n = dims[0];
    let mut m = Matrix::zeros(n);

    let value = |no: usize, t: &str| -> Result<f64> {
        t.parse::<f64>().map_err(|_| mm_err(no, format!("bad value {t:?}")))
    };

    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            for _ in 0..nnz {
                let (no, line) = data.next().ok_or_else(|| mm_err(size_line, "fewer entries than declared"))??;
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(mm_err(no, "entry needs row, column and value"));
                }
                let idx = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                        _ => Err(mm_err(no, format!("index {s:?} out of range 1..={n}"))),
                    }
                };
                let (i, j, v) = (idx(t[0])?, idx(t[1])?, value(no, t[2])?);
                m[(i, j)] = v;
                if symmetric {
                    m[(j, i)] = v;
                }
            }
        }
        Layout::Array => {
            let mut next = || -> Result<(usize, f64)> {
                let (no, line) = data.next().ok_or_else(|| mm_err(size_line, "fewer values than declared"))??;
                Ok((no, value(no, &line)?))
            };
            for j in 0..n {
                let first = if symmetric { j } else { 0 };
                for i in first..n {
                    let (_, v) = next()?;
                    m[(i, j)] = v;
                    if symmetric {
                        m[(j, i)] = v;
                    }
                }
            }
        }
    }
    if let Some(extra) = data.next() {
        let (no, _) = extra?;
        return Err(mm_err(no, "more entries than declared"));
    }
    SymMatrix::new(m)
}

pub fn write_matrix_market(path: impl AsRef<Path>, m: &Matrix<f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    format_matrix_market(&mut w, m)?;
    w.flush()?;
    Ok(())
}

/// Exactly symmetric matrices are written as `coordinate real symmetric`
/// (lower triangle, non-zeros only); anything else as `array real general`.
pub fn format_matrix_market(w: &mut impl Write, m: &Matrix<f64>) -> Result<()> {
    let n = m.n();
    if m.asymmetry().2 == 0.0 {
        let entries: Vec<(usize, usize, f64)> = (0..n)
            .flat_map(|j| (j..n).map(move |i| (i, j)))
            .filter_map(|(i, j)| {
                let v = m[(i, j)];
                (v != 0.0).then_some((i, j, v))
            })
            .collect();
        writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(w, "{n} {n} {}", entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{} {} {v:.16e}", i + 1, j + 1)?;
        }
    } else {
        writeln!(w, "%%MatrixMarket matrix array real general")?;
        writeln!(w, "{n} {n}")?;
        for j in 0..n {
            for i in 0..n {
                writeln!(w, "{:.16e}", m[(i, j)])?;
            }
        }
    }
    Ok(())
}
