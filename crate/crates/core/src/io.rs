//! CSV input and output for matrices and vectors.
//!
//! Files have no required header; a first row that does not parse as numbers
//! is skipped as a header. Values are written with 17 significant digits.

use std::fs::File;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{HppError, Result};
use crate::trace::fmt_f64;

fn io_err(path: &Path, source: std::io::Error) -> HppError {
    HppError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> HppError {
    HppError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> HppError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io_err(path, io),
        other => parse_err(path, format!("{other:?}")),
    }
}

/// Reads a rectangular numeric CSV file.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut data = Vec::new();
    let mut ncols = None;
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(parse_err(path, format!("row {}: {e}", i + 1))),
        };
        match ncols {
            None => ncols = Some(values.len()),
            Some(c) if c != values.len() => {
                return Err(parse_err(
                    path,
                    format!("row {} has {} fields, expected {c}", i + 1, values.len()),
                ))
            }
            _ => {}
        }
        data.extend(values);
        rows += 1;
    }
    let ncols = ncols.ok_or_else(|| parse_err(path, "no numeric rows"))?;
    Array2::from_shape_vec((rows, ncols), data).map_err(|e| parse_err(path, e.to_string()))
}

/// Reads a vector stored as one column or one row.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Array1<f64>> {
    let path = path.as_ref();
    let m = read_matrix(path)?;
    match m.dim() {
        (_, 1) => Ok(m.column(0).to_owned()),
        (1, _) => Ok(m.row(0).to_owned()),
        (r, c) => Err(parse_err(path, format!("expected a vector, found a {r}x{c} matrix"))),
    }
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Array2<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for row in m.rows() {
        w.write_record(row.iter().map(|v| fmt_f64(*v)))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Writes one value per line.
pub fn write_vector(path: impl AsRef<Path>, v: &Array1<f64>) -> Result<()> {
    let path = path.as_ref();
    let text: String = v.iter().map(|x| fmt_f64(*x) + "\n").collect();
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn create_dir(path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::create_dir_all(path).map_err(|e| io_err(path, e))
}
