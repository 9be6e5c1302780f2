//! Matrices as CSV, one line per row, every value with 17 significant
//! digits so parsing restores the exact `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dgsnmf_core::Matrix;

use crate::error::{Error, Result};

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn encode_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{}", format_value(m[(r, c)])).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn decode_matrix(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("{field:?} is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("{} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no rows".into(),
        });
    }
    Ok(Matrix::from_rows(&rows)?)
}

pub fn write_matrix(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_matrix(m)).map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    decode_matrix(&text)
}

/// A per-pixel map laid out as a `height x width` grid.
pub fn map_to_grid(values: &[f64], width: usize, height: usize) -> Result<Matrix> {
    if values.len() != width * height {
        return Err(dgsnmf_core::Error::ShapeMismatch(format!(
            "{} values for a {width}x{height} grid",
            values.len()
        ))
        .into());
    }
    Ok(Matrix::from_fn(height, width, |r, c| values[r * width + c]))
}

/// Inverse of [`map_to_grid`]; returns the values and `(width, height)`.
pub fn grid_to_map(grid: &Matrix) -> (Vec<f64>, usize, usize) {
    let (height, width) = grid.shape();
    let values = (0..height)
        .flat_map(|r| (0..width).map(move |c| (r, c)))
        .map(|(r, c)| grid[(r, c)])
        .collect();
    (values, width, height)
}
