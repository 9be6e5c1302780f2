//! Solver history as CSV: `iteration,objective,relative_decrement`. Row 0
//! is the starting point and leaves the decrement empty.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dgsnmf_core::unmix::RunTrace;

use crate::error::{Error, Result};
use crate::matrix_file::format_value;

pub const HEADER: &str = "iteration,objective,relative_decrement";

pub fn encode_trace(trace: &RunTrace) -> String {
    let mut out = format!("{HEADER}\n");
    for (t, obj) in trace.objective_per_iter.iter().enumerate() {
        let dec = if t == 0 {
            String::new()
        } else {
            format_value(trace.relative_decrements[t - 1])
        };
        writeln!(out, "{t},{},{dec}", format_value(*obj)).expect("writing to a String");
    }
    out
}

/// Objectives and decrements read back from [`encode_trace`] output.
pub fn decode_trace(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {HEADER:?}"),
            })
        }
    }
    let (mut objectives, mut decrements) = (Vec::new(), Vec::new());
    for (i, line) in lines {
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("{s:?} is not a number"),
            })
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("{} fields, expected 3", fields.len()),
            });
        }
        objectives.push(parse(fields[1])?);
        if !fields[2].is_empty() {
            decrements.push(parse(fields[2])?);
        }
    }
    Ok((objectives, decrements))
}

pub fn write_trace(trace: &RunTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_trace(trace)).map_err(|e| Error::io(path, e))
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>)> {
    let path = path.as_ref();
    decode_trace(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}
