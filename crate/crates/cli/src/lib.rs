//! File formats and renders for `dgsnmf-core`, shared by the `dgsnmf`
//! binary.
//!
//! * [`cube_file`]: binary `HSCUBE1` cubes.
//! * [`matrix_file`]: matrices and per-pixel maps as CSV.
//! * [`image`]: PPM/PGM output, pseudo-colour and grayscale renders.
//! * [`trace`]: solver objective history as CSV.
//! * [`report`]: evaluation reports.

pub mod cube_file;
mod error;
pub mod image;
pub mod matrix_file;
pub mod report;
pub mod trace;

pub use error::{Error, Result};
