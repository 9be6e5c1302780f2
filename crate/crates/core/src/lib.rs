//! Data-guided sparse nonnegative matrix factorization for hyperspectral unmixing.
//!
//! The crate is `no_std` (it needs `alloc`) and carries only the numerical
//! pieces: cube and factor types, the per-pixel guidance map (initial
//! neighbour-similarity estimate, matting-Laplacian refinement, rescaling),
//! the multiplicative-update solver with its regularizer family, evaluation
//! metrics and a synthetic scene generator. File formats, renders and the
//! command-line driver live in the `dgsnmf-cli` crate.
//!
//! Matrices are dense, 64-bit and column-major. A cube with `L` channels and
//! `N = width * height` pixels is an `L x N` matrix whose columns are pixel
//! spectra, pixel `n` sitting at grid row `n / width`, column `n % width`.
//!
//! ```
//! use dgsnmf_core::{synth, unmix, SolverConfig, RegularizerKind};
//!
//! let spec = synth::SceneSpec { width: 8, height: 8, channels: 12, endmembers: 2, ..Default::default() };
//! let (cube, _truth) = synth::generate(&spec).unwrap();
//! let config = SolverConfig { max_iters: 50, regularizer: RegularizerKind::L1, ..Default::default() };
//! let (factors, trace) = unmix::run(&cube, 2, &config).unwrap();
//! assert_eq!(factors.endmembers.cols(), 2);
//! assert!(trace.iterations_run <= 50);
//! ```

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod config;
mod cube;
mod error;
mod factors;
mod linalg;
mod matrix;

pub mod dgmap;
pub mod metrics;
pub mod synth;
pub mod unmix;

pub use config::{RegularizerKind, SolverConfig};
pub use cube::{validate_cube, HyperCube};
pub use dgmap::DgMap;
pub use error::{Error, Result};
pub use factors::FactorPair;
pub use matrix::Matrix;
