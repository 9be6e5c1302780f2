//! Multiplicative-update NMF with a per-pixel adaptive ℓp penalty.
//!
//! Objective: `½‖Y - MA‖²_F + λ Σₙ Σₖ (A_kn + ξ)^(1 - hₙ)` subject to
//! `M, A ≥ 0`. Each iteration updates `A`, then `M`, then moves the row
//! sums of `A` into `M` so the factorization's scale is pinned. Plain NMF,
//! ℓ1 and ℓ1/2 penalties are available as separate [`RegularizerKind`]s;
//! a constant map of `0` or `½` reproduces the latter two.
//!
//! Nothing here forms an `N x N` matrix: every product is `K x N`, `L x K`
//! or `K x K`, so one iteration costs `O(KLN)`.
//!
//! [`RegularizerKind`]: crate::RegularizerKind

mod regularizer;
mod solver;
mod updates;

pub use regularizer::Regularizer;
pub use solver::{
    initialize_factors, run, run_from, InitScheme, RunTrace, StopReason, Unmixer, PIXEL_INIT_FLOOR,
};
pub use updates::{
    objective, reconstruction_error, rescale_factors, update_abundances, update_endmembers,
    DENOMINATOR_GUARD,
};
