//! Per-pixel guidance map ("DgMap") estimation.
//!
//! The pipeline runs in three stages:
//!
//! 1. [`initial_dgmap`] sums the similarity of each pixel to its existing
//!    4-connected neighbours (2 at corners, 3 on edges, 4 inside). Pixels in
//!    homogeneous areas score high, pixels in transition areas score low.
//! 2. [`fine_tune`] propagates that estimate over the image with the matting
//!    Laplacian of [`build_matting_laplacian`], solving `(L + αI)h = αh⁽⁰⁾`.
//! 3. [`rescale`] maps the result into `[0, 1)`.
//!
//! A scaled value `h_n` makes pixel `n` regularized by the `ℓ(1-h_n)`
//! quasi-norm: high values mean "probably pure, sparsify hard".

mod cg;
mod laplacian;
mod similarity;

use alloc::vec;
use alloc::vec::Vec;

pub use cg::{pcg, CgOutput, SpdOperator};
pub use laplacian::{
    build_matting_laplacian, window_affinity, window_origins, window_projection, SparseLaplacian,
};
pub use similarity::{dot_similarity, heat_similarity, SimilarityMeasure};

use crate::cube::HyperCube;
use crate::error::{Error, Result};

/// Guidance map: the unscaled values and their `[0, 1)` rescale.
#[derive(Debug, Clone, PartialEq)]
pub struct DgMap {
    raw: Vec<f64>,
    scaled: Vec<f64>,
}

impl DgMap {
    /// Rescales `raw` with guard `beta`.
    pub fn from_raw(raw: Vec<f64>, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
            });
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let scaled = rescale(&raw, beta);
        Ok(Self { raw, scaled })
    }

    /// Wraps an already scaled map (e.g. read from disk); `raw` mirrors it.
    pub fn from_scaled(scaled: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = scaled.iter().find(|v| !(0.0..1.0).contains(*v)) {
            return Err(Error::OutOfRange(bad));
        }
        Ok(Self {
            raw: scaled.clone(),
            scaled,
        })
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn scaled(&self) -> &[f64] {
        &self.scaled
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }
}

/// Settings for [`estimate_dgmap`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgMapParams {
    pub sigma: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub window: usize,
    pub measure: SimilarityMeasure,
    pub cg_tol: f64,
    pub cg_max_iters: Option<usize>,
    /// Skip the Laplacian refinement and rescale the initial map directly.
    pub fine_tune: bool,
}

impl Default for DgMapParams {
    fn default() -> Self {
        crate::SolverConfig::default().dgmap_params()
    }
}

/// Sum of similarities between each pixel and its in-bounds 4-neighbours.
pub fn initial_dgmap(cube: &HyperCube, sigma: f64, measure: SimilarityMeasure) -> Result<Vec<f64>> {
    if measure == SimilarityMeasure::Heat && !(sigma > 0.0) {
        return Err(Error::InvalidBandwidth(sigma));
    }
    let (width, height) = (cube.width(), cube.height());
    let similarity = |i: usize, j: usize| match measure {
        SimilarityMeasure::Heat => heat_similarity(cube.spectrum(i), cube.spectrum(j), sigma),
        SimilarityMeasure::Dot => dot_similarity(cube.spectrum(i), cube.spectrum(j)),
    };
    let mut raw = vec![0.0; cube.pixels()];
    for (i, h) in raw.iter_mut().enumerate() {
        let (r, c) = cube.index_to_grid(i);
        if r > 0 {
            *h += similarity(i, i - width)?;
        }
        if c > 0 {
            *h += similarity(i, i - 1)?;
        }
        if c + 1 < width {
            *h += similarity(i, i + 1)?;
        }
        if r + 1 < height {
            *h += similarity(i, i + width)?;
        }
    }
    Ok(raw)
}

struct Shifted<'a> {
    laplacian: &'a SparseLaplacian,
    shift: f64,
}

impl SpdOperator for Shifted<'_> {
    fn dim(&self) -> usize {
        self.laplacian.dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.laplacian.mul_vec(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o += self.shift * xi;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = self.laplacian.diagonal();
        d.iter_mut().for_each(|v| *v += self.shift);
        d
    }
}

/// Solves `(L + αI)h = αh⁽⁰⁾` by Jacobi-preconditioned CG, starting from
/// `h⁽⁰⁾`. `cg_max_iters = None` allows `10 * N` iterations.
///
/// The residual of the returned `h` satisfies
/// `‖(L + αI)h - αh⁽⁰⁾‖ ≤ cg_tol · ‖αh⁽⁰⁾‖`.
pub fn fine_tune(
    laplacian: &SparseLaplacian,
    h0: &[f64],
    alpha: f64,
    cg_tol: f64,
    cg_max_iters: Option<usize>,
) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    if h0.len() != laplacian.dim() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "map of length {} against a {}-pixel Laplacian",
            h0.len(),
            laplacian.dim()
        )));
    }
    let op = Shifted {
        laplacian,
        shift: alpha,
    };
    let rhs: Vec<f64> = h0.iter().map(|v| alpha * v).collect();
    let max_iters = cg_max_iters.unwrap_or(10 * h0.len());
    let out = pcg(&op, &rhs, h0, cg_tol, max_iters)?;
    log::debug!(
        "fine_tune: {} CG iterations, relative residual {:e}",
        out.iterations,
        out.relative_residual
    );
    Ok(out.solution)
}

/// `hₙ ← (hₙ - min h) / (max h - min h + β)`; the result lies in `[0, 1)`
/// and a constant input maps to all zeros.
pub fn rescale(h: &[f64], beta: f64) -> Vec<f64> {
    let (lo, hi) = h
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let denom = hi - lo + beta;
    h.iter().map(|&v| (v - lo) / denom).collect()
}

/// A map holding `value` everywhere. `0` reproduces the ℓ1 penalty, `½`
/// the ℓ1/2 penalty.
pub fn constant_dgmap(n: usize, value: f64) -> Result<DgMap> {
    if !(0.0..1.0).contains(&value) {
        return Err(Error::OutOfRange(value));
    }
    Ok(DgMap {
        raw: vec![value; n],
        scaled: vec![value; n],
    })
}

/// Initial estimate, optional Laplacian refinement, rescale.
pub fn estimate_dgmap(cube: &HyperCube, params: &DgMapParams) -> Result<DgMap> {
    let h0 = initial_dgmap(cube, params.sigma, params.measure)?;
    let h = if params.fine_tune {
        let lap = build_matting_laplacian(cube, params.epsilon, params.window)?;
        fine_tune(&lap, &h0, params.alpha, params.cg_tol, params.cg_max_iters)?
    } else {
        h0
    };
    DgMap::from_raw(h, params.beta)
}
