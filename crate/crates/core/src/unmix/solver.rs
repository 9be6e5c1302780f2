use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{objective, rescale_factors, update_abundances, update_endmembers, Regularizer};
use crate::config::SolverConfig;
use crate::cube::HyperCube;
use crate::error::{Error, Result};
use crate::factors::FactorPair;
use crate::matrix::Matrix;

/// Floor added to pixel spectra used as initial endmembers, so no entry
/// starts at an exact zero that multiplicative updates could never leave.
pub const PIXEL_INIT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitScheme {
    /// `M` and `A` uniform in `[0.1, 1.0)`.
    #[default]
    Random,
    /// `M` columns are `k` distinct random pixels plus a small floor, `A`
    /// uniform in `[0.1, 1.0)`.
    DataPixels,
}

/// Strictly positive starting factors, deterministic in `seed`.
pub fn initialize_factors(cube: &HyperCube, k: usize, seed: u64, scheme: InitScheme) -> Result<FactorPair> {
    let (l, n) = (cube.channels(), cube.pixels());
    if k == 0 || k > l.min(n) {
        return Err(Error::BadK { k, max: l.min(n) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let endmembers = match scheme {
        InitScheme::Random => Matrix::from_fn(l, k, |_, _| rng.random_range(0.1..1.0)),
        InitScheme::DataPixels => {
            let picks = index::sample(&mut rng, n, k);
            let mut m = Matrix::zeros(l, k);
            for (col, p) in picks.iter().enumerate() {
                for (dst, src) in m.col_mut(col).iter_mut().zip(cube.spectrum(p)) {
                    *dst = src + PIXEL_INIT_FLOOR;
                }
            }
            m
        }
    };
    let abundances = Matrix::from_fn(k, n, |_, _| rng.random_range(0.1..1.0));
    FactorPair::new(endmembers, abundances)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    RelTol,
}

/// Objective history of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Objective after each iteration; entry 0 is the normalized starting
    /// point, entry `t` follows iteration `t`.
    pub objective_per_iter: Vec<f64>,
    /// `(O[t-1] - O[t]) / O[t-1]` for every iteration `t >= 1`.
    pub relative_decrements: Vec<f64>,
    pub iterations_run: usize,
    pub stop_reason: StopReason,
}

/// Solver state: update `A`, update `M`, rescale, repeat.
#[derive(Debug, Clone)]
pub struct Unmixer<'a> {
    cube: &'a HyperCube,
    reg: Regularizer,
    factors: FactorPair,
}

impl<'a> Unmixer<'a> {
    pub fn new(cube: &'a HyperCube, factors: FactorPair, reg: Regularizer) -> Result<Self> {
        reg.check_pixels(cube.pixels())?;
        // shape check
        objective(cube, &factors, &reg)?;
        Ok(Self { cube, reg, factors })
    }

    /// One full iteration.
    pub fn step(&mut self) -> Result<()> {
        self.factors.abundances = update_abundances(self.cube, &self.factors, &self.reg)?;
        self.factors.endmembers = update_endmembers(self.cube, &self.factors)?;
        self.factors = rescale_factors(&self.factors)?;
        Ok(())
    }

    pub fn objective(&self) -> Result<f64> {
        objective(self.cube, &self.factors, &self.reg)
    }

    pub fn factors(&self) -> &FactorPair {
        &self.factors
    }

    pub fn into_factors(self) -> FactorPair {
        self.factors
    }
}

/// Initializes, normalizes the starting point, then iterates until the
/// relative objective decrement drops below `config.rel_tol` or
/// `config.max_iters` iterations have run.
pub fn run(cube: &HyperCube, k: usize, config: &SolverConfig) -> Result<(FactorPair, RunTrace)> {
    config.validate()?;
    let reg = Regularizer::new(config.regularizer.clone(), config.lambda, config.xi)?;
    let start = initialize_factors(cube, k, config.seed, config.init)?;
    run_from(cube, start, reg, config.max_iters, config.rel_tol)
}

/// [`run`] from caller-supplied starting factors.
pub fn run_from(
    cube: &HyperCube,
    start: FactorPair,
    reg: Regularizer,
    max_iters: usize,
    rel_tol: f64,
) -> Result<(FactorPair, RunTrace)> {
    let mut solver = Unmixer::new(cube, rescale_factors(&start)?, reg)?;
    let mut objectives = Vec::with_capacity(max_iters + 1);
    let mut decrements = Vec::with_capacity(max_iters);
    let mut prev = solver.objective()?;
    objectives.push(prev);
    let mut stop_reason = StopReason::MaxIters;
    for _ in 0..max_iters {
        solver.step()?;
        let current = solver.objective()?;
        let dec = if prev > 0.0 { (prev - current) / prev } else { 0.0 };
        objectives.push(current);
        decrements.push(dec);
        prev = current;
        if dec < rel_tol {
            stop_reason = StopReason::RelTol;
            break;
        }
    }
    let trace = RunTrace {
        iterations_run: decrements.len(),
        objective_per_iter: objectives,
        relative_decrements: decrements,
        stop_reason,
    };
    log::debug!(
        "unmix: {} iterations, final objective {:e}, {:?}",
        trace.iterations_run,
        prev,
        trace.stop_reason
    );
    Ok((solver.into_factors(), trace))
}
