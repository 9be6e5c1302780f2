use alloc::format;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Endmember matrix `M` (`L x K`, spectra as columns) and abundance matrix
/// `A` (`K x N`, per-pixel composition as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub endmembers: Matrix,
    pub abundances: Matrix,
}

impl FactorPair {
    pub fn new(endmembers: Matrix, abundances: Matrix) -> Result<Self> {
        let pair = Self {
            endmembers,
            abundances,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Checks shape agreement and nonnegativity. A rank above `min(L, N)` is
    /// logged, not rejected.
    pub fn validate(&self) -> Result<()> {
        if self.endmembers.cols() != self.abundances.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{} endmembers but {} abundance rows",
                self.endmembers.cols(),
                self.abundances.rows()
            )));
        }
        self.endmembers.check_nonnegative()?;
        self.abundances.check_nonnegative()?;
        let (l, n) = (self.channels(), self.pixels());
        if self.k() > l.min(n) {
            log::warn!("rank {} exceeds min(L, N) = {}", self.k(), l.min(n));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.endmembers.cols()
    }

    pub fn channels(&self) -> usize {
        self.endmembers.rows()
    }

    pub fn pixels(&self) -> usize {
        self.abundances.cols()
    }

    /// `M * A`
    pub fn reconstruct(&self) -> Matrix {
        self.endmembers
            .matmul(&self.abundances)
            .expect("FactorPair shapes are validated on construction")
    }

    /// Abundances with every column scaled to sum to one; all-zero columns
    /// are left untouched. Used for rendering and comparison against
    /// sum-to-one ground truth, never inside the solver.
    pub fn normalized_abundances(&self) -> Matrix {
        let mut a = self.abundances.clone();
        for n in 0..a.cols() {
            let col = a.col_mut(n);
            let s: f64 = col.iter().sum();
            if s > 0.0 {
                col.iter_mut().for_each(|v| *v /= s);
            }
        }
        a
    }
}
