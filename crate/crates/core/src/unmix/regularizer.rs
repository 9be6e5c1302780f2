use alloc::format;

use crate::config::RegularizerKind;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A sparsity penalty on the abundances together with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularizer {
    kind: RegularizerKind,
    lambda: f64,
    xi: f64,
}

impl Regularizer {
    pub fn new(kind: RegularizerKind, lambda: f64, xi: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
            });
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidParameter { name: "xi", value: xi });
        }
        Ok(Self { kind, lambda, xi })
    }

    pub fn none() -> Self {
        Self {
            kind: RegularizerKind::None,
            lambda: 0.0,
            xi: 0.0,
        }
    }

    pub fn kind(&self) -> &RegularizerKind {
        &self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub(crate) fn check_pixels(&self, n: usize) -> Result<()> {
        if let RegularizerKind::DataGuided(map) = &self.kind {
            if map.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "guidance map of length {} for {n} pixels",
                    map.len()
                )));
            }
        }
        Ok(())
    }

    fn active(&self) -> bool {
        self.lambda != 0.0 && self.kind != RegularizerKind::None
    }

    /// Penalty value `λ Σ ...` over the whole abundance matrix.
    pub fn value(&self, abundances: &Matrix) -> f64 {
        if !self.active() {
            return 0.0;
        }
        let xi = self.xi;
        let sum: f64 = match &self.kind {
            RegularizerKind::None => 0.0,
            RegularizerKind::L1 => abundances.as_slice().iter().map(|a| a.abs()).sum(),
            RegularizerKind::LHalf => abundances
                .as_slice()
                .iter()
                .map(|a| libm::sqrt(a + xi))
                .sum(),
            RegularizerKind::DataGuided(map) => (0..abundances.cols())
                .map(|n| {
                    let p = 1.0 - map.scaled()[n];
                    abundances.col(n).iter().map(|a| libm::pow(a + xi, p)).sum::<f64>()
                })
                .sum(),
        };
        self.lambda * sum
    }

    /// Adds the penalty gradient term of the abundance update to `denom`
    /// (`K x N`): `λ` for ℓ1, `(λ/2)(A + ξ)^(-½)` for ℓ1/2 and
    /// `λ(1 - h_n)(A + ξ)^(-h_n)` for the data-guided penalty.
    pub(crate) fn add_gradient(&self, abundances: &Matrix, denom: &mut Matrix) {
        if !self.active() {
            return;
        }
        let (lambda, xi) = (self.lambda, self.xi);
        match &self.kind {
            RegularizerKind::None => {}
            RegularizerKind::L1 => denom.as_mut_slice().iter_mut().for_each(|d| *d += lambda),
            RegularizerKind::LHalf => {
                for (d, a) in denom.as_mut_slice().iter_mut().zip(abundances.as_slice()) {
                    *d += 0.5 * lambda * libm::pow(a + xi, -0.5);
                }
            }
            RegularizerKind::DataGuided(map) => {
                for n in 0..abundances.cols() {
                    let h = map.scaled()[n];
                    let w = lambda * (1.0 - h);
                    for (d, a) in denom.col_mut(n).iter_mut().zip(abundances.col(n)) {
                        *d += w * libm::pow(a + xi, -h);
                    }
                }
            }
        }
    }
}
