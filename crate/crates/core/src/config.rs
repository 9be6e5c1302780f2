use crate::dgmap::{DgMap, DgMapParams, SimilarityMeasure};
use crate::error::{Error, Result};
use crate::unmix::InitScheme;

/// Which sparsity penalty the abundance update carries.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum RegularizerKind {
    /// Plain NMF.
    #[default]
    None,
    /// `Σ |A_kn|`
    L1,
    /// `Σ (A_kn + ξ)^½`
    LHalf,
    /// `Σ_n Σ_k (A_kn + ξ)^(1 - h_n)` with the per-pixel guidance map `h`.
    DataGuided(DgMap),
}

/// Every tunable of the guidance-map pipeline and the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Sparsity weight λ; typical values lie in `[0.005, 0.9]`.
    pub lambda: f64,
    /// Offset ξ that keeps the ℓp penalty Lipschitz at zero.
    pub xi: f64,
    /// Heat-kernel bandwidth σ; typical values lie in `[0.005, 0.08]`.
    pub sigma: f64,
    /// Refinement strength α; smaller is stronger, typically `[1e-6, 1e-4]`.
    pub alpha: f64,
    /// Window regularizer ε of the matting Laplacian, typically `[1e-7, 1e-4]`.
    pub epsilon: f64,
    /// Guard β of the `[0, 1)` rescale.
    pub beta: f64,
    /// Odd side length of the matting window.
    pub window: usize,
    pub measure: SimilarityMeasure,
    pub cg_tol: f64,
    /// `None` means `10 * N`.
    pub cg_max_iters: Option<usize>,
    pub max_iters: usize,
    /// Stop once the relative objective decrement falls below this.
    pub rel_tol: f64,
    pub seed: u64,
    pub init: InitScheme,
    pub regularizer: RegularizerKind,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            xi: 1e-8,
            sigma: 0.02,
            alpha: 1e-5,
            epsilon: 1e-5,
            beta: 1e-8,
            window: 3,
            measure: SimilarityMeasure::Heat,
            cg_tol: 1e-8,
            cg_max_iters: None,
            max_iters: 1000,
            rel_tol: 1e-6,
            seed: 0,
            init: InitScheme::Random,
            regularizer: RegularizerKind::None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("xi", self.xi),
            ("sigma", self.sigma),
            ("alpha", self.alpha),
            ("epsilon", self.epsilon),
            ("beta", self.beta),
            ("cg_tol", self.cg_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: self.lambda,
            });
        }
        if self.rel_tol.is_nan() {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
            });
        }
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "window",
                value: self.window as f64,
            });
        }
        Ok(())
    }

    /// The guidance-map settings carried by this configuration.
    pub fn dgmap_params(&self) -> DgMapParams {
        DgMapParams {
            sigma: self.sigma,
            alpha: self.alpha,
            epsilon: self.epsilon,
            beta: self.beta,
            window: self.window,
            measure: self.measure,
            cg_tol: self.cg_tol,
            cg_max_iters: self.cg_max_iters,
            fine_tune: true,
        }
    }
}
