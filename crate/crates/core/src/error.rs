use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("entry {index} is negative")]
    Negative { index: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("vector has zero norm")]
    ZeroNorm,
    #[error("heat-kernel bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("invalid parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("{width}x{height} image cannot hold a full {window}x{window} window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },
    #[error("conjugate gradient stopped after {iterations} iterations with relative residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("value {0} outside [0, 1)")]
    OutOfRange(f64),
    #[error("abundance row {0} sums to zero")]
    DegenerateRow(usize),
    #[error("endmember count {k} must lie in 1..={max}")]
    BadK { k: usize, max: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("abundance column {0} is all zero")]
    ZeroColumn(usize),
    #[error("sparsity needs at least two endmembers, got {0}")]
    TooFewEndmembers(usize),
    #[error("infeasible scene: {0}")]
    InfeasibleSpec(String),
}
