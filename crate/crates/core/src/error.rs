use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature for coefficient {n} did not reach {target:e} (estimate {estimate:e} at {samples} samples)")]
    Quadrature {
        n: i64,
        target: f64,
        estimate: f64,
        samples: usize,
    },

    #[error("function `{0}` is not real valued; real extent is undefined")]
    NotRealValued(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficient tail of `{name}` cannot be bounded to {target:e}")]
    TailNotSummable { name: String, target: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix dimension {0} outside supported range 1..=64")]
    DimensionOutOfRange(usize),

    #[error("input is not normal/unitary/hermitian within tolerance ({0})")]
    NotNormal(String),

    #[error("spectrum outside [0, 1]: found eigenvalue {0}")]
    SpectrumOutOfRange(f64),

    #[error("eigendecomposition residual {residual:e} exceeds {limit:e}")]
    DecompositionResidual { residual: f64, limit: f64 },

    #[error("bound violated at seed {seed}, index {index}: margin {margin:e}")]
    Violation {
        seed: u64,
        index: u64,
        margin: f64,
        report: Box<crate::lab::ViolationReport>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
