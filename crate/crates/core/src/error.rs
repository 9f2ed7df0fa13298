use thiserror::Error;

/// Errors raised by the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid subsystem shape: {0}")]
    InvalidShape(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not Hermitian (max deviation {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("density operator trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("density operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("channel is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("charge observable has non-integer eigenvalue {eigenvalue}")]
    NonIntegerCharge { eigenvalue: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid spin label 2j={two_j} for n={n}")]
    InvalidSpin { n: usize, two_j: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("group representation is not closed (residual {residual:e})")]
    NotClosed { residual: f64 },

    #[error("input is not block diagonal across sectors (residual {residual:e})")]
    NotBlockDiagonal { residual: f64 },

    #[error(
        "sector (2j_a={two_ja}, 2j_b={two_jb}) with weight {weight} is mixed \
         (second eigenvalue {second_eigenvalue:e}); entanglement not computable sector-wise"
    )]
    MixedSector {
        two_ja: usize,
        two_jb: usize,
        weight: f64,
        second_eigenvalue: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
