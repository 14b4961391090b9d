use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid bigrade selector: {0}")]
    InvalidSelector(String),

    #[error("exp_even requires a nilpotent even element, found a term of degree {degree}")]
    NotEvenNilpotent { degree: usize },

    #[error("invalid isometry normal form: {0}")]
    InvalidNormalForm(String),

    #[error("degenerate rotation angle: det(1 - phi^N) vanishes")]
    DegenerateAngle,

    #[error("curvature symmetry violated at ({i},{j},{k},{l})")]
    SymmetryViolation { i: usize, j: usize, k: usize, l: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("dimension {0} must be even")]
    OddDimension(usize),

    #[error("time parameter must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("malformed bundle data: {0}")]
    MalformedBundleData(String),

    #[error("truncation order {given} is below the exactness threshold {required}")]
    TruncationTooLow { given: usize, required: usize },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("heat trace tail bound {bound:e} exceeds tolerance {tolerance:e}")]
    TailTooLarge { bound: f64, tolerance: f64 },

    #[error("invalid cutoff {0}")]
    InvalidCutoff(usize),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("complex is not acyclic in degree {degree}")]
    NotAcyclic { degree: usize },

    #[error("chain complex is malformed: {0}")]
    MalformedComplex(String),

    #[error("finite-difference step {0:e} is too small")]
    StepUnderflow(f64),

    #[error("scenario parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
