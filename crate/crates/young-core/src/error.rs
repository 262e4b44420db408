use thiserror::Error;

/// Errors produced by state construction, parsing, and the numeric routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed state document: {0}")]
    StateFormat(String),

    #[error("occupation vector needs at least two modes, got {0}")]
    TooFewModes(usize),

    #[error("occupation vector has zero photons in total")]
    ZeroPhotons,

    #[error("occupation vector has {got} modes, expected {expected}")]
    ModeCountMismatch { expected: usize, got: usize },

    #[error("occupation vector totals {got} photons, expected {expected}")]
    PhotonTotalMismatch { expected: u32, got: u32 },

    #[error("state has no terms with nonzero amplitude")]
    EmptyState,

    #[error("state norm^2 is {norm_sq:.12e}, more than 1e-9 away from 1 (use renormalize)")]
    NotNormalized { norm_sq: f64 },

    #[error("mode indices must differ for a hopping element")]
    EqualModeIndices,

    #[error("occupation vectors are identical, not a pair")]
    IdenticalOccupations,

    #[error("phase configuration has {got} entries, state has {expected} modes")]
    PhaseLengthMismatch { expected: usize, got: usize },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeIndexOutOfRange { index: usize, modes: usize },

    #[error("fringe curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("modulus vector is not normalized: sum of squares {0:.12e}")]
    ModuliNotNormalized(f64),

    #[error("moduli must be non-negative")]
    NegativeModulus,

    #[error("Fock basis has {dim} vectors, exceeding the cap of {cap}")]
    BasisTooLarge { dim: usize, cap: usize },

    #[error("grid of {resolution}^{dims} points exceeds the search budget")]
    GridTooLarge { resolution: usize, dims: usize },

    #[error("grid resolution must be at least 16, got {0}")]
    ResolutionTooSmall(usize),

    #[error("constraint violated at input point: |g| = {0:.6e}")]
    ConstraintViolated(f64),

    #[error("function value is not finite near the requested point")]
    NonFiniteValue,

    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("field scale must be positive and finite, got {0}")]
    NonPositiveFieldScale(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
