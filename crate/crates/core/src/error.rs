use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("amplitude norm {norm} exceeds 1 beyond tolerance")]
    NormExceeded { norm: f64 },

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("operation requires identical detunings (delta1 = {delta1}, delta2 = {delta2})")]
    NotSimilar { delta1: f64, delta2: f64 },

    #[error("time step {dt} exceeds the resolution bound {max}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("solution under-resolved at tau = {tau}: |C1|^2 + |C2|^2 = {norm}")]
    UnderResolved { tau: f64, norm: f64 },

    #[error("total norm drifted by {drift:e} at tau = {tau}")]
    NormDrift { tau: f64, drift: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),

    #[error("verification failed at {point}: |dE/M| = {diff:e} > {tol:e}")]
    VerifyFailed { point: String, diff: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NormExceeded { .. }
                | Error::UnderResolved { .. }
                | Error::NormDrift { .. }
                | Error::VerifyFailed { .. }
        )
    }
}
