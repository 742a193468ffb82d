use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("state norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |H - H^†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("spectral decomposition failed: reconstruction error {error:.3e}")]
    Eigendecomposition { error: f64 },

    #[error("invalid time grid: {0}")]
    InvalidTimes(String),

    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),

    #[error(
        "integrator did not converge after {halvings} halvings: F3 = {coarse} (dt = {coarse_dt}) vs {fine} (dt = {fine_dt})"
    )]
    Convergence {
        halvings: u32,
        coarse: f64,
        fine: f64,
        coarse_dt: f64,
        fine_dt: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("config parse error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
