//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Jacobi eigensolver stalled after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    EigenStalled { sweeps: usize, off: f64 },

    #[error("composite dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    #[error("bound state {index} leaks into the grid boundary (relative amplitude {amplitude:.3e})")]
    BoundaryLeak { index: usize, amplitude: f64 },

    #[error("requested {requested} bound states but the grid supports at most {max}")]
    GridCapacity { requested: usize, max: usize },

    #[error("quasi-degenerate doublet: gap {gap:.3e} below {threshold:.3e}, two-level reduction is ill-defined")]
    DegenerateDoublet { gap: f64, threshold: f64 },

    #[error("tabulated profile does not cover the integration interval [{x_lo}, {x_hi}]")]
    ProfileCoverage { x_lo: f64, x_hi: f64 },

    #[error("truncation ladder hit the dimension cap {cap} before reaching tolerance (residual {residual:.3e})")]
    TruncationCap { cap: usize, residual: f64 },

    #[error("gauge-equivalent models disagree at eta = {eta}: deviation {deviation:.3e} exceeds {bound:.3e}")]
    GaugeDeviationExceeded { eta: f64, deviation: f64, bound: f64 },
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            why: why.into(),
        }
    }

    /// Short machine-readable code, used in sweep status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not_hermitian",
            Error::EigenStalled { .. } => "eigen_stalled",
            Error::DimensionOverflow { .. } => "dim_overflow",
            Error::InvalidInput { .. } => "invalid_input",
            Error::BoundaryLeak { .. } => "boundary_leak",
            Error::GridCapacity { .. } => "grid_capacity",
            Error::DegenerateDoublet { .. } => "degenerate_doublet",
            Error::ProfileCoverage { .. } => "profile_coverage",
            Error::TruncationCap { .. } => "truncation_cap",
            Error::GaugeDeviationExceeded { .. } => "gauge_deviation",
        }
    }
}
