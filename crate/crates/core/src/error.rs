use alloc::string::String;

/// Errors raised by the propagator, scattering and oracle layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate eigenfrequencies: separation {separation:e} below threshold {threshold:e}")]
    Degenerate { separation: f64, threshold: f64 },

    #[error("pole collision while integrating variable {variable}")]
    PoleCollision { variable: usize },

    #[error("pole on the real axis while integrating variable {variable}")]
    RealAxisPole { variable: usize },

    #[error("integrand does not decay at infinity in variable {variable}")]
    NonDecayingIntegrand { variable: usize },

    #[error("kernel term grows inside its support: {0}")]
    GrowingTerm(String),

    #[error("nonlinear kernel is not a plain exponential sum on an ordered sector: {0}")]
    NonCanonicalKernel(String),

    #[error("window truncation {estimate:e} exceeds tolerance {tolerance:e}; enlarge the window")]
    WindowTruncation { estimate: f64, tolerance: f64 },

    #[error("wavefunction has zero norm")]
    ZeroNorm,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("oracle mode basis too small: {0}")]
    BasisTooSmall(String),

    #[error("residual atom/cavity excitation {residual:e} exceeds {limit:e}; evolve longer")]
    ResidualExcitation { residual: f64, limit: f64 },

    #[error("time integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = core::result::Result<T, Error>;
