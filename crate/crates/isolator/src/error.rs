use thiserror::Error;

/// Errors produced by the simulation layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A circuit or pump parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Flux bias puts the SQUID cosine within numerical zero.
    #[error("flux bias at inductance divergence (|cos| = {cos_abs:.3e})")]
    FluxAtDivergence { cos_abs: f64 },

    /// Exact dispersion requested at or above the plasma frequency.
    #[error("above plasma cutoff: omega = {omega:.6e} rad/s >= omega_j = {omega_j:.6e} rad/s")]
    AbovePlasmaCutoff { omega: f64, omega_j: f64 },

    /// A position fell outside the device.
    #[error("position {x} outside device range [0, {length}]")]
    PositionOutOfRange { x: f64, length: f64 },

    /// The adaptive integrator could not proceed.
    #[error("integration failure at x = {x:.3}: {reason} (step = {step:.3e}, steps taken = {steps})")]
    IntegrationFailure {
        reason: String,
        x: f64,
        step: f64,
        steps: usize,
    },

    /// Boundary partition of the transfer matrix is numerically singular.
    #[error("ill-conditioned scattering solve (condition number {cond:.3e})")]
    IllConditionedScattering { cond: f64 },

    /// Oscillatory quadrature failed its step-halving self check.
    #[error("quadrature non-convergence: step halving changed the result by {delta_rel:.3e} (> {limit:.3e})")]
    QuadratureNonConvergence { delta_rel: f64, limit: f64 },

    /// A trajectory sample carried a zero-norm state.
    #[error("zero-norm state in trajectory at x = {x}")]
    ZeroNormState { x: f64 },

    /// A sweep aborted; the offending frequency is identified.
    #[error("sweep failed at {f_signal_hz:.6e} Hz: {source}")]
    SweepFailure {
        f_signal_hz: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
