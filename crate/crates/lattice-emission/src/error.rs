//! Error type shared by every solver in the crate.

use thiserror::Error;

/// Unified error for parameter validation and numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter violates its domain (positivity, dimension range, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The shifted detuning vanishes, so the derived scales are singular.
    #[error("critical detuning: shifted detuning is zero within tolerance; derived scales are singular there")]
    CriticalDetuning,

    /// An adaptive quadrature could not reach the requested error bound.
    #[error("quadrature failure: {context} (estimated error {error:.3e} exceeds {tolerance:.3e})")]
    QuadratureFailure {
        context: &'static str,
        error: f64,
        tolerance: f64,
    },

    /// Step-halving consistency check of the fixed-step history solver failed.
    #[error("step too large: halving h = {h:.3e} moved the final population by {change:.3e} (tolerance {tolerance:.3e})")]
    StepTooLarge { h: f64, change: f64, tolerance: f64 },

    /// A bracketing scan found a sign change that polishing could not converge.
    #[error("root search failure: {context}; scan trace: {trace}")]
    RootSearchFailure { context: &'static str, trace: String },

    /// Successive estimates of a regularized limit diverge instead of settling.
    #[error("extrapolation unstable: {context} (estimates {estimates:?})")]
    ExtrapolationUnstable {
        context: &'static str,
        estimates: Vec<f64>,
    },

    /// The dissipative part of a coupling matrix has a clearly negative eigenvalue.
    #[error("coupling matrix not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < {threshold:.3e}")]
    NotPSD {
        min_eigenvalue: f64,
        threshold: f64,
    },

    /// An operation was invoked outside the parameter regime it is defined in.
    #[error("wrong regime: {0}")]
    WrongRegime(String),

    /// The requested initial state is outside the supported combinations.
    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    /// A semiclassical population left its physical range.
    #[error("state out of range: site population {value:.6e} outside [-1, 1] at t = {time:.6e}")]
    StateOutOfRange { value: f64, time: f64 },

    /// A brute-force solver was asked for a system above its size cap.
    #[error("dimension cap exceeded: {requested} > {cap} ({context})")]
    DimensionCap {
        requested: usize,
        cap: usize,
        context: &'static str,
    },

    /// The angular grid cannot resolve the narrowest emission peak.
    #[error("grid too coarse: {nodes_across_peak} nodes across a peak of width {peak_width:.3e} (need at least {required})")]
    GridTooCoarse {
        nodes_across_peak: usize,
        peak_width: f64,
        required: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
