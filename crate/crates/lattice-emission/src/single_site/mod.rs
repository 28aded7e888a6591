//! Single-emitter dynamics: the trapped-state amplitude A(t) under emission
//! into a structured reservoir, solved four independent ways (direct
//! integro-differential marching, closed-form strong-confinement solution,
//! Laplace-domain analysis, steady-state pole sums) that cross-validate each
//! other.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use num_complex::Complex64;

mod analytic;
mod laplace;
mod steady;
mod volterra;

pub use analytic::solve_amplitude_analytic;
pub use laplace::{
    laplace_kernel, laplace_kernel_derivative, laplace_kernel_strong,
};
pub use steady::{steady_population_finite_trap, SteadyStateResult};
pub use volterra::{solve_amplitude_direct, DirectOptions};

/// Memory kernel of the reservoir felt by one site.
///
/// `G(τ) = Ω²·exp(iΔτ)/(1 + iω₀τ/2)^{d/2}` — an algebraically decaying,
/// oscillating correlation function whose power depends on the reservoir
/// dimensionality d.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationKernel {
    /// Reservoir dimensionality d ∈ {1, 2, 3}.
    pub dimension: u8,
    /// Trap frequency ω₀.
    pub omega0: f64,
    /// Coupling strength Ω (Ω = 0 gives the trivial zero kernel).
    pub rabi: f64,
    /// Detuning Δ.
    pub detuning: f64,
}

impl CorrelationKernel {
    pub fn new(dimension: u8, omega0: f64, rabi: f64, detuning: f64) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::InvalidParams(format!(
                "kernel dimensionality must be 1, 2 or 3, got {dimension}"
            )));
        }
        if omega0.is_nan() || omega0 <= 0.0 || !omega0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kernel trap frequency must be positive, got {omega0}"
            )));
        }
        if rabi.is_nan() || rabi < 0.0 || !rabi.is_finite() || !detuning.is_finite() {
            return Err(Error::InvalidParams(
                "kernel coupling must be non-negative and finite".into(),
            ));
        }
        Ok(Self {
            dimension,
            omega0,
            rabi,
            detuning,
        })
    }

    pub fn from_params(p: &PhysicalParams) -> Result<Self> {
        p.validate()?;
        Self::new(p.reservoir_dim, p.trap, p.rabi, p.detuning)
    }

    /// Evaluate G(τ) for τ ≥ 0 on the principal branch of the fractional
    /// power.
    pub fn eval(&self, tau: f64) -> Complex64 {
        assert!(tau >= 0.0, "kernel defined for non-negative delay");
        let osc = Complex64::new(0.0, self.detuning * tau).exp();
        let base = Complex64::new(1.0, 0.5 * self.omega0 * tau);
        self.rabi * self.rabi * osc * base.powf(-0.5 * self.dimension as f64)
    }
}

/// Free-function form of [`CorrelationKernel::eval`].
pub fn kernel_eval(k: &CorrelationKernel, tau: f64) -> Complex64 {
    k.eval(tau)
}

/// Which solver produced an [`AmplitudeTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Closed-form solution valid in the strong-confinement limit.
    AnalyticStrongConfinement,
    /// Direct marching of the memory integro-differential equation.
    DirectIntegrodifferential,
}

/// A sampled trajectory of the trapped-state amplitude.
#[derive(Debug, Clone)]
pub struct AmplitudeTrace {
    /// Sample times t ≥ 0.
    pub times: Vec<f64>,
    /// Complex amplitude A(t) at each sample.
    pub amplitude: Vec<Complex64>,
    /// Population |A(t)|².
    pub population: Vec<f64>,
    /// Producing solver.
    pub method: SolverMethod,
    /// Cumulative emitted norm (direct solver only); together with the
    /// population it should sum to 1.
    pub emitted: Option<Vec<f64>>,
}

impl AmplitudeTrace {
    pub fn final_population(&self) -> f64 {
        *self.population.last().expect("non-empty trace")
    }
}
