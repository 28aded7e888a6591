//! Physical input parameters and the derived dynamical scales every solver
//! consumes. All quantities are dimensionless: frequencies in units of a
//! reference trap frequency, lengths in units of the lattice period, with
//! ħ = m = 1.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative tolerance for the two singular boundaries of the derived scales
/// (vanishing shifted detuning, coalescing quadratic roots).
const BOUNDARY_TOL: f64 = 1e-12;

/// Default threshold on |Δ̃|/(πα²) above which the memoryless (Markovian)
/// approximation is considered valid.
pub const DEFAULT_MARKOV_THRESHOLD: f64 = 10.0;

/// Default warning threshold for the lowest-band validity ratios Ω/ω₀ and
/// |Δ|/ω₀.
pub const DEFAULT_FIRST_BAND_THRESHOLD: f64 = 0.1;

/// Input parameters of a lattice-emission problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Two-photon coupling strength Ω between the trapped and free states.
    pub rabi: f64,
    /// On-site trap frequency ω₀.
    pub trap: f64,
    /// Laser detuning Δ from the free-state threshold.
    pub detuning: f64,
    /// Lattice period d₀.
    pub lattice_spacing: f64,
    /// Ground-state wavepacket width X₀; `None` selects the harmonic-oscillator
    /// value 1/√ω₀.
    pub ground_width: Option<f64>,
    /// Transfer-laser wavevector k_L (Cartesian components).
    pub laser_wavevector: [f64; 3],
    /// Linear lattice size M (M³ sites in 3D).
    pub sites_per_axis: usize,
    /// Reservoir dimensionality d ∈ {1, 2, 3}.
    pub reservoir_dim: u8,
}

impl PhysicalParams {
    /// A 3D single-site parameter set with k_L = 0 and default widths; the
    /// usual starting point for tests and sweeps.
    pub fn new_3d(rabi: f64, trap: f64, detuning: f64) -> Self {
        Self {
            rabi,
            trap,
            detuning,
            lattice_spacing: 1.0,
            ground_width: None,
            laser_wavevector: [0.0; 3],
            sites_per_axis: 1,
            reservoir_dim: 3,
        }
    }

    /// Resolved wavepacket width: supplied value or 1/√ω₀.
    pub fn x0(&self) -> f64 {
        self.ground_width.unwrap_or(1.0 / self.trap.sqrt())
    }

    /// Magnitude of the laser wavevector.
    pub fn k_l_norm(&self) -> f64 {
        let [x, y, z] = self.laser_wavevector;
        (x * x + y * y + z * z).sqrt()
    }

    /// Total number of lattice sites for the configured dimensionality
    /// (M^d; the collective machinery uses d = 3).
    pub fn site_count(&self) -> usize {
        self.sites_per_axis.pow(self.reservoir_dim as u32)
    }

    /// Check the positivity and range invariants.
    pub fn validate(&self) -> Result<()> {
        let all_finite = self.rabi.is_finite()
            && self.trap.is_finite()
            && self.detuning.is_finite()
            && self.lattice_spacing.is_finite()
            && self.ground_width.map_or(true, |w| w.is_finite())
            && self.laser_wavevector.iter().all(|c| c.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.rabi <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "coupling strength must be positive, got {}",
                self.rabi
            )));
        }
        if self.trap <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "trap frequency must be positive, got {}",
                self.trap
            )));
        }
        if self.lattice_spacing <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lattice spacing must be positive, got {}",
                self.lattice_spacing
            )));
        }
        if let Some(w) = self.ground_width {
            if w <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "ground width must be positive, got {w}"
                )));
            }
        }
        if self.sites_per_axis < 1 {
            return Err(Error::InvalidParams("need at least one site per axis".into()));
        }
        if !(1..=3).contains(&self.reservoir_dim) {
            return Err(Error::InvalidParams(format!(
                "reservoir dimensionality must be 1, 2 or 3, got {}",
                self.reservoir_dim
            )));
        }
        Ok(())
    }

    /// Lowest-band validity report: the model assumes the trap frequency
    /// dominates both the coupling and the detuning. Never an error; callers
    /// surface `ok = false` as a warning.
    pub fn first_band_report(&self, threshold: f64) -> FirstBandReport {
        let rabi_ratio = self.rabi / self.trap;
        let detuning_ratio = self.detuning.abs() / self.trap;
        FirstBandReport {
            rabi_ratio,
            detuning_ratio,
            threshold,
            ok: rabi_ratio <= threshold && detuning_ratio <= threshold,
        }
    }

    /// Ratio k_L·X₀; the pair-coupling closed form assumes it is small.
    /// Warn above 0.1.
    pub fn laser_width_ratio(&self) -> f64 {
        self.k_l_norm() * self.x0()
    }
}

/// Outcome of the lowest-band validity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstBandReport {
    pub rabi_ratio: f64,
    pub detuning_ratio: f64,
    pub threshold: f64,
    pub ok: bool,
}

/// Dynamical phase of the single emitter, set by the sign of the shifted
/// detuning relative to the memory scale πα².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Δ̃ < 0: part of the population never escapes.
    Bound,
    /// 0 < Δ̃ < πα²: decay without an exponential pole, memory dominated.
    PureNonMarkovian,
    /// Δ̃ > πα²: exponential decay plus algebraic corrections.
    Radiative,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Bound => "bound",
            Regime::PureNonMarkovian => "pure_non_markovian",
            Regime::Radiative => "radiative",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scales derived from [`PhysicalParams`] that govern the strong-confinement
/// dynamics: the shifted detuning, the memory strength, the emission rate, the
/// emitted wavenumber, and the roots of the pole quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedScales {
    /// Shifted detuning Δ̃ = Δ − 4Ω²/ω₀.
    pub delta_tilde: f64,
    /// Memory strength α² = 8Ω⁴/ω₀³.
    pub alpha_sq: f64,
    /// Exponential emission rate scale Γ₀ = 4Ω²√(2π|Δ̃|/ω₀³).
    pub gamma0: f64,
    /// Emitted-atom wavenumber k₀ = √(2|Δ̃|/ω₀)/X₀.
    pub k0: f64,
    /// Reservoir-mediated interaction range ξ = 1/(d₀k₀).
    pub xi: f64,
    /// Branch marker ν: 1 below threshold (Δ̃ < 0), −i above.
    pub nu: Complex64,
    /// Upper root of x² + 2√π α x + Δ̃ = 0.
    pub b_plus: Complex64,
    /// Lower root of x² + 2√π α x + Δ̃ = 0.
    pub b_minus: Complex64,
    /// Long-time pole prefactor c, zero in the pure non-Markovian window.
    pub c_residue: Complex64,
    /// Region classification.
    pub regime: Regime,
    /// True exactly on the coalescing-root boundary Δ̃ = πα², where
    /// `c_residue` is singular (stored as NaN).
    pub degenerate: bool,
}

/// Verdict of the memorylessness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovReport {
    /// |Δ̃|/(πα²).
    pub ratio: f64,
    /// ratio > threshold.
    pub markovian: bool,
}

/// Compute every derived scale from validated inputs.
///
/// Errors with [`Error::CriticalDetuning`] when Δ̃ vanishes within relative
/// tolerance 1e-12 (all derived scales are singular there) and
/// [`Error::InvalidParams`] when a positivity invariant fails.
pub fn derive_scales(p: &PhysicalParams) -> Result<DerivedScales> {
    p.validate()?;
    let shift = 4.0 * p.rabi * p.rabi / p.trap;
    let delta_tilde = p.detuning - shift;
    let scale = p.detuning.abs().max(shift);
    if delta_tilde.abs() <= BOUNDARY_TOL * scale {
        return Err(Error::CriticalDetuning);
    }

    let alpha_sq = 8.0 * p.rabi.powi(4) / p.trap.powi(3);
    let alpha = alpha_sq.sqrt();
    let gamma0 = 4.0 * p.rabi * p.rabi * (2.0 * PI * delta_tilde.abs() / p.trap.powi(3)).sqrt();
    let k0 = (2.0 * delta_tilde.abs() / p.trap).sqrt() / p.x0();
    let xi = 1.0 / (p.lattice_spacing * k0);

    let nu = if delta_tilde < 0.0 {
        Complex64::ONE
    } else {
        Complex64::new(0.0, -1.0)
    };

    let pa2 = PI * alpha_sq;
    let disc = crate::special::sqrt_principal(1.0 - delta_tilde / pa2);
    let spa = PI.sqrt() * alpha;
    let b_plus = spa * (disc - 1.0);
    let b_minus = spa * (-disc - 1.0);

    let degenerate = (delta_tilde - pa2).abs() <= BOUNDARY_TOL * delta_tilde.abs().max(pa2);
    let regime = if delta_tilde < 0.0 {
        Regime::Bound
    } else if delta_tilde < pa2 && !degenerate {
        Regime::PureNonMarkovian
    } else {
        Regime::Radiative
    };

    let c_residue = if degenerate {
        Complex64::new(f64::NAN, f64::NAN)
    } else {
        match regime {
            Regime::Bound => 2.0 * b_plus / (b_plus - b_minus),
            Regime::PureNonMarkovian => Complex64::ZERO,
            Regime::Radiative => 2.0 * b_minus / (b_minus - b_plus),
        }
    };

    Ok(DerivedScales {
        delta_tilde,
        alpha_sq,
        gamma0,
        k0,
        xi,
        nu,
        b_plus,
        b_minus,
        c_residue,
        regime,
        degenerate,
    })
}

/// Memorylessness verdict at an explicit threshold.
pub fn classify_markovianity(s: &DerivedScales, threshold: f64) -> MarkovReport {
    let ratio = s.delta_tilde.abs() / (PI * s.alpha_sq);
    MarkovReport {
        ratio,
        markovian: ratio > threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_point_reproduces_hand_computation() {
        let p = PhysicalParams::new_3d(0.1, 1.0, 0.05);
        let s = derive_scales(&p).unwrap();
        assert_relative_eq!(s.delta_tilde, 0.01, max_relative = 1e-14);
        assert_relative_eq!(s.alpha_sq, 8.0e-4, max_relative = 1e-14);
        assert_relative_eq!(s.gamma0, 1.002_651_309_852_400_2e-2, max_relative = 1e-13);
        assert_eq!(s.regime, Regime::Radiative); // Δ̃ = 0.01 > πα² ≈ 2.51e-3
        assert_eq!(s.nu, Complex64::new(0.0, -1.0));
        let report = classify_markovianity(&s, DEFAULT_MARKOV_THRESHOLD);
        assert_relative_eq!(report.ratio, 0.01 / (PI * 8.0e-4), max_relative = 1e-13);
        assert!((report.ratio - 3.978_873_577_297_383_6).abs() < 1e-12);
        assert!(!report.markovian);
    }

    #[test]
    fn exactly_critical_detuning_is_rejected() {
        let p = PhysicalParams::new_3d(0.1, 1.0, 0.04);
        assert!(matches!(derive_scales(&p), Err(Error::CriticalDetuning)));
    }

    #[test]
    fn degenerate_boundary_flagged_radiative() {
        // Choose Δ so that Δ̃ = πα² exactly (to rounding).
        let rabi: f64 = 0.1;
        let trap: f64 = 1.0;
        let pa2 = PI * 8.0 * rabi.powi(4) / trap.powi(3);
        let p = PhysicalParams::new_3d(rabi, trap, 4.0 * rabi * rabi / trap + pa2);
        let s = derive_scales(&p).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.regime, Regime::Radiative);
        // The boundary is detected at relative tolerance 1e-12 in Δ̃, so the
        // coalescing roots can still differ by ~2·√(1e-12)·√π·α.
        let spa = PI.sqrt() * (8.0 * rabi.powi(4) / trap.powi(3)).sqrt();
        assert_relative_eq!(s.b_plus.re, -spa, max_relative = 3e-6);
        assert!((s.b_plus - s.b_minus).norm() < 3e-6 * spa);
        assert!(s.c_residue.re.is_nan());
    }

    #[test]
    fn three_regimes_classified() {
        // Ω = 0.1, ω₀ = 1: shift = 0.04, πα² ≈ 2.513e-3.
        let bound = derive_scales(&PhysicalParams::new_3d(0.1, 1.0, 0.03)).unwrap();
        assert_eq!(bound.regime, Regime::Bound);
        assert_eq!(bound.nu, Complex64::ONE);
        // Bound-side roots are real: the quadratic discriminant exceeds 1.
        assert!(bound.b_plus.im.abs() < 1e-15);
        assert!((bound.b_plus * bound.b_plus).im.abs() < 1e-15);

        let pnm = derive_scales(&PhysicalParams::new_3d(0.1, 1.0, 0.041)).unwrap();
        assert_eq!(pnm.regime, Regime::PureNonMarkovian);
        assert_eq!(pnm.c_residue, Complex64::ZERO);

        let rad = derive_scales(&PhysicalParams::new_3d(0.1, 1.0, 0.05)).unwrap();
        assert_eq!(rad.regime, Regime::Radiative);
        assert!(rad.c_residue.norm() > 0.0);
    }

    #[test]
    fn markov_report_thresholds() {
        // Construct Δ̃ = 100·πα² and πα²/2 directly.
        let rabi: f64 = 0.05;
        let pa2 = PI * 8.0 * rabi.powi(4);
        let shift = 4.0 * rabi * rabi;
        let s = derive_scales(&PhysicalParams::new_3d(rabi, 1.0, shift + 100.0 * pa2)).unwrap();
        let r = classify_markovianity(&s, DEFAULT_MARKOV_THRESHOLD);
        assert_relative_eq!(r.ratio, 100.0, max_relative = 1e-10);
        assert!(r.markovian);

        let s2 = derive_scales(&PhysicalParams::new_3d(rabi, 1.0, shift + 0.5 * pa2)).unwrap();
        let r2 = classify_markovianity(&s2, DEFAULT_MARKOV_THRESHOLD);
        assert!(!r2.markovian);
        assert_relative_eq!(r2.ratio, 0.5, max_relative = 1e-10);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let mut p = PhysicalParams::new_3d(0.1, 1.0, 0.0);
        p.rabi = -1.0;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::new_3d(0.1, 1.0, 0.0);
        p.reservoir_dim = 4;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::new_3d(0.1, 1.0, 0.0);
        p.ground_width = Some(0.0);
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::new_3d(0.1, 1.0, 0.0);
        p.detuning = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn first_band_warning_fires_at_strong_coupling() {
        let p = PhysicalParams::new_3d(1.0, 1.0, 0.0);
        let report = p.first_band_report(DEFAULT_FIRST_BAND_THRESHOLD);
        assert!(!report.ok);
        let good = PhysicalParams::new_3d(0.01, 1.0, 0.001);
        assert!(good.first_band_report(DEFAULT_FIRST_BAND_THRESHOLD).ok);
    }

    #[test]
    fn default_width_follows_trap_frequency() {
        let p = PhysicalParams::new_3d(0.1, 4.0, 0.0);
        assert_relative_eq!(p.x0(), 0.5, max_relative = 1e-15);
        let mut q = p.clone();
        q.ground_width = Some(0.05);
        assert_relative_eq!(q.x0(), 0.05, max_relative = 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn quadratic_root_identity(
            rabi in 1e-3f64..0.5,
            trap in 0.1f64..10.0,
            detuning in -1.0f64..1.0,
        ) {
            let p = PhysicalParams::new_3d(rabi, trap, detuning);
            let s = match derive_scales(&p) {
                Ok(s) => s,
                Err(_) => return Ok(()), // critical boundary: nothing to check
            };
            let spa = Complex64::new(PI.sqrt() * s.alpha_sq.sqrt(), 0.0);
            let dt = Complex64::new(s.delta_tilde, 0.0);
            for b in [s.b_plus, s.b_minus] {
                let resid = b * b + 2.0 * spa * b + dt;
                let scale = (b * b).norm().max(s.delta_tilde.abs()).max(1e-300);
                proptest::prop_assert!(
                    resid.norm() <= 1e-12 * scale,
                    "residual {} at scale {}", resid.norm(), scale
                );
            }
            proptest::prop_assert!(s.xi > 0.0);
            proptest::prop_assert!(s.gamma0 > 0.0);
            proptest::prop_assert!(s.k0 > 0.0);
        }

        #[test]
        fn derivation_is_deterministic(
            rabi in 1e-3f64..0.5,
            detuning in -1.0f64..1.0,
        ) {
            let p = PhysicalParams::new_3d(rabi, 1.0, detuning);
            if let (Ok(a), Ok(b)) = (derive_scales(&p), derive_scales(&p)) {
                proptest::prop_assert!(a.delta_tilde.to_bits() == b.delta_tilde.to_bits());
                proptest::prop_assert!(a.gamma0.to_bits() == b.gamma0.to_bits());
                proptest::prop_assert!(a.b_plus == b.b_plus);
            }
        }

        #[test]
        fn frequency_rescaling_is_consistent(
            rabi in 1e-2f64..0.3,
            detuning in -0.5f64..0.5,
            lambda in 0.5f64..2.0,
        ) {
            // Scaling (Ω, ω₀, Δ) → (√λ·Ω√(ω₀λ)/... ) in general mixes scales;
            // the clean covariance is: scaling Δ and Ω² together at fixed ω₀
            // scales Δ̃ linearly.
            let p1 = PhysicalParams::new_3d(rabi, 1.0, detuning);
            let p2 = PhysicalParams::new_3d(rabi * lambda.sqrt(), 1.0, detuning * lambda);
            if let (Ok(s1), Ok(s2)) = (derive_scales(&p1), derive_scales(&p2)) {
                proptest::prop_assert!(
                    (s2.delta_tilde - lambda * s1.delta_tilde).abs()
                        <= 1e-12 * (lambda * s1.delta_tilde).abs().max(1e-300)
                );
            }
        }
    }
}
