//! Long-time trapped population for a finite trap frequency, from the purely
//! imaginary poles of the amplitude's Laplace transform. Writing the pole
//! position as s = ix, the pole condition becomes
//!
//! f(x) = x + Δ̃ + 4Ω²·e^{2x/ω₀}·√(2πx/ω₀³)·[1 − erf(√(2x/ω₀))] = 0,
//!
//! continued to x < 0 through the principal branch (√x → i√|x|,
//! erf(iy) = i·erfi(y)), where f acquires a strictly positive imaginary part
//! — so candidate crossings of Re f there are rejected unless the imaginary
//! part vanishes to tolerance. Each accepted root contributes a residue
//! R = 1/(1 + G̃′(i(x+Δ))) and the steady population is |Σ R|².

use super::laplace::laplace_kernel_derivative;
use crate::error::{Error, Result};
use crate::numerics::roots::brent;
use crate::params::{derive_scales, PhysicalParams};
use crate::special::{dawson, erfcx};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Acceptance threshold on |Im f| at a polished root of Re f.
const IM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateResult {
    /// |Σ_j R_j|² over the accepted imaginary-axis poles.
    pub population: f64,
    /// Accepted pole positions x_j (ascending).
    pub poles: Vec<f64>,
}

/// Pole function f(x), evaluated in overflow-safe split form: the x > 0
/// branch through the scaled complement erfcx, the x < 0 branch through the
/// Dawson function.
fn pole_function(p: &PhysicalParams, delta_tilde: f64, x: f64) -> Complex64 {
    let om0 = p.trap;
    let amp = 4.0 * p.rabi * p.rabi;
    if x > 0.0 {
        let y = (2.0 * x / om0).sqrt();
        let term = amp * (2.0 * PI * x / om0.powi(3)).sqrt() * erfcx(y);
        Complex64::new(x + delta_tilde + term, 0.0)
    } else if x < 0.0 {
        let y = (-2.0 * x / om0).sqrt();
        let mag = amp * (2.0 * PI * (-x) / om0.powi(3)).sqrt();
        // e^{2x/ω₀}·erfi(y) = (2/√π)·dawson(y), bounded for all y.
        let re = x + delta_tilde + mag * (2.0 / PI.sqrt()) * dawson(y);
        let im = mag * (2.0 * x / om0).exp();
        Complex64::new(re, im)
    } else {
        Complex64::new(delta_tilde, 0.0)
    }
}

/// Find all imaginary-axis poles and sum their residues.
pub fn steady_population_finite_trap(p: &PhysicalParams) -> Result<SteadyStateResult> {
    if p.reservoir_dim != 3 {
        return Err(Error::InvalidParams(format!(
            "finite-trap steady state requires a 3D reservoir, got d={}",
            p.reservoir_dim
        )));
    }
    let scales = derive_scales(p)?;
    let dt = scales.delta_tilde;

    // Characteristic span: any root satisfies |x| ≲ max(|Δ̃|, |Δ|, 4Ω²/ω₀)
    // (the coupling term is bounded by ~4Ω²/ω₀ at large |x|).
    let span = dt
        .abs()
        .max(p.detuning.abs())
        .max(4.0 * p.rabi * p.rabi / p.trap);

    // Log-spaced scan on both sides of the origin; Re f is smooth and the
    // sign changes are isolated, so bracketing + Brent polishing suffices.
    const POINTS_PER_SIDE: usize = 1200;
    let mut grid = Vec::with_capacity(2 * POINTS_PER_SIDE + 1);
    let lo = (span * 1e-9).ln();
    let hi = (span * 4.0).ln();
    for i in (0..POINTS_PER_SIDE).rev() {
        let t = i as f64 / (POINTS_PER_SIDE - 1) as f64;
        grid.push(-(lo + t * (hi - lo)).exp());
    }
    grid.push(0.0);
    for i in 0..POINTS_PER_SIDE {
        let t = i as f64 / (POINTS_PER_SIDE - 1) as f64;
        grid.push((lo + t * (hi - lo)).exp());
    }

    let re_f = |x: f64| pole_function(p, dt, x).re;
    let values: Vec<f64> = grid.iter().map(|&x| re_f(x)).collect();
    let mut poles = Vec::new();
    for (a, b) in bracket_scan_grid(&grid, &values) {
        let root = brent(re_f, a, b, 1e-14 * span.max(1.0), "finite-trap pole equation")?;
        let distinct = poles
            .last()
            .map_or(true, |&prev: &f64| (root - prev).abs() > 1e-9 * span);
        if pole_function(p, dt, root).im.abs() < IM_TOL && distinct {
            poles.push(root);
        }
    }

    let residue_sum: Complex64 = poles
        .iter()
        .map(|&x| {
            let s = Complex64::new(0.0, x + p.detuning);
            Complex64::ONE / (Complex64::ONE + laplace_kernel_derivative(p, s))
        })
        .sum();
    let population = if poles.is_empty() {
        0.0
    } else {
        residue_sum.norm_sqr()
    };
    Ok(SteadyStateResult { population, poles })
}

/// Sign-change brackets over an explicit (grid, values) pair.
fn bracket_scan_grid(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            out.push((grid[i], grid[i]));
        } else if fa * fb < 0.0 {
            out.push((grid[i], grid[i + 1]));
        }
    }
    if values.last().copied() == Some(0.0) {
        out.push((*grid.last().unwrap(), *grid.last().unwrap()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_site::laplace_kernel;
    use crate::special::{erf_complex, sqrt_principal};

    #[test]
    fn bound_reference_point() {
        let p = PhysicalParams::new_3d(0.05, 1.0, 0.0);
        let r = steady_population_finite_trap(&p).unwrap();
        assert_eq!(r.poles.len(), 1);
        assert!((r.poles[0] - 8.040_942_247_538_354_8e-3).abs() < 1e-12);
        assert!(
            (r.population - 0.817_894_461_147_598_39).abs() < 1e-10,
            "population {}",
            r.population
        );
    }

    #[test]
    fn bound_reference_point_off_resonance() {
        let p = PhysicalParams::new_3d(0.3, 1.0, 0.1);
        let r = steady_population_finite_trap(&p).unwrap();
        assert_eq!(r.poles.len(), 1);
        assert!((r.poles[0] - 0.085_255_437_696_213_222).abs() < 1e-12);
        assert!(
            (r.population - 0.365_394_260_541_482_01).abs() < 1e-10,
            "population {}",
            r.population
        );
        // The residue of a lone imaginary pole is real.
        let s = Complex64::new(0.0, r.poles[0] + 0.1);
        let residue = Complex64::ONE / (Complex64::ONE + laplace_kernel_derivative(&p, s));
        assert!(residue.im.abs() < 1e-12);
        assert!((residue.re - 0.604_478_502_960_594_96).abs() < 1e-10);
    }

    #[test]
    fn radiative_detuning_has_no_pole() {
        let p = PhysicalParams::new_3d(0.05, 1.0, 0.05); // Δ = 20Ω²/ω₀
        let r = steady_population_finite_trap(&p).unwrap();
        assert!(r.poles.is_empty());
        assert_eq!(r.population, 0.0);
    }

    #[test]
    fn deep_negative_detuning_traps_everything() {
        let p = PhysicalParams::new_3d(0.05, 1.0, -50.0);
        let r = steady_population_finite_trap(&p).unwrap();
        assert_eq!(r.poles.len(), 1);
        assert!(
            r.population > 0.99 && r.population <= 1.0 + 1e-9,
            "population {}",
            r.population
        );
    }

    #[test]
    fn split_evaluation_matches_literal_continuation() {
        // The overflow-safe split form equals the literal complex expression
        // 4Ω²e^{2x/ω₀}√(2πx/ω₀³)[1−erf(√(2x/ω₀))] on the principal branch.
        let p = PhysicalParams::new_3d(0.1, 1.0, 0.03);
        let dt = derive_scales(&p).unwrap().delta_tilde;
        for x in [0.5, 0.03, 1e-4, -1e-4, -0.03, -0.5] {
            let split = pole_function(&p, dt, x);
            let sq = sqrt_principal(2.0 * x / p.trap);
            let lit = x
                + dt
                + 4.0 * p.rabi * p.rabi
                    * (2.0 * x / p.trap).exp()
                    * sqrt_principal(2.0 * PI * x / p.trap.powi(3))
                    * (Complex64::ONE - erf_complex(sq));
            assert!(
                (split - lit).norm() < 1e-12 * (1.0 + lit.norm()),
                "x={x}: split {split} vs literal {lit}"
            );
        }
    }

    #[test]
    fn pole_function_agrees_with_laplace_transform_on_positive_axis() {
        // For x > 0 the pole condition is [i(x+Δ) + G̃(i(x+Δ))]/i = f(x);
        // on the continued x < 0 side the real parts still agree while the
        // imaginary parts are conjugate (branch choice), which is irrelevant
        // to root acceptance.
        let p = PhysicalParams::new_3d(0.1, 1.0, 0.03);
        let dt = derive_scales(&p).unwrap().delta_tilde;
        for x in [0.3, 0.008, -0.05, -0.4] {
            let f = pole_function(&p, dt, x);
            let sigma = Complex64::new(0.0, x + p.detuning);
            let g = (sigma + laplace_kernel(&p, sigma)) / Complex64::new(0.0, 1.0);
            assert!((f.re - g.re).abs() < 1e-13 * (1.0 + g.re.abs()), "x={x}");
            assert!((f.im.abs() - g.im.abs()).abs() < 1e-13 * (1.0 + g.im.abs()), "x={x}");
        }
    }

    #[test]
    fn lower_dimensions_are_refused() {
        let mut p = PhysicalParams::new_3d(0.05, 1.0, 0.0);
        p.reservoir_dim = 1;
        assert!(matches!(
            steady_population_finite_trap(&p),
            Err(Error::InvalidParams(_))
        ));
    }
}
