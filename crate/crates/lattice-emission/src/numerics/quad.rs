//! Adaptive Gauss–Kronrod (7,15) quadrature for complex-valued integrands on
//! finite intervals. Infinite upper limits are handled by callers through an
//! explicit change of variables; this module only ever sees finite panels.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Kronrod abscissae on [0, 1] side of the symmetric 15-point rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the embedded 7-point rule (odd Kronrod indices + center).
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One (7,15) evaluation on [a, b]: returns (I15, error estimate).
///
/// The raw |I15 − I7| difference is floored at 50·ε·∫|f| so that the estimate
/// never drops below attainable roundoff (a constant integrand would otherwise
/// report zero error even at an enormous magnitude).
fn kronrod_panel<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut ik = WGK[7] * fc;
    let mut ig = WG[3] * fc;
    let mut resabs = WGK[7] * fc.norm();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (fl, fr) = (f(mid - dx), f(mid + dx));
        let fsum = fl + fr;
        ik += WGK[j] * fsum;
        resabs += WGK[j] * (fl.norm() + fr.norm());
        if j % 2 == 1 {
            ig += WG[j / 2] * fsum;
        }
    }
    ik *= half;
    ig *= half;
    resabs *= half.abs();
    let err = (ik - ig).norm().max(50.0 * f64::EPSILON * resabs);
    (ik, err)
}

/// Adaptive integration of `f` over [a, b] to absolute tolerance `tol`.
///
/// Returns the integral and the final summed error estimate. Errors with
/// [`Error::QuadratureFailure`] if the estimate cannot be pushed below `tol`
/// within `max_panels` subdivisions.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    context: &'static str,
) -> Result<(Complex64, f64)> {
    integrate_segmented(&mut f, &[a, b], tol, context)
}

/// Adaptive integration over a segmented interval: `points` is an increasing
/// list of breakpoints, each consecutive pair forming an initial panel. Useful
/// when the caller knows scale boundaries (peaks, decay lengths) in advance.
pub fn integrate_segmented<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    points: &[f64],
    tol: f64,
    context: &'static str,
) -> Result<(Complex64, f64)> {
    assert!(points.len() >= 2, "need at least one panel");
    const MAX_PANELS: usize = 4000;

    struct Panel {
        a: f64,
        b: f64,
        value: Complex64,
        error: f64,
    }

    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    for pair in points.windows(2) {
        let (value, error) = kronrod_panel(f, pair[0], pair[1]);
        panels.push(Panel {
            a: pair[0],
            b: pair[1],
            value,
            error,
        });
    }

    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= tol {
            let total: Complex64 = panels.iter().map(|p| p.value).sum();
            return Ok((total, total_error));
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure {
                context,
                error: total_error,
                tolerance: tol,
            });
        }
        // Split the worst panel.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty panel list");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval at machine resolution and still above tolerance.
            return Err(Error::QuadratureFailure {
                context,
                error: total_error,
                tolerance: tol,
            });
        }
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = kronrod_panel(f, lo, hi);
            panels.push(Panel {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
}

/// Integrate `f` over [0, ∞) through the rational map x = t/(1-t), t ∈ [0, 1).
/// `scale` stretches the map (x = scale·t/(1-t)) so the bulk of the integrand
/// mass sits at moderate t; pass the integrand's characteristic decay length.
pub fn integrate_half_line<F: FnMut(f64) -> Complex64>(
    mut f: F,
    scale: f64,
    tol: f64,
    context: &'static str,
) -> Result<(Complex64, f64)> {
    assert!(scale > 0.0 && scale.is_finite());
    let mut g = |t: f64| {
        let one_minus = 1.0 - t;
        let x = scale * t / one_minus;
        let jac = scale / (one_minus * one_minus);
        f(x) * jac
    };
    // End the map slightly short of t = 1; the omitted tail is controlled by
    // the integrand's decay and folded into the error estimate via the final
    // panel, which the adaptive loop keeps subdividing toward 1.
    integrate_segmented(&mut g, &[0.0, 0.25, 0.5, 0.75, 0.9, 1.0 - 1e-14], tol, context)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact_to_degree_ten() {
        // A (7,15) Kronrod rule integrates polynomials up to degree 22 exactly;
        // check a representative one on a single panel.
        let (got, err) = integrate(
            |x| Complex64::new(x.powi(10) - 3.0 * x.powi(3) + 1.0, 0.0),
            -1.0,
            2.0,
            1e-11,
            "poly",
        )
        .unwrap();
        // ∫ x^10 = x^11/11; ∫ -3x^3 = -3x^4/4; ∫ 1 = x.
        let exact = (2048.0 + 1.0) / 11.0 - 3.0 * (16.0 - 1.0) / 4.0 + 3.0;
        assert_relative_eq!(got.re, exact, max_relative = 1e-14);
        assert!(err < 1e-11);
    }

    #[test]
    fn oscillatory_complex_exponential() {
        // ∫₀^{2π} e^{i 7 x} dx = 0.
        let (got, _) = integrate(
            |x| Complex64::new(0.0, 7.0 * x).exp(),
            0.0,
            2.0 * PI,
            1e-12,
            "osc",
        )
        .unwrap();
        assert!(got.norm() < 1e-12, "got {got}");
    }

    #[test]
    fn half_line_gaussian() {
        // ∫₀^∞ e^{-x²} dx = √π/2.
        let (got, _) =
            integrate_half_line(|x| Complex64::new((-x * x).exp(), 0.0), 1.0, 1e-12, "gauss")
                .unwrap();
        assert_relative_eq!(got.re, PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn half_line_slow_algebraic_decay() {
        // ∫₀^∞ dx/(1+x²) = π/2, with only x^{-2} decay.
        let (got, _) = integrate_half_line(
            |x| Complex64::new(1.0 / (1.0 + x * x), 0.0),
            1.0,
            1e-11,
            "lorentz",
        )
        .unwrap();
        assert_relative_eq!(got.re, PI / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn endpoint_inverse_sqrt_singularity() {
        // ∫₀^1 x^{-1/2} dx = 2: integrable endpoint singularity must converge.
        let (got, _) = integrate(
            |x| Complex64::new(1.0 / x.sqrt().max(1e-300), 0.0),
            1e-300,
            1.0,
            1e-8,
            "sqrt-singular",
        )
        .unwrap();
        assert_relative_eq!(got.re, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn unreachable_tolerance_reports_failure() {
        // A discontinuous integrand with an impossible tolerance must error
        // rather than loop forever.
        let r = integrate(
            |x| Complex64::new(if x > 0.123_456_789 { 1e8 } else { 0.0 }, 0.0),
            0.0,
            1.0,
            1e-300,
            "step",
        );
        assert!(matches!(r, Err(crate::error::Error::QuadratureFailure { .. })));
    }
}
