//! Bracketing scan plus Brent polishing for scalar real root finding.

use crate::error::{Error, Result};

/// Scan [a, b] with `n` uniform panels, returning every panel whose endpoint
/// values change sign (including exact zeros at panel edges).
pub fn bracket_scan<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1 && b > a);
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + h * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push((x0, x0));
        } else if f0 * f1 < 0.0 {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((b, b));
    }
    out
}

/// Brent's method on a sign-changing bracket [a, b]. Converges to `tol`
/// absolute in x (plus machine-epsilon scaling); errors if the bracket is
/// invalid or the iteration cap is hit.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a0: f64,
    b0: f64,
    tol: f64,
    context: &'static str,
) -> Result<f64> {
    if a0 == b0 {
        return Ok(a0);
    }
    let (mut a, mut b) = (a0, b0);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::RootSearchFailure {
            context,
            trace: format!("no sign change on [{a0:e}, {b0:e}]: f(a)={fa:e}, f(b)={fb:e}"),
        });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..200 {
        let tol_act = 2.0 * f64::EPSILON * b.abs() + tol;
        if fb == 0.0 || (b - a).abs() <= tol_act {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            // Secant.
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let cond_interval = !((lo.min(b) < s) && (s < lo.max(b)));
        let cond_mflag = mflag && (s - b).abs() >= (b - c).abs() / 2.0;
        let cond_dflag = !mflag && (s - b).abs() >= (c - d).abs() / 2.0;
        let cond_tiny_m = mflag && (b - c).abs() < tol_act;
        let cond_tiny_d = !mflag && (c - d).abs() < tol_act;
        if cond_interval || cond_mflag || cond_dflag || cond_tiny_m || cond_tiny_d {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }

        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::RootSearchFailure {
        context,
        trace: format!("no convergence after 200 iterations; last bracket [{a:e}, {b:e}]"),
    })
}
