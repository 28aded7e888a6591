//! Linear Richardson extrapolation of a regularized quantity to its
//! zero-regulator limit, with a stability check across the regulator sequence.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Extrapolate f(ε) → f(0) from two samples assuming f(ε) ≈ f(0) + c·ε.
#[inline]
pub fn linear_pair(eps1: f64, f1: Complex64, eps2: f64, f2: Complex64) -> Complex64 {
    (eps1 * f2 - eps2 * f1) / (eps1 - eps2)
}

/// Extrapolate along a decreasing regulator sequence: forms the linear
/// extrapolant of each consecutive pair and requires the final two
/// extrapolants to agree within `stability_tol` (relative to the result's
/// magnitude, with an absolute floor). Errors with
/// [`Error::ExtrapolationUnstable`] when the estimates drift apart instead of
/// settling.
pub fn sequence(
    eps: &[f64],
    values: &[Complex64],
    stability_tol: f64,
    context: &'static str,
) -> Result<Complex64> {
    assert_eq!(eps.len(), values.len());
    assert!(eps.len() >= 2, "need at least two regulator samples");
    assert!(
        eps.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0),
        "regulator sequence must be positive and strictly decreasing"
    );

    let extrapolants: Vec<Complex64> = eps
        .windows(2)
        .zip(values.windows(2))
        .map(|(e, v)| linear_pair(e[0], v[0], e[1], v[1]))
        .collect();

    let last = *extrapolants.last().expect("at least one pair");
    if extrapolants.len() >= 2 {
        let prev = extrapolants[extrapolants.len() - 2];
        let scale = last.norm().max(values[values.len() - 1].norm()).max(1e-300);
        if (last - prev).norm() > stability_tol * scale {
            return Err(Error::ExtrapolationUnstable {
                context,
                estimates: extrapolants.iter().map(|z| z.norm()).collect(),
            });
        }
    }
    Ok(last)
}
