//! Laplace-domain form of the memory kernel. The transform of the 3D kernel
//! has a closed form through the scaled complementary error (Faddeeva)
//! function,
//!
//! G̃(s) = (4Ω²/ω₀)·[−i + √π·u·w(u)],   u = √(2(Δ+is)/ω₀),
//!
//! with the principal branch of the square root (cut along the negative real
//! axis of the argument). Its first-order expansion in (Δ+is)/ω₀ is the
//! strong-confinement form used in the flat-band analysis.

use crate::params::PhysicalParams;
use crate::special::faddeeva;
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn u_arg(p: &PhysicalParams, s: Complex64) -> Complex64 {
    ((2.0 / p.trap) * (p.detuning + I * s)).sqrt()
}

/// Full Laplace transform G̃(s) of the 3D memory kernel; entire in s apart
/// from the √ branch point at s = iΔ, so analytic continuation to Re{s} < 0
/// is the same expression.
pub fn laplace_kernel(p: &PhysicalParams, s: Complex64) -> Complex64 {
    let u = u_arg(p, s);
    (4.0 * p.rabi * p.rabi / p.trap) * (-I + PI.sqrt() * u * faddeeva(u))
}

/// Strong-confinement (first order in (Δ+is)/ω₀) transform:
/// G̃_∞(s) = −4iΩ²/ω₀ + α(1+i)√(2π(s−iΔ)).
pub fn laplace_kernel_strong(p: &PhysicalParams, s: Complex64) -> Complex64 {
    let alpha = (8.0 * p.rabi.powi(4) / p.trap.powi(3)).sqrt();
    let root = (2.0 * PI * (s - I * p.detuning)).sqrt();
    -4.0 * I * p.rabi * p.rabi / p.trap + alpha * Complex64::new(1.0, 1.0) * root
}

/// Analytic derivative dG̃/ds, used for pole residues.
///
/// From w′(u) = −2u·w(u) + 2i/√π and du/ds = i/(ω₀u):
/// dG̃/ds = (4Ω²/ω₀)·√π·[w(u)(1−2u²) + 2iu/√π]·i/(ω₀u). Singular at the
/// branch point u = 0 (s = iΔ), as the transform itself is not differentiable
/// there.
pub fn laplace_kernel_derivative(p: &PhysicalParams, s: Complex64) -> Complex64 {
    let u = u_arg(p, s);
    let dw = faddeeva(u) * (1.0 - 2.0 * u * u) + 2.0 * I * u / PI.sqrt();
    (4.0 * p.rabi * p.rabi / p.trap) * PI.sqrt() * dw * (I / (p.trap * u))
}
