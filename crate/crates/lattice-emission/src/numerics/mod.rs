//! Shared numerical infrastructure: adaptive quadrature, an embedded
//! Runge–Kutta integrator, scalar root finding, and regulator extrapolation.

pub mod ode;
pub mod quad;
pub mod richardson;
pub mod roots;
