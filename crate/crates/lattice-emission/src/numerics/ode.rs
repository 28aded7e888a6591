//! Embedded Dormand–Prince 5(4) integrator over complex state vectors, with
//! proportional step control and exact landing on requested sample times.

use num_complex::Complex64;

/// Right-hand side contract: fill `dy` with dy/dt at (t, y).
pub trait Rhs {
    fn eval(&mut self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
}

impl<F: FnMut(f64, &[Complex64], &mut [Complex64])> Rhs for F {
    fn eval(&mut self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        self(t, y, dy)
    }
}

/// Step-size and tolerance settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance per step.
    pub rtol: f64,
    /// Absolute tolerance floor per component.
    pub atol: f64,
    /// Initial step guess; if zero, a heuristic from the first derivative is used.
    pub h0: f64,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-12,
            h0: 0.0,
            max_steps: 2_000_000,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// Integrate from `t0`, delivering the state at each time in `sample_times`
/// (strictly increasing, all ≥ t0) to the `on_sample` callback. The state is
/// advanced in place.
///
/// Panics on NaN in the state (caller guards on the physics side); returns
/// `false` only if `max_steps` was exhausted before the final sample.
#[must_use]
pub fn integrate_to_samples<R: Rhs>(
    rhs: &mut R,
    t0: f64,
    y: &mut [Complex64],
    sample_times: &[f64],
    opts: &OdeOptions,
    mut on_sample: impl FnMut(f64, &[Complex64]),
) -> bool {
    let n = y.len();
    let mut k1 = vec![Complex64::ZERO; n];
    let mut k2 = vec![Complex64::ZERO; n];
    let mut k3 = vec![Complex64::ZERO; n];
    let mut k4 = vec![Complex64::ZERO; n];
    let mut k5 = vec![Complex64::ZERO; n];
    let mut k6 = vec![Complex64::ZERO; n];
    let mut k7 = vec![Complex64::ZERO; n];
    let mut ytmp = vec![Complex64::ZERO; n];
    let mut y5 = vec![Complex64::ZERO; n];

    let mut t = t0;
    rhs.eval(t, y, &mut k1);

    let t_end = match sample_times.last() {
        Some(&te) => te,
        None => return true,
    };
    let mut sample_iter = sample_times.iter().copied().peekable();
    // Emit any samples that coincide with the start time.
    while let Some(&ts) = sample_iter.peek() {
        if ts <= t0 {
            on_sample(ts, y);
            sample_iter.next();
        } else {
            break;
        }
    }

    let mut h = if opts.h0 > 0.0 {
        opts.h0
    } else {
        let dnorm = k1.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let ynorm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        (1e-2 * (ynorm + opts.atol) / (dnorm + 1e-30)).min((t_end - t0).abs().max(1e-30))
    };

    let mut steps = 0usize;
    while sample_iter.peek().is_some() {
        if steps >= opts.max_steps {
            return false;
        }
        steps += 1;

        let next_sample = *sample_iter.peek().expect("loop condition");
        let mut hitting_sample = false;
        if t + h >= next_sample {
            h = next_sample - t;
            hitting_sample = true;
        }

        macro_rules! stage {
            ($kout:ident, $c:expr, $($coef:expr => $kin:ident),+) => {{
                for i in 0..n {
                    let mut acc = Complex64::ZERO;
                    $(acc += $coef * $kin[i];)+
                    ytmp[i] = y[i] + h * acc;
                }
                rhs.eval(t + $c * h, &ytmp, &mut $kout);
            }};
        }

        stage!(k2, C2, A21 => k1);
        stage!(k3, C3, A31 => k1, A32 => k2);
        stage!(k4, C4, A41 => k1, A42 => k2, A43 => k3);
        stage!(k5, C5, A51 => k1, A52 => k2, A53 => k3, A54 => k4);
        stage!(k6, 1.0, A61 => k1, A62 => k2, A63 => k3, A64 => k4, A65 => k5);

        for i in 0..n {
            y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        rhs.eval(t + h, &y5, &mut k7);

        // Weighted RMS error of the embedded difference.
        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                + E7 * k7[i]);
            let scale = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
            let r = e.norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            std::mem::swap(&mut k1, &mut k7); // first-same-as-last
            if hitting_sample {
                on_sample(next_sample, y);
                sample_iter.next();
                // Consume duplicates of the same sample time, if any.
                while let Some(&ts) = sample_iter.peek() {
                    if ts <= t {
                        on_sample(ts, y);
                        sample_iter.next();
                    } else {
                        break;
                    }
                }
            }
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).max(1e-300);
    }
    true
}
