//! Adaptive Dormand–Prince 5(4) integrator for complex state vectors.
//!
//! Error control uses the max-norm of the embedded 4th-order estimate scaled
//! by `atol + rtol·|y|`, with the usual FSAL reuse of the last stage.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-13,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = f(t, y)` from `t0` to `t1` in place.
///
/// `observer` is called after every accepted step and may abort the
/// integration by returning an error.
pub fn integrate<F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y: &mut [Complex64],
    opts: &OdeOptions,
    mut observer: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    O: FnMut(f64, &[Complex64]) -> Result<()>,
{
    let n = y.len();
    let mut stats = OdeStats::default();
    let span = t1 - t0;
    if span == 0.0 || n == 0 {
        return Ok(stats);
    }
    let dir = span.signum();

    let zero = Complex64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut ynew = vec![zero; n];

    f(t0, y, &mut k1);
    stats.evaluations += 1;

    // Initial step from the size of the derivative.
    let ymax = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let fmax = k1.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut h = if fmax > 0.0 {
        (0.01 * (ymax + opts.atol) / fmax).min(span.abs())
    } else {
        span.abs()
    };
    h = h.max(span.abs() * 1e-6) * dir;

    let mut t = t0;
    let mut last = false;
    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::ToleranceNotMet(format!(
                "step budget {} exhausted at t = {t:.6e}",
                opts.max_steps
            )));
        }
        if (t + h - t1) * dir >= 0.0 {
            h = t1 - t;
            last = true;
        }

        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h * A21);
        }
        f(t + C2 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        f(t + C3 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        f(t + C4 * h, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        f(t + C5 * h, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] =
                y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        f(t + h, &tmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        f(t + h, &ynew, &mut k7);
        stats.evaluations += 6;

        let mut err = 0.0f64;
        for i in 0..n {
            let e =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = opts.atol + opts.rtol * y[i].norm().max(ynew[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::ToleranceNotMet(format!(
                "non-finite error estimate at t = {t:.6e}"
            )));
        }

        if err <= 1.0 {
            stats.accepted += 1;
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&ynew);
            std::mem::swap(&mut k1, &mut k7);
            observer(t, y)?;
            if last {
                return Ok(stats);
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            stats.rejected += 1;
            last = false;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
        if h.abs() < span.abs() * 1e-14 {
            return Err(Error::ToleranceNotMet(format!(
                "step size underflow at t = {t:.6e}"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_obs(_: f64, _: &[Complex64]) -> Result<()> {
        Ok(())
    }

    #[test]
    fn complex_exponential() {
        // y' = i ω y  →  y = e^{iωt}
        let w = 3.7;
        let mut y = vec![Complex64::new(1.0, 0.0)];
        let opts = OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            ..Default::default()
        };
        integrate(
            |_, y, dy| dy[0] = Complex64::new(0.0, w) * y[0],
            0.0,
            2.0,
            &mut y,
            &opts,
            no_obs,
        )
        .unwrap();
        let exact = Complex64::from_polar(1.0, w * 2.0);
        assert!((y[0] - exact).norm() < 1e-10);
    }

    #[test]
    fn two_level_rabi() {
        // i ċ_e = (Ω/2) c_g, i ċ_g = (Ω/2) c_e  →  |c_e|² = sin²(Ωt/2)
        let om = 2.0;
        let mut y = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let mi = Complex64::new(0.0, -0.5 * om);
        integrate(
            |_, y, dy| {
                dy[0] = mi * y[1];
                dy[1] = mi * y[0];
            },
            0.0,
            1.3,
            &mut y,
            &OdeOptions::default(),
            no_obs,
        )
        .unwrap();
        let pe = y[0].norm_sqr();
        assert!((pe - (om * 1.3 / 2.0).sin().powi(2)).abs() < 1e-10);
        assert!((y[0].norm_sqr() + y[1].norm_sqr() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn observer_can_abort() {
        let mut y = vec![Complex64::new(1.0, 0.0)];
        let r = integrate(
            |_, y, dy| dy[0] = y[0],
            0.0,
            1.0,
            &mut y,
            &OdeOptions::default(),
            |t, _| {
                if t > 0.5 {
                    Err(Error::ToleranceNotMet("stop".into()))
                } else {
                    Ok(())
                }
            },
        );
        assert!(r.is_err());
    }

    #[test]
    fn backwards_integration() {
        let mut y = vec![Complex64::new(1.0, 0.0)];
        integrate(
            |_, y, dy| dy[0] = -y[0],
            1.0,
            0.0,
            &mut y,
            &OdeOptions::default(),
            no_obs,
        )
        .unwrap();
        assert!((y[0].re - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let mut y = vec![Complex64::new(1.0, 0.0)];
        let opts = OdeOptions {
            max_steps: 3,
            ..Default::default()
        };
        let r = integrate(
            |_, y, dy| dy[0] = Complex64::new(0.0, 1e4) * y[0],
            0.0,
            1.0,
            &mut y,
            &opts,
            no_obs,
        );
        assert!(matches!(r, Err(Error::ToleranceNotMet(_))));
    }
}
