//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size real systems.

use crate::error::{Error, Result};

/// Tolerances of the embedded error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step allowed, as a fraction of the interval when non-positive.
    pub h_max: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-10, atol: 1e-12, h_max: 0.0 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates y' = f(x, y) from x0 to x1 (either direction), returning y(x1),
/// the number of accepted steps and the last accepted step size.
pub fn integrate<const N: usize, F>(
    f: &mut F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    ctrl: StepControl,
    h_init: f64,
) -> Result<([f64; N], usize, f64)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok((y0, 0, h_init));
    }
    let dir = span.signum();
    let h_max = if ctrl.h_max > 0.0 { ctrl.h_max } else { span.abs() };
    let mut h = h_init.abs().min(h_max).max(1e-14 * span.abs().max(1.0));
    let mut x = x0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(x, &y);
    let mut steps = 0usize;
    let mut last_h = h;
    loop {
        let remaining = (x1 - x) * dir;
        if remaining <= 1e-15 * span.abs() {
            break;
        }
        let hs = h.min(remaining);
        let mut ynew = [0.0; N];
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                *v += dir * hs * acc;
            }
            k[s] = f(x + dir * hs * C[s], &ys);
            if s == 6 {
                ynew = ys;
            }
        }
        let mut err = 0.0f64;
        for i in 0..N {
            let mut e = 0.0;
            for (s, ks) in k.iter().enumerate() {
                e += E[s] * ks[i];
            }
            let sc = ctrl.atol + ctrl.rtol * y[i].abs().max(ynew[i].abs());
            err = err.max((hs * e).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Resolution(format!("non-finite error estimate at x = {x}")));
        }
        if err <= 1.0 {
            x += dir * hs;
            if (x1 - x) * dir < 0.0 {
                x = x1;
            }
            y = ynew;
            k[0] = k[6];
            steps += 1;
            last_h = hs;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (hs * fac).min(h_max);
        } else {
            h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < 1e-14 * x.abs().max(1.0) {
                return Err(Error::Resolution(format!("step size underflow at x = {x}")));
            }
        }
    }
    Ok((y, steps, last_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_oscillator() {
        let mut f = |_x: f64, y: &[f64; 1]| [y[0]];
        let (y, _, _) = integrate(&mut f, 0.0, [1.0], 1.0, StepControl::default(), 0.01).unwrap();
        assert!((y[0] - 1f64.exp()).abs() < 1e-9);
        let mut g = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let (y, _, _) = integrate(&mut g, 0.0, [0.0, 1.0], -10.0, StepControl::default(), 0.01).unwrap();
        assert!((y[0] - (-10f64).sin()).abs() < 1e-8);
    }

    #[test]
    fn fifth_order_error_scaling() {
        let mut f = |x: f64, y: &[f64; 1]| [x.cos() * y[0]];
        let exact = 3f64.sin().exp();
        let loose = StepControl { rtol: 1e-6, atol: 1e-9, h_max: 0.0 };
        let tight = StepControl { rtol: 1e-11, atol: 1e-14, h_max: 0.0 };
        let (a, na, _) = integrate(&mut f, 0.0, [1.0], 3.0, loose, 0.1).unwrap();
        let (b, nb, _) = integrate(&mut f, 0.0, [1.0], 3.0, tight, 0.1).unwrap();
        assert!((b[0] - exact).abs() < (a[0] - exact).abs().max(1e-12));
        assert!(nb > na);
    }
}
