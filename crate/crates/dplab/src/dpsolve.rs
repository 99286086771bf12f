//! Pseudo-spectral evolution of m_t = −(u m_x + 3u_x m + 3u_x), u − u_xx = m,
//! on a periodic grid with classical RK4 in time and 2/3-rule dealiasing.

use crate::error::{Error, Result};
use crate::scattering::{q_of_u, FieldState};
use crate::spectral::Spectral;
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Solves u − u_xx = m on the periodic grid of matching size.
pub fn helmholtz_invert(m: &[f64], l: f64) -> Vec<f64> {
    Spectral::new(m.len(), l).helmholtz_inv(m)
}

/// Right-hand side evaluator with cached transforms and dealiasing mask.
#[derive(Debug, Clone)]
pub struct DpOperator {
    pub sp: Spectral,
    keep: Vec<bool>,
}

impl DpOperator {
    pub fn new(n: usize, l: f64) -> Self {
        let sp = Spectral::new(n, l);
        let cutoff = n as f64 / 3.0;
        let keep = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { n as f64 - j as f64 };
                m < cutoff
            })
            .collect();
        DpOperator { sp, keep }
    }

    /// Zeroes the modes removed by the 2/3 rule.
    pub fn dealias(&self, f: &[f64]) -> Vec<f64> {
        let mut fh = self.sp.forward(f);
        for (v, k) in fh.iter_mut().zip(&self.keep) {
            if !k {
                *v = C64::new(0.0, 0.0);
            }
        }
        self.sp.inverse(fh)
    }

    /// u recovered from m.
    pub fn u_of_m(&self, m: &[f64]) -> Vec<f64> {
        self.sp.helmholtz_inv(m)
    }

    /// dm/dt, returning also max|u| for step control.
    pub fn rhs_with_u(&self, m: &[f64]) -> (Vec<f64>, f64) {
        let sp = &self.sp;
        let mh = sp.forward(m);
        let uh: Vec<C64> = mh.iter().zip(&sp.xi).map(|(v, k)| v / (1.0 + k * k)).collect();
        let deriv = |fh: &[C64]| -> Vec<f64> {
            let d: Vec<C64> = fh
                .iter()
                .zip(&sp.xi)
                .enumerate()
                .map(|(j, (v, k))| if j == sp.n / 2 { C64::new(0.0, 0.0) } else { v * C64::new(0.0, *k) })
                .collect();
            sp.inverse(d)
        };
        let u = sp.inverse(uh.clone());
        let ux = deriv(&uh);
        let mx = deriv(&mh);
        let prod: Vec<f64> = (0..sp.n).map(|i| -(u[i] * mx[i] + 3.0 * ux[i] * m[i] + 3.0 * ux[i])).collect();
        let umax = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        (self.dealias(&prod), umax)
    }

    pub fn rhs(&self, m: &[f64]) -> Vec<f64> {
        self.rhs_with_u(m).0
    }
}

/// dm/dt at a field state.
pub fn rhs(state: &FieldState) -> Vec<f64> {
    DpOperator::new(state.m.len(), state.l).rhs(&state.m)
}

/// Time-stepping settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveOptions {
    /// Fixed step; `None` selects 0.5·h/(3 + max|u₀|).
    pub dt: Option<f64>,
    /// Abort when dt·(3 + max|u|)/h exceeds this value.
    pub cfl_limit: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { dt: None, cfl_limit: 1.0 }
    }
}

/// Default spatial resolution.
pub const DEFAULT_N: usize = 1 << 14;

/// Conserved functionals at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invariants {
    pub time: f64,
    pub mass_m: f64,
    pub mass_q: f64,
}

/// Snapshots of an evolution run.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    pub dt: f64,
    pub steps: usize,
    pub scheme: String,
    pub invariants: Vec<Invariants>,
}

impl Trajectory {
    /// Largest relative drift of ∫m and ∫(q−1) against the first record.
    pub fn max_drift(&self) -> (f64, f64) {
        let first = self.invariants[0];
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        self.invariants.iter().fold((0.0, 0.0), |(dm, dq), v| {
            (f64::max(dm, rel(v.mass_m, first.mass_m)), f64::max(dq, rel(v.mass_q, first.mass_q)))
        })
    }
}

fn invariants(sp: &Spectral, m: &[f64], time: f64) -> Invariants {
    let mass_m = sp.integral(m);
    let mass_q = m.iter().map(|v| (1.0 + v).cbrt() - 1.0).sum::<f64>() * sp.h();
    Invariants { time, mass_m, mass_q }
}

/// Default step for a datum.
pub fn default_dt(u0: &[f64], l: f64) -> f64 {
    let h = 2.0 * l / u0.len() as f64;
    let umax = u0.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    0.5 * h / (3.0 + umax)
}

/// Evolves u₀ from t = 0 and records snapshots at the requested increasing times.
pub fn evolve(u0: &[f64], l: f64, snap_times: &[f64], opts: EvolveOptions) -> Result<Trajectory> {
    evolve_forced(u0, l, snap_times, opts, None::<&dyn Fn(f64, &[f64]) -> Vec<f64>>)
}

/// Evolution with an optional additive forcing F(t, x) on the m equation.
pub fn evolve_forced<F>(u0: &[f64], l: f64, snap_times: &[f64], opts: EvolveOptions, forcing: Option<&F>) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    if snap_times.windows(2).any(|w| w[1] <= w[0]) || snap_times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::Input("snapshot times must be nonnegative and increasing".into()));
    }
    let n = u0.len();
    let op = DpOperator::new(n, l);
    let x = op.sp.x();
    let h = op.sp.h();
    let dt_nominal = opts.dt.unwrap_or_else(|| default_dt(u0, l));
    if !(dt_nominal > 0.0) {
        return Err(Error::Input(format!("time step {dt_nominal} must be positive")));
    }
    let start = q_of_u(u0, l, 0.0)?;
    let mut m = op.dealias(&start.m);
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut snapshots = Vec::with_capacity(snap_times.len());
    let mut inv = vec![invariants(&op.sp, &m, 0.0)];
    let f_eval = |tt: f64, mm: &[f64]| -> (Vec<f64>, f64) {
        let (mut r, umax) = op.rhs_with_u(mm);
        if let Some(f) = forcing {
            for (ri, fi) in r.iter_mut().zip(f(tt, &x)) {
                *ri += fi;
            }
        }
        (r, umax)
    };
    for &target in snap_times {
        let span = target - t;
        let nsteps = if span > 0.0 { (span / dt_nominal).ceil().max(1.0) as usize } else { 0 };
        let dt = if nsteps > 0 { span / nsteps as f64 } else { 0.0 };
        for _ in 0..nsteps {
            let (k1, umax) = f_eval(t, &m);
            if dt * (3.0 + umax) / h > opts.cfl_limit {
                return Err(Error::Aborted { time: t, reason: format!("CFL number {:.3} exceeds limit", dt * (3.0 + umax) / h) });
            }
            let stage = |k: &[f64], c: f64| -> Vec<f64> { m.iter().zip(k).map(|(a, b)| a + c * dt * b).collect() };
            let (k2, _) = f_eval(t + 0.5 * dt, &stage(&k1, 0.5));
            let (k3, _) = f_eval(t + 0.5 * dt, &stage(&k2, 0.5));
            let (k4, _) = f_eval(t + dt, &stage(&k3, 1.0));
            for i in 0..n {
                m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += dt;
            steps += 1;
            if let Some(i) = m.iter().position(|v| !(1.0 + v > 0.0)) {
                return Err(Error::Aborted { time: t, reason: format!("1 + m <= 0 at node {i} (x = {})", x[i]) });
            }
        }
        t = target;
        let u = op.u_of_m(&m);
        snapshots.push(q_of_u(&u, l, t)?);
        inv.push(invariants(&op.sp, &m, t));
    }
    Ok(Trajectory { snapshots, dt: dt_nominal, steps, scheme: "Fourier pseudo-spectral, 2/3 dealiasing, RK4".into(), invariants: inv })
}

/// Linear dispersion relation ω(ξ) = 3ξ/(1 + ξ²) about u = 0.
pub fn dispersion(xi: f64) -> f64 {
    3.0 * xi / (1.0 + xi * xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::gaussian_datum;
    use std::f64::consts::PI;

    #[test]
    fn helmholtz_examples() {
        let sp = Spectral::new(64, PI);
        let x = sp.x();
        let m: Vec<f64> = x.iter().map(|x| x.cos()).collect();
        let u = helmholtz_invert(&m, PI);
        assert!(u.iter().zip(&x).all(|(u, x)| (u - 0.5 * x.cos()).abs() < 1e-14));
        assert!(helmholtz_invert(&[1.75; 64], PI).iter().all(|u| (u - 1.75).abs() < 1e-14));
        let u0: Vec<f64> = x.iter().map(|x| (2.0 * x).sin() + 0.3 * (5.0 * x).cos()).collect();
        let m0: Vec<f64> = u0.iter().zip(sp.deriv2(&u0)).map(|(a, b)| a - b).collect();
        let back = helmholtz_invert(&m0, PI);
        assert!(back.iter().zip(&u0).all(|(a, b)| (a - b).abs() < 1e-13));
    }

    #[test]
    fn zero_state_is_stationary() {
        let s = q_of_u(&[0.0; 128], 10.0, 0.0).unwrap();
        assert!(rhs(&s).iter().all(|v| *v == 0.0));
        let tr = evolve(&[0.0; 128], 10.0, &[1.0], EvolveOptions::default()).unwrap();
        assert!(tr.snapshots[0].u.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn linear_dispersion() {
        let (n, l) = (256, 8.0 * PI);
        let sp = Spectral::new(n, l);
        let x = sp.x();
        let eps = 1e-9;
        for mode in [1usize, 4, 12] {
            let xi = mode as f64 * PI / l;
            let m: Vec<f64> = x.iter().map(|x| eps * (xi * x).cos()).collect();
            let r = DpOperator::new(n, l).rhs(&m);
            // m = ε cos(ξx − ωt) gives m_t = ε ω sin(ξx).
            let w = dispersion(xi);
            let err = r.iter().zip(&x).map(|(r, x)| (r - eps * w * (xi * x).sin()).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-6 * eps * w, "mode {mode}: {err}");
        }
    }

    #[test]
    fn manufactured_solution_is_fourth_order() {
        // u* = a sin(x + t) so m* = 2a sin(x + t); the forcing restores it exactly.
        let (n, l, a) = (64, PI, 0.2);
        let forcing = move |t: f64, x: &[f64]| -> Vec<f64> {
            x.iter()
                .map(|x| {
                    let (s, c) = (x + t).sin_cos();
                    let (u, ux, m, mx) = (a * s, a * c, 2.0 * a * s, 2.0 * a * c);
                    2.0 * a * c + (u * mx + 3.0 * ux * m + 3.0 * ux)
                })
                .collect()
        };
        let x = Spectral::new(n, l).x();
        let u0: Vec<f64> = x.iter().map(|x| a * x.sin()).collect();
        let t_end = 2.0;
        let err = |dt: f64| {
            let tr = evolve_forced(&u0, l, &[t_end], EvolveOptions { dt: Some(dt), cfl_limit: 10.0 }, Some(&forcing)).unwrap();
            tr.snapshots[0].u.iter().zip(&x).map(|(u, x)| (u - a * (x + t_end).sin()).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.2), err(0.1));
        let order = (e1 / e2).log2();
        assert!(order >= 3.8, "order {order} ({e1:e}, {e2:e})");
    }

    #[test]
    fn conservation_short_run() {
        let (n, l) = (2048, 48.0);
        let u0 = gaussian_datum(n, l, -0.25, 2.0);
        let tr = evolve(&u0, l, &[5.0, 10.0], EvolveOptions::default()).unwrap();
        let (dm, dq) = tr.max_drift();
        assert!(dm <= 1e-10, "{dm}");
        assert!(dq <= 1e-8, "{dq}");
    }

    #[test]
    fn split_run_matches_single_run() {
        let (n, l) = (512, 32.0);
        let u0 = gaussian_datum(n, l, 0.2, 2.0);
        let opts = EvolveOptions { dt: Some(0.02), cfl_limit: 1.0 };
        let one = evolve(&u0, l, &[2.0], opts).unwrap();
        let two = evolve(&u0, l, &[1.0, 2.0], opts).unwrap();
        let d = one.snapshots[0].u.iter().zip(&two.snapshots[1].u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 1e-13, "{d}");
    }
}
