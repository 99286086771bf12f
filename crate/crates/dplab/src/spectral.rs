//! Fourier differentiation, Helmholtz inversion and antiderivatives on a
//! periodic uniform grid x_i = −L + 2Li/N.

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Periodic grid with cached FFT plans.
#[derive(Clone)]
pub struct Spectral {
    pub n: usize,
    pub l: f64,
    pub xi: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).field("l", &self.l).finish()
    }
}

impl Spectral {
    pub fn new(n: usize, l: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let xi = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                m * std::f64::consts::PI / l
            })
            .collect();
        Spectral { n, l, xi, fwd, inv }
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.n).map(|i| -self.l + i as f64 * self.h()).collect()
    }

    pub fn forward(&self, f: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn inverse(&self, mut fh: Vec<C64>) -> Vec<f64> {
        self.inv.process(&mut fh);
        let s = 1.0 / self.n as f64;
        fh.into_iter().map(|v| v.re * s).collect()
    }

    /// Multiplies the spectrum by a symbol; the Nyquist mode of odd symbols is zeroed.
    pub fn apply(&self, f: &[f64], symbol: impl Fn(f64) -> C64) -> Vec<f64> {
        let mut fh = self.forward(f);
        for (j, v) in fh.iter_mut().enumerate() {
            *v *= if j == self.n / 2 { symbol(self.xi[j]).re.into() } else { symbol(self.xi[j]) };
        }
        self.inverse(fh)
    }

    pub fn deriv(&self, f: &[f64]) -> Vec<f64> {
        self.apply(f, |k| C64::new(0.0, k))
    }

    pub fn deriv2(&self, f: &[f64]) -> Vec<f64> {
        self.apply(f, |k| C64::new(-k * k, 0.0))
    }

    /// Solves u − u_xx = m.
    pub fn helmholtz_inv(&self, m: &[f64]) -> Vec<f64> {
        self.apply(m, |k| C64::new(1.0 / (1.0 + k * k), 0.0))
    }

    /// G with G' = f and G(−L) = 0 (mean part integrated exactly).
    pub fn antiderivative(&self, f: &[f64]) -> Vec<f64> {
        let mut fh = self.forward(f);
        let mean = fh[0].re / self.n as f64;
        fh[0] = C64::new(0.0, 0.0);
        if self.n.is_multiple_of(2) {
            fh[self.n / 2] = C64::new(0.0, 0.0);
        }
        for (j, v) in fh.iter_mut().enumerate().skip(1) {
            if self.xi[j] != 0.0 {
                *v /= C64::new(0.0, self.xi[j]);
            }
        }
        let per = self.inverse(fh);
        let x = self.x();
        (0..self.n).map(|i| mean * (x[i] + self.l) + per[i] - per[0]).collect()
    }

    /// ∫ over one period by the trapezoidal rule.
    pub fn integral(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() * self.h()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_helmholtz() {
        let sp = Spectral::new(64, std::f64::consts::PI);
        let x = sp.x();
        let f: Vec<f64> = x.iter().map(|x| x.cos()).collect();
        let u = sp.helmholtz_inv(&f);
        let d = sp.deriv(&f);
        for i in 0..64 {
            assert!((u[i] - 0.5 * x[i].cos()).abs() < 1e-14);
            assert!((d[i] + x[i].sin()).abs() < 1e-13);
        }
        let c = sp.helmholtz_inv(&vec![2.5; 64]);
        assert!(c.iter().all(|v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn antiderivative_of_gaussian() {
        let sp = Spectral::new(512, 20.0);
        let x = sp.x();
        let f: Vec<f64> = x.iter().map(|x| (-x * x).exp()).collect();
        let g = sp.antiderivative(&f);
        let total = std::f64::consts::PI.sqrt();
        for (i, xi) in x.iter().enumerate() {
            let want = 0.5 * total * (1.0 + erf(*xi));
            assert!((g[i] - want).abs() < 1e-12, "{xi}");
        }
    }

    fn erf(x: f64) -> f64 {
        // Series plus continued fraction are overkill here; integrate e^{-t²} with Simpson.
        let n = 20000;
        let h = x / n as f64;
        let mut s = 1.0 + (-x * x).exp();
        for i in 1..n {
            let t = i as f64 * h;
            s += (-t * t).exp() * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        2.0 / std::f64::consts::PI.sqrt() * s * h / 3.0
    }
}
