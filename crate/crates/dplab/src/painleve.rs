//! Ablowitz–Segur solutions of Painlevé II, v'' = 2v³ + sv with v ~ a·Ai(s)
//! as s → +∞, together with the tail integral I(s) = ∫ₛ^∞ v².

use crate::airy::{airy_pair, airy_sq_tail};
use crate::error::{Error, Result};
use crate::ode::{integrate, StepControl};
use serde::Serialize;

pub use crate::airy::airy;

/// Seeding point of the downward shooting unless the requested grid reaches higher.
pub const SEED_S: f64 = 12.0;

/// Grid and tolerance options for [`solve_as`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsOptions {
    /// Spacing of the output grid.
    pub ds: f64,
    /// Relative tolerance of the step controller.
    pub rtol: f64,
    /// Absolute tolerance, measured in units of the seed magnitude |a|·Ai(s₀).
    pub atol: f64,
}

impl Default for AsOptions {
    fn default() -> Self {
        AsOptions { ds: 0.01, rtol: 1e-12, atol: 1e-12 }
    }
}

/// Sampled Ablowitz–Segur solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PainleveSolution {
    pub a: f64,
    pub grid: Vec<f64>,
    pub v: Vec<f64>,
    pub v_prime: Vec<f64>,
    /// I(s) = ∫ₛ^∞ v², carried along the integration as I' = −v².
    pub tail: Vec<f64>,
}

fn rhs(s: f64, y: &[f64; 3]) -> [f64; 3] {
    [y[1], 2.0 * y[0].powi(3) + s * y[0], -y[0] * y[0]]
}

/// Integrates downward from s₀ = max(s_max, 12) seeded with a·Ai and returns
/// samples on a uniform grid covering [s_min, s_max].
pub fn solve_as(a: f64, s_min: f64, s_max: f64, opts: AsOptions) -> Result<PainleveSolution> {
    if !(a.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|a| = {} must be < 1 for a bounded Ablowitz-Segur solution",
            a.abs()
        )));
    }
    if !(s_max >= 8.0) || !(s_min < s_max) {
        return Err(Error::Domain(format!("need s_min < s_max and s_max >= 8, got [{s_min}, {s_max}]")));
    }
    let n = ((s_max - s_min) / opts.ds).round().max(1.0) as usize;
    let ds = (s_max - s_min) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| s_min + i as f64 * ds).collect();
    let s0 = s_max.max(SEED_S);
    let (ai, aip) = airy_pair(s0);
    let mut y = [a * ai, a * aip, a * a * airy_sq_tail(s0)];
    let scale = (a * ai).abs().max((a * aip).abs());
    let ctrl = StepControl {
        rtol: opts.rtol,
        atol: opts.atol * scale.max(1e-300),
        h_max: ds,
    };
    let mut v = vec![0.0; n + 1];
    let mut vp = vec![0.0; n + 1];
    let mut tail = vec![0.0; n + 1];
    if a == 0.0 {
        return Ok(PainleveSolution { a, grid, v, v_prime: vp, tail });
    }
    let mut f = rhs;
    let mut s = s0;
    let mut h = ds.min(0.01);
    for i in (0..=n).rev() {
        let (yn, _, hl) = integrate(&mut f, s, y, grid[i], ctrl, h)?;
        y = yn;
        s = grid[i];
        h = hl.max(1e-6);
        v[i] = y[0];
        vp[i] = y[1];
        tail[i] = y[2];
    }
    Ok(PainleveSolution { a, grid, v, v_prime: vp, tail })
}

/// Cubic Hermite interpolation of f on [x0, x1] with endpoint slopes.
fn hermite(x0: f64, x1: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let val = h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1;
    let der = ((6.0 * t2 - 6.0 * t) * f0 + (3.0 * t2 - 4.0 * t + 1.0) * h * d0
        + (-6.0 * t2 + 6.0 * t) * f1
        + (3.0 * t2 - 2.0 * t) * h * d1)
        / h;
    (val, der)
}

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

impl PainleveSolution {
    fn cell(&self, s: f64) -> Result<usize> {
        let n = self.grid.len() - 1;
        let (lo, hi) = (self.grid[0], self.grid[n]);
        if s < lo - 1e-12 || s > hi + 1e-12 {
            return Err(Error::Domain(format!("s = {s} outside the solved grid [{lo}, {hi}]")));
        }
        let ds = (hi - lo) / n as f64;
        Ok((((s - lo) / ds).floor() as usize).min(n - 1))
    }

    /// (v, v', I) at any s on or above the grid; beyond the grid the Airy tail is used.
    pub fn eval(&self, s: f64) -> Result<(f64, f64, f64)> {
        let n = self.grid.len() - 1;
        if s > self.grid[n] {
            let (ai, aip) = airy_pair(s);
            return Ok((self.a * ai, self.a * aip, self.a * self.a * airy_sq_tail(s)));
        }
        let i = self.cell(s)?;
        let (s0, s1) = (self.grid[i], self.grid[i + 1]);
        let acc = |j: usize| 2.0 * self.v[j].powi(3) + self.grid[j] * self.v[j];
        let (v, _) = hermite(s0, s1, self.v[i], self.v[i + 1], self.v_prime[i], self.v_prime[i + 1], s);
        let (vp, _) = hermite(s0, s1, self.v_prime[i], self.v_prime[i + 1], acc(i), acc(i + 1), s);
        let part = self.cell_square_integral(i, s, s1);
        Ok((v, vp, self.tail[i + 1] + part))
    }

    fn cell_square_integral(&self, i: usize, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (s0, s1) = (self.grid[i], self.grid[i + 1]);
        let mut acc = 0.0;
        for (x, w) in GL5_X.iter().zip(GL5_W) {
            let s = 0.5 * (a + b) + 0.5 * (b - a) * x;
            let (v, _) = hermite(s0, s1, self.v[i], self.v[i + 1], self.v_prime[i], self.v_prime[i + 1], s);
            acc += w * v * v;
        }
        0.5 * (b - a) * acc
    }

    /// Maximum of |v'' − 2v³ − sv| over interior nodes, with v'' from
    /// eighth-order central differences of the sampled v'.
    pub fn max_residual(&self) -> f64 {
        let c = [1.0 / 280.0, -4.0 / 105.0, 1.0 / 5.0, -4.0 / 5.0, 0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let n = self.grid.len();
        if n < 9 {
            return 0.0;
        }
        let ds = self.grid[1] - self.grid[0];
        let mut worst = 0.0f64;
        for i in 4..n - 4 {
            let mut d = 0.0;
            for (j, cj) in c.iter().enumerate() {
                d += cj * self.v_prime[i + j - 4];
            }
            d /= ds;
            let r = d - 2.0 * self.v[i].powi(3) - self.grid[i] * self.v[i];
            worst = worst.max(r.abs());
        }
        worst
    }
}

/// I(s) = ∫ₛ^∞ v², by composite Gauss quadrature of the Hermite interpolant of v
/// over the stored grid plus the Airy tail a²(Ai'(s_N)² − s_N Ai(s_N)²) beyond it.
pub fn tail_integral(sol: &PainleveSolution, s: f64) -> Result<f64> {
    let n = sol.grid.len() - 1;
    let top = sol.grid[n];
    let mut acc = sol.a * sol.a * airy_sq_tail(top.max(s));
    if s >= top {
        return Ok(acc);
    }
    let i0 = sol.cell(s)?;
    acc += sol.cell_square_integral(i0, s, sol.grid[i0 + 1]);
    for i in i0 + 1..n {
        acc += sol.cell_square_integral(i, sol.grid[i], sol.grid[i + 1]);
    }
    Ok(acc)
}

/// Envelope amplitude d(a) = (−ln(1 − a²)/π)^{1/2} of v ~ d|s|^{−1/4} cos(·) as s → −∞.
pub fn as_envelope_amplitude(a: f64) -> f64 {
    (-(1.0 - a * a).ln() / std::f64::consts::PI).sqrt()
}

/// Least-squares fit of d in v² + v'²/|s| ≈ d²|s|^{−1/2} over s ∈ [s_lo, s_hi] ⊂ (−∞, 0).
pub fn fit_envelope(sol: &PainleveSolution, s_lo: f64, s_hi: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &s) in sol.grid.iter().enumerate() {
        if s < s_lo || s > s_hi {
            continue;
        }
        let e = sol.v[i].powi(2) + sol.v_prime[i].powi(2) / s.abs();
        let b = s.abs().powf(-0.5);
        num += e * b;
        den += b * b;
    }
    (num / den).sqrt()
}
