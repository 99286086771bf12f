//! Direct scattering for the 3×3 spectral problem Φ̂_x = (qΛ + Û)Φ̂.
//!
//! Jost columns are integrated in gauge form m = Φ̂ e^{−λ_j y}, so only
//! differences λ_i − λ_j appear in the coefficients. On the real k-axis two
//! of the three columns are bounded from each end. The remaining pair of
//! coefficients is read off with cross products of the opposite side's
//! solutions, which solve the adjoint equation χ_x = −(qΛ + Û)ᵀχ and are
//! bounded from their own end.

use crate::error::{Error, Result};
use crate::ode::{integrate, StepControl};
use crate::phase::lambda_roots;
use crate::spectral::Spectral;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

/// Samples of the field on a periodic grid x_i = −L + ih, i < N.
#[derive(Debug, Clone, Serialize)]
pub struct FieldState {
    pub l: f64,
    pub h: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub m: Vec<f64>,
    pub q: Vec<f64>,
    pub q_x: Vec<f64>,
    pub y: Vec<f64>,
    pub time: f64,
}

/// Builds m = u − u_xx, q = (1 + m)^{1/3} and y = x − ∫_x^∞ (q − 1).
pub fn q_of_u(u: &[f64], l: f64, time: f64) -> Result<FieldState> {
    let n = u.len();
    if n < 16 || !n.is_multiple_of(2) {
        return Err(Error::Input(format!("grid size {n} must be even and at least 16")));
    }
    if !(l > 0.0) {
        return Err(Error::Input(format!("half-length {l} must be positive")));
    }
    let sp = Spectral::new(n, l);
    let uxx = sp.deriv2(u);
    let m: Vec<f64> = u.iter().zip(&uxx).map(|(a, b)| a - b).collect();
    let x = sp.x();
    if let Some(i) = m.iter().position(|&v| !(1.0 + v > 0.0)) {
        return Err(Error::Domain(format!(
            "1 + u - u_xx = {} <= 0 at node {i} (x = {})",
            1.0 + m[i],
            x[i]
        )));
    }
    let q: Vec<f64> = m.iter().map(|v| (1.0 + v).cbrt()).collect();
    let q_x = sp.deriv(&q);
    let qm1: Vec<f64> = q.iter().map(|v| v - 1.0).collect();
    let g = sp.antiderivative(&qm1);
    let total = sp.integral(&qm1);
    let y = x.iter().zip(&g).map(|(xi, gi)| xi - (total - gi)).collect();
    Ok(FieldState { l, h: sp.h(), x, u: u.to_vec(), m, q, q_x, y, time })
}

impl FieldState {
    /// State of the undisturbed background u ≡ 0.
    pub fn zero(n: usize, l: f64) -> Result<Self> {
        q_of_u(&vec![0.0; n], l, 0.0)
    }

    /// Index range where |q − 1| or |q_x| exceeds the threshold, padded by
    /// the interpolation stencil. `None` when the datum is trivial.
    pub fn support(&self, threshold: f64) -> Option<(usize, usize)> {
        let active = |i: &usize| (self.q[*i] - 1.0).abs() > threshold || self.q_x[*i].abs() > threshold;
        let n = self.q.len();
        let lo = (0..n).find(active)?;
        let hi = (0..n).rev().find(active)?;
        let pad = STENCIL;
        Some((lo.saturating_sub(pad), (hi + pad).min(n - 1)))
    }

    fn interp(&self, x: f64) -> (f64, f64) {
        let n = self.q.len();
        let s = (x + self.l) / self.h;
        let base = (s.floor() as isize - (STENCIL as isize / 2 - 1)).clamp(0, (n - STENCIL) as isize) as usize;
        let t = s - base as f64;
        let w = uniform_lagrange(t);
        let (mut q, mut qx) = (0.0, 0.0);
        for (j, wj) in w.iter().enumerate() {
            q += wj * self.q[base + j];
            qx += wj * self.q_x[base + j];
        }
        (q, qx)
    }

    /// y at an arbitrary point by the same local interpolation.
    pub fn y_at(&self, x: f64) -> f64 {
        self.sample(&self.y, x)
    }

    /// u at an arbitrary point by the same local interpolation.
    pub fn u_at(&self, x: f64) -> f64 {
        self.sample(&self.u, x)
    }

    fn sample(&self, f: &[f64], x: f64) -> f64 {
        let n = f.len();
        let s = (x + self.l) / self.h;
        let base = (s.floor() as isize - (STENCIL as isize / 2 - 1)).clamp(0, (n - STENCIL) as isize) as usize;
        let w = uniform_lagrange(s - base as f64);
        w.iter().enumerate().map(|(j, wj)| wj * f[base + j]).sum()
    }

    pub fn max_cube_defect(&self) -> f64 {
        self.q.iter().zip(&self.m).map(|(q, m)| (q * q * q - 1.0 - m).abs()).fold(0.0, f64::max)
    }
}

const STENCIL: usize = 8;

/// Lagrange weights for nodes 0..STENCIL at position t.
fn uniform_lagrange(t: f64) -> [f64; STENCIL] {
    let mut w = [1.0; STENCIL];
    for (j, wj) in w.iter_mut().enumerate() {
        for m in 0..STENCIL {
            if m != j {
                *wj *= (t - m as f64) / (j as f64 - m as f64);
            }
        }
    }
    w
}

/// Which end a Jost solution is normalised at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            _ => Err(Error::Input(format!("unknown side '{s}'"))),
        }
    }
}

/// Minimum distance of k from the real singular set {0, ±1}.
pub const EXCLUSION: f64 = 1e-6;

/// k-dependent pieces of the spectral problem.
#[derive(Debug, Clone)]
struct KData {
    lam: [C64; 3],
    /// Û = (q_x/q) A + (1/q − q) B.
    a: Matrix3<C64>,
    b: Matrix3<C64>,
    /// 1/λ_j, the t-phase up to a common term.
    inv_lam: [C64; 3],
}

fn kdata(k: f64) -> Result<KData> {
    if !k.is_finite() || k.abs() < EXCLUSION || (k.abs() - 1.0).abs() < EXCLUSION {
        return Err(Error::Singular(format!("k = {k} lies within {EXCLUSION} of the singular set {{0, ±1}}")));
    }
    let sp = lambda_roots(C64::new(k, 0.0))?;
    let lam = sp.lambdas;
    let one = C64::new(1.0, 0.0);
    let p = Matrix3::new(one, one, one, lam[0], lam[1], lam[2], lam[0] * lam[0], lam[1] * lam[1], lam[2] * lam[2]);
    let pinv = p
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("P(z) is singular at k = {k}")))?;
    let zero = C64::new(0.0, 0.0);
    let mut e13 = Matrix3::from_element(zero);
    e13[(0, 0)] = one;
    e13[(2, 2)] = -one;
    let mut e32 = Matrix3::from_element(zero);
    e32[(2, 1)] = one;
    Ok(KData { lam, a: pinv * e13 * p, b: pinv * e32 * p, inv_lam: [lam[0].inv(), lam[1].inv(), lam[2].inv()] })
}

fn u_hat(kd: &KData, q: f64, qx: f64) -> Matrix3<C64> {
    kd.a * C64::new(qx / q, 0.0) + kd.b * C64::new(1.0 / q - q, 0.0)
}

type V3 = Vector3<C64>;

fn pack(v: &[V3; 2]) -> [f64; 12] {
    let mut out = [0.0; 12];
    for c in 0..2 {
        for i in 0..3 {
            out[6 * c + 2 * i] = v[c][i].re;
            out[6 * c + 2 * i + 1] = v[c][i].im;
        }
    }
    out
}

fn unpack(y: &[f64]) -> [V3; 2] {
    let mut v = [V3::zeros(); 2];
    for c in 0..2 {
        for i in 0..3 {
            v[c][i] = C64::new(y[6 * c + 2 * i], y[6 * c + 2 * i + 1]);
        }
    }
    v
}

/// Integration tolerances and matching options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step, in units of the grid spacing.
    pub max_step_cells: f64,
    /// Threshold on |q − 1| and |q_x| defining the effective support.
    pub support_threshold: f64,
    /// Matching point as a fraction of the support interval.
    pub match_fraction: f64,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions { rtol: 1e-12, atol: 1e-13, max_step_cells: 1.0, support_threshold: 1e-14, match_fraction: 0.5 }
    }
}

impl ScatterOptions {
    fn control(&self, h: f64) -> StepControl {
        StepControl { rtol: self.rtol, atol: self.atol, h_max: self.max_step_cells * h }
    }
}

/// Gauge columns m_j(x) = Φ̂_j e^{−λ_j y} for the two columns indexed by
/// `cols`, integrated from the boundary `from` to `to`.
fn columns(
    kd: &KData,
    state: &FieldState,
    cols: [usize; 2],
    from: f64,
    to: f64,
    ctrl: StepControl,
) -> Result<[V3; 2]> {
    let mut init = [V3::zeros(); 2];
    init[0][cols[0]] = C64::new(1.0, 0.0);
    init[1][cols[1]] = C64::new(1.0, 0.0);
    let mut f = |x: f64, yv: &[f64; 12]| {
        let (q, qx) = state.interp(x);
        let uh = u_hat(kd, q, qx);
        let v = unpack(yv);
        let mut d = [V3::zeros(); 2];
        for c in 0..2 {
            let lj = kd.lam[cols[c]];
            let mut w = uh * v[c];
            for i in 0..3 {
                w[i] += (kd.lam[i] - lj) * q * v[c][i];
            }
            d[c] = w;
        }
        pack(&d)
    };
    let (yend, _, _) = integrate(&mut f, from, pack(&init), to, ctrl, ctrl.h_max)?;
    Ok(unpack(&yend))
}

/// Gauge adjoint vectors n_l = (Φ̂_l × Φ̂_o) e^{−(λ_l + λ_o) y} for the two
/// columns l ≠ o, where o is the column bounded from the same end.
fn adjoints(
    kd: &KData,
    state: &FieldState,
    o: usize,
    ls: [usize; 2],
    from: f64,
    to: f64,
    ctrl: StepControl,
) -> Result<[V3; 2]> {
    let mut init = [V3::zeros(); 2];
    for c in 0..2 {
        let mut el = V3::zeros();
        el[ls[c]] = C64::new(1.0, 0.0);
        let mut eo = V3::zeros();
        eo[o] = C64::new(1.0, 0.0);
        init[c] = el.cross(&eo);
    }
    let mut f = |x: f64, yv: &[f64; 12]| {
        let (q, qx) = state.interp(x);
        let uht = u_hat(kd, q, qx).transpose();
        let v = unpack(yv);
        let mut d = [V3::zeros(); 2];
        for c in 0..2 {
            let shift = kd.lam[ls[c]] + kd.lam[o];
            let mut w = -(uht * v[c]);
            for i in 0..3 {
                w[i] -= (kd.lam[i] + shift) * q * v[c][i];
            }
            d[c] = w;
        }
        pack(&d)
    };
    let (yend, _, _) = integrate(&mut f, from, pack(&init), to, ctrl, ctrl.h_max)?;
    Ok(unpack(&yend))
}

/// Samples of the bounded gauge Jost columns on the grid nodes inside the support.
#[derive(Debug, Clone, Serialize)]
pub struct JostSamples {
    pub k: f64,
    pub side: Side,
    /// Column indices (0-based) that are bounded from this side.
    pub columns: [usize; 2],
    pub x: Vec<f64>,
    /// m[node][c][i]: component i of column `columns[c]`.
    pub m: Vec<[[C64; 3]; 2]>,
}

/// Columns of M bounded from the chosen end, normalised to the identity there.
pub fn jost(k: f64, state: &FieldState, side: Side) -> Result<JostSamples> {
    jost_with(k, state, side, ScatterOptions::default())
}

pub fn jost_with(k: f64, state: &FieldState, side: Side, opts: ScatterOptions) -> Result<JostSamples> {
    let kd = kdata(k)?;
    // For k > 0 the third column dominates to the right, so columns 1, 2 are
    // bounded from +∞ and column 3 alone from −∞; k < 0 swaps the ends.
    let from_plus = (k > 0.0) == (side == Side::Plus);
    let columns = if from_plus { [0, 1] } else { [2, 2] };
    let ctrl = opts.control(state.h);
    let n = state.x.len();
    let (lo, hi) = state.support(opts.support_threshold).unwrap_or((0, 0));
    let idx: Vec<usize> = if side == Side::Plus { (lo..=hi).rev().collect() } else { (lo..=hi).collect() };
    let mut x = Vec::with_capacity(idx.len());
    let mut m = Vec::with_capacity(idx.len());
    let start = if side == Side::Plus { state.x[hi.min(n - 1)] } else { state.x[lo] };
    let mut cur = start;
    let mut vals = [V3::zeros(); 2];
    vals[0][columns[0]] = C64::new(1.0, 0.0);
    vals[1][columns[1]] = C64::new(1.0, 0.0);
    for &i in &idx {
        let xi = state.x[i];
        if xi != cur {
            vals = columns_from(&kd, state, columns, vals, cur, xi, ctrl)?;
            cur = xi;
        }
        x.push(xi);
        m.push([[vals[0][0], vals[0][1], vals[0][2]], [vals[1][0], vals[1][1], vals[1][2]]]);
    }
    Ok(JostSamples { k, side, columns, x, m })
}

fn columns_from(
    kd: &KData,
    state: &FieldState,
    cols: [usize; 2],
    init: [V3; 2],
    from: f64,
    to: f64,
    ctrl: StepControl,
) -> Result<[V3; 2]> {
    let mut f = |x: f64, yv: &[f64; 12]| {
        let (q, qx) = state.interp(x);
        let uh = u_hat(kd, q, qx);
        let v = unpack(yv);
        let mut d = [V3::zeros(); 2];
        for c in 0..2 {
            let lj = kd.lam[cols[c]];
            let mut w = uh * v[c];
            for i in 0..3 {
                w[i] += (kd.lam[i] - lj) * q * v[c][i];
            }
            d[c] = w;
        }
        pack(&d)
    };
    let (yend, _, _) = integrate(&mut f, from, pack(&init), to, ctrl, ctrl.h_max)?;
    Ok(unpack(&yend))
}

/// 2×2 scattering block S with Φ̂⁻ = Φ̂⁺ S on the two columns bounded from
/// +∞ (for k > 0), modulo the dominant third solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringBlock {
    pub k: f64,
    pub s: [[C64; 2]; 2],
    pub x_match: f64,
}

impl ScatteringBlock {
    pub fn r(&self) -> C64 {
        self.s[0][1] / self.s[0][0]
    }
}

/// S(k) from a matching point at `x_match`.
pub fn scattering_block(k: f64, state: &FieldState, x_match: Option<f64>, opts: ScatterOptions) -> Result<ScatteringBlock> {
    let kd = kdata(k)?;
    let one = C64::new(1.0, 0.0);
    let Some((lo, hi)) = state.support(opts.support_threshold) else {
        return Ok(ScatteringBlock { k, s: [[one, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), one]], x_match: 0.0 });
    };
    let (xl, xr) = (state.x[lo], state.x[hi]);
    let xm = x_match.unwrap_or(xl + opts.match_fraction * (xr - xl));
    if !(xl..=xr).contains(&xm) {
        return Err(Error::Input(format!("matching point {xm} outside support [{xl}, {xr}]")));
    }
    let ctrl = opts.control(state.h);
    // Columns 1, 2 come from the end where they are bounded; the adjoint pair
    // from the other end uses column 3 of that end.
    let (col_from, adj_from) = if k > 0.0 { (xr, xl) } else { (xl, xr) };
    let f = columns(&kd, state, [0, 1], col_from, xm, ctrl)?;
    let nv = adjoints(&kd, state, 2, [0, 1], adj_from, xm, ctrl)?;
    let y = state.y_at(xm);
    let t = state.time;
    // Triple products of the adjoint pair with column j give the expansion
    // coefficients of column j in the opposite basis.
    let phase = |j: usize, i: usize| ((kd.lam[j] - kd.lam[i]) * y + (kd.inv_lam[j] - kd.inv_lam[i]) * t).exp();
    let dot = |a: &V3, b: &V3| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut c = [[C64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        c[0][j] = dot(&f[j], &nv[1]) * phase(j, 0);
        c[1][j] = -dot(&f[j], &nv[0]) * phase(j, 1);
    }
    // For k > 0, c maps the far-right basis onto the far-left one, S = c⁻¹;
    // for k < 0 the roles are exchanged and S = c.
    let s = if k > 0.0 {
        let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        if det.norm() < 1e-300 {
            return Err(Error::Singular(format!("degenerate matching matrix at k = {k}")));
        }
        [[c[1][1] / det, -c[0][1] / det], [-c[1][0] / det, c[0][0] / det]]
    } else {
        c
    };
    if s[0][0].norm() < 1e-10 {
        return Err(Error::Singular(format!("spectral singularity: |S11| = {:e} at k = {k}", s[0][0].norm())));
    }
    Ok(ScatteringBlock { k, s, x_match: xm })
}

/// Reflection samples and the settings that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSamples {
    pub k_grid: Vec<f64>,
    pub r: Vec<C64>,
    pub options: ScatterOptions,
    pub time: f64,
}

impl ScatteringSamples {
    pub fn abs(&self) -> Vec<f64> {
        self.r.iter().map(|v| v.norm()).collect()
    }

    /// Largest node-to-node jump relative to the local modulus.
    pub fn max_relative_jump(&self) -> f64 {
        self.r
            .windows(2)
            .map(|w| (w[1] - w[0]).norm() / w[0].norm().max(w[1].norm()).max(1e-300))
            .fold(0.0, f64::max)
    }
}

/// r(k) = S₁₂/S₁₁ on a real grid, in parallel over k.
pub fn reflection(k_grid: &[f64], state: &FieldState) -> Result<ScatteringSamples> {
    reflection_with(k_grid, state, ScatterOptions::default())
}

pub fn reflection_with(k_grid: &[f64], state: &FieldState, opts: ScatterOptions) -> Result<ScatteringSamples> {
    let r = k_grid
        .par_iter()
        .map(|&k| scattering_block(k, state, None, opts).map(|b| b.r()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScatteringSamples { k_grid: k_grid.to_vec(), r, options: opts, time: state.time })
}

/// r at a point of the singular set (k = ±1) as the limit from both sides:
/// the two one-sided values at distances δ, δ/2 are Richardson-extrapolated
/// and averaged. Returns the limit and the one-sided disagreement.
pub fn reflection_limit(k0: f64, state: &FieldState, delta: f64, opts: ScatterOptions) -> Result<(C64, f64)> {
    let side = |sgn: f64| -> Result<C64> {
        let a = scattering_block(k0 + sgn * delta, state, None, opts)?.r();
        let b = scattering_block(k0 + sgn * delta / 2.0, state, None, opts)?.r();
        Ok(b * 2.0 - a)
    };
    let (p, m) = (side(1.0)?, side(-1.0)?);
    Ok(((p + m) * 0.5, (p - m).norm()))
}

/// Smooth datum ε·exp(−(x/w)²) sampled on an N-point grid of half-length L.
pub fn gaussian_datum(n: usize, l: f64, amplitude: f64, width: f64) -> Vec<f64> {
    let h = 2.0 * l / n as f64;
    (0..n)
        .map(|i| {
            let x = -l + i as f64 * h;
            let v = amplitude * (-(x / width).powi(2)).exp();
            if v.abs() < 1e-300 {
                0.0
            } else {
                v
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(eps: f64) -> FieldState {
        q_of_u(&gaussian_datum(1024, 20.0, eps, 2.0), 20.0, 0.0).unwrap()
    }

    #[test]
    fn zero_datum_is_reflectionless() {
        let s = FieldState::zero(256, 20.0).unwrap();
        assert!(s.q.iter().all(|q| *q == 1.0));
        assert!(s.x.iter().zip(&s.y).all(|(x, y)| (x - y).abs() < 1e-14));
        let r = reflection(&[0.3, 0.8, 1.7, -0.5, -2.0], &s).unwrap();
        assert!(r.r.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn cube_identity_and_small_amplitude() {
        let eps = 1e-3;
        let s = state(eps);
        assert!(s.max_cube_defect() <= 1e-13);
        let dev = s.q.iter().zip(&s.m).map(|(q, m)| (q - 1.0 - m / 3.0).abs()).fold(0.0, f64::max);
        let mmax = s.m.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(dev <= 0.2 * mmax * mmax, "{dev} {mmax}");
        let right = s.x.len() - 1;
        assert!((s.y[right] - s.x[right]).abs() < 1e-14);
    }

    #[test]
    fn positivity_violation_names_node() {
        let u = gaussian_datum(256, 10.0, -3.0, 0.3);
        match q_of_u(&u, 10.0, 0.0) {
            Err(Error::Domain(msg)) => assert!(msg.contains("node")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_set_is_excluded() {
        let s = state(0.1);
        for k in [0.0, 1.0, -1.0, 1.0 + 5e-7] {
            assert!(matches!(scattering_block(k, &s, None, ScatterOptions::default()), Err(Error::Singular(_))));
        }
    }

    #[test]
    fn matching_point_independence() {
        let s = state(-0.25);
        let (lo, hi) = s.support(1e-14).unwrap();
        let (xl, xr) = (s.x[lo], s.x[hi]);
        for k in [0.4, 2.2, 1.3, -0.7, -1.9] {
            let a = scattering_block(k, &s, Some(xl + 0.3 * (xr - xl)), ScatterOptions::default()).unwrap().r();
            let b = scattering_block(k, &s, Some(xl + 0.7 * (xr - xl)), ScatterOptions::default()).unwrap().r();
            assert!((a - b).norm() <= 1e-8, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn halved_step_is_stable() {
        let s = state(-0.25);
        let fine = ScatterOptions { max_step_cells: 0.5, ..Default::default() };
        for k in [0.6, 2.0] {
            let a = scattering_block(k, &s, None, ScatterOptions::default()).unwrap().r();
            let b = scattering_block(k, &s, None, fine).unwrap().r();
            assert!((a - b).norm() <= 1e-8);
        }
    }

    #[test]
    fn jost_boundary_normalisation() {
        let s = state(0.2);
        for side in [Side::Plus, Side::Minus] {
            let j = jost(0.8, &s, side).unwrap();
            let first = j.m[0];
            for c in 0..2 {
                for i in 0..3 {
                    let want = if i == j.columns[c] { 1.0 } else { 0.0 };
                    assert!((first[c][i] - want).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn born_limit_converges() {
        let ks = [0.5, 1.5, 2.5];
        let ratio = |eps: f64| reflection(&ks, &state(eps)).unwrap().r.iter().map(|r| r / eps).collect::<Vec<_>>();
        let (a, b, c) = (ratio(1e-2), ratio(5e-3), ratio(2.5e-3));
        for i in 0..ks.len() {
            let lim1 = b[i] * 2.0 - a[i];
            let lim2 = c[i] * 2.0 - b[i];
            assert!((lim1 - lim2).norm() <= 1e-4, "{} {}", lim1, lim2);
            assert!(lim2.norm() > 1e-3);
        }
    }
}
