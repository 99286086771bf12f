//! Spectral parametrisation, the phase function θ₁₂ and the scaling charts of
//! the two Painlevé transition zones.
//!
//! With ω = e^{2πi/3} the branches are λ_j(k) = (ω^j k + 1/(ω^j k))/√3 and
//! θ₁₂(k; ξ̂) = −i[ξ̂(λ₁ − λ₂) + (1/λ₁ − 1/λ₂)], which on the real line reduces to
//! (k − 1/k)(ξ̂ − 3/(k² + k⁻² − 1)).

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// e^{2πi/3}.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// Critical ray of the first transition zone.
pub const XI_T1: f64 = -0.375;
/// Critical ray of the second transition zone.
pub const XI_T2: f64 = 3.0;

/// (√7 + √3)/2, the positive merged point of the first zone with |k| > 1.
pub fn k_t1() -> f64 {
    (7f64.sqrt() + 3f64.sqrt()) / 2.0
}

/// ĉ_a = 3^{2/3} 2^{-8/3} (98 − 21√21)^{1/3}.
pub fn c_hat_a() -> f64 {
    3f64.powf(2.0 / 3.0) / 2f64.powf(8.0 / 3.0) * (98.0 - 21.0 * 21f64.sqrt()).cbrt()
}

/// ĉ_b = 3^{2/3} 2^{-8/3} (98 + 21√21)^{1/3}.
pub fn c_hat_b() -> f64 {
    3f64.powf(2.0 / 3.0) / 2f64.powf(8.0 / 3.0) * (98.0 + 21.0 * 21f64.sqrt()).cbrt()
}

/// Coefficient of (ξ̂ + 3/8) t^{2/3} in the first-zone variable s.
pub fn s_coeff_t1() -> f64 {
    2f64.powf(2.0 / 3.0) * (-7.0 + 21f64.sqrt())
        / (3f64.powf(2.0 / 3.0) * (98.0 - 21.0 * 21f64.sqrt()).cbrt())
}

/// ĉ for both points of the second zone.
pub fn c_hat_t2() -> f64 {
    3f64.powf(2.0 / 3.0)
}

/// Coefficient of (ξ̂ − 3) t^{2/3} in the second-zone variable s.
pub fn s_coeff_t2() -> f64 {
    3f64.powf(-2.0 / 3.0)
}

/// Spectral data attached to a value of the uniformising parameter k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub k: C64,
    pub lambdas: [C64; 3],
    pub z: C64,
}

/// λ₁, λ₂, λ₃ and z at k.
pub fn lambda_roots(k: C64) -> Result<SpectralPoint> {
    if k.norm() == 0.0 || !k.re.is_finite() || !k.im.is_finite() {
        return Err(Error::Domain(format!("lambda_j has a pole at k = {k}")));
    }
    let w = omega();
    let s3 = 3f64.sqrt();
    let mut wj = C64::new(1.0, 0.0);
    let mut lambdas = [C64::new(0.0, 0.0); 3];
    for l in lambdas.iter_mut() {
        wj *= w;
        let a = wj * k;
        *l = (a + a.inv()) / s3;
    }
    let z = k / s3 * (C64::new(1.0, 0.0) + k.powi(-6)).powf(1.0 / 3.0);
    Ok(SpectralPoint { k, lambdas, z })
}

/// θ₁₂(k; ξ̂) from the diagonal difference of the phase matrix.
pub fn theta12(k: C64, xi_hat: f64) -> Result<C64> {
    let sp = lambda_roots(k)?;
    let [l1, l2, _] = sp.lambdas;
    if (l1 * l2).norm() < 1e-300 {
        return Err(Error::Singular(format!("lambda_1 lambda_2 = 0 at k = {k}")));
    }
    let i = C64::i();
    Ok(-i * (xi_hat * (l1 - l2) + (l1.inv() - l2.inv())))
}

/// Closed form (k − 1/k)(ξ̂ − 3/(k² + k⁻² − 1)).
pub fn theta12_closed(k: C64, xi_hat: f64) -> C64 {
    let ki = k.inv();
    (k - ki) * (xi_hat - 3.0 / (k * k + ki * ki - 1.0))
}

/// Truncated Taylor series a₀ + a₁ε + a₂ε² + a₃ε³.
#[derive(Debug, Clone, Copy)]
struct Jet([f64; 4]);

impl Jet {
    fn var(x: f64) -> Self {
        Jet([x, 1.0, 0.0, 0.0])
    }
    fn cst(x: f64) -> Self {
        Jet([x, 0.0, 0.0, 0.0])
    }
    fn add(self, o: Jet) -> Jet {
        let mut r = [0.0; 4];
        for (i, v) in r.iter_mut().enumerate() {
            *v = self.0[i] + o.0[i];
        }
        Jet(r)
    }
    fn scale(self, c: f64) -> Jet {
        Jet(self.0.map(|v| v * c))
    }
    fn mul(self, o: Jet) -> Jet {
        let mut r = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 - i {
                r[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(r)
    }
    fn recip(self) -> Jet {
        let a = self.0;
        let mut r = [0.0; 4];
        r[0] = 1.0 / a[0];
        for n in 1..4 {
            let mut acc = 0.0;
            for j in 1..=n {
                acc += a[j] * r[n - j];
            }
            r[n] = -acc / a[0];
        }
        Jet(r)
    }
}

fn theta12_jet(k: f64, xi_hat: f64) -> Jet {
    let kk = Jet::var(k);
    let ki = kk.recip();
    let w = kk.add(ki.scale(-1.0));
    let d = w.mul(w).add(Jet::cst(1.0));
    w.mul(Jet::cst(xi_hat).add(d.recip().scale(-3.0)))
}

/// ∂ⁿθ₁₂/∂kⁿ on the real line, n ∈ {1, 2, 3}, by exact Taylor arithmetic.
pub fn theta12_derivs(k: f64, xi_hat: f64, order: usize) -> Result<f64> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order {order} not in 1..=3")));
    }
    if k == 0.0 {
        return Err(Error::Domain("theta12 has a pole at k = 0".into()));
    }
    let j = theta12_jet(k, xi_hat);
    let fact = [1.0, 1.0, 2.0, 6.0];
    Ok(j.0[order] * fact[order])
}

/// Same derivatives by Richardson-extrapolated central differences of θ₁₂
/// evaluated through the λ-branches.
pub fn theta12_derivs_fd(k: f64, xi_hat: f64, order: usize) -> Result<f64> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order {order} not in 1..=3")));
    }
    let f = |x: f64| -> Result<f64> { Ok(theta12(C64::new(x, 0.0), xi_hat)?.re) };
    let stencil = |h: f64| -> Result<f64> {
        Ok(match order {
            1 => (f(k + h)? - f(k - h)?) / (2.0 * h),
            2 => (f(k + h)? - 2.0 * f(k)? + f(k - h)?) / (h * h),
            _ => (f(k + 2.0 * h)? - 2.0 * f(k + h)? + 2.0 * f(k - h)? - f(k - 2.0 * h)?) / (2.0 * h * h * h),
        })
    };
    let h0 = 0.1 * k.abs().min(1.0 / k.abs()).max(1e-3) * [1.0, 2.0, 3.0][order - 1];
    // Romberg tableau in h²; keep the diagonal entry where successive estimates agree best.
    let levels = 8usize;
    let mut t: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..levels {
        let mut row = vec![stencil(h0 / 2f64.powi(i as i32))?];
        for j in 1..=i {
            let p = 4f64.powi(j as i32);
            let v = (p * row[j - 1] - t[i - 1][j - 1]) / (p - 1.0);
            row.push(v);
        }
        if i > 0 {
            let d = (row[i] - t[i - 1][i - 1]).abs();
            if d < best.0 {
                best = (d, row[i]);
            }
        }
        t.push(row);
    }
    Ok(best.1)
}

/// Outcome of the real saddle search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SaddleSet {
    /// Simple real roots of ∂θ₁₂/∂k, sorted in descending order.
    Regular(Vec<f64>),
    /// Saddles have merged (or left the real line); carries the double-root locations.
    Degenerate { merged: Vec<f64> },
}

impl SaddleSet {
    pub fn points(&self) -> &[f64] {
        match self {
            SaddleSet::Regular(v) => v,
            SaddleSet::Degenerate { merged } => merged,
        }
    }
}

fn dtheta(k: f64, xi_hat: f64) -> f64 {
    theta12_jet(k, xi_hat).0[1]
}

fn polish(mut a: f64, mut b: f64, xi_hat: f64) -> f64 {
    let mut fa = dtheta(a, xi_hat);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let j = theta12_jet(x, xi_hat);
        let (f, df) = (j.0[1], 2.0 * j.0[2]);
        if f == 0.0 {
            return x;
        }
        if (f < 0.0) == (fa < 0.0) {
            a = x;
            fa = f;
        } else {
            b = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Real saddle points of θ₁₂(·; ξ̂), found by sign-change bracketing on a
/// logarithmic grid followed by safeguarded Newton polishing.
pub fn saddle_points(xi_hat: f64) -> SaddleSet {
    if (xi_hat - XI_T2).abs() < 1e-10 || xi_hat > XI_T2 {
        return SaddleSet::Degenerate { merged: vec![1.0, -1.0] };
    }
    if (xi_hat - XI_T1).abs() < 1e-10 || xi_hat < XI_T1 {
        let ka = k_t1();
        return SaddleSet::Degenerate { merged: vec![ka, 1.0 / ka, -1.0 / ka, -ka] };
    }
    let n = 20_000;
    let mut grid: Vec<f64> = (0..=n)
        .map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / n as f64))
        .collect();
    // Extra resolution where pairs of saddles coalesce.
    for &km in &[1.0, k_t1(), 1.0 / k_t1()] {
        for e in 0..=400 {
            let d = 10f64.powf(-9.0 + 8.0 * e as f64 / 400.0);
            grid.push(km * (1.0 + d));
            grid.push(km * (1.0 - d));
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut pos = Vec::new();
    let mut prev = (grid[0], dtheta(grid[0], xi_hat));
    for &k in &grid[1..] {
        let f = dtheta(k, xi_hat);
        if f == 0.0 {
            pos.push(k);
        } else if (f < 0.0) != (prev.1 < 0.0) && prev.1 != 0.0 {
            pos.push(polish(prev.0, k, xi_hat));
        }
        prev = (k, f);
    }
    let mut all: Vec<f64> = pos.iter().copied().chain(pos.iter().map(|k| -k)).collect();
    all.sort_by(|a, b| b.partial_cmp(a).unwrap());
    SaddleSet::Regular(all)
}

/// Transition zones handled by the charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Zone {
    T1,
    T2,
    /// Non-transition neighbourhood of ξ̂ = 0, used only for scaling checks.
    T3Check,
}

impl Zone {
    pub fn critical_xi(self) -> f64 {
        match self {
            Zone::T1 => XI_T1,
            Zone::T2 => XI_T2,
            Zone::T3Check => 0.0,
        }
    }

    /// Merged points in the order a, b, c, d (first zone) or a, b (second zone).
    pub fn merged(self) -> Vec<f64> {
        match self {
            Zone::T1 => {
                let ka = k_t1();
                vec![ka, 1.0 / ka, -1.0 / ka, -ka]
            }
            Zone::T2 => vec![1.0, -1.0],
            Zone::T3Check => vec![],
        }
    }

    /// ĉ_j in the same order as [`Zone::merged`].
    pub fn c_coeffs(self) -> Vec<f64> {
        match self {
            Zone::T1 => vec![c_hat_a(), c_hat_b(), c_hat_b(), c_hat_a()],
            Zone::T2 => vec![c_hat_t2(), c_hat_t2()],
            Zone::T3Check => vec![],
        }
    }

    /// Multiplier of (ξ̂ − ξ_c) t^{2/3} in s.
    pub fn s_coeff(self) -> f64 {
        match self {
            Zone::T1 => s_coeff_t1(),
            Zone::T2 => s_coeff_t2(),
            Zone::T3Check => 0.0,
        }
    }

    /// +1 when the cubic model reads +(8/3)k̂³ + 2sk̂, −1 for −(8/3)k̂³ − 2sk̂.
    pub fn cubic_sign(self) -> f64 {
        match self {
            Zone::T2 => 1.0,
            _ => -1.0,
        }
    }
}

impl std::str::FromStr for Zone {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Zone::T1),
            "t2" => Ok(Zone::T2),
            "t3" | "t3-check" => Ok(Zone::T3Check),
            _ => Err(Error::Input(format!("unknown zone '{s}'"))),
        }
    }
}

/// Default half-width C of a zone in the inequality |ξ̂ − ξ_c| t^{2/3} < C.
pub const DEFAULT_ZONE_C: f64 = 10.0;

/// Saddle geometry and chart constants at a space-time point of a zone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseContext {
    pub xi_hat: f64,
    pub zone: Zone,
    pub saddles: SaddleSet,
    pub merged: Vec<f64>,
    pub c_coeffs: Vec<f64>,
    /// s = s_coeff · (ξ̂ − ξ_c) · t^{2/3}.
    pub s_coeff: f64,
    pub t: f64,
    pub s: f64,
}

impl PhaseContext {
    /// s at another (y, t) with the same chart.
    pub fn s_of(&self, y: f64, t: f64) -> f64 {
        self.s_coeff * (y / t - self.zone.critical_xi()) * t.powf(2.0 / 3.0)
    }
}

/// Chart of `zone` at (y, t) with the default zone half-width.
pub fn scaling_chart(zone: Zone, y: f64, t: f64) -> Result<PhaseContext> {
    scaling_chart_with(zone, y, t, DEFAULT_ZONE_C)
}

/// Chart of `zone` at (y, t), rejecting points with |ξ̂ − ξ_c| t^{2/3} ≥ c_bound.
pub fn scaling_chart_with(zone: Zone, y: f64, t: f64, c_bound: f64) -> Result<PhaseContext> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if zone == Zone::T3Check {
        return Err(Error::Zone("the T3 neighbourhood carries no Painleve chart".into()));
    }
    let xi_hat = y / t;
    let dev = (xi_hat - zone.critical_xi()).abs() * t.powf(2.0 / 3.0);
    if dev >= c_bound {
        return Err(Error::Zone(format!(
            "|xi - ({})| t^(2/3) = {dev} violates the bound C = {c_bound}",
            zone.critical_xi()
        )));
    }
    let s_coeff = zone.s_coeff();
    Ok(PhaseContext {
        xi_hat,
        zone,
        saddles: saddle_points(xi_hat),
        merged: zone.merged(),
        c_coeffs: zone.c_coeffs(),
        s_coeff,
        t,
        s: s_coeff * (xi_hat - zone.critical_xi()) * t.powf(2.0 / 3.0),
    })
}

/// |tθ₁₂(k) − [tθ₁₂(k_m) ∓ (8/3)k̂³ ∓ 2sk̂]| about the merged point nearest to k.
pub fn expansion_residual(zone: Zone, k: f64, y: f64, t: f64) -> Result<f64> {
    if zone == Zone::T3Check {
        return Err(Error::Zone("no cubic model in the T3 neighbourhood".into()));
    }
    let xi_hat = y / t;
    let merged = zone.merged();
    let cs = zone.c_coeffs();
    let (idx, _) = merged
        .iter()
        .enumerate()
        .map(|(i, m)| (i, (k - m).abs()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let km = merged[idx];
    let kh = cs[idx] * t.cbrt() * (k - km);
    let s = zone.s_coeff() * (xi_hat - zone.critical_xi()) * t.powf(2.0 / 3.0);
    let th = |x: f64| theta12_closed(C64::new(x, 0.0), xi_hat).re;
    let model = t * th(km) + zone.cubic_sign() * (8.0 / 3.0 * kh.powi(3) + 2.0 * s * kh);
    Ok((t * th(k) - model).abs())
}

/// Sign of Im θ₁₂(k; ξ̂), with a relative dead band at round-off level.
pub fn signature(k: C64, xi_hat: f64) -> Result<i8> {
    let th = theta12(k, xi_hat)?;
    let tol = 1e-13 * (1.0 + th.norm());
    Ok(if th.im > tol {
        1
    } else if th.im < -tol {
        -1
    } else {
        0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn lambda_at_one() {
        let sp = lambda_roots(c(1.0)).unwrap();
        let s3 = 3f64.sqrt();
        assert!((sp.lambdas[0] - c(-1.0 / s3)).norm() < 1e-15);
        assert!((sp.lambdas[1] - c(-1.0 / s3)).norm() < 1e-15);
        assert!((sp.lambdas[2] - c(2.0 / s3)).norm() < 1e-15);
        let l3 = sp.lambdas[2];
        assert!((l3 * l3 * l3 - l3 - sp.z.powi(3)).norm() < 1e-14);
        assert!((sp.z.powi(3).re - 2.0 / (3.0 * s3)).abs() < 1e-14);
    }

    #[test]
    fn lambda_rejects_zero() {
        assert!(matches!(lambda_roots(c(0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_matches_branch_definition() {
        for &(re, im) in &[(2.0, 0.0), (0.3, 0.7), (-1.7, 0.2), (0.9, -1.3), (3.1, 2.2)] {
            for &xi in &[-0.375, 0.0, 1.2, 3.0] {
                let k = C64::new(re, im);
                let a = theta12(k, xi).unwrap();
                let b = theta12_closed(k, xi);
                assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{k} {xi}");
            }
        }
    }

    #[test]
    fn anchor_values() {
        let th = theta12(c(k_t1()), -0.375).unwrap();
        assert!((th.re + 9.0 * 3f64.sqrt() / 8.0).abs() < 1e-13);
        assert!(theta12(c(1.0), 0.7).unwrap().norm() < 1e-14);
        assert!((theta12(c(2.0), 0.0).unwrap().re + 18.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_routes_agree() {
        for &k in &[0.4, 0.8, 1.3, 2.5, k_t1(), 1.0 / k_t1()] {
            for &xi in &[-0.375, -0.1, 0.5, 3.0] {
                for order in 1..=3 {
                    let a = theta12_derivs(k, xi, order).unwrap();
                    let b = theta12_derivs_fd(k, xi, order).unwrap();
                    assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "k={k} xi={xi} n={order}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn merge_point_derivatives_vanish() {
        let ka = k_t1();
        for k in [ka, 1.0 / ka, -ka, -1.0 / ka] {
            assert!(theta12_derivs(k, -0.375, 1).unwrap().abs() < 1e-13);
            assert!(theta12_derivs(k, -0.375, 2).unwrap().abs() < 1e-11);
        }
        assert!(theta12_derivs(1.0, 3.0, 1).unwrap().abs() < 1e-14);
        assert!(theta12_derivs(1.0, 3.0, 2).unwrap().abs() < 1e-13);
        assert!((theta12_derivs(1.0, 3.0, 3).unwrap() - 144.0).abs() < 1e-10);
    }

    /// Saddles solve ξ̂p² + (2ξ̂+3)p + ξ̂ − 3 = 0 with p = (k − 1/k)².
    fn saddles_oracle(xi: f64) -> Vec<f64> {
        let (a, b, cc) = (xi, 2.0 * xi + 3.0, xi - 3.0);
        let ps: Vec<f64> = if a == 0.0 {
            vec![-cc / b]
        } else {
            let d = (b * b - 4.0 * a * cc).sqrt();
            vec![(-b + d) / (2.0 * a), (-b - d) / (2.0 * a)]
        };
        let mut out = Vec::new();
        for p in ps.into_iter().filter(|p| *p > 0.0) {
            for w in [p.sqrt(), -p.sqrt()] {
                let r = (w * w + 4.0).sqrt();
                out.push((w + r) / 2.0);
                out.push((w - r) / 2.0);
            }
        }
        out.sort_by(|a, b| b.partial_cmp(a).unwrap());
        out
    }

    #[test]
    fn saddles_match_quadratic_oracle() {
        for &xi in &[-0.37, -0.2, -0.01, 0.0, 0.5, 2.0, 2.99, 3.0 - 1e-6] {
            let got = saddle_points(xi);
            let want = saddles_oracle(xi);
            let pts = got.points();
            assert_eq!(pts.len(), want.len(), "xi={xi}");
            for (g, w) in pts.iter().zip(&want) {
                assert!((g - w).abs() < 1e-9 * w.abs().max(1.0), "xi={xi}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn degenerate_outside() {
        assert!(matches!(saddle_points(3.0), SaddleSet::Degenerate { .. }));
        assert!(matches!(saddle_points(-0.5), SaddleSet::Degenerate { .. }));
    }

    #[test]
    fn chart_constants() {
        // Both identities ĉ³ = −θ'''/16 (first zone) and ĉ³ = +θ'''/16 (second zone).
        let ka = k_t1();
        let ca = c_hat_a();
        let cb = c_hat_b();
        let t3a = theta12_derivs(ka, -0.375, 3).unwrap();
        let t3b = theta12_derivs(1.0 / ka, -0.375, 3).unwrap();
        assert!((ca.powi(3) + t3a / 16.0).abs() < 1e-12);
        assert!((cb.powi(3) + t3b / 16.0).abs() < 1e-11 * cb.powi(3));
        assert!((c_hat_t2().powi(3) - theta12_derivs(1.0, 3.0, 3).unwrap() / 16.0).abs() < 1e-12);
        assert!((s_coeff_t1() + 1.5262856567377758).abs() < 1e-13);
        // The linear term of the expansion fixes s consistently at k_a and k_b.
        let sa = -(1.0 + 1.0 / (ka * ka)) / (2.0 * ca);
        let sb = -(1.0 + ka * ka) / (2.0 * cb);
        assert!((sa - s_coeff_t1()).abs() < 1e-12);
        assert!((sb - s_coeff_t1()).abs() < 1e-12);
    }

    #[test]
    fn chart_zone_guard() {
        let ctx = scaling_chart(Zone::T2, 3.0 * 50.0, 50.0).unwrap();
        assert_eq!(ctx.s, 0.0);
        assert!(matches!(scaling_chart(Zone::T2, 0.0, 50.0), Err(Error::Zone(_))));
    }

    #[test]
    fn expansion_residual_scalings() {
        let t = 1000.0;
        let y = -0.375 * t;
        let ka = k_t1();
        assert!(expansion_residual(Zone::T1, ka, y, t).unwrap() < 1e-9);
        let r1 = expansion_residual(Zone::T1, ka + 0.02, y, t).unwrap();
        let r2 = expansion_residual(Zone::T1, ka + 0.01, y, t).unwrap();
        let ratio = r1 / r2;
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }

    #[test]
    fn signature_symmetry() {
        let k = C64::new(1.7, 0.3);
        let s = signature(k, 0.5).unwrap();
        assert_eq!(signature(k.conj(), 0.5).unwrap(), -s);
        assert_eq!(signature(c(2.3), 0.5).unwrap(), 0);
    }
}
