//! Leading-order transition-zone asymptotics: local Painlevé coefficients,
//! the ω-symmetrised pole sums E(k), and u ≈ t^{-1/3} ∂_t Σ_j (E_{j2} − E_{j1})
//! evaluated at k = e^{iπ/6}.

use crate::error::{Error, Result};
use crate::painleve::{solve_as, AsOptions, PainleveSolution};
use crate::phase::{omega, saddle_points, theta12_closed, theta12_derivs, SaddleSet, Zone};
use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::Serialize;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Evaluation point e^{iπ/6}.
pub fn kappa() -> C64 {
    C64::from_polar(1.0, std::f64::consts::PI / 6.0)
}

/// Inputs and value of one local coefficient M_j^{(1)}(s).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalCoefficient {
    pub zone: Zone,
    pub label: char,
    pub s: f64,
    pub phi: f64,
    pub v: f64,
    pub tail: f64,
    pub value: Matrix3<C64>,
}

/// (i/2)[[−I, v e^{−iφ}, 0], [−v e^{iφ}, I, 0], [0, 0, 0]] in the first zone;
/// (i/2)[[I, −v e^{iφ}, 0], [v e^{−iφ}, −I, 0], [0, 0, 0]] in the second.
pub fn local_matrix(zone: Zone, phi: f64, v: f64, tail: f64) -> Result<Matrix3<C64>> {
    let half_i = c(0.0, 0.5);
    let e = C64::from_polar(1.0, phi);
    let z = c(0.0, 0.0);
    let m = match zone {
        Zone::T1 => Matrix3::new(c(-tail, 0.0), e.conj() * v, z, -e * v, c(tail, 0.0), z, z, z, z),
        Zone::T2 => Matrix3::new(c(tail, 0.0), -e * v, z, e.conj() * v, c(-tail, 0.0), z, z, z, z),
        Zone::T3Check => return Err(Error::Zone("no Painleve coefficient in the T3 neighbourhood".into())),
    };
    Ok(m * half_i)
}

/// Point labels in the order of [`Zone::merged`].
pub fn labels(zone: Zone) -> &'static [char] {
    match zone {
        Zone::T1 => &['a', 'b', 'c', 'd'],
        Zone::T2 => &['a', 'b'],
        Zone::T3Check => &[],
    }
}

/// M_j^{(1)}(s) from a Painlevé solution.
pub fn local_coeff(zone: Zone, label: char, s: f64, phi: f64, sol: &PainleveSolution) -> Result<LocalCoefficient> {
    if !labels(zone).contains(&label) {
        return Err(Error::Input(format!("point '{label}' does not belong to {zone:?}")));
    }
    let (v, _, tail) = sol.eval(s)?;
    Ok(LocalCoefficient { zone, label, s, phi, v, tail, value: local_matrix(zone, phi, v, tail)? })
}

/// Concrete choice of the index exchanges Γ₂, Γ₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaConvention {
    pub g2: (usize, usize),
    pub g3: (usize, usize),
}

impl Default for GammaConvention {
    /// Γ₂ exchanges 1 ↔ 3, Γ₃ exchanges 2 ↔ 3.
    fn default() -> Self {
        GammaConvention { g2: (0, 2), g3: (1, 2) }
    }
}

impl GammaConvention {
    /// The six ordered pairs of distinct transpositions, default first.
    pub fn all() -> Vec<GammaConvention> {
        let t = [(0, 2), (1, 2), (0, 1)];
        let mut out = vec![GammaConvention::default()];
        for a in t {
            for b in t {
                let g = GammaConvention { g2: a, g3: b };
                if a != b && !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }
}

fn swap_matrix(p: (usize, usize)) -> Matrix3<C64> {
    let mut m = Matrix3::identity();
    m.swap_rows(p.0, p.1);
    m
}

/// One pole family of E: the merged point, its ĉ_j and M_j^{(1)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub k: f64,
    pub c_hat: f64,
    pub m: Matrix3<C64>,
}

/// Σ_j [M_j/(ĉ_j(k−k_j)) + ωΓ₃M̄_jΓ₃/(ĉ_j(k−ωk_j)) + ω²Γ₂M̄_jΓ₂/(ĉ_j(k−ω²k_j))].
///
/// With ĉ_j = 3^{2/3} this is the second-zone sum with its 3^{-2/3} prefactor.
pub fn error_matrix(k: C64, terms: &[PoleTerm], gamma: GammaConvention) -> Result<Matrix3<C64>> {
    let w = omega();
    let w2 = w * w;
    let (g2, g3) = (swap_matrix(gamma.g2), swap_matrix(gamma.g3));
    let mut e = Matrix3::zeros();
    for t in terms {
        for pole in [C64::from(t.k), w * t.k, w2 * t.k] {
            if (k - pole).norm() < 1e-8 {
                return Err(Error::Singular(format!("k = {k} lies within 1e-8 of the pole {pole}")));
            }
        }
        let mb = t.m.map(|z| z.conj());
        e += t.m / (t.c_hat * (k - t.k));
        e += g3 * mb * g3 * w / (t.c_hat * (k - w * t.k));
        e += g2 * mb * g2 * w2 / (t.c_hat * (k - w2 * t.k));
    }
    Ok(e)
}

/// Σ_j (E_{j2} − E_{j1}).
pub fn column_difference(e: &Matrix3<C64>) -> C64 {
    (0..3).map(|j| e[(j, 1)] - e[(j, 0)]).sum()
}

/// s of a zone at (x, t), using x/t in place of y/t.
pub fn s_of(zone: Zone, x: f64, t: f64) -> f64 {
    zone.s_coeff() * (x / t - zone.critical_xi()) * t.powf(2.0 / 3.0)
}

/// x at which the zone chart gives the value s at time t.
pub fn x_of_s(zone: Zone, s: f64, t: f64) -> f64 {
    t * (zone.critical_xi() + s / (zone.s_coeff() * t.powf(2.0 / 3.0)))
}

/// Painlevé solution with the boundary behaviour of a zone: v ~ +amp·Ai in
/// the first zone and v ~ −amp·Ai in the second.
pub fn painleve_for(zone: Zone, amp: f64, s_min: f64, s_max: f64) -> Result<PainleveSolution> {
    if !(0.0..1.0).contains(&amp) {
        return Err(Error::Constraint(format!("Painleve amplitude |r| = {amp} must lie in [0, 1)")));
    }
    let a = match zone {
        Zone::T1 => amp,
        Zone::T2 => -amp,
        Zone::T3Check => return Err(Error::Zone("no Painleve solution in the T3 neighbourhood".into())),
    };
    solve_as(a, s_min, s_max.max(8.0), AsOptions::default())
}

/// Settings of the leading-order evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingOptions {
    /// y = x − y_shift, the constant offset ∫(q − 1) left of the support.
    pub y_shift: f64,
    pub gamma: GammaConvention,
    /// Relative step of the central difference in t.
    pub fd_rel_step: f64,
    /// Allowed relative disagreement between the two time derivatives.
    pub derivative_tol: f64,
}

impl Default for LeadingOptions {
    fn default() -> Self {
        LeadingOptions { y_shift: 0.0, gamma: GammaConvention::default(), fd_rel_step: 1e-4, derivative_tol: 1e-5 }
    }
}

/// Leading-order value and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingTerm {
    pub s: f64,
    pub v: f64,
    /// ∂_t Σ_j (E_{j2} − E_{j1}) by the chain rule.
    pub f1: C64,
    /// Σ_j (E_{j2} − E_{j1}).
    pub f2: C64,
    /// The same derivative by a Richardson-refined central difference.
    pub f1_fd: f64,
    pub u_asym: f64,
}

/// φ_j = ψ_j − tθ₁₂(k_j; y/t) and ∂_t φ_j at fixed x, where ψ_j are the
/// time-independent phase constants.
fn phases(zone: Zone, psi: &[f64], x: f64, t: f64, y_shift: f64) -> (Vec<f64>, Vec<f64>) {
    let y = x - y_shift;
    zone.merged()
        .iter()
        .zip(psi)
        .map(|(&k, &p)| {
            let th = t * theta12_closed(C64::from(k), y / t).re;
            // tθ₁₂ = (k − 1/k)(y − g t) with g = 3/(k² + k⁻² − 1).
            let g = 3.0 / (k * k + 1.0 / (k * k) - 1.0);
            let dth = (k - 1.0 / k) * (-g);
            (p - th, -dth)
        })
        .unzip()
}

fn assemble(zone: Zone, phis: &[f64], v: f64, tail: f64, gamma: GammaConvention) -> Result<C64> {
    let terms = zone
        .merged()
        .iter()
        .zip(zone.c_coeffs())
        .zip(phis)
        .map(|((&k, c_hat), &phi)| Ok(PoleTerm { k, c_hat, m: local_matrix(zone, phi, v, tail)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(column_difference(&error_matrix(kappa(), &terms, gamma)?))
}

fn f_at(zone: Zone, psi: &[f64], x: f64, t: f64, sol: &PainleveSolution, opts: &LeadingOptions) -> Result<C64> {
    let s = s_of(zone, x, t);
    let (v, _, tail) = sol.eval(s)?;
    let (phis, _) = phases(zone, psi, x, t, opts.y_shift);
    assemble(zone, &phis, v, tail, opts.gamma)
}

/// u_asym = t^{-1/3} ∂_t Σ_j (E_{j2} − E_{j1}) at k = e^{iπ/6}.
///
/// `psi` holds the phase constants per merged point (arg d(k_j) in the first
/// zone, the full φ_j in the second where θ₁₂(±1) = 0).
pub fn leading_u(zone: Zone, x: f64, t: f64, psi: &[f64], sol: &PainleveSolution, opts: LeadingOptions) -> Result<LeadingTerm> {
    if zone == Zone::T3Check {
        return Err(Error::Zone("the T3 neighbourhood has no leading Painleve term".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if psi.len() != zone.merged().len() {
        return Err(Error::Input(format!("{zone:?} needs {} phases, got {}", zone.merged().len(), psi.len())));
    }
    if !(sol.a.abs() < 1.0) {
        return Err(Error::Constraint(format!("amplitude {} must be below 1", sol.a.abs())));
    }
    let s = s_of(zone, x, t);
    let (v, vp, tail) = sol.eval(s)?;
    let (phis, dphis) = phases(zone, psi, x, t, opts.y_shift);
    let f2 = assemble(zone, &phis, v, tail, opts.gamma)?;
    // ∂s/∂t at fixed x, from s = S (x t^{-1/3} − ξ_c t^{2/3}).
    let s_t = zone.s_coeff() * (-x / (3.0 * t.powf(4.0 / 3.0)) - 2.0 * zone.critical_xi() / (3.0 * t.cbrt()));
    let (v_t, tail_t) = (vp * s_t, -v * v * s_t);
    // E is linear in each M_j, so ∂_t E is E assembled from ∂_t M_j.
    let terms = zone
        .merged()
        .iter()
        .zip(zone.c_coeffs())
        .zip(phis.iter().zip(&dphis))
        .map(|((&k, c_hat), (&phi, &dphi))| {
            let e = C64::from_polar(1.0, phi);
            let i = C64::i();
            let z = c(0.0, 0.0);
            let d12 = (v_t - i * v * dphi) * e.conj();
            let d21 = (v_t + i * v * dphi) * e;
            let m = match zone {
                Zone::T1 => Matrix3::new(c(-tail_t, 0.0), d12, z, -d21, c(tail_t, 0.0), z, z, z, z),
                _ => Matrix3::new(c(tail_t, 0.0), -d21, z, d12, c(-tail_t, 0.0), z, z, z, z),
            };
            PoleTerm { k, c_hat, m: m * c(0.0, 0.5) }
        })
        .collect::<Vec<_>>();
    let f1 = column_difference(&error_matrix(kappa(), &terms, opts.gamma)?);
    let h = opts.fd_rel_step * t;
    let cd = |h: f64| -> Result<f64> { Ok(((f_at(zone, psi, x, t + h, sol, &opts)? - f_at(zone, psi, x, t - h, sol, &opts)?) / (2.0 * h)).re) };
    let f1_fd = (4.0 * cd(h / 2.0)? - cd(h)?) / 3.0;
    let scale = f1.re.abs().max(f2.norm() * dphis.iter().fold(s_t.abs(), |a, b| a.max(b.abs()))).max(1e-300);
    if (f1.re - f1_fd).abs() > opts.derivative_tol * scale {
        return Err(Error::Inconsistent(format!(
            "time derivative mismatch at x = {x}, t = {t}: chain rule {} vs difference {f1_fd}",
            f1.re
        )));
    }
    Ok(LeadingTerm { s, v, f1, f2, f1_fd, u_asym: f1.re / t.cbrt() })
}

/// First Γ convention for which f₂ and f₁ are real to `tol` at the sample
/// inputs; the default convention is tried first.
pub fn find_gamma_convention(zone: Zone, samples: &[(f64, f64, Vec<f64>)], sol: &PainleveSolution, tol: f64) -> Result<GammaConvention> {
    let mut report = Vec::new();
    for g in GammaConvention::all() {
        let opts = LeadingOptions { gamma: g, ..Default::default() };
        let mut worst = 0.0f64;
        for (x, t, psi) in samples {
            let lt = leading_u(zone, *x, *t, psi, sol, opts)?;
            worst = worst.max(lt.f2.im.abs()).max(lt.f1.im.abs());
        }
        if worst <= tol {
            return Ok(g);
        }
        report.push(format!("{:?}/{:?}: max |Im| = {worst:.3e}", g.g2, g.g3));
    }
    Err(Error::Inconsistent(format!("no Gamma convention yields a real f: {}", report.join("; "))))
}

/// Scaling ratios of the outer and inner real saddles near ξ̂ = 0⁻.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T3Report {
    pub xi_hat: f64,
    pub k1: f64,
    pub k4: f64,
    /// |θ₁₂″(k₁)| / k₁.
    pub outer_curvature: f64,
    /// |θ₁₂″(k₄)| · k₄.
    pub inner_curvature: f64,
    /// k₁ |ξ̂|^{1/2}, tending to √3.
    pub outer_position: f64,
    /// k₄ |ξ̂|^{-1/2}, tending to 1/√3.
    pub inner_position: f64,
    /// Saddles k₂, k₃, k₆, k₇ tending to ±(√5 ± 1)/2.
    pub interior: [f64; 4],
    /// |θ₁₂″(k₁)| k₁³, the scaling the outer curvature actually follows (→ 6).
    pub outer_curvature_cubed: f64,
}

impl T3Report {
    pub fn ratios(&self) -> [f64; 4] {
        [self.outer_curvature, self.inner_curvature, self.outer_position, self.inner_position]
    }
}

/// Saddle scaling report for −1e−2 ≤ ξ̂ < 0.
pub fn t3_scaling_check(xi_hat: f64) -> Result<T3Report> {
    if !(-1e-2..0.0).contains(&xi_hat) {
        return Err(Error::Zone(format!("xi_hat = {xi_hat} outside [-1e-2, 0)")));
    }
    let pts = match saddle_points(xi_hat) {
        SaddleSet::Regular(p) => p,
        SaddleSet::Degenerate { .. } => return Err(Error::Zone("saddles merged".into())),
    };
    if pts.len() != 8 {
        return Err(Error::Inconsistent(format!("expected 8 real saddles, found {}", pts.len())));
    }
    let (k1, k4) = (pts[0], pts[3]);
    // θ₁₂'' is twice the second Taylor coefficient.
    let d2 = |k: f64| -> Result<f64> { Ok(theta12_derivs(k, xi_hat, 2)?.abs()) };
    let a = xi_hat.abs().sqrt();
    Ok(T3Report {
        xi_hat,
        k1,
        k4,
        outer_curvature: d2(k1)? / k1,
        inner_curvature: d2(k4)? * k4,
        outer_position: k1 * a,
        inner_position: k4 / a,
        interior: [pts[1], pts[2], pts[5], pts[6]],
        outer_curvature_cubed: d2(k1)? * k1.powi(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painleve::solve_as;

    fn sol(a: f64) -> PainleveSolution {
        solve_as(a, -12.0, 12.0, AsOptions::default()).unwrap()
    }

    #[test]
    fn local_matrix_structure() {
        for (phi, v, tail) in [(0.3, 0.7, 0.2), (-2.1, -0.4, 1.3), (5.0, 0.05, 0.0)] {
            for zone in [Zone::T1, Zone::T2] {
                let m = local_matrix(zone, phi, v, tail).unwrap();
                assert_eq!(m[(0, 0)], -m[(1, 1)]);
                for i in 0..3 {
                    assert_eq!(m[(2, i)], C64::from(0.0));
                    assert_eq!(m[(i, 2)], C64::from(0.0));
                }
                assert!((m[(0, 1)].norm() - v.abs() / 2.0).abs() < 1e-15);
                assert!((m[(0, 1)] * m[(1, 0)] - C64::from(v * v / 4.0)).norm() < 1e-15);
            }
            let t1 = local_matrix(Zone::T1, -phi, v, tail).unwrap();
            let t2 = local_matrix(Zone::T2, phi, v, tail).unwrap();
            assert_eq!(t2, -t1);
        }
        assert_eq!(local_matrix(Zone::T1, 1.0, 0.0, 0.0).unwrap(), Matrix3::zeros());
    }

    #[test]
    fn error_matrix_linearity_and_poles() {
        let m = local_matrix(Zone::T2, 0.0, 0.4, 0.1).unwrap();
        let k = kappa();
        let base = [PoleTerm { k: 1.0, c_hat: 2.0, m }, PoleTerm { k: -1.0, c_hat: 2.0, m }];
        let doubled = [PoleTerm { k: 1.0, c_hat: 4.0, m }, PoleTerm { k: -1.0, c_hat: 4.0, m }];
        let a = error_matrix(k, &base, GammaConvention::default()).unwrap();
        let b = error_matrix(k, &doubled, GammaConvention::default()).unwrap();
        assert!((a - b * C64::from(2.0)).norm() < 1e-15);
        let zero = [PoleTerm { k: 1.0, c_hat: 2.0, m: Matrix3::zeros() }];
        assert_eq!(error_matrix(k, &zero, GammaConvention::default()).unwrap(), Matrix3::zeros());
        let near = omega() * 1.0 + C64::new(1e-9, 0.0);
        assert!(error_matrix(near, &base, GammaConvention::default()).is_err());
        // Residue stays bounded on approach to a pole.
        for eps in [1e-3, 1e-5] {
            let kk = omega() * (1.0 + eps);
            let r = error_matrix(kk, &base, GammaConvention::default()).unwrap() * (kk - omega());
            assert!(r.norm() < 1.0);
        }
    }

    #[test]
    fn phase_shift_covariance() {
        let p = sol(0.4);
        let psi = [0.3, -0.3, 1.1, -1.1];
        let shifted = [0.3 + 2.0 * std::f64::consts::PI, -0.3, 1.1, -1.1];
        let x = x_of_s(Zone::T1, 0.5, 40.0);
        let a = leading_u(Zone::T1, x, 40.0, &psi, &p, LeadingOptions::default()).unwrap();
        let b = leading_u(Zone::T1, x, 40.0, &shifted, &p, LeadingOptions::default()).unwrap();
        assert!((a.u_asym - b.u_asym).abs() <= 1e-14 * a.u_asym.abs().max(1e-300));
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        let p = sol(0.0);
        for zone in [Zone::T1, Zone::T2] {
            let psi = vec![0.4; zone.merged().len()];
            let lt = leading_u(zone, x_of_s(zone, 0.0, 50.0), 50.0, &psi, &p, LeadingOptions::default()).unwrap();
            assert_eq!(lt.u_asym, 0.0);
        }
    }

    #[test]
    fn realness_with_paired_phases() {
        let p = sol(0.5);
        let t1 = [0.7, -0.7, 2.0, -2.0];
        for s in [-3.0, 0.0, 2.5] {
            let lt = leading_u(Zone::T1, x_of_s(Zone::T1, s, 80.0), 80.0, &t1, &sol(0.5), LeadingOptions::default()).unwrap();
            assert!(lt.f2.im.abs() <= 1e-10 && lt.f1.im.abs() <= 1e-10, "{lt:?}");
        }
        let q = sol(-0.5);
        for psi in [[0.0, 0.0], [0.0, std::f64::consts::PI]] {
            let lt = leading_u(Zone::T2, x_of_s(Zone::T2, 1.0, 80.0), 80.0, &psi, &q, LeadingOptions::default()).unwrap();
            assert!(lt.f2.im.abs() <= 1e-10, "{lt:?}");
        }
        let _ = p;
    }

    #[test]
    fn t_scaling_at_fixed_s_in_first_zone() {
        // Envelope over a common phase shift at fixed s; the oscillatory part
        // scales like t^{-1/3}, corrections are a further t^{-1/3} down.
        let p = sol(0.5);
        let envelope = |t: f64| {
            let x = x_of_s(Zone::T1, 0.0, t);
            (0..96)
                .map(|i| {
                    let d = i as f64 * std::f64::consts::TAU / 96.0;
                    let psi = [0.3 + d, -0.3 - d, 0.9 + d, -0.9 - d];
                    let opts = LeadingOptions { fd_rel_step: 1e-3 / t, ..Default::default() };
                    leading_u(Zone::T1, x, t, &psi, &p, opts).unwrap().u_asym.abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (envelope(1e3), envelope(8e3), envelope(6.4e4));
        assert!((e1 / e2 - 2.0).abs() < 0.05, "{}", e1 / e2);
        assert!((e2 / e3 - 2.0).abs() < 0.05, "{}", e2 / e3);
    }

    #[test]
    fn deep_solitonless_side_is_airy_small() {
        let p = sol(0.5);
        let t = 100.0;
        let lt = leading_u(Zone::T1, x_of_s(Zone::T1, 9.0, t), t, &[0.0, 0.0, 0.0, 0.0], &p, LeadingOptions::default()).unwrap();
        assert!(lt.u_asym.abs() < 1e-3 * t.powf(-1.0 / 3.0));
    }

    #[test]
    fn t3_saddle_scalings() {
        let base = t3_scaling_check(-1e-4).unwrap();
        assert!((base.outer_position - 3f64.sqrt()).abs() < 1e-3);
        assert!((base.inner_position - 1.0 / 3f64.sqrt()).abs() < 1e-3);
        let g = (5f64.sqrt() + 1.0) / 2.0;
        let want = [g, 1.0 / g, -1.0 / g, -g];
        for (a, b) in base.interior.iter().zip(want) {
            assert!((a - b).abs() < 1e-3, "{a} {b}");
        }
        assert!((base.outer_curvature_cubed - 6.0).abs() < 1e-2);
        for xi in [-1e-2, -1e-3] {
            let r = t3_scaling_check(xi).unwrap();
            for (a, b) in r.ratios().iter().zip(base.ratios()).skip(1) {
                assert!((a / b - 1.0).abs() < 0.05, "xi={xi}: {a} vs {b}");
            }
            assert!((r.outer_curvature_cubed / base.outer_curvature_cubed - 1.0).abs() < 0.05);
        }
    }
}
