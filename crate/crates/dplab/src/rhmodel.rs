//! Model Riemann–Hilbert problems for Painlevé II with Stokes data (c₁, 0, −c₁).
//!
//! [`build_model_jump`] describes the problem on its native contour: six rays
//! e^{i(π/6 + (n−1)π/3)}ℝ₊, or the lens made of four rays from ±k̂₀ and the
//! segment [−k̂₀, k̂₀]. With Φ(k̂) = (8/3)k̂³ + 2sk̂ the nontrivial jumps are
//! lower-triangular c e^{iΦ} above the real axis and upper-triangular c e^{−iΦ}
//! below it.
//!
//! [`solve_model`] collapses the pieces above (below) the real axis onto one
//! smooth hyperbola with the same asymptotic directions, where the jump is the
//! single factor lower(c₁e^{iΦ}) (upper(c₁e^{−iΦ})). The hyperbolas have no
//! junction points, so a Nyström discretisation with Gauss–Legendre panels and
//! singularity subtraction converges geometrically. For the lens variant the
//! asymptotes pass through ±k̂₀; for the six-ray variant through the origin.

use crate::error::{Error, Result};
use crate::quad::{barycentric_weights, diff_matrix, gauss_legendre, lagrange_basis};
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

type M2 = [[C64; 2]; 2];

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}
fn one() -> C64 {
    C64::new(1.0, 0.0)
}
fn m2_eye() -> M2 {
    [[one(), zero()], [zero(), one()]]
}
fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}
fn m2_add(a: &M2, b: &M2) -> M2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}
fn m2_scale(a: &M2, c: C64) -> M2 {
    [[a[0][0] * c, a[0][1] * c], [a[1][0] * c, a[1][1] * c]]
}
fn m2_norm(a: &M2) -> f64 {
    a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Cubic phase Φ(k̂) = (8/3)k̂³ + 2sk̂.
pub fn model_phase(k: C64, s: f64) -> C64 {
    k * k * k * (8.0 / 3.0) + k * (2.0 * s)
}

/// Contour family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    SixRay,
    Lens,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sixray" | "six-ray" => Ok(Variant::SixRay),
            "lens" => Ok(Variant::Lens),
            _ => Err(Error::Input(format!("unknown contour variant '{s}'"))),
        }
    }
}

/// Geometric piece of a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Piece {
    /// Half-line anchor + r e^{iθ}, r ≥ 0; `outward` when oriented away from the anchor.
    Ray { anchor: f64, angle: f64, outward: bool },
    /// Segment oriented from `a` to `b`.
    Segment { a: f64, b: f64 },
}

/// Jump carried by a piece, in the orientation of that piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Jump {
    /// [[1, 0], [c e^{iΦ}, 1]].
    Lower(C64),
    /// [[1, c e^{−iΦ}], [0, 1]].
    Upper(C64),
    /// upper(−c̄ e^{−iΦ}) · lower(c e^{iΦ}).
    LensSegment(C64),
}

impl Jump {
    pub fn matrix(&self, k: C64, s: f64) -> M2 {
        let e = (C64::i() * model_phase(k, s)).exp();
        match *self {
            Jump::Lower(c) => [[one(), zero()], [c * e, one()]],
            Jump::Upper(c) => [[one(), c / e], [zero(), one()]],
            Jump::LensSegment(c) => {
                let up = [[one(), -c.conj() / e], [zero(), one()]];
                let lo = [[one(), zero()], [c * e, one()]];
                m2_mul(&up, &lo)
            }
        }
    }
}

/// Contour pieces of one model problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourSpec {
    pub variant: Variant,
    pub pieces: Vec<Piece>,
    pub k0: f64,
}

/// Stokes data and per-piece jumps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpData {
    /// c₁ … c₆ with c_{n+3} = −c_n.
    pub stokes: [C64; 6],
    pub jumps: Vec<Jump>,
    pub s: f64,
}

impl JumpData {
    /// c₁ − c₂ + c₃ + c₁c₂c₃.
    pub fn cyclic_residual(&self) -> C64 {
        let [c1, c2, c3, ..] = self.stokes;
        c1 - c2 + c3 + c1 * c2 * c3
    }
}

fn check_c1(c1: C64) -> Result<()> {
    if c1.re.abs() > 1e-15 * (1.0 + c1.im.abs()) {
        return Err(Error::Constraint(format!("c1 = {c1} must be purely imaginary")));
    }
    if !(c1.norm() < 1.0) {
        return Err(Error::Constraint(format!("|c1| = {} must be < 1", c1.norm())));
    }
    Ok(())
}

/// Contour and jumps of the model problem for Stokes data (c₁, 0, −c₁).
pub fn build_model_jump(s: f64, c1: C64, variant: Variant, k0: f64) -> Result<(ContourSpec, JumpData)> {
    check_c1(c1)?;
    let c = [c1, zero(), -c1];
    let stokes = [c[0], c[1], c[2], -c[0], -c[1], -c[2]];
    let cyc = c[0] - c[1] + c[2] + c[0] * c[1] * c[2];
    if cyc.norm() > 1e-14 {
        return Err(Error::Constraint(format!("c1 - c2 + c3 + c1 c2 c3 = {cyc} != 0")));
    }
    match variant {
        Variant::SixRay => {
            let mut pieces = Vec::new();
            let mut jumps = Vec::new();
            for n in 0..6 {
                let angle = PI / 6.0 + n as f64 * PI / 3.0;
                pieces.push(Piece::Ray { anchor: 0.0, angle, outward: true });
                jumps.push(if n % 2 == 0 { Jump::Lower(stokes[n]) } else { Jump::Upper(stokes[n]) });
            }
            Ok((ContourSpec { variant, pieces, k0: 0.0 }, JumpData { stokes, jumps, s }))
        }
        Variant::Lens => {
            if !(k0 > 0.0) {
                return Err(Error::Domain(format!("lens half-width k0 = {k0} must be positive")));
            }
            let cb = -c1.conj();
            let pieces = vec![
                Piece::Ray { anchor: k0, angle: PI / 6.0, outward: true },
                Piece::Ray { anchor: -k0, angle: 5.0 * PI / 6.0, outward: false },
                Piece::Ray { anchor: -k0, angle: 7.0 * PI / 6.0, outward: false },
                Piece::Ray { anchor: k0, angle: 11.0 * PI / 6.0, outward: true },
                Piece::Segment { a: -k0, b: k0 },
            ];
            let jumps = vec![
                Jump::Lower(c1),
                Jump::Lower(c1),
                Jump::Upper(cb),
                Jump::Upper(cb),
                Jump::LensSegment(c1),
            ];
            Ok((ContourSpec { variant, pieces, k0 }, JumpData { stokes, jumps, s }))
        }
    }
}

/// Numerical solution of a model problem.
#[derive(Debug, Clone, Serialize)]
pub struct ModelSolution {
    pub s: f64,
    pub c1_im: f64,
    pub variant: Variant,
    pub n_colloc: usize,
    #[serde(skip)]
    pub nodes: Vec<C64>,
    /// Boundary values M₋ (2×2 block) at the nodes.
    #[serde(skip)]
    pub m_minus: Vec<M2>,
    /// M₁ embedded in 3×3 with trivial third row and column.
    #[serde(skip)]
    pub m1: Matrix3<C64>,
    /// Self-consistency residual of the integral equation at off-node probes.
    pub residual: f64,
    /// 1-norm condition number of the discrete system.
    pub condition: f64,
}

/// Discretisation options of [`solve_model_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub variant: Variant,
    pub k0: f64,
    /// Height of the hyperbola vertex above the real axis; non-positive picks a default.
    pub height: f64,
    pub panel_order: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { variant: Variant::SixRay, k0: 1.0, height: 0.0, panel_order: 16 }
    }
}

struct Curve {
    upper: bool,
    yc: f64,
    b: f64,
    tau: Vec<f64>,
    w: Vec<f64>,
    k: Vec<C64>,
    dk: Vec<C64>,
    jump_minus_eye: Vec<M2>,
    panel_len: f64,
    start: C64,
    end: C64,
}

impl Curve {
    fn point(&self, t: f64) -> (C64, C64) {
        let s3 = 3f64.sqrt();
        let k = C64::new(s3 * self.b * t.sinh(), self.yc + self.b * t.cosh());
        let d = C64::new(s3 * self.b * t.cosh(), self.b * t.sinh());
        if self.upper {
            (k, d)
        } else {
            (k.conj(), d.conj())
        }
    }

    fn jump_w(&self, k: C64, s: f64, c1: C64) -> M2 {
        let e = (C64::i() * model_phase(k, s)).exp();
        if self.upper {
            [[zero(), zero()], [c1 * e, zero()]]
        } else {
            [[zero(), c1 / e], [zero(), zero()]]
        }
    }
}

fn build_curve(upper: bool, yc: f64, b: f64, s: f64, c1: C64, n: usize, p: usize) -> Curve {
    let mut c = Curve {
        upper,
        yc,
        b,
        tau: vec![],
        w: vec![],
        k: vec![],
        dk: vec![],
        jump_minus_eye: vec![],
        panel_len: 0.0,
        start: zero(),
        end: zero(),
    };
    let mut t_end = 0.1;
    loop {
        let small = [t_end, -t_end].iter().all(|&t| {
            let (k, _) = c.point(t);
            m2_norm(&c.jump_w(k, s, c1)) < 1e-15
        });
        if small || t_end > 40.0 {
            break;
        }
        t_end += 0.05;
    }
    let npan = (n / p).max(1);
    let (gx, gw) = gauss_legendre(p);
    let len = 2.0 * t_end / npan as f64;
    for q in 0..npan {
        let a = -t_end + q as f64 * len;
        for (x, w) in gx.iter().zip(&gw) {
            let t = a + 0.5 * len * (1.0 + x);
            let (k, d) = c.point(t);
            c.tau.push(t);
            c.w.push(0.5 * len * w);
            c.k.push(k);
            c.dk.push(d);
            c.jump_minus_eye.push(c.jump_w(k, s, c1));
        }
    }
    c.panel_len = len;
    c.start = c.point(-t_end).0;
    c.end = c.point(t_end).0;
    c
}

/// ln|B − k|/|A − k| + i[arg(−T/(A − k)) + arg((B − k)/T)]: the principal-value
/// integral of dζ/(ζ − k) along the curve from A to B with unit tangent T at k.
fn pv_log(a: C64, b: C64, k: C64, tangent: C64) -> C64 {
    let t = tangent / tangent.norm();
    C64::new(
        ((b - k).norm() / (a - k).norm()).ln(),
        (-t / (a - k)).arg() + ((b - k) / t).arg(),
    )
}

/// Solves the six-ray model problem with `n_colloc` nodes per hyperbola.
pub fn solve_model(s: f64, c1: C64, n_colloc: usize) -> Result<ModelSolution> {
    solve_model_with(s, c1, n_colloc, ModelOptions::default())
}

/// Solves the model problem with explicit contour options.
pub fn solve_model_with(s: f64, c1: C64, n_colloc: usize, opts: ModelOptions) -> Result<ModelSolution> {
    check_c1(c1)?;
    let p = opts.panel_order;
    if n_colloc < 32 || !n_colloc.is_multiple_of(p) {
        return Err(Error::Domain(format!(
            "n_colloc = {n_colloc} must be >= 32 and a multiple of the panel order {p}"
        )));
    }
    let h = if opts.height > 0.0 { opts.height } else if s < 0.0 { 0.3 } else { 0.5 };
    let (yc, b) = match opts.variant {
        Variant::SixRay => (0.0, h),
        Variant::Lens => {
            if !(opts.k0 > 0.0) {
                return Err(Error::Domain(format!("lens half-width k0 = {} must be positive", opts.k0)));
            }
            let yc = -opts.k0 / 3f64.sqrt();
            (yc, h - yc)
        }
    };
    let mut m1 = Matrix3::<C64>::identity() * zero();
    if c1.norm() == 0.0 {
        return Ok(ModelSolution {
            s,
            c1_im: c1.im,
            variant: opts.variant,
            n_colloc,
            nodes: vec![],
            m_minus: vec![],
            m1,
            residual: 0.0,
            condition: 1.0,
        });
    }
    let curves = [
        build_curve(true, yc, b, s, c1, n_colloc, p),
        build_curve(false, yc, b, s, c1, n_colloc, p),
    ];
    let (gx, _) = gauss_legendre(p);
    let dref = diff_matrix(&gx);
    let nn: usize = curves.iter().map(|c| c.k.len()).sum();
    let mut kk = Vec::with_capacity(nn);
    let mut ww = Vec::with_capacity(nn);
    let mut wd = Vec::with_capacity(nn);
    let mut cid = Vec::with_capacity(nn);
    let mut offs = [0usize; 2];
    for (ci, c) in curves.iter().enumerate() {
        offs[ci] = kk.len();
        for i in 0..c.k.len() {
            kk.push(c.k[i]);
            ww.push(c.jump_minus_eye[i]);
            wd.push(c.w[i] * c.dk[i]);
            cid.push(ci);
        }
    }
    let f = one() / C64::new(0.0, 2.0 * PI);
    // a[j][i]: coefficient block multiplying μ_j in equation i (μ as row vectors).
    let mut big = DMatrix::<C64>::zeros(2 * nn, 2 * nn);
    let add_block = |big: &mut DMatrix<C64>, j: usize, i: usize, blk: &M2| {
        // Row vector equation Σ_j μ_j A_ji = e; transpose to columns: Σ_j A_jiᵀ μ_jᵀ.
        for r in 0..2 {
            for cc in 0..2 {
                big[(2 * i + r, 2 * j + cc)] += blk[cc][r];
            }
        }
    };
    for i in 0..nn {
        let ci = cid[i];
        let c = &curves[ci];
        let li = i - offs[ci];
        add_block(&mut big, i, i, &m2_add(&m2_eye(), &m2_scale(&ww[i], C64::new(0.5, 0.0))));
        let mut diag_sub = zero();
        for j in 0..nn {
            if j == i {
                continue;
            }
            let coef = f * wd[j] / (kk[j] - kk[i]);
            add_block(&mut big, j, i, &m2_scale(&ww[j], -coef));
            if cid[j] == ci {
                diag_sub += coef;
            }
        }
        add_block(&mut big, i, i, &m2_scale(&ww[i], diag_sub));
        let q = li / p;
        let lloc = li % p;
        let base = offs[ci] + q * p;
        let scale = 2.0 / c.panel_len;
        for m in 0..p {
            let coef = -f * c.w[li] * dref[lloc][m] * scale;
            add_block(&mut big, base + m, i, &m2_scale(&ww[base + m], coef));
        }
        let lg = pv_log(c.start, c.end, kk[i], c.dk[li]);
        add_block(&mut big, i, i, &m2_scale(&ww[i], -f * lg));
    }
    let mut rhs = DMatrix::<C64>::zeros(2 * nn, 2);
    for i in 0..nn {
        rhs[(2 * i, 0)] = one();
        rhs[(2 * i + 1, 1)] = one();
    }
    let norm1 = |m: &DMatrix<C64>| {
        (0..m.ncols())
            .map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let anorm = norm1(&big);
    let lu = big.lu();
    let inv = lu
        .try_inverse()
        .ok_or_else(|| Error::Resolution("singular collocation system".into()))?;
    let condition = anorm * norm1(&inv);
    if !(condition < 1e12) {
        return Err(Error::Resolution(format!(
            "condition number {condition:.3e} exceeds 1e12; increase n_colloc or change the contour height"
        )));
    }
    let x = &inv * &rhs;
    let mut mu = vec![m2_eye(); nn];
    for (i, m) in mu.iter_mut().enumerate() {
        for r in 0..2 {
            for cc in 0..2 {
                m[r][cc] = x[(2 * i + cc, r)];
            }
        }
    }
    let mut acc = [[zero(); 2]; 2];
    for i in 0..nn {
        acc = m2_add(&acc, &m2_scale(&m2_mul(&mu[i], &ww[i]), wd[i]));
    }
    let m1_2 = m2_scale(&acc, -f);
    for r in 0..2 {
        for cc in 0..2 {
            m1[(r, cc)] = m1_2[r][cc];
        }
    }
    let residual = probe_residual(&curves, &mu, &kk, &ww, &wd, &cid, &offs, p, s, c1);
    Ok(ModelSolution {
        s,
        c1_im: c1.im,
        variant: opts.variant,
        n_colloc,
        nodes: kk,
        m_minus: mu,
        m1,
        residual,
        condition,
    })
}

#[allow(clippy::too_many_arguments)]
fn probe_residual(
    curves: &[Curve; 2],
    mu: &[M2],
    kk: &[C64],
    ww: &[M2],
    wd: &[C64],
    cid: &[usize],
    offs: &[usize; 2],
    p: usize,
    s: f64,
    c1: C64,
) -> f64 {
    let f = one() / C64::new(0.0, 2.0 * PI);
    let (gx, _) = gauss_legendre(p);
    let bw = barycentric_weights(&gx);
    let mut worst = 0.0f64;
    for (ci, c) in curves.iter().enumerate() {
        let npan = c.k.len() / p;
        for q in (0..npan).step_by((npan / 6).max(1)) {
            for &xloc in &[-0.71, 0.13, 0.57] {
                let t = c.tau[q * p] + (xloc - gx[0]) / (gx[p - 1] - gx[0]) * (c.tau[q * p + p - 1] - c.tau[q * p]);
                let xl = gx[0] + (t - c.tau[q * p]) / (c.tau[q * p + p - 1] - c.tau[q * p]) * (gx[p - 1] - gx[0]);
                let basis = lagrange_basis(&gx, &bw, xl);
                let mut mu_k = [[zero(); 2]; 2];
                for (m, bm) in basis.iter().enumerate() {
                    mu_k = m2_add(&mu_k, &m2_scale(&mu[offs[ci] + q * p + m], C64::new(*bm, 0.0)));
                }
                let (k, dk) = c.point(t);
                let wk = c.jump_w(k, s, c1);
                let gk = m2_mul(&mu_k, &wk);
                let mut cm = m2_scale(&gk, C64::new(-0.5, 0.0));
                for j in 0..kk.len() {
                    let gj = m2_mul(&mu[j], &ww[j]);
                    let coef = f * wd[j] / (kk[j] - k);
                    if cid[j] == ci {
                        let diff = m2_add(&gj, &m2_scale(&gk, C64::new(-1.0, 0.0)));
                        cm = m2_add(&cm, &m2_scale(&diff, coef));
                    } else {
                        cm = m2_add(&cm, &m2_scale(&gj, coef));
                    }
                }
                cm = m2_add(&cm, &m2_scale(&gk, f * pv_log(c.start, c.end, k, dk)));
                let lhs = m2_add(&mu_k, &m2_scale(&m2_add(&m2_eye(), &cm), C64::new(-1.0, 0.0)));
                worst = worst.max(m2_norm(&lhs));
            }
        }
    }
    worst
}

/// (v, I) = (2 Re(M₁)₁₂, Re 2i(M₁)₁₁), checking the symmetry (M₁)₁₂ = (M₁)₂₁.
pub fn extract_v(m1: &Matrix3<C64>) -> Result<(f64, f64)> {
    let asym = (m1[(0, 1)] - m1[(1, 0)]).norm();
    if asym > 1e-6 {
        return Err(Error::Inconsistent(format!("|(M1)12 - (M1)21| = {asym:.3e} exceeds 1e-6")));
    }
    let v = 2.0 * m1[(0, 1)].re;
    let i = (C64::new(0.0, 2.0) * m1[(0, 0)]).re;
    Ok((v, i))
}
