//! The Airy function Ai and its derivative on the real line.
//!
//! Three regimes: the Maclaurin series for |x| ≤ 2; the Macdonald-function
//! representation Ai(x) = π⁻¹(x/3)^{1/2} K_{1/3}(ζ), Ai'(x) = −π⁻¹(x/√3) K_{2/3}(ζ),
//! ζ = (2/3)x^{3/2}, with K_ν(ζ) = ∫₀^∞ e^{−ζ cosh τ} cosh(ντ) dτ by the
//! trapezoidal rule for x > 2; and Taylor stepping of Ai'' = x Ai from x = −2
//! for x < −2.

use std::f64::consts::PI;

/// Ai(0).
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// −Ai'(0).
pub const AIP0: f64 = 0.258_819_403_792_806_8;

fn maclaurin(x: f64) -> (f64, f64) {
    // Ai = AI0·f(x) − AIP0·g(x) with f = Σ 3^k (1/3)_k x^{3k}/(3k)!, g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!.
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    let mut k = 0.0;
    loop {
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        fp += tf * (3.0 * k + 3.0) / x;
        gp += tg * (3.0 * k + 4.0) / x;
        k += 1.0;
        if tf.abs() < 1e-18 * f.abs() && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
        if k > 60.0 {
            break;
        }
    }
    if x == 0.0 {
        return (AI0, -AIP0);
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

fn macdonald(nu: f64, zeta: f64) -> f64 {
    let h = 0.1;
    let mut sum = 0.5 * (-zeta).exp();
    let mut n = 1;
    loop {
        let t = n as f64 * h;
        let term = (-zeta * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        n += 1;
    }
    h * sum
}

fn taylor_march(x: f64) -> (f64, f64) {
    let (mut y, mut yp) = maclaurin(-2.0);
    let mut x0 = -2.0;
    let nsteps = ((x0 - x) / 0.25).ceil().max(1.0) as usize;
    let h = (x - x0) / nsteps as f64;
    for _ in 0..nsteps {
        let mut a = [0.0f64; 48];
        a[0] = y;
        a[1] = yp;
        a[2] = x0 * y / 2.0;
        for n in 1..46 {
            a[n + 2] = (x0 * a[n] + a[n - 1]) / ((n + 2) as f64 * (n + 1) as f64);
        }
        let (mut v, mut d) = (0.0, 0.0);
        for n in (0..48).rev() {
            v = v * h + a[n];
        }
        for n in (1..48).rev() {
            d = d * h + n as f64 * a[n];
        }
        y = v;
        yp = d;
        x0 += h;
    }
    (y, yp)
}

/// (Ai(x), Ai'(x)).
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.abs() <= 2.0 {
        maclaurin(x)
    } else if x > 2.0 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        if zeta > 700.0 {
            return (0.0, 0.0);
        }
        let ai = (x / 3.0).sqrt() / PI * macdonald(1.0 / 3.0, zeta);
        let aip = -x / (PI * 3f64.sqrt()) * macdonald(2.0 / 3.0, zeta);
        (ai, aip)
    } else {
        taylor_march(x)
    }
}

/// Ai(x).
pub fn airy(x: f64) -> f64 {
    airy_pair(x).0
}

/// ∫ₓ^∞ Ai(ς)² dς = Ai'(x)² − x Ai(x)².
pub fn airy_sq_tail(x: f64) -> f64 {
    let (a, ap) = airy_pair(x);
    ap * ap - x * a * a
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ai(x) = e^{−ζ}π⁻¹ ∫₀^∞ cos(τ³/3) e^{−√x τ²} dτ for x > 0.
    fn oracle_pos(x: f64) -> f64 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let b = x.sqrt();
        let upper = (40.0 / b).sqrt().min(12.0);
        let n = 20000;
        let h = upper / n as f64;
        let f = |t: f64| (t * t * t / 3.0).cos() * (-b * t * t).exp();
        let mut s = f(0.0) + f(upper);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        (-zeta).exp() / PI * s * h / 3.0
    }

    /// Ai(x) = π⁻¹ Re[e^{iπ/6} ∫₀^∞ exp(−τ³/3 + i x e^{iπ/6} τ) dτ].
    fn oracle_rot(x: f64) -> f64 {
        use num_complex::Complex64 as C;
        let e = C::from_polar(1.0, PI / 6.0);
        let n = 40000;
        let upper = 14.0;
        let h = upper / n as f64;
        let f = |t: f64| (C::new(-t * t * t / 3.0, 0.0) + C::i() * x * e * t).exp();
        let mut s = f(0.0) + f(upper);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        (e * s * h / 3.0).re / PI
    }

    #[test]
    fn value_at_zero() {
        assert!((airy(0.0) - 0.3550280538878172).abs() < 1e-16);
        assert!((oracle_rot(0.0) - AI0).abs() < 1e-12);
    }

    #[test]
    fn matches_positive_oracle() {
        for &x in &[0.5, 1.0, 2.0, 2.5, 4.0, 7.0, 10.0, 15.0] {
            let (a, o) = (airy(x), oracle_pos(x));
            assert!((a - o).abs() <= 1e-12 * o.abs(), "x={x}: {a} vs {o}");
        }
    }

    #[test]
    fn matches_rotated_oracle() {
        for &x in &[-0.5, -1.9, -2.1, -3.0, -5.5, -8.0] {
            let (a, o) = (airy(x), oracle_rot(x));
            assert!((a - o).abs() <= 1e-11, "x={x}: {a} vs {o}");
        }
    }

    #[test]
    fn zeros_and_wronskian_scale() {
        assert!(airy(-2.338107410459767).abs() < 1e-14);
        assert!(airy(-4.087_949_444_130_97).abs() < 1e-14);
        assert!(airy(-12.828776752865757).abs() < 1e-12);
    }

    #[test]
    fn ode_residual_and_monotone_decay() {
        let mut prev = airy(0.0);
        for i in 1..=150 {
            let x = i as f64 * 0.1;
            let a = airy(x);
            assert!(a < prev && a > 0.0);
            prev = a;
        }
        for i in -150..150 {
            let x = i as f64 * 0.1 + 0.05;
            let h = 1e-3;
            let d2 = (airy_pair(x + h).1 - airy_pair(x - h).1) / (2.0 * h);
            let scale = airy_pair(x).1.abs().max(airy(x).abs()).max(1e-300);
            assert!((d2 - x * airy(x)).abs() <= 1e-5 * scale.max(x.abs() * airy(x).abs()), "x={x}");
        }
    }

    #[test]
    fn square_tail_identity() {
        // d/dx of the tail must be −Ai².
        for &x in &[-3.0, 0.0, 1.5, 5.0] {
            let h = 1e-4;
            let d = (airy_sq_tail(x + h) - airy_sq_tail(x - h)) / (2.0 * h);
            assert!((d + airy(x).powi(2)).abs() < 1e-8);
        }
    }
}
