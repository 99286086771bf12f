//! Gauss–Legendre rules and barycentric differentiation on their nodes.

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[n - 1 - i] = z;
        w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Differentiation matrix D with (Df)(x_i) = Σ_j D_ij f(x_j) for the
/// polynomial interpolant through the given nodes.
pub fn diff_matrix(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let bw = barycentric_weights(x);
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                d[i][j] = bw[j] / bw[i] / (x[i] - x[j]);
                diag -= d[i][j];
            }
        }
        d[i][i] = diag;
    }
    d
}

/// Barycentric weights 1/Π_{k≠j}(x_j − x_k).
pub fn barycentric_weights(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            1.0 / (0..x.len())
                .filter(|&k| k != j)
                .map(|k| x[j] - x[k])
                .product::<f64>()
        })
        .collect()
}

/// Lagrange basis values at t for the given nodes (barycentric form).
pub fn lagrange_basis(x: &[f64], bw: &[f64], t: f64) -> Vec<f64> {
    if let Some(j) = x.iter().position(|&xj| xj == t) {
        let mut e = vec![0.0; x.len()];
        e[j] = 1.0;
        return e;
    }
    let terms: Vec<f64> = x.iter().zip(bw).map(|(xj, wj)| wj / (t - xj)).collect();
    let s: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn differentiates_polynomials() {
        let (x, _) = gauss_legendre(16);
        let d = diff_matrix(&x);
        for i in 0..16 {
            let dv: f64 = (0..16).map(|j| d[i][j] * x[j].powi(7)).sum();
            assert!((dv - 7.0 * x[i].powi(6)).abs() < 1e-11);
        }
        let bw = barycentric_weights(&x);
        let b = lagrange_basis(&x, &bw, 0.123);
        let v: f64 = b.iter().zip(&x).map(|(b, x)| b * x.powi(5)).sum();
        assert!((v - 0.123f64.powi(5)).abs() < 1e-14);
    }
}
