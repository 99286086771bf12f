//! Saddle points of θ₁₂ across the ξ̂ axis, the T1 anchor and the scaling
//! constants of both transition zones.

use dplab::phase::{c_hat_a, c_hat_b, c_hat_t2, k_t1, saddle_points, theta12, theta12_derivs, SaddleSet, Zone};
use num_complex::Complex64 as C64;

fn main() -> dplab::Result<()> {
    for xi in [-2.0, -0.375, -0.2, -1e-3, 0.5, 2.9, 3.0, 3.5] {
        match saddle_points(xi) {
            SaddleSet::Regular(p) => println!("xi = {xi:>7}: {} saddles {:.6?}", p.len(), p),
            SaddleSet::Degenerate { merged } => println!("xi = {xi:>7}: no simple real saddles, reference points {merged:.6?}"),
        }
    }
    let ka = k_t1();
    let (y, t) = (-30.0, 80.0);
    let lhs = t * theta12(C64::new(ka, 0.0), y / t)?.re;
    println!("t*theta12(k_a) = {lhs:.15}, sqrt(3)/4*(4y-3t) = {:.15}", 3f64.sqrt() / 4.0 * (4.0 * y - 3.0 * t));
    for (name, c, k, xi) in [("c_a", c_hat_a(), ka, -0.375), ("c_b", c_hat_b(), 1.0 / ka, -0.375), ("c_T2", c_hat_t2(), 1.0, 3.0)] {
        let d3 = theta12_derivs(k, xi, 3)?;
        println!("{name} = {c:.15}  c^3 = {:.12}  |theta'''|/16 = {:.12}", c.powi(3), d3.abs() / 16.0);
    }
    for z in [Zone::T1, Zone::T2] {
        println!("{z:?}: xi_c = {}, merged {:.6?}, s = {:.6} (xi - xi_c) t^(2/3)", z.critical_xi(), z.merged(), z.s_coeff());
    }
    Ok(())
}
