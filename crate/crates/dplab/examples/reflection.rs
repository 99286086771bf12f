//! Reflection coefficient of a Gaussian datum on a real k-grid, plus the
//! values that set the Painlevé amplitudes of the two transition zones.

use dplab::phase::k_t1;
use dplab::scattering::{gaussian_datum, q_of_u, reflection, reflection_limit, ScatterOptions};

fn main() -> dplab::Result<()> {
    let (n, l) = (2048, 40.0);
    let state = q_of_u(&gaussian_datum(n, l, -0.25, 2.0), l, 0.0)?;
    let ka = k_t1();
    let ks = [ka, 1.0 / ka, -1.0 / ka, -ka, 0.5, 2.0, -0.5, -2.0, 1.05, 0.95];
    let r = reflection(&ks, &state)?;
    println!("{:>10} {:>22} {:>22} {:>14}", "k", "Re r", "Im r", "|r|");
    for (k, v) in ks.iter().zip(&r.r) {
        println!("{k:>10.6} {:>22.15e} {:>22.15e} {:>14.10}", v.re, v.im, v.norm());
    }
    let (r1, spread) = reflection_limit(1.0, &state, 1e-3, ScatterOptions::default())?;
    println!("r(1) ~ {r1:.12e}  (|r(1)| = {:.12}, one-sided spread {spread:.2e})", r1.norm());
    Ok(())
}
