//! Painlevé II recovered from the model Riemann–Hilbert problem and compared
//! with direct shooting.

use dplab::painleve::{solve_as, AsOptions};
use dplab::rhmodel::{extract_v, solve_model};
use num_complex::Complex64 as C64;

fn main() -> dplab::Result<()> {
    let c1 = 0.5;
    let ode = solve_as(c1, -3.0, 8.0, AsOptions::default())?;
    println!("{:>5} {:>20} {:>20} {:>20} {:>20} {:>10}", "s", "v (RH)", "v (ODE)", "I (RH)", "I (ODE)", "residual");
    for s in [-2.0, 0.0, 2.0] {
        let sol = solve_model(s, C64::new(0.0, c1), 128)?;
        let (v, i) = extract_v(&sol.m1)?;
        let (vo, _, io) = ode.eval(s)?;
        // Stokes data c₁ = i·a pairs with v ≈ −a·Ai.
        println!("{s:>5} {v:>20.15} {:>20.15} {i:>20.15} {io:>20.15} {:>10.2e}", -vo, sol.residual);
    }
    Ok(())
}
