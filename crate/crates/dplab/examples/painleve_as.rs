//! Ablowitz–Segur solutions of v'' = 2v³ + sv and their oscillation envelope
//! compared with the connection formula.

use dplab::painleve::{as_envelope_amplitude, fit_envelope, solve_as, AsOptions};

fn main() -> dplab::Result<()> {
    for a in [0.3, 0.6, 0.9] {
        let sol = solve_as(a, -8.0, 8.0, AsOptions::default())?;
        let (v0, vp0, i0) = sol.eval(0.0)?;
        println!("a = {a}: v(0) = {v0:.15}, v'(0) = {vp0:.15}, I(0) = {i0:.15}, max residual {:.2e}", sol.max_residual());
    }
    let a = 0.7;
    let sol = solve_as(a, -42.0, 8.0, AsOptions::default())?;
    let fit = fit_envelope(&sol, -40.0, -10.0);
    println!("a = {a}: fitted envelope {fit:.6}, connection formula {:.6}", as_envelope_amplitude(a));
    Ok(())
}
