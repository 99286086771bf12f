//! Leading Painlevé term in the T1 zone along fixed-s rays: the t^{-1/3}
//! decay at fixed phases and the two routes to ∂_t f₂.

use dplab::asymptotics::{leading_u, painleve_for, x_of_s, LeadingOptions};
use dplab::phase::Zone;

fn main() -> dplab::Result<()> {
    let zone = Zone::T1;
    let psi = [1.3, -1.3, 2.0, -2.0];
    let sol = painleve_for(zone, 0.18, -6.0, 6.0)?;
    println!("{:>7} {:>6} {:>22} {:>22} {:>12}", "t", "s", "u_asym", "u t^(1/3)", "fd mismatch");
    for t in [1e2, 1e3, 1e4] {
        for s in [-2.0, 0.0, 2.0] {
            let x = x_of_s(zone, s, t);
            let opts = LeadingOptions { fd_rel_step: 1e-3 / t, ..Default::default() };
            let lt = leading_u(zone, x, t, &psi, &sol, opts)?;
            let mismatch = (lt.f1.re - lt.f1_fd).abs() / lt.f1.re.abs().max(1e-300);
            println!("{t:>7} {s:>6} {:>22.15e} {:>22.15e} {mismatch:>12.2e}", lt.u_asym, lt.u_asym * t.cbrt());
        }
    }
    Ok(())
}
