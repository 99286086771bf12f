//! Direct evolution of a small Gaussian datum with conservation diagnostics.

use dplab::dpsolve::{evolve, EvolveOptions};
use dplab::scattering::gaussian_datum;

fn main() -> dplab::Result<()> {
    let (n, l) = (4096, 96.0);
    let u0 = gaussian_datum(n, l, -0.25, 2.0);
    let traj = evolve(&u0, l, &[5.0, 10.0, 20.0], EvolveOptions::default())?;
    println!("scheme: {}, {} steps, dt = {:.5}", traj.scheme, traj.steps, traj.dt);
    for (snap, inv) in traj.snapshots.iter().zip(&traj.invariants[1..]) {
        let umax = snap.u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        println!("t = {:>5}: max|u| = {umax:.6}, int m = {:.15}, int (q-1) = {:.15}", snap.time, inv.mass_m, inv.mass_q);
    }
    let (dm, dq) = traj.max_drift();
    println!("relative drift: int m {dm:.2e}, int (q-1) {dq:.2e}");
    Ok(())
}
