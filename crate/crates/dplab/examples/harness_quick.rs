//! A reduced end-to-end experiment in T1: datum, reflection data, direct
//! evolution, leading term at fixed s and the decay fit. Reports go to
//! target/dplab-quick.

use dplab::harness::{assertion_lines, run_experiment, write_reports, ExperimentConfig};
use dplab::phase::Zone;

fn main() -> dplab::Result<()> {
    let cfg = ExperimentConfig {
        zones: vec![Zone::T1],
        t_list_t1: vec![10.0, 20.0, 40.0],
        grid_n: 4096,
        half_length: Some(192.0),
        ..Default::default()
    };
    let out = run_experiment(&cfg)?;
    for z in &out.summary.zones {
        println!("{:?}: status {}, amplitude {:?}", z.zone, z.status, z.amplitude);
        for p in &z.per_t {
            println!("  t = {:>4}: direct rms {:.4e}, asym rms {:.4e}, residual rms {:.4e}", p.t, p.direct_rms, p.asym_rms, p.residual_rms);
        }
    }
    for line in assertion_lines(&out.summary) {
        println!("{line}");
    }
    write_reports(&out, std::path::Path::new("target/dplab-quick"))?;
    Ok(())
}
