use clap::{Parser, Subcommand};
use dplab::asymptotics::{leading_u, painleve_for, LeadingOptions};
use dplab::dpsolve::{evolve, EvolveOptions};
use dplab::harness::{assertion_lines, fmt17, read_datum, run_experiment, write_reports, ExperimentConfig};
use dplab::painleve::{solve_as, AsOptions};
use dplab::phase::{signature, theta12, theta12_derivs, Zone};
use dplab::rhmodel::{extract_v, solve_model};
use dplab::scattering::{q_of_u, reflection};
use num_complex::Complex64 as C64;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dplab", version, about = "Transition-zone asymptotics of the Degasperis-Procesi equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"))).collect()
}

#[derive(Subcommand)]
enum Cmd {
    /// θ₁₂, ∂θ₁₂/∂k and sign Im θ₁₂ on a k grid (CSV).
    Phase {
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long, default_value_t = 0.1)]
        kmin: f64,
        #[arg(long, default_value_t = 10.0)]
        kmax: f64,
        #[arg(long, default_value_t = 101)]
        nk: usize,
        /// Imaginary offset added to every k for the signature column.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
    },
    /// Ablowitz–Segur solution on a grid (CSV s, v, v', I).
    Painleve {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -8.0)]
        smin: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 8.0)]
        smax: f64,
        #[arg(long, default_value_t = 0.01)]
        ds: f64,
    },
    /// Model Riemann–Hilbert solve (JSON).
    Rhmodel {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Imaginary part of c₁.
        #[arg(long, allow_hyphen_values = true)]
        c1: f64,
        #[arg(long, default_value_t = 128)]
        n_colloc: usize,
    },
    /// Reflection coefficient of a datum file (CSV k, Re r, Im r, |r|).
    Scatter {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long)]
        nk: usize,
    },
    /// Direct evolution; one snapshot CSV (x, u, m, q, y) per time under --out.
    Evolve {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long)]
        dt: Option<f64>,
        /// Comma-separated snapshot times.
        #[arg(long)]
        snap: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Leading transition-zone term at (x, t) (JSON).
    Asym {
        #[arg(long)]
        zone: Zone,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        t: f64,
        /// Painlevé amplitude |r(k_j)|.
        #[arg(long)]
        amp: f64,
        /// Phase constants ψ_j, one per merged point (comma separated).
        #[arg(long, allow_hyphen_values = true)]
        phase: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y_shift: f64,
    },
    /// End-to-end experiment with acceptance assertions.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn run(cmd: Cmd) -> Res<ExitCode> {
    let stdout = std::io::stdout();
    let mut w = std::io::BufWriter::new(stdout.lock());
    match cmd {
        Cmd::Phase { xi, kmin, kmax, nk, im } => {
            writeln!(w, "k,theta12,dtheta,sign_im")?;
            for k in grid(kmin, kmax, nk) {
                let th = theta12(C64::new(k, 0.0), xi)?.re;
                let d = theta12_derivs(k, xi, 1)?;
                let sg = signature(C64::new(k, im), xi)?;
                writeln!(w, "{},{},{},{}", fmt17(k), fmt17(th), fmt17(d), sg)?;
            }
        }
        Cmd::Painleve { a, smin, smax, ds } => {
            let sol = solve_as(a, smin, smax.max(8.0), AsOptions { ds, ..Default::default() })?;
            writeln!(w, "s,v,v_prime,I")?;
            for i in 0..sol.grid.len() {
                if sol.grid[i] >= smin - 1e-12 && sol.grid[i] <= smax + 1e-12 {
                    writeln!(w, "{},{},{},{}", fmt17(sol.grid[i]), fmt17(sol.v[i]), fmt17(sol.v_prime[i]), fmt17(sol.tail[i]))?;
                }
            }
        }
        Cmd::Rhmodel { s, c1, n_colloc } => {
            let sol = solve_model(s, C64::new(0.0, c1), n_colloc)?;
            let (v, i) = extract_v(&sol.m1)?;
            let json = serde_json::json!({ "s": s, "v": v, "I": i, "residual": sol.residual, "n_colloc": sol.n_colloc });
            writeln!(w, "{}", serde_json::to_string_pretty(&json)?)?;
        }
        Cmd::Scatter { datum, kmin, kmax, nk } => {
            let (u, l) = read_datum(&datum)?;
            let st = q_of_u(&u, l, 0.0)?;
            let ks = grid(kmin, kmax, nk);
            let r = reflection(&ks, &st)?;
            writeln!(w, "k,re_r,im_r,abs_r")?;
            for (k, r) in ks.iter().zip(&r.r) {
                writeln!(w, "{},{},{},{}", fmt17(*k), fmt17(r.re), fmt17(r.im), fmt17(r.norm()))?;
            }
        }
        Cmd::Evolve { datum, t_end, dt, snap, out } => {
            let (u, l) = read_datum(&datum)?;
            let mut times = snap.as_deref().map(list).transpose()?.unwrap_or_default();
            times.push(t_end);
            times.sort_by(|a, b| a.total_cmp(b));
            times.dedup();
            let traj = evolve(&u, l, &times, EvolveOptions { dt, ..Default::default() })?;
            std::fs::create_dir_all(&out)?;
            for st in &traj.snapshots {
                let path = out.join(format!("snapshot_t{}.csv", st.time));
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                writeln!(f, "x,u,m,q,y")?;
                for i in 0..st.x.len() {
                    writeln!(f, "{},{},{},{},{}", fmt17(st.x[i]), fmt17(st.u[i]), fmt17(st.m[i]), fmt17(st.q[i]), fmt17(st.y[i]))?;
                }
                writeln!(w, "{}", path.display())?;
            }
            let (dm, dq) = traj.max_drift();
            eprintln!("steps {} dt {} drift(int m) {dm:.3e} drift(int q-1) {dq:.3e}", traj.steps, traj.dt);
        }
        Cmd::Asym { zone, x, t, amp, phase, y_shift } => {
            let s0 = dplab::asymptotics::s_of(zone, x - y_shift, t);
            let sol = painleve_for(zone, amp, s0.min(0.0) - 1.0, s0.max(0.0) + 1.0)?;
            let lt = leading_u(zone, x, t, &list(&phase)?, &sol, LeadingOptions { y_shift, ..Default::default() })?;
            let json = serde_json::json!({
                "s": lt.s, "v": lt.v,
                "f1": [lt.f1.re, lt.f1.im], "f2": [lt.f2.re, lt.f2.im],
                "u_asym": lt.u_asym,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&json)?)?;
        }
        Cmd::Run { config, out } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let res = run_experiment(&cfg)?;
            write_reports(&res, &out)?;
            for line in assertion_lines(&res.summary) {
                writeln!(w, "{line}")?;
            }
            w.flush()?;
            return Ok(if res.summary.all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
