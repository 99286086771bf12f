//! Runs the command-line tool end to end.

use std::path::PathBuf;
use std::process::Command;

fn dplab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dplab")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn phase_csv_has_seventeen_digits() {
    let (code, out, _) = dplab(&["phase", "--xi", "-0.375", "--kmin", "0.5", "--kmax", "3", "--nk", "6"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,theta12,dtheta,sign_im");
    assert_eq!(lines.len(), 7);
    let theta = lines[1].split(',').nth(1).unwrap();
    let mantissa = theta.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn painleve_and_rhmodel_agree() {
    let (code, out, _) = dplab(&["painleve", "--a", "-0.5", "--smin", "0", "--smax", "0.5", "--ds", "0.5"]);
    assert_eq!(code, 0);
    let v_ode: f64 = out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let (code, out, _) = dplab(&["rhmodel", "--s", "0", "--c1", "0.5"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((json["v"].as_f64().unwrap() - v_ode).abs() < 1e-8);
    assert!(json["n_colloc"].as_u64().is_some() && json["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn asym_json_fields() {
    let (code, out, _) = dplab(&["asym", "--zone", "t1", "--x", "-30", "--t", "80", "--amp", "0.2", "--phase", "0.4,-0.4,1,-1"]);
    assert_eq!(code, 0, "{out}");
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["s", "v", "f1", "f2", "u_asym"] {
        assert!(!json[key].is_null(), "{key}");
    }
    let (code, _, err) = dplab(&["asym", "--zone", "t2", "--x", "240", "--t", "80", "--amp", "1.0", "--phase", "0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("constraint"));
}

#[test]
fn scatter_and_evolve_from_datum_file() {
    let dir = scratch("cli-datum");
    let (n, l) = (512, 32.0);
    let u = dplab::scattering::gaussian_datum(n, l, -0.25, 2.0);
    let mut text = String::from("x,u\n");
    for (i, v) in u.iter().enumerate() {
        text += &format!("{:e},{:e}\n", -l + 2.0 * l * i as f64 / n as f64, v);
    }
    let datum = dir.join("datum.csv");
    std::fs::write(&datum, text).unwrap();
    let d = datum.to_str().unwrap();
    let (code, out, _) = dplab(&["scatter", "--datum", d, "--kmin", "1.5", "--kmax", "3", "--nk", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    let snaps = dir.join("snaps");
    let (code, out, _) = dplab(&["evolve", "--datum", d, "--T", "1", "--snap", "0.5", "--out", snaps.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let body = std::fs::read_to_string(snaps.join("snapshot_t1.csv")).unwrap();
    assert_eq!(body.lines().next().unwrap(), "x,u,m,q,y");
    assert_eq!(body.lines().count(), n + 1);
}

#[test]
fn run_writes_reports_and_sets_exit_code() {
    let dir = scratch("cli-run");
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/quick_t1.cfg");
    let (code, out, _) = dplab(&["run", "--config", cfg, "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    for f in ["raw.csv", "summary.json", "phase_tables.csv"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["all_pass"], true);
    assert!(summary["schema_version"].as_u64().is_some());

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "zones = t1\nnot_a_key = 3\n").unwrap();
    let (code, _, err) = dplab(&["run", "--config", bad.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not_a_key"));
}
