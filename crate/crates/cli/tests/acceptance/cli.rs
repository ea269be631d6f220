//! End-to-end runs of the `sdlab` binary.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdlab")).args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = sdlab(args);
    assert!(out.status.success(), "sdlab {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_ok(args)).unwrap()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sdlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn entropy_curve_csv_shape() {
    let (header, rows) = csv(&stdout_ok(&["entropy-curve", "--preset", "fig3"]));
    assert_eq!(header, ["t", "entropy_bits"]);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[199][0] - 2.0 * PI).abs() < 1e-11);
    assert!(rows[0][1] <= 1e-6);
}

#[test]
fn values_carry_twelve_significant_digits() {
    let text = stdout_ok(&["entropy-curve", "--preset", "fig2", "--steps", "3"]);
    let line = text.lines().nth(2).unwrap();
    assert_eq!(line.split(',').next().unwrap(), "1.57079632679");
}

#[test]
fn fig2_is_periodic_and_fig4_dominates_fig3() {
    let (_, f2) = csv(&stdout_ok(&["entropy-curve", "--preset", "fig2"]));
    assert!((f2[0][1] - f2[199][1]).abs() <= 1e-6);
    let max = |rows: &[Vec<f64>]| rows.iter().map(|r| r[1]).fold(f64::NEG_INFINITY, f64::max);
    let (_, f3) = csv(&stdout_ok(&["entropy-curve", "--preset", "fig3"]));
    let (_, f4) = csv(&stdout_ok(&["entropy-curve", "--preset", "fig4"]));
    assert!(max(&f4) >= max(&f3));
}

#[test]
fn nats_flag_rescales() {
    let bits = csv(&stdout_ok(&["entropy-curve", "--preset", "fig2", "--steps", "5"])).1;
    let (header, nats) = csv(&stdout_ok(&["entropy-curve", "--preset", "fig2", "--steps", "5", "--nats"]));
    assert_eq!(header[1], "entropy_nats");
    for (b, n) in bits.iter().zip(&nats) {
        assert!((b[1] * std::f64::consts::LN_2 - n[1]).abs() < 1e-11);
    }
}

/// Local maxima standing at least `floor` times the column maximum.
fn prominent_maxima(col: &[f64], floor: f64) -> usize {
    let top = col.iter().copied().fold(0.0, f64::max);
    (1..col.len() - 1).filter(|&i| col[i] > col[i - 1] && col[i] >= col[i + 1] && col[i] >= floor * top).count()
}

#[test]
fn fig1_densities() {
    let (header, rows) = csv(&stdout_ok(&["density", "--preset", "fig1"]));
    assert_eq!(header, ["x", "density_t0", "density_t1"]);
    assert_eq!(rows.len(), 1024);
    for c in 1..=2 {
        let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        let trapezoid: f64 = rows.windows(2).map(|w| 0.5 * (w[1][0] - w[0][0]) * (w[0][c] + w[1][c])).sum();
        assert!((trapezoid - 1.0).abs() <= 1e-4, "column {c}: {trapezoid}");
        for i in 0..512 {
            assert!((col[i] - col[1023 - i]).abs() <= 1e-8);
        }
    }
    // The t = 0 column has two faint bumps near x = ±0.3 of 0.3% of its peak;
    // counting features above 1% of the peak leaves the two main lobes.
    let t0: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let t1: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    assert_eq!(prominent_maxima(&t0, 0.01), 2);
    assert_eq!(prominent_maxima(&t1, 0.01), 4);
}

#[test]
fn free_ring_plane_wave_rdm() {
    let d = json(&["rdm", "--model", "free", "--epsilon", "pi/4", "--k", "1"]);
    assert_eq!(d["B"], 8);
    let entries = d["entries"].as_array().unwrap();
    for y in 0..8 {
        for y2 in 0..8 {
            let e = &entries[y * 8 + y2];
            let phase = (y as f64 - y2 as f64) * PI / 4.0;
            let scale = (PI / 4.0) / (2.0 * PI);
            assert!((e[0].as_f64().unwrap() - scale * phase.cos()).abs() < 1e-12);
            assert!((e[1].as_f64().unwrap() - scale * phase.sin()).abs() < 1e-12);
        }
    }
    assert!(d["entropy_bits"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn fig2_rdm_is_hermitian_with_unit_trace() {
    let d = json(&["rdm", "--preset", "fig2", "--at", "0"]);
    let n = d["B"].as_u64().unwrap() as usize;
    assert_eq!(n, 25);
    let e = d["entries"].as_array().unwrap();
    let z = |i: usize, j: usize| (e[i * n + j][0].as_f64().unwrap(), e[i * n + j][1].as_f64().unwrap());
    let mut trace = 0.0;
    for i in 0..n {
        trace += z(i, i).0;
        for j in 0..n {
            assert_eq!(z(i, j).0, z(j, i).0);
            assert_eq!(z(i, j).1, -z(j, i).1);
        }
    }
    assert!((trace - 1.0).abs() <= 1e-6);
}

#[test]
fn rdm_agrees_with_the_curve() {
    let d = json(&["rdm", "--preset", "fig3", "--at", "0.2"]);
    let sum: f64 = d["spectrum"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() <= 1e-6);
    let c: Value = json(&["entropy-curve", "--preset", "fig3", "--format", "json"]);
    let times: Vec<f64> = c["times"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let nearest = (0..times.len()).min_by(|&a, &b| (times[a] - 0.2).abs().total_cmp(&(times[b] - 0.2).abs())).unwrap();
    let t = format!("{}", times[nearest]);
    let at_nearest = json(&["rdm", "--preset", "fig3", "--at", &t]);
    let from_curve = c["entropy_bits"][nearest].as_f64().unwrap();
    assert!((at_nearest["entropy_bits"].as_f64().unwrap() - from_curve).abs() <= 1e-9);
}

#[test]
fn decompose_tables() {
    let d = json(&["decompose", "--preset", "eq5"]);
    let rows = d["coefficients"].as_array().unwrap();
    let norms: Vec<f64> = rows.iter().map(|r| r["norm"].as_f64().unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[0] >= w[1]));
    assert!(norms.iter().all(|&v| v >= 1e-4));
    assert_eq!(rows[0]["n"], 1);
    assert_eq!(rows[0]["parity"], "-");

    // The free ring is expanded in cos/sin, so e^{ix} splits evenly over 1+ and 1-.
    let d = json(&["decompose", "--model", "free", "--k", "1"]);
    let rows = d["coefficients"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!((r["norm"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }
    let d = json(&["decompose", "--model", "free", "--k", "0"]);
    assert_eq!(d["coefficients"].as_array().unwrap().len(), 1);
}

#[test]
fn presets_are_deterministic_across_thread_counts() {
    for args in [
        &["entropy-curve", "--preset", "fig4"][..],
        &["decompose", "--preset", "eq6"][..],
        &["density", "--preset", "fig1"][..],
        &["rdm", "--preset", "fig2", "--at", "1"][..],
    ] {
        let run = |threads: &str| {
            Command::new(env!("CARGO_BIN_EXE_sdlab")).args(args).env("SDLAB_THREADS", threads).output().unwrap()
        };
        let first = run("1");
        assert!(first.status.success());
        assert_eq!(first.stdout, run("1").stdout);
        assert_eq!(first.stdout, run("4").stdout);
        assert_eq!(first.stdout, run("0").stdout);
    }
}

#[test]
fn dump_config_round_trips() {
    let cfg_path = scratch("fig4.json");
    let dumped = stdout_ok(&["entropy-curve", "--preset", "fig4", "--steps", "40", "--dump-config"]);
    std::fs::write(&cfg_path, &dumped).unwrap();
    let again = stdout_ok(&["entropy-curve", "--config", cfg_path.to_str().unwrap(), "--dump-config"]);
    assert_eq!(dumped, again);
    let direct = stdout_ok(&["entropy-curve", "--preset", "fig4", "--steps", "40"]);
    let replayed = stdout_ok(&["entropy-curve", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(direct, replayed);
}

#[test]
fn out_flag_writes_the_file() {
    let path = scratch("fig2.csv");
    let out = sdlab(&["entropy-curve", "--preset", "fig2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout_ok(&["entropy-curve", "--preset", "fig2"]));
}

#[test]
fn state_file_coefficients() {
    let path = scratch("state.json");
    std::fs::write(&path, r#"[{"n": 1, "re": 0.6}, {"n": 2, "parity": "+", "re": 0, "im": 0.8}]"#).unwrap();
    let d = json(&["rdm", "--model", "ho", "--state", path.to_str().unwrap(), "--at", "0.3"]);
    assert_eq!(d["B"], 25);
    let path = scratch("ring_state.json");
    std::fs::write(&path, r#"[{"n": 1, "parity": "-", "re": 1}]"#).unwrap();
    let d = json(&["rdm", "--model", "ring", "--v0", "3", "--state", path.to_str().unwrap()]);
    assert!(d["entropy_bits"].as_f64().unwrap() >= 0.0);
}

#[test]
fn configuration_errors_exit_with_2() {
    for args in [
        &["rdm", "--model", "ring", "--v0", "3", "--epsilon", "0.5"][..],
        &["rdm", "--model", "ring"][..],
        &["entropy-curve", "--preset", "fig9"][..],
        &["entropy-curve", "--preset", "fig3", "--epsilon", "pi/"][..],
        &["decompose", "--preset", "fig2"][..],
        &["rdm", "--preset", "fig2", "--format", "csv"][..],
    ] {
        let out = sdlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let missing = sdlab(&["rdm", "--model", "ring"]);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--v0"));
}

#[test]
fn numerical_failures_exit_with_3() {
    let out = sdlab(&["decompose", "--model", "ring", "--v0", "3", "--e-max", "4", "--k", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_max"));
}

#[test]
fn coherent_state_entropy_band() {
    let path = scratch("coherent.json");
    std::fs::write(&path, r#"{"kind": "coherent", "displacement": 2.0}"#).unwrap();
    let (_, rows) = csv(&stdout_ok(&[
        "entropy-curve",
        "--model",
        "ho",
        "--state",
        path.to_str().unwrap(),
        "--t1",
        "2*pi",
        "--steps",
        "101",
    ]));
    let s: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("coherent state, displacement 2, ε = 1/2: S in [{lo:.9}, {hi:.9}], band {:.2e}", hi - lo);
    assert!(lo > 0.05 && hi - lo < 1e-5);
}
