//! End-to-end tests of the CLI: exit codes, artifact files, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sie() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sie"))
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn run_ok(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn error_code(output: &Output) -> String {
    let text = String::from_utf8_lossy(&output.stdout);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap_or_else(|_| {
        panic!("expected error json on stdout, got: {text}");
    });
    v["error"]["code"].as_str().unwrap_or("").to_string()
}

fn dominant_config(out_dir: &Path) -> String {
    serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:2", "d": "const:1", "f": "laurent:1,2"},
        "discretization": {"n_b": 64, "m": 4},
        "output": {"directory": out_dir}
    })
    .to_string()
}

#[test]
fn solve_dominant_equation_reconstructs_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    write(&cfg_path, &dominant_config(&out_dir));

    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);

    for name in ["alpha.csv", "beta.csv", "reconstruction.csv", "solvability.json", "diagnostics.json", "run_meta.json"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    // reconstruction matches phi = tau/3 + 2/tau
    let recon = fs::read_to_string(out_dir.join("reconstruction.csv")).unwrap();
    let mut worst: f64 = 0.0;
    for line in recon.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let (theta, re, im) = (cells[0], cells[1], cells[2]);
        let z = num_complex::Complex64::from_polar(1.0, theta);
        let want = z / 3.0 + 2.0 / z;
        worst = worst.max((num_complex::Complex64::new(re, im) - want).norm());
    }
    assert!(worst <= 1e-4, "reconstruction error {worst}");
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg1 = dir.path().join("a.json");
    let cfg2 = dir.path().join("b.json");
    let out1 = dir.path().join("out1");
    let out2 = dir.path().join("out2");
    write(&cfg1, &dominant_config(&out1));
    write(&cfg2, &dominant_config(&out2));
    run_ok(&sie().args(["solve", "--config"]).arg(&cfg1).output().unwrap());
    run_ok(&sie().args(["solve", "--config"]).arg(&cfg2).output().unwrap());
    for name in ["alpha.csv", "beta.csv", "reconstruction.csv"] {
        let a = fs::read(out1.join(name)).unwrap();
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn singular_symbol_rejected_without_solution_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:1", "d": "const:1", "f": "const:1"},
        "discretization": {"n_b": 16, "m": 3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert_eq!(error_code(&output), "singular-symbol");
    assert!(!out_dir.join("alpha.csv").exists());
    assert!(out_dir.join("error.json").exists());
}

#[test]
fn override_solvability_reaches_numerics_stage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:1", "d": "const:1", "f": "const:1"},
        "discretization": {"n_b": 16, "m": 3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie()
        .args(["solve", "--override-solvability", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    // with b = c - d = 0 the operator is not invertible; the failure now
    // surfaces as a numerics error, not a solvability rejection
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn winding_symbol_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    // c + d = tau + 0.1 (winds once), c - d = 1
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {
            "c": "laurent:0.5,0+const:0.55",
            "d": "laurent:0.5,0+const:-0.45",
            "f": "const:0"
        },
        "discretization": {"n_b": 16, "m": 3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert_eq!(error_code(&output), "nonzero-winding");
}

#[test]
fn manufactured_solve_recovers_jump() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {
            "c": "const:2", "d": "const:1",
            "manufactured_solution": "cusp:0.6:pi+step:pi/2:2"
        },
        "discretization": {"n_b": 64, "m": 4, "alpha": 0.6, "beta": 0.3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    let beta = fs::read_to_string(out_dir.join("beta.csv")).unwrap();
    let line = beta.lines().nth(1).unwrap();
    let cells: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
    let recovered = num_complex::Complex64::new(cells[1], cells[2]);
    assert!(
        (recovered - num_complex::Complex64::new(2.0, 0.0)).norm() < 1e-3,
        "recovered jump {recovered}"
    );
}

#[test]
fn study_smooth_ladder_meets_slope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {
            "c": "const:2", "d": "const:1", "f": "laurent:1,2",
            "exact_solution": "laurent:1/3,2"
        },
        "discretization": {
            "n_b": 16, "ladder": [16, 32, 64, 128], "m": 4,
            "alpha": 1.0, "beta": 0.3, "slope_target": -0.6
        },
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["study", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    let study: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("study.json")).unwrap()).unwrap();
    assert!(study["pass"].as_bool().unwrap());
    assert!(study["slope_ph"].as_f64().unwrap() <= -0.6);
    let csv = fs::read_to_string(out_dir.join("study.csv")).unwrap();
    assert!(csv.starts_with("n_b,ph_beta_error,sup_error,cond\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn study_single_point_ladder_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:2", "d": "const:1", "f": "laurent:1,2",
                     "exact_solution": "laurent:1/3,2"},
        "discretization": {"ladder": [64], "m": 4},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["study", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn approx_pure_step_is_machine_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:1", "d": "const:0", "target": "step:pi:1"},
        "discretization": {"ladder": [16, 32, 64], "m": 4, "beta": 0.3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["approx", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    let approx: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("approx.json")).unwrap()).unwrap();
    for row in approx["rows"].as_array().unwrap() {
        assert!(row["sup_error"].as_f64().unwrap() <= 1e-13);
    }
}

#[test]
fn approx_cusp_quadratic_order_on_odd_ladder() {
    // order-3 knot interpolation is singular on even grids, so the ladder
    // uses odd sizes
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:1", "d": "const:0", "target": "cusp:0.6:pi"},
        "discretization": {"ladder": [33, 65, 129, 257], "m": 3, "beta": 0.3,
                            "slope_target": -0.45},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["approx", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    let approx: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("approx.json")).unwrap()).unwrap();
    assert!(approx["slope_sup"].as_f64().unwrap() <= -0.45);
}

#[test]
fn approx_quadratic_even_ladder_marks_singular_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:1", "d": "const:0", "target": "cusp:0.6:pi"},
        "discretization": {"ladder": [32, 64, 128], "m": 3, "beta": 0.3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["approx", "--config"]).arg(&cfg_path).output().unwrap();
    // every level fails with interpolation-singular; the partial report is
    // still written and the run exits with a tolerance breach
    assert_eq!(output.status.code(), Some(5));
    let approx: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("approx.json")).unwrap()).unwrap();
    for row in approx["rows"].as_array().unwrap() {
        assert_eq!(row["failure"].as_str().unwrap(), "interpolation-singular");
    }
}

#[test]
fn ops_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "discretization": {"n_b": 16, "m": 3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["ops-check", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    let csv = fs::read_to_string(out_dir.join("ops_check.csv")).unwrap();
    assert!(csv.starts_with("case,computed,reference,abs_err\n"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn detect_finds_step() {
    let dir = tempfile::tempdir().unwrap();
    let samples_path = dir.path().join("samples.csv");
    let mut text = String::from("theta,re,im\n");
    for i in 0..64 {
        let theta = std::f64::consts::TAU * (i as f64 + 0.5) / 64.0;
        let v = if theta >= std::f64::consts::PI { 1.0 } else { 0.0 };
        text.push_str(&format!("{theta},{v},0\n"));
    }
    write(&samples_path, &text);
    let out_dir = dir.path().join("out");
    let output = sie()
        .args(["detect", "--threshold", "5", "--samples"])
        .arg(&samples_path)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    run_ok(&output);
    let jumps: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("jumps.json")).unwrap()).unwrap();
    let arr = jumps["jumps"].as_array().unwrap();
    assert_eq!(arr.len(), 1);
    let theta = arr[0]["theta"].as_f64().unwrap();
    assert!((theta - std::f64::consts::PI).abs() < 0.2);
    assert!((arr[0]["re_jump"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn detect_insufficient_samples_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let samples_path = dir.path().join("samples.csv");
    let mut text = String::from("theta,re,im\n");
    for i in 0..8 {
        text.push_str(&format!("{},0,0\n", i as f64 * 0.3));
    }
    write(&samples_path, &text);
    let output = sie()
        .args(["detect", "--threshold", "5", "--samples"])
        .arg(&samples_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_config_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    write(&cfg_path, "{ not json");
    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert_eq!(error_code(&output), "config-error");
}

#[test]
fn dump_matrix_writes_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:2", "d": "const:1", "f": "laurent:1,2"},
        "discretization": {"n_b": 8, "m": 3},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie()
        .args(["solve", "--dump-matrix", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    run_ok(&output);
    let matrix = fs::read_to_string(out_dir.join("matrix.csv")).unwrap();
    assert!(matrix.starts_with("row,col,re,im\n"));
    assert_eq!(matrix.lines().count(), 1 + 64);
}

#[test]
fn tabulated_input_solves() {
    let dir = tempfile::tempdir().unwrap();
    let f_path = dir.path().join("f.csv");
    let mut text = String::from("theta,re,im\n");
    for i in 0..256 {
        let theta = std::f64::consts::TAU * (i as f64 + 0.5) / 256.0;
        let z = num_complex::Complex64::from_polar(1.0, theta);
        let v = z + 2.0 / z;
        text.push_str(&format!("{theta},{},{}\n", v.re, v.im));
    }
    write(&f_path, &text);
    let cfg_path = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    let cfg = serde_json::json!({
        "contour": {"kind": "circle", "radius": 1.0},
        "problem": {"c": "const:2", "d": "const:1", "f_csv": f_path},
        "discretization": {"n_b": 32, "m": 4},
        "output": {"directory": out_dir}
    });
    write(&cfg_path, &cfg.to_string());
    let output = sie().args(["solve", "--config"]).arg(&cfg_path).output().unwrap();
    run_ok(&output);
    // linear interpolation of the data limits the accuracy; the solve must
    // still land near the closed form
    let recon = fs::read_to_string(out_dir.join("reconstruction.csv")).unwrap();
    let mut worst: f64 = 0.0;
    for line in recon.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let z = num_complex::Complex64::from_polar(1.0, cells[0]);
        let want = z / 3.0 + 2.0 / z;
        worst = worst.max((num_complex::Complex64::new(cells[1], cells[2]) - want).norm());
    }
    assert!(worst <= 1e-2, "tabulated reconstruction error {worst}");
}
