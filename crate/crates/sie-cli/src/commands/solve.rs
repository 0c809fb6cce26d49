//! The solve command: one problem, full pipeline, artifact files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use sie_core::basis::{reconstruct, SplineKnots};
use sie_core::collocation::{solve_with, ShiftReason};

use crate::commands::{load_config, resolve_out};
use crate::output::{fmt_float, write_csv, write_json};
use crate::{CliError, CmdResult};

pub fn run(
    config_path: &Path,
    out: Option<PathBuf>,
    dump_matrix: bool,
    override_solvability: bool,
) -> CmdResult {
    let started = Instant::now();
    let cfg = load_config(config_path)?;
    let out_dir = resolve_out(&cfg, out);
    let fail = |e: CliError| (e, Some(out_dir.clone()));

    let n_b = cfg
        .discretization
        .n_b
        .ok_or_else(|| CliError::config("solve needs discretization.n_b".into()))
        .map_err(fail)?;
    let built = cfg.problem_spec(n_b).map_err(fail)?;
    let spec = built.spec;

    let (coeffs, system, report) =
        solve_with(&spec, override_solvability).map_err(|e| fail(CliError::from_solve_stage(e)))?;

    // coefficients
    let alpha_rows: Vec<Vec<String>> = coeffs
        .alpha
        .iter()
        .enumerate()
        .map(|(k, a)| vec![(k + 1).to_string(), fmt_float(a.re), fmt_float(a.im)])
        .collect();
    write_csv(&out_dir, "alpha.csv", "k,re_alpha,im_alpha", &alpha_rows).map_err(fail)?;
    let beta_rows: Vec<Vec<String>> = coeffs
        .beta
        .iter()
        .enumerate()
        .map(|(s, b)| vec![(s + 1).to_string(), fmt_float(b.re), fmt_float(b.im)])
        .collect();
    write_csv(&out_dir, "beta.csv", "s,re_beta,im_beta", &beta_rows).map_err(fail)?;

    // dense reconstruction
    let grid = spec.contour.nodes(spec.n_b).map_err(|e| fail(CliError::from_solve_stage(e)))?;
    let knots =
        SplineKnots::from_grid(&grid, spec.m).map_err(|e| fail(CliError::from_solve_stage(e)))?;
    let dense = cfg.discretization.dense_factor.max(1) * spec.n_b;
    let mut recon_rows = Vec::with_capacity(dense);
    for i in 0..dense {
        let theta = std::f64::consts::TAU * i as f64 / dense as f64;
        let t = spec.contour.point(theta);
        let v = reconstruct(&coeffs, &knots, &spec.jump_set, &t)
            .map_err(|e| fail(CliError::from_solve_stage(e)))?;
        recon_rows.push(vec![fmt_float(theta), fmt_float(v.re), fmt_float(v.im)]);
    }
    write_csv(&out_dir, "reconstruction.csv", "theta,re,im", &recon_rows).map_err(fail)?;

    // solvability report
    let solvability = serde_json::json!({
        "min_abs_sum": report.min_abs_sum,
        "min_abs_diff": report.min_abs_diff,
        "winding": report.winding,
        "pass": report.pass,
        "chord_warning": report.chord_warning,
        "kernel_triviality": report.kernel_triviality,
        "overridden": report.overridden,
    });
    write_json(&out_dir, "solvability.json", &solvability).map_err(fail)?;

    // diagnostics (deterministic; wall time lives in run_meta.json)
    let shift_log: Vec<serde_json::Value> = system
        .nodes
        .shift_log
        .iter()
        .map(|r| {
            serde_json::json!({
                "index": r.index,
                "original": r.original,
                "shifted": r.shifted,
                "reason": match r.reason {
                    ShiftReason::JumpCollision => "jump-collision",
                    ShiftReason::ReferenceGuard => "reference-guard",
                    ShiftReason::JumpNodeOffset => "jump-node-offset",
                },
            })
        })
        .collect();
    let diagnostics = serde_json::json!({
        "n": spec.n_total(),
        "n_b": spec.n_b,
        "n_d": spec.jump_set.n_d(),
        "m": spec.m,
        "condition_estimate": system.condition,
        "shift_log": shift_log,
    });
    write_json(&out_dir, "diagnostics.json", &diagnostics).map_err(fail)?;

    if dump_matrix {
        let n = spec.n_total();
        let mut rows = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let z = system.matrix[(r, c)];
                rows.push(vec![
                    r.to_string(),
                    c.to_string(),
                    fmt_float(z.re),
                    fmt_float(z.im),
                ]);
            }
        }
        write_csv(&out_dir, "matrix.csv", "row,col,re,im", &rows).map_err(fail)?;
    }

    let meta = serde_json::json!({
        "command": "solve",
        "seconds_total": started.elapsed().as_secs_f64(),
    });
    write_json(&out_dir, "run_meta.json", &meta).map_err(fail)?;
    Ok(())
}
