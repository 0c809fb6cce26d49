//! The study command: convergence ladder against a reference solution.

use std::path::{Path, PathBuf};
use std::time::Instant;

use sie_core::catalog::Catalog;
use sie_core::collocation::convergence_study;

use crate::commands::{load_config, resolve_out};
use crate::output::{fmt_float, write_csv, write_json};
use crate::{CliError, CmdResult};

pub fn run(config_path: &Path, out: Option<PathBuf>) -> CmdResult {
    let started = Instant::now();
    let cfg = load_config(config_path)?;
    let out_dir = resolve_out(&cfg, out);
    let fail = |e: CliError| (e, Some(out_dir.clone()));

    let ladder = cfg
        .discretization
        .ladder
        .clone()
        .ok_or_else(|| CliError::config("study needs discretization.ladder".into()))
        .map_err(fail)?;
    if ladder.len() < 3 {
        return Err(fail(CliError::config(format!(
            "ladder needs at least 3 levels, got {}",
            ladder.len()
        ))));
    }

    let built = cfg.problem_spec(ladder[0]).map_err(fail)?;
    let reference = match &built.manufactured {
        Some(phi) => phi.clone(),
        None => {
            let expr = cfg
                .reference()
                .map_err(fail)?
                .ok_or_else(|| {
                    CliError::config(
                        "study needs problem.exact_solution or problem.manufactured_solution"
                            .into(),
                    )
                })
                .map_err(fail)?;
            Catalog::function(&built.spec.contour, &expr)
                .map_err(|e| fail(CliError::from_config_stage(e)))?
        }
    };

    let report = convergence_study(&built.spec, &ladder, &reference)
        .map_err(|e| fail(CliError::from_solve_stage(e)))?;

    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n_b.to_string(),
                fmt_float(r.ph_error),
                fmt_float(r.sup_error),
                fmt_float(r.condition),
            ]
        })
        .collect();
    write_csv(&out_dir, "study.csv", "n_b,ph_beta_error,sup_error,cond", &rows).map_err(fail)?;

    let slope_target = cfg
        .discretization
        .slope_target
        .unwrap_or(-(cfg.discretization.alpha - cfg.discretization.beta) + 0.15);
    let slope = report.slope_ph;
    let pass = slope.map(|s| s <= slope_target).unwrap_or(false);

    let json_rows: Vec<serde_json::Value> = report
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "n_b": r.n_b,
                "ph_beta_error": r.ph_error,
                "sup_error": r.sup_error,
                "cond": r.condition,
                "jump_size_error": r.jump_size_error,
                "failure": r.failure,
            })
        })
        .collect();
    let study_json = serde_json::json!({
        "rows": json_rows,
        "slope_ph": slope,
        "slope_sup": report.slope_sup,
        "slope_target": slope_target,
        "pass": pass,
    });
    write_json(&out_dir, "study.json", &study_json).map_err(fail)?;

    let meta = serde_json::json!({
        "command": "study",
        "seconds_total": started.elapsed().as_secs_f64(),
        "seconds_per_level": report.rows.iter().map(|r| r.seconds).collect::<Vec<f64>>(),
    });
    write_json(&out_dir, "run_meta.json", &meta).map_err(fail)?;

    if !pass {
        return Err(fail(CliError::tolerance(format!(
            "fitted PH slope {:?} misses target {slope_target}",
            slope
        ))));
    }
    Ok(())
}
