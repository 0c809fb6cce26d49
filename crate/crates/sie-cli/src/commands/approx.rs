//! The approx command: direct approximation rates for a target function,
//! interpolating the continuous part on the knots and carrying the jumps
//! exactly.

use std::path::{Path, PathBuf};
use std::time::Instant;

use sie_core::basis::{interpolate_continuous, reconstruct, BasisCoeffs, SplineKnots};
use sie_core::catalog::Catalog;
use sie_core::collocation::fit_slope;
use sie_core::piecewise::{decompose, ph_norm_estimate};

use crate::commands::{load_config, resolve_out};
use crate::config::tabulated_function;
use crate::output::{fmt_float, write_csv, write_json};
use crate::{CliError, CmdResult};

struct ApproxRow {
    n_b: usize,
    sup_error: f64,
    ph_error: f64,
    failure: Option<String>,
}

impl sie_core::collocation::HasNb for ApproxRow {
    fn n_b(&self) -> usize {
        self.n_b
    }
}

pub fn run(config_path: &Path, out: Option<PathBuf>) -> CmdResult {
    let started = Instant::now();
    let cfg = load_config(config_path)?;
    let out_dir = resolve_out(&cfg, out);
    let fail = |e: CliError| (e, Some(out_dir.clone()));

    let ladder = cfg
        .discretization
        .ladder
        .clone()
        .ok_or_else(|| CliError::config("approx needs discretization.ladder".into()))
        .map_err(fail)?;
    if ladder.len() < 3 {
        return Err(fail(CliError::config(format!(
            "ladder needs at least 3 levels, got {}",
            ladder.len()
        ))));
    }
    let contour = cfg.contour().map_err(fail)?;
    let target = if let Some(expr) = &cfg.problem.target {
        Catalog::function(&contour, expr).map_err(|e| fail(CliError::from_config_stage(e)))?
    } else if let Some(path) = &cfg.problem.f_csv {
        let jumps = match &cfg.problem.jumps_csv {
            Some(jp) => crate::config::read_jumps_csv(jp).map_err(fail)?,
            None => Vec::new(),
        };
        tabulated_function(path, &jumps).map_err(fail)?
    } else {
        return Err(fail(CliError::config(
            "approx needs problem.target or problem.f_csv".into(),
        )));
    };

    let m = cfg.discretization.m;
    let beta_exp = cfg.discretization.beta;
    let dense = cfg.discretization.dense_factor.max(1) * ladder.last().unwrap();
    let decomposed = decompose(&target).map_err(|e| fail(CliError::from_solve_stage(e)))?;

    let mut rows: Vec<ApproxRow> = Vec::new();
    for &n_b in &ladder {
        let level = (|| -> Result<(f64, f64), sie_core::Error> {
            let grid = contour.nodes(n_b)?;
            let knots = SplineKnots::from_grid(&grid, m)?;
            let values: Vec<_> = knots
                .points()
                .iter()
                .map(|p| decomposed.continuous.value(p.theta))
                .collect();
            let alpha = interpolate_continuous(&values, &knots)?;
            let coeffs = BasisCoeffs { alpha, beta: decomposed.steps.jumps().to_vec() };
            let mut sup: f64 = 0.0;
            let mut diff = Vec::with_capacity(dense);
            for i in 0..dense {
                let theta = std::f64::consts::TAU * (i as f64 + 0.5) / dense as f64;
                let t = contour.point(theta);
                let got = reconstruct(&coeffs, &knots, &decomposed.steps, &t)?;
                let delta = got - target.value(theta);
                sup = sup.max(delta.norm());
                diff.push((theta, delta));
            }
            let ph = ph_norm_estimate(&contour, &diff, &decomposed.steps, beta_exp)?.total;
            Ok((sup, ph))
        })();
        match level {
            Ok((sup, ph)) => {
                rows.push(ApproxRow { n_b, sup_error: sup, ph_error: ph, failure: None })
            }
            Err(e) => rows.push(ApproxRow {
                n_b,
                sup_error: f64::NAN,
                ph_error: f64::NAN,
                failure: Some(e.code().to_string()),
            }),
        }
    }

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n_b.to_string(), fmt_float(r.sup_error), fmt_float(r.ph_error)])
        .collect();
    write_csv(&out_dir, "approx.csv", "n_b,sup_error,ph_beta_error", &csv_rows).map_err(fail)?;

    let ok_rows: Vec<&ApproxRow> = rows.iter().filter(|r| r.failure.is_none()).collect();
    let slope_sup = fit_slope(&ok_rows, |r| r.sup_error);
    let slope_ph = fit_slope(&ok_rows, |r| r.ph_error);
    let json_rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "n_b": r.n_b,
                "sup_error": r.sup_error,
                "ph_beta_error": r.ph_error,
                "failure": r.failure,
            })
        })
        .collect();
    let pass = match cfg.discretization.slope_target {
        Some(target_slope) => slope_sup.map(|s| s <= target_slope).unwrap_or(false),
        None => rows.iter().all(|r| r.failure.is_none()),
    };
    let approx_json = serde_json::json!({
        "rows": json_rows,
        "slope_sup": slope_sup,
        "slope_ph": slope_ph,
        "slope_target": cfg.discretization.slope_target,
        "pass": pass,
    });
    write_json(&out_dir, "approx.json", &approx_json).map_err(fail)?;

    let meta = serde_json::json!({
        "command": "approx",
        "seconds_total": started.elapsed().as_secs_f64(),
    });
    write_json(&out_dir, "run_meta.json", &meta).map_err(fail)?;

    if !pass {
        return Err(fail(CliError::tolerance(format!(
            "approximation slopes sup={slope_sup:?} ph={slope_ph:?} miss the target {:?}",
            cfg.discretization.slope_target
        ))));
    }
    Ok(())
}
