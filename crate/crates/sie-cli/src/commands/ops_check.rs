//! The ops-check command: oracle-comparison tables for the singular
//! operator identities and the regular operator residues.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64 as C64;

use sie_core::piecewise::JumpSet;
use sie_core::singular_ops::{
    oracle_pv, regular_op, sing_continuous, sing_heaviside, KernelFn,
};

use crate::commands::{load_config, resolve_out};
use crate::output::{fmt_complex, fmt_float, write_csv, write_json};
use crate::{CliError, CmdResult};

struct Case {
    name: String,
    computed: C64,
    reference: C64,
    tolerance: f64,
}

pub fn run(config_path: &Path, out: Option<PathBuf>) -> CmdResult {
    let started = Instant::now();
    let cfg = load_config(config_path)?;
    let out_dir = resolve_out(&cfg, out);
    let fail = |e: CliError| (e, Some(out_dir.clone()));

    let contour = cfg.contour().map_err(fail)?;
    let quad = cfg.quadrature().map_err(fail)?;
    let mut cases: Vec<Case> = Vec::new();

    // monomial eigenrelations S(tau^k) = sign(k) tau^k at 50 points
    for k in -3i32..=3 {
        let f = move |th: f64| C64::from_polar(1.0, k as f64 * th);
        let mut worst = (0.0f64, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for i in 0..50 {
            let theta = TAU * (i as f64 + 0.37) / 50.0;
            let t = contour.point(theta);
            let got = sing_continuous(&contour, &quad, &f, &[], &t)
                .map_err(|e| fail(CliError::from_solve_stage(e)))?;
            let sign = if k >= 0 { 1.0 } else { -1.0 };
            let want = f(theta) * C64::new(sign, 0.0);
            let err = (got - want).norm();
            if err > worst.0 {
                worst = (err, got, want);
            }
        }
        let tol = if k == 0 { 1e-10 } else { 1e-8 };
        cases.push(Case {
            name: format!("S(tau^{k}) eigenrelation, worst of 50 points"),
            computed: worst.1,
            reference: worst.2,
            tolerance: tol,
        });
    }

    // Heaviside column versus the principal-value oracle
    let js = JumpSet::new(vec![(PI, C64::new(1.0, 0.0))])
        .map_err(|e| fail(CliError::from_solve_stage(e)))?;
    let step = |th: f64| if th >= PI { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    for theta in [PI / 4.0, 3.0 * PI / 2.0, 0.9, 5.1] {
        let t = contour.point(theta);
        let got = sing_heaviside(&contour, &js, 0, &t)
            .map_err(|e| fail(CliError::from_solve_stage(e)))?;
        let want = oracle_pv(&contour, &quad, &step, &[PI, 0.0], &[], &t)
            .map_err(|e| fail(CliError::from_solve_stage(e)))?;
        cases.push(Case {
            name: format!("S(H_pi) vs oracle at theta={theta:.3}"),
            computed: got,
            reference: want,
            tolerance: 1e-8,
        });
    }

    // regular operator residues
    let h_one = KernelFn::new(|_t: &sie_core::ParamPoint64, _tau: &sie_core::ParamPoint64| {
        C64::new(1.0, 0.0)
    });
    let t0 = contour.point(0.7);
    let one = |_: f64| C64::new(1.0, 0.0);
    let got = regular_op(&contour, &quad, &h_one, &one, None, &[], &[], &t0)
        .map_err(|e| fail(CliError::from_solve_stage(e)))?;
    cases.push(Case {
        name: "K with h=1 of b=1 (closed contour integral)".into(),
        computed: got,
        reference: C64::new(0.0, 0.0),
        tolerance: 1e-10,
    });
    let contour_inv = contour.clone();
    let inv = move |th: f64| C64::new(1.0, 0.0) / contour_inv.map(th);
    let got = regular_op(&contour, &quad, &h_one, &inv, None, &[], &[], &t0)
        .map_err(|e| fail(CliError::from_solve_stage(e)))?;
    cases.push(Case {
        name: "K with h=1 of b=1/tau (residue)".into(),
        computed: got,
        reference: C64::new(1.0, 0.0),
        tolerance: 1e-10,
    });

    let rows: Vec<Vec<String>> = cases
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                fmt_complex(c.computed.re, c.computed.im),
                fmt_complex(c.reference.re, c.reference.im),
                fmt_float((c.computed - c.reference).norm()),
            ]
        })
        .collect();
    write_csv(&out_dir, "ops_check.csv", "case,computed,reference,abs_err", &rows)
        .map_err(fail)?;

    let failures: Vec<String> = cases
        .iter()
        .filter(|c| (c.computed - c.reference).norm() > c.tolerance)
        .map(|c| c.name.clone())
        .collect();
    let json = serde_json::json!({
        "cases": cases.len(),
        "failures": failures,
        "pass": failures.is_empty(),
    });
    write_json(&out_dir, "ops_check.json", &json).map_err(fail)?;
    let meta = serde_json::json!({
        "command": "ops-check",
        "seconds_total": started.elapsed().as_secs_f64(),
    });
    write_json(&out_dir, "run_meta.json", &meta).map_err(fail)?;

    if !failures.is_empty() {
        return Err(fail(CliError::tolerance(format!(
            "ops-check failed cases: {failures:?}"
        ))));
    }
    Ok(())
}
