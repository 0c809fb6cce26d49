//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with the measured quantity and its pinned tolerance.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sie_core::basis::{
    bspline_eval, heaviside_eval, interpolate_continuous, partition_weights, reconstruct,
    BasisCoeffs, SplineKnots,
};
use sie_core::catalog::Catalog;
use sie_core::collocation::{
    assemble, build_nodes, convergence_study, manufactured_rhs, solvability_check, solve,
    ProblemSpec,
};
use sie_core::contour::{make_circle, make_ellipse};
use sie_core::error::Error;
use sie_core::piecewise::{decompose, JumpSet, PiecewiseFn};
use sie_core::quadrature::GaussRule;
use sie_core::singular_ops::{
    oracle_pv, sing_continuous, sing_heaviside, sing_spline, QuadratureSpec,
};
use sie_core::Cx;

type C64 = Cx<f64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion} ({name}): {} [{detail}]",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn const_fn(re: f64, im: f64) -> PiecewiseFn<f64> {
    PiecewiseFn::continuous(move |_| c(re, im))
}

/// Criterion 1: S(1) = 1 and the monomial eigenrelations
/// S(tau^k) = sign(k) tau^k on the unit circle, 50 points each, <= 1e-8.
#[test]
fn acceptance_1_pv_identity_suite() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let quad = QuadratureSpec::default_spec();
    let mut max_err: f64 = 0.0;
    for k in -3i32..=3 {
        for i in 0..50 {
            let theta = TAU * (i as f64 + 0.37) / 50.0;
            let t = contour.point(theta);
            let f = move |th: f64| C64::from_polar(1.0, k as f64 * th);
            let got = sing_continuous(&contour, &quad, &f, &[], &t).unwrap();
            let sign = if k >= 0 { 1.0 } else { -1.0 };
            let want = C64::from_polar(1.0, k as f64 * theta) * c(sign, 0.0);
            max_err = max_err.max((got - want).norm());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        1,
        "PV identity suite",
        max_err <= 1e-8 && elapsed < 10.0,
        &format!("max_err={max_err:.3e} tol=1e-8, {elapsed:.1}s budget 10s"),
    );
}

/// Criterion 2: production singular operators agree with the
/// epsilon-exclusion + Richardson oracle within 1e-6 for every basis
/// function (m in 2..4, n_B in 8,16,32, up to 3 jumps) at 20 random points
/// at least 1e-3 away from singular angles.
#[test]
fn acceptance_2_oracle_equivalence() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let quad = QuadratureSpec::default_spec();
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    let mut max_spline: f64 = 0.0;
    let mut max_step: f64 = 0.0;

    for &n_b in &[8usize, 16, 32] {
        for &m in &[2usize, 3, 4] {
            let grid = contour.nodes(n_b).unwrap();
            let knots = SplineKnots::from_grid(&grid, m).unwrap();
            for k in 0..n_b {
                for _ in 0..20 {
                    let theta = rng.gen_range(0.0..TAU);
                    let t = contour.point(theta);
                    let got = sing_spline(&contour, &quad, &knots, k, &t).unwrap();
                    let knots_o = knots.clone();
                    let contour_o = contour.clone();
                    let f = move |th: f64| {
                        let pt = contour_o.point(th);
                        bspline_eval(&knots_o, k, &pt).unwrap()
                    };
                    let kinks: Vec<f64> =
                        (k..=k + m).map(|j| knots.lifted_angle(j) % TAU).collect();
                    let want = oracle_pv(&contour, &quad, &f, &[], &kinks, &t).unwrap();
                    max_spline = max_spline.max((got - want).norm());
                }
            }
        }
    }

    let jump_sets = [
        JumpSet::new(vec![(PI, c(1.0, 0.0))]).unwrap(),
        JumpSet::new(vec![(1.0, c(1.0, 0.0)), (4.0, c(1.0, 0.0))]).unwrap(),
        JumpSet::new(vec![(0.8, c(1.0, 0.0)), (2.5, c(1.0, 0.0)), (5.0, c(1.0, 0.0))]).unwrap(),
    ];
    for js in &jump_sets {
        for s in 0..js.n_d() {
            let theta_s = js.thetas()[s];
            let mut taken = 0;
            while taken < 20 {
                let theta: f64 = rng.gen_range(0.0..TAU);
                let clear = theta.min(TAU - theta) >= 1e-3
                    && (theta - theta_s).abs() >= 1e-3
                    && js.thetas().iter().all(|&td| (theta - td).abs() >= 1e-3);
                if !clear {
                    continue;
                }
                taken += 1;
                let t = contour.point(theta);
                let got = sing_heaviside(&contour, js, s, &t).unwrap();
                let step = move |th: f64| {
                    if th >= theta_s {
                        c(1.0, 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                };
                let want = oracle_pv(&contour, &quad, &step, &[theta_s, 0.0], &[], &t).unwrap();
                max_step = max_step.max((got - want).norm());
            }
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    let pass = max_spline <= 1e-6 && max_step <= 1e-6 && elapsed < 60.0;
    report(
        2,
        "oracle equivalence",
        pass,
        &format!(
            "max_spline={max_spline:.3e} max_step={max_step:.3e} tol=1e-6, {elapsed:.1}s budget 60s"
        ),
    );
}

/// Criterion 3: weighted partition of unity and unit complex line integral
/// of every spline within 1e-8, on circle and ellipse, m in 2..4.
#[test]
fn acceptance_3_basis_identities() {
    let started = Instant::now();
    let circle = make_circle(1.0).unwrap();
    let ellipse = make_ellipse(2.0, 1.0).unwrap();
    let rule = GaussRule::new(16);
    let mut max_partition: f64 = 0.0;
    let mut max_integral: f64 = 0.0;
    for contour in [&circle, &ellipse] {
        for &m in &[2usize, 3, 4] {
            for &n_b in &[8usize, 16, 32] {
                let grid = contour.nodes(n_b).unwrap();
                let knots = SplineKnots::from_grid(&grid, m).unwrap();
                let w = partition_weights(&knots);
                for i in 0..100 {
                    let t = contour.point(TAU * (i as f64 + 0.41) / 100.0);
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n_b {
                        acc += w[k] * bspline_eval(&knots, k, &t).unwrap();
                    }
                    max_partition = max_partition.max((acc - c(1.0, 0.0)).norm());
                }
                for k in (0..n_b).step_by((n_b / 4).max(1)) {
                    let mut acc = c(0.0, 0.0);
                    for j in 0..m {
                        let a = knots.lifted_angle(k + j);
                        let b = knots.lifted_angle(k + j + 1);
                        for p in 0..8 {
                            let lo = a + (b - a) * p as f64 / 8.0;
                            let hi = a + (b - a) * (p + 1) as f64 / 8.0;
                            acc += rule.integrate(lo, hi, |th| {
                                let pt = contour.point(th);
                                bspline_eval(&knots, k, &pt).unwrap() * contour.map_deriv(th)
                            });
                        }
                    }
                    max_integral = max_integral.max((acc - c(1.0, 0.0)).norm());
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = max_partition <= 1e-8 && max_integral <= 1e-8 && elapsed < 30.0;
    report(
        3,
        "basis identities",
        pass,
        &format!(
            "partition={max_partition:.3e} integral={max_integral:.3e} tol=1e-8, {elapsed:.1}s budget 30s"
        ),
    );
}

/// Criterion 4: decomposition round-trip is exact at non-jump samples and
/// jump sizes are recovered within 1e-12 when limits are analytic, over
/// 1000 randomized cases.
#[test]
fn acceptance_4_decomposition_uniqueness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut max_jump_err: f64 = 0.0;
    let mut max_roundtrip: f64 = 0.0;
    for _ in 0..1000 {
        let n_d = rng.gen_range(1..=4usize);
        let mut thetas: Vec<f64> = Vec::new();
        while thetas.len() < n_d {
            let t: f64 = rng.gen_range(0.1..TAU - 0.1);
            if thetas.iter().all(|&x| (x - t).abs() > 0.05) {
                thetas.push(t);
            }
        }
        thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let betas: Vec<C64> = (0..n_d)
            .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
            .collect();
        let a1 = rng.gen_range(-2.0..2.0);
        let a2 = rng.gen_range(-2.0..2.0);
        let smooth = move |th: f64| c(a1 * th.cos(), 0.0) + c(0.0, a2 * (2.0 * th).sin());

        let pairs: Vec<(f64, C64)> = thetas.iter().copied().zip(betas.iter().copied()).collect();
        let js = JumpSet::new(pairs).unwrap();
        let thetas_c = thetas.clone();
        let betas_c = betas.clone();
        let eval = move |th: f64| {
            let mut v = smooth(th);
            for (t0, b) in thetas_c.iter().zip(betas_c.iter()) {
                if th >= *t0 {
                    v += *b;
                }
            }
            v
        };
        let one_sided: Vec<(C64, C64)> = thetas
            .iter()
            .enumerate()
            .map(|(i, &t0)| {
                let mut base = smooth(t0);
                for (j, &ts) in thetas.iter().enumerate() {
                    if t0 > ts {
                        base += betas[j];
                    }
                    let _ = j;
                }
                (base, base + betas[i])
            })
            .collect();
        let f = PiecewiseFn::with_jumps(eval, js, one_sided).unwrap();
        let d = decompose(&f).unwrap();
        for (got, want) in d.steps.jumps().iter().zip(betas.iter()) {
            max_jump_err = max_jump_err.max((got - want).norm());
        }
        for i in 0..16 {
            let th = TAU * (i as f64 + 0.29) / 16.0;
            if thetas.iter().any(|&t0| (t0 - th).abs() < 1e-9) {
                continue;
            }
            let back = d.continuous.value(th) + d.steps.step_sum(th);
            max_roundtrip = max_roundtrip.max((back - f.value(th)).norm());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = max_jump_err <= 1e-12 && max_roundtrip <= 1e-12;
    report(
        4,
        "decomposition uniqueness",
        pass,
        &format!("jump_err={max_jump_err:.3e} roundtrip={max_roundtrip:.3e} tol=1e-12, {elapsed:.1}s"),
    );
}

/// Criterion 5: direct approximation rate. For the Holder-0.6 cusp the
/// sup-error slope over n_B in 32..512 must be <= -0.45; a pure step is
/// reproduced to machine precision.
#[test]
fn acceptance_5_direct_approximation_rate() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let target = Catalog::function(&contour, "cusp:0.6:pi").unwrap();
    let m = 4usize;
    let ladder = [32usize, 64, 128, 256, 512];
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &n_b in &ladder {
        let grid = contour.nodes(n_b).unwrap();
        let knots = SplineKnots::from_grid(&grid, m).unwrap();
        let d = decompose(&target).unwrap();
        let values: Vec<C64> =
            knots.points().iter().map(|p| d.continuous.value(p.theta)).collect();
        let alpha = interpolate_continuous(&values, &knots).unwrap();
        let coeffs = BasisCoeffs { alpha, beta: d.steps.jumps().to_vec() };
        let dense = 8 * 512;
        let mut sup: f64 = 0.0;
        for i in 0..dense {
            let theta = TAU * (i as f64 + 0.5) / dense as f64;
            let t = contour.point(theta);
            let got = reconstruct(&coeffs, &knots, &d.steps, &t).unwrap();
            sup = sup.max((got - target.value(theta)).norm());
        }
        points.push(((n_b as f64).ln(), sup.ln()));
    }
    let slope = ls_slope(&points);

    // pure step target: the continuous part is identically zero
    let step_target = Catalog::function(&contour, "step:pi:1").unwrap();
    let mut max_step_err: f64 = 0.0;
    for &n_b in &[32usize, 128] {
        let grid = contour.nodes(n_b).unwrap();
        let knots = SplineKnots::from_grid(&grid, m).unwrap();
        let d = decompose(&step_target).unwrap();
        let values: Vec<C64> =
            knots.points().iter().map(|p| d.continuous.value(p.theta)).collect();
        let alpha = interpolate_continuous(&values, &knots).unwrap();
        let coeffs = BasisCoeffs { alpha, beta: d.steps.jumps().to_vec() };
        for i in 0..1000 {
            let theta = TAU * (i as f64 + 0.5) / 1000.0;
            let t = contour.point(theta);
            let got = reconstruct(&coeffs, &knots, &d.steps, &t).unwrap();
            max_step_err = max_step_err.max((got - step_target.value(theta)).norm());
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    let pass = slope <= -0.45 && max_step_err <= 1e-13 && elapsed < 120.0;
    report(
        5,
        "direct approximation rate",
        pass,
        &format!(
            "cusp slope={slope:.3} target<=-0.45, step_err={max_step_err:.2e} tol=1e-13, {elapsed:.1}s budget 120s"
        ),
    );
}

fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Criterion 6: the dominant equation c=2, d=1, f = tau + 2/tau on the unit
/// circle has the closed-form solution phi = tau/3 + 2/tau; the dense-grid
/// sup error at n_B=64, m=4 must be <= 1e-4.
#[test]
fn acceptance_6_closed_form_solve() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let f = Catalog::function(&contour, "laurent:1,2").unwrap();
    let spec = ProblemSpec::new(
        contour.clone(),
        const_fn(2.0, 0.0),
        const_fn(1.0, 0.0),
        f,
        None,
        JumpSet::empty(),
        64,
        4,
        1.0,
        0.3,
        0.01,
        QuadratureSpec::default_spec(),
    )
    .unwrap();
    let (coeffs, system, report_s) = solve(&spec).unwrap();
    assert!(report_s.pass);
    let grid = contour.nodes(64).unwrap();
    let knots = SplineKnots::from_grid(&grid, 4).unwrap();
    let exact = Catalog::function(&contour, "laurent:1/3,2").unwrap();
    let mut sup: f64 = 0.0;
    for i in 0..2000 {
        let theta = TAU * (i as f64 + 0.5) / 2000.0;
        let t = contour.point(theta);
        let got = reconstruct(&coeffs, &knots, &JumpSet::empty(), &t).unwrap();
        sup = sup.max((got - exact.value(theta)).norm());
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = sup <= 1e-4 && elapsed < 60.0;
    report(
        6,
        "closed-form solve",
        pass,
        &format!("sup_err={sup:.3e} tol=1e-4, cond={:.2e}, {elapsed:.1}s budget 60s", system.condition),
    );
}

/// Criterion 7: manufactured jump problem (alpha=0.6, beta=0.3, one jump,
/// oracle-built right-hand side): PH_beta errors monotone nonincreasing
/// over n_B in {32,64,128,256}, fitted slope <= -0.15, and the recovered
/// jump size error monotone nonincreasing after the first level.
#[test]
fn acceptance_7_collocation_rate() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let quad = QuadratureSpec::default_spec();
    // deeper exclusion ladder for the right-hand side so the oracle floor
    // sits below the discretization error at every level
    let rhs_quad = QuadratureSpec::new(
        4,
        8,
        vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
    )
    .unwrap();
    let phi_star = Catalog::function(&contour, "cusp:0.6:pi+step:pi/2:2").unwrap();
    let c_fn = const_fn(2.0, 0.0);
    let d_fn = const_fn(1.0, 0.0);
    let f = manufactured_rhs(&contour, &rhs_quad, &c_fn, &d_fn, None, &phi_star);
    let template = ProblemSpec::new(
        contour,
        c_fn,
        d_fn,
        f,
        None,
        phi_star.jump_set().clone(),
        32,
        4,
        0.6,
        0.3,
        0.01,
        quad,
    )
    .unwrap();
    let ladder = [32usize, 64, 128, 256];
    let study = convergence_study(&template, &ladder, &phi_star).unwrap();
    for row in &study.rows {
        println!(
            "  n_B={:4}  ph={:.4e}  sup={:.4e}  cond={:.2e}  beta_err={:.3e}  {:.1}s{}",
            row.n_b,
            row.ph_error,
            row.sup_error,
            row.condition,
            row.jump_size_error.unwrap_or(f64::NAN),
            row.seconds,
            row.failure.as_deref().map(|f| format!("  FAILED: {f}")).unwrap_or_default()
        );
    }
    let all_ok = study.rows.iter().all(|r| r.failure.is_none());
    let ph: Vec<f64> = study.rows.iter().map(|r| r.ph_error).collect();
    let monotone = ph.windows(2).all(|w| w[1] <= w[0]);
    let slope = study.slope_ph.unwrap_or(f64::NAN);
    let jump_errs: Vec<f64> =
        study.rows.iter().filter_map(|r| r.jump_size_error).collect();
    let jump_monotone =
        jump_errs.len() == 4 && jump_errs.windows(2).skip(1).all(|w| w[1] <= w[0]);
    let elapsed = started.elapsed().as_secs_f64();
    let pass = all_ok && monotone && slope <= -0.15 && jump_monotone && elapsed < 600.0;
    report(
        7,
        "collocation convergence rate",
        pass,
        &format!(
            "monotone={monotone} slope={slope:.3} target<=-0.15 jump_monotone={jump_monotone}, {elapsed:.0}s budget 600s"
        ),
    );
}

/// Criterion 8: solvability gating. c = d = 1 must be rejected with the
/// singular-symbol code; a symbol winding once must be rejected with the
/// nonzero-winding code.
#[test]
fn acceptance_8_solvability_gating() {
    let contour = make_circle(1.0).unwrap();
    let singular = ProblemSpec::new(
        contour.clone(),
        const_fn(1.0, 0.0),
        const_fn(1.0, 0.0),
        const_fn(1.0, 0.0),
        None,
        JumpSet::empty(),
        16,
        3,
        1.0,
        0.3,
        0.01,
        QuadratureSpec::default_spec(),
    )
    .unwrap();
    let singular_err = matches!(solvability_check(&singular), Err(Error::SingularSymbol(_)));

    // a = tau + 0.1 (winds once), b = 1
    let c_fn = PiecewiseFn::continuous(|th: f64| {
        (C64::from_polar(1.0, th) + c(0.1, 0.0) + c(1.0, 0.0)) * c(0.5, 0.0)
    });
    let d_fn = PiecewiseFn::continuous(|th: f64| {
        (C64::from_polar(1.0, th) + c(0.1, 0.0) - c(1.0, 0.0)) * c(0.5, 0.0)
    });
    let winding = ProblemSpec::new(
        contour,
        c_fn,
        d_fn,
        const_fn(0.0, 0.0),
        None,
        JumpSet::empty(),
        16,
        3,
        1.0,
        0.3,
        0.01,
        QuadratureSpec::default_spec(),
    )
    .unwrap();
    let report_w = solvability_check(&winding).unwrap();
    let winding_err = report_w.winding == 1 && matches!(solve(&winding), Err(Error::NonzeroWinding(_)));

    let pass = singular_err && winding_err;
    report(
        8,
        "solvability gating",
        pass,
        &format!("singular-symbol={singular_err} nonzero-winding={winding_err} (winding={})", report_w.winding),
    );
}

/// Criterion 9: robustness. 1000 randomized jump configurations produce
/// distinct collocation nodes; sampled assemblies stay finite; the shipped
/// fixtures keep condition estimates below 1e8 at n_B <= 256.
#[test]
fn acceptance_9_robustness() {
    let started = Instant::now();
    let contour = make_circle(1.0).unwrap();
    let quad = QuadratureSpec::default_spec();
    let mut rng = ChaCha8Rng::seed_from_u64(5150);

    let mut distinct_ok = 0usize;
    let mut sampled_finite = true;
    for case in 0..1000 {
        let n_d = rng.gen_range(1..=3usize);
        let mut thetas: Vec<f64> = Vec::new();
        while thetas.len() < n_d {
            let t: f64 = rng.gen_range(0.05..TAU - 0.05);
            if thetas.iter().all(|&x| (x - t).abs() > 0.05) {
                thetas.push(t);
            }
        }
        thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let js = JumpSet::new(thetas.iter().map(|&t| (t, c(1.0, 0.0))).collect()).unwrap();
        let n_b = *[16usize, 32, 64, 128, 256].iter().nth(rng.gen_range(0..5)).unwrap();
        let spec = ProblemSpec::new(
            contour.clone(),
            const_fn(2.0, 0.0),
            const_fn(1.0, 0.0),
            const_fn(1.0, 0.0),
            None,
            js,
            n_b,
            3,
            1.0,
            0.3,
            0.01,
            quad.clone(),
        )
        .unwrap();
        let nodes = build_nodes(&spec).unwrap();
        let mut ok = true;
        for i in 0..nodes.points.len() {
            for j in (i + 1)..nodes.points.len() {
                let d = (nodes.points[i].theta - nodes.points[j].theta).abs();
                let d = d.min(TAU - d);
                if d < 1e-9 {
                    ok = false;
                }
            }
        }
        if ok {
            distinct_ok += 1;
        }
        // sampled assembly checks, kept small to bound runtime
        if case % 100 == 0 {
            let small = spec.with_n_b(16).unwrap();
            let nodes_small = build_nodes(&small).unwrap();
            let system = assemble(&small, &nodes_small).unwrap();
            sampled_finite &= system.matrix.is_finite();
        }
    }

    // shipped fixtures at n_B = 256
    let laurent = ProblemSpec::new(
        contour.clone(),
        const_fn(2.0, 0.0),
        const_fn(1.0, 0.0),
        Catalog::function(&contour, "laurent:1,2").unwrap(),
        None,
        JumpSet::empty(),
        256,
        4,
        1.0,
        0.3,
        0.01,
        quad.clone(),
    )
    .unwrap();
    let nodes_l = build_nodes(&laurent).unwrap();
    let cond_laurent = assemble(&laurent, &nodes_l).unwrap().condition;

    let phi_star = Catalog::function(&contour, "cusp:0.6:pi+step:pi/2:2").unwrap();
    let c_fn = const_fn(2.0, 0.0);
    let d_fn = const_fn(1.0, 0.0);
    let f = manufactured_rhs(&contour, &quad, &c_fn, &d_fn, None, &phi_star);
    let jump_spec = ProblemSpec::new(
        contour,
        c_fn,
        d_fn,
        f,
        None,
        phi_star.jump_set().clone(),
        256,
        4,
        0.6,
        0.3,
        0.01,
        quad,
    )
    .unwrap();
    let nodes_j = build_nodes(&jump_spec).unwrap();
    let cond_jump = assemble(&jump_spec, &nodes_j).unwrap().condition;

    let elapsed = started.elapsed().as_secs_f64();
    let pass =
        distinct_ok == 1000 && sampled_finite && cond_laurent < 1e8 && cond_jump < 1e8;
    report(
        9,
        "robustness",
        pass,
        &format!(
            "distinct={distinct_ok}/1000 finite={sampled_finite} cond_laurent={cond_laurent:.2e} cond_jump={cond_jump:.2e} < 1e8, {elapsed:.0}s"
        ),
    );
}

/// Extra: heaviside step evaluation at collocation nodes stays consistent
/// with the assembled matrix when a jump coincides with a knot.
#[test]
fn jump_on_knot_assembles_finite() {
    let contour = make_circle(1.0).unwrap();
    let js = JumpSet::new(vec![(PI / 2.0, c(1.0, 0.0))]).unwrap();
    let spec = ProblemSpec::new(
        contour,
        const_fn(2.0, 0.0),
        const_fn(1.0, 0.0),
        const_fn(1.0, 0.0),
        None,
        js.clone(),
        8,
        3,
        1.0,
        0.3,
        0.01,
        QuadratureSpec::default_spec(),
    )
    .unwrap();
    let nodes = build_nodes(&spec).unwrap();
    let system = assemble(&spec, &nodes).unwrap();
    assert!(system.matrix.is_finite());
    // the step column evaluates 0/1 correctly at the shifted nodes
    for (row, p) in nodes.points.iter().enumerate() {
        let h = heaviside_eval(&js, 0, p).unwrap();
        assert!(h == 0.0 || h == 1.0, "row {row}");
    }
}
