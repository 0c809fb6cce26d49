//! The Cauchy singular operator S (principal value) and the regular
//! operator K applied to basis functions and general evaluators, plus an
//! independent epsilon-exclusion + Richardson oracle for the principal
//! value used throughout the tests.
//!
//! Production evaluation of S on continuous inputs uses singularity
//! subtraction with the closed-contour identity PV int dtau/(tau-t) = pi*i,
//! leaving a bounded integrand. S on a Heaviside step uses the log
//! antiderivative: the real part telescopes to endpoint values (the two
//! one-sided divergences of the principal value cancel), and the imaginary
//! part is the integral of Im(psi'/(psi - t)), whose pole terms cancel on
//! the real axis, leaving a smooth integrand.

use std::fmt;
use std::sync::Arc;

use crate::basis::{bspline_eval, BasisId, SplineKnots};
use crate::contour::{Contour, ParamPoint};
use crate::error::{Error, Result};
use crate::piecewise::{JumpSet, PiecewiseFn};
use crate::quadrature::{build_panels, integrate_panels, GaussRule, GradePoint};
use crate::scalar::{cyclic_distance, fl, tau, wrap_angle, Cx, Real};

/// Angular guard around the log-singular endpoints of S applied to a step.
pub const ENDPOINT_GUARD: f64 = 1e-8;

/// Quadrature configuration for the production operators and the oracle.
#[derive(Debug, Clone)]
pub struct QuadratureSpec<T: Real> {
    pub panels_per_interval: usize,
    pub gauss_order: usize,
    pub oracle_epsilons: Vec<T>,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(
        panels_per_interval: usize,
        gauss_order: usize,
        oracle_epsilons: Vec<T>,
    ) -> Result<Self> {
        if panels_per_interval < 1 || gauss_order < 1 {
            return Err(Error::InvalidParameter(
                "panel and gauss counts must be positive".into(),
            ));
        }
        if oracle_epsilons.is_empty() {
            return Err(Error::InvalidParameter("need at least one oracle epsilon".into()));
        }
        for w in oracle_epsilons.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::InvalidParameter(
                    "oracle epsilons must be strictly decreasing".into(),
                ));
            }
        }
        if !(oracle_epsilons[oracle_epsilons.len() - 1] > T::zero()) {
            return Err(Error::InvalidParameter("oracle epsilons must be positive".into()));
        }
        Ok(QuadratureSpec { panels_per_interval, gauss_order, oracle_epsilons })
    }

    /// gauss order 8, 4 panels per interval, epsilons 1e-1..1e-5. Five
    /// exclusion levels keep the extrapolation-agreement check below 1e-6
    /// on step inputs, where a four-level ladder leaves a few-1e-6 residual.
    pub fn default_spec() -> Self {
        QuadratureSpec {
            panels_per_interval: 4,
            gauss_order: 8,
            oracle_epsilons: vec![fl(1e-1), fl(1e-2), fl(1e-3), fl(1e-4), fl(1e-5)],
        }
    }

    fn rule(&self) -> GaussRule<T> {
        GaussRule::new(self.gauss_order)
    }
}

type KernelEval<T> = Arc<dyn Fn(&ParamPoint<T>, &ParamPoint<T>) -> Cx<T> + Send + Sync>;

/// Continuous kernel h(t, tau) of the regular operator.
#[derive(Clone)]
pub struct KernelFn<T: Real> {
    eval: KernelEval<T>,
    pub hoelder_exponent: Option<T>,
}

impl<T: Real> fmt::Debug for KernelFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelFn").field("hoelder_exponent", &self.hoelder_exponent).finish()
    }
}

impl<T: Real> KernelFn<T> {
    pub fn new(eval: impl Fn(&ParamPoint<T>, &ParamPoint<T>) -> Cx<T> + Send + Sync + 'static) -> Self {
        KernelFn { eval: Arc::new(eval), hoelder_exponent: None }
    }

    pub fn with_exponent(mut self, alpha: T) -> Self {
        self.hoelder_exponent = Some(alpha);
        self
    }

    pub fn eval(&self, t: &ParamPoint<T>, tau_pt: &ParamPoint<T>) -> Cx<T> {
        (self.eval)(t, tau_pt)
    }
}

/// Values of (S b) and (K b) at the collocation nodes for one basis column.
#[derive(Debug, Clone)]
pub struct OperatorColumn<T: Real> {
    pub basis: BasisId,
    pub s_values: Vec<Cx<T>>,
    pub k_values: Vec<Cx<T>>,
}

fn one_over_pi_i<T: Real>() -> Cx<T> {
    // 1/(pi i) = -i/pi
    Cx::new(T::zero(), -(T::one() / T::PI()))
}

fn check_on_contour<T: Real>(contour: &Contour<T>, t: &ParamPoint<T>) -> Result<()> {
    let want = contour.map(t.theta);
    let scale = T::one() + want.norm();
    if (want - t.z).norm() > fl::<T>(1e-10) * scale {
        return Err(Error::InvalidPoint(format!(
            "point at theta {} does not lie on the contour",
            t.theta
        )));
    }
    Ok(())
}

fn finite<T: Real>(v: Cx<T>, what: &str) -> Result<Cx<T>> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailure(what.into()))
    }
}

/// Lifts an angle into [start, start + 2*pi).
fn lift<T: Real>(theta: T, start: T) -> T {
    let t = tau::<T>();
    let mut w = wrap_angle(theta);
    if w < start {
        let k = ((start - w) / t).ceil();
        w = w + t * k;
    }
    while w >= start + t {
        w = w - t;
    }
    if w < start {
        w = w + t;
    }
    w
}

/// Core of the subtraction path: f(t) + (1/pi i) int (f - f(t))/(tau - t).
///
/// `splits` and `grade_rough` are lifted into the integration window
/// [theta_t, theta_t + 2*pi) internally. When `smooth_at_target` is set the
/// panels touching the singular angle are not refined (the subtracted
/// integrand is known smooth there, as for splines and analytic inputs).
fn sing_subtracted<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    f: &dyn Fn(T) -> Cx<T>,
    splits: &[T],
    grade_rough: &[T],
    smooth_at_target: bool,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    check_on_contour(contour, t)?;
    let tht = t.theta;
    let zt = t.z;
    let ft = finite(f(tht), "integrand value at the target point")?;
    let lo = tht;
    let hi = tht + tau::<T>();

    let mut splits_l: Vec<T> = splits.iter().map(|&s| lift(s, lo)).collect();
    // keep base resolution even when the input carries few breakpoints
    let base = 16usize;
    for i in 1..base {
        splits_l.push(lo + tau::<T>() * fl::<T>(i as f64) / fl::<T>(base as f64));
    }
    let tiny = fl::<T>(1e-10);
    let mut grades = vec![
        GradePoint { at: lo, min_width: tiny, touch_exempt: smooth_at_target },
        GradePoint { at: hi, min_width: tiny, touch_exempt: smooth_at_target },
    ];
    for &r in grade_rough {
        grades.push(GradePoint { at: lift(r, lo), min_width: tiny, touch_exempt: false });
    }
    let panels = build_panels(lo, hi, &splits_l, &grades, quad.panels_per_interval);
    let rule = quad.rule();
    let integral = integrate_panels(&rule, &panels, |theta| {
        let w = wrap_angle(theta);
        (f(w) - ft) / (contour.map(w) - zt) * contour.map_deriv(w)
    });
    finite(ft + integral * one_over_pi_i::<T>(), "singular integral")
}

/// (S f)(t) for an evaluator continuous at and near t, by singularity
/// subtraction. `breakpoints` mark angles where f loses smoothness (panel
/// splits with local grading); they may include Holder kinks.
pub fn sing_continuous<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    f: &dyn Fn(T) -> Cx<T>,
    breakpoints: &[T],
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    sing_subtracted(contour, quad, f, breakpoints, breakpoints, false, t)
}

/// (S B_{m,k})(t): the spline column entry. Outside the spline support only
/// the subtraction term survives, so the integration window collapses to
/// the support plus a dyadically graded complement.
pub fn sing_spline<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    knots: &SplineKnots<T>,
    k: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    check_on_contour(contour, t)?;
    let m = knots.order();
    let supp_lo = knots.lifted_angle(k);
    let supp_hi = knots.lifted_angle(k + m);
    let zt = t.z;
    let bt = bspline_eval(knots, k, t)?;
    let spline_at = |theta: T| -> Cx<T> {
        let w = wrap_angle(theta);
        let pt = ParamPoint { theta: w, z: contour.map(w) };
        bspline_eval(knots, k, &pt).unwrap_or_else(|_| Cx::new(T::zero(), T::zero()))
    };

    if bt.norm() == T::zero() {
        // t outside the support: the integrand vanishes off-support, so
        // integrate b(tau)/(tau - t) over the support arcs only.
        let mut splits: Vec<T> = (k + 1..k + m).map(|j| knots.lifted_angle(j)).collect();
        splits.push(t.theta);
        splits.push(t.theta + tau::<T>());
        splits.push(t.theta - tau::<T>());
        let tiny = fl::<T>(1e-12);
        let grades: Vec<GradePoint<T>> = [t.theta, t.theta + tau::<T>(), t.theta - tau::<T>()]
            .iter()
            .map(|&at| GradePoint { at, min_width: tiny, touch_exempt: true })
            .collect();
        let panels = build_panels(supp_lo, supp_hi, &splits, &grades, quad.panels_per_interval);
        let rule = quad.rule();
        let integral = integrate_panels(&rule, &panels, |theta| {
            let w = wrap_angle(theta);
            spline_at(theta) / (contour.map(w) - zt) * contour.map_deriv(w)
        });
        return finite(integral * one_over_pi_i::<T>(), "spline singular integral");
    }

    // t inside the support: full subtraction over one period starting at the
    // support, graded toward the singular angle and its periodic images.
    let lo = supp_lo;
    let hi = supp_lo + tau::<T>();
    let tht = lift(t.theta, lo);
    let mut splits: Vec<T> = (k + 1..=k + m).map(|j| knots.lifted_angle(j)).collect();
    splits.push(tht);
    let tiny = fl::<T>(1e-12);
    let grades: Vec<GradePoint<T>> = [tht, tht + tau::<T>(), tht - tau::<T>()]
        .iter()
        .map(|&at| GradePoint { at, min_width: tiny, touch_exempt: true })
        .collect();
    let panels = build_panels(lo, hi, &splits, &grades, quad.panels_per_interval);
    let rule = quad.rule();
    let integral = integrate_panels(&rule, &panels, |theta| {
        let w = wrap_angle(theta);
        (spline_at(theta) - bt) / (contour.map(w) - zt) * contour.map_deriv(w)
    });
    finite(bt + integral * one_over_pi_i::<T>(), "spline singular integral")
}

/// (S H_s)(t): principal value of the Cauchy integral over the step's
/// support arc [theta_s, 2*pi). The real part of the continued log
/// telescopes to the endpoint values; the imaginary part integrates
/// Im(psi'/(psi - t)), which is smooth on the whole arc because the pole
/// terms of the complex kernel cancel in the imaginary part for a real
/// crossing angle.
pub fn sing_heaviside<T: Real>(
    contour: &Contour<T>,
    jump_set: &JumpSet<T>,
    s: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    if s >= jump_set.n_d() {
        return Err(Error::InvalidParameter(format!(
            "step index {s} out of range for n_d={}",
            jump_set.n_d()
        )));
    }
    check_on_contour(contour, t)?;
    let theta_s = jump_set.thetas()[s];
    let guard = fl::<T>(ENDPOINT_GUARD);
    if cyclic_distance(t.theta, theta_s) < guard {
        return Err(Error::NearEndpointSingularity(format!(
            "evaluation angle {} within 1e-8 of the jump angle {theta_s}",
            t.theta
        )));
    }
    if cyclic_distance(t.theta, T::zero()) < guard {
        return Err(Error::NearEndpointSingularity(format!(
            "evaluation angle {} within 1e-8 of the reference angle 0",
            t.theta
        )));
    }
    let zt = t.z;
    let end = tau::<T>();
    let z_ref = contour.map(T::zero());
    let z_jump = contour.map(theta_s);
    let re_part = (z_ref - zt).norm().ln() - (z_jump - zt).norm().ln();

    // Imaginary part: integral of the smooth function Im(psi'/(psi - z_t)).
    let inside = t.theta > theta_s && t.theta < end;
    let splits: Vec<T> = if inside { vec![t.theta] } else { vec![] };
    let base = 48usize;
    let mut all_splits = splits;
    for i in 1..base {
        all_splits.push(theta_s + (end - theta_s) * fl::<T>(i as f64) / fl::<T>(base as f64));
    }
    let rule = GaussRule::new(12);
    let panels = build_panels(theta_s, end, &all_splits, &[], 1);
    let mut arg_part = T::zero();
    for &(a, b) in &panels {
        arg_part = arg_part
            + rule.integrate_real(a, b, |theta| {
                let d = contour.map_deriv(theta);
                let w = contour.map(theta) - zt;
                (d / w).im
            });
    }
    // (re + i arg)/(pi i) = (arg - i re)/pi
    let v = Cx::new(arg_part, -re_part) / Cx::new(T::PI(), T::zero());
    finite(v, "heaviside singular integral")
}

/// (K b)(t) = (1/2 pi i) int h(t, tau) b(tau) dtau over a lifted angular
/// window (the support of b), split at the given angles.
pub fn regular_op<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    kernel: &KernelFn<T>,
    b: &dyn Fn(T) -> Cx<T>,
    window: Option<(T, T)>,
    splits: &[T],
    grade_rough: &[T],
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    check_on_contour(contour, t)?;
    let (lo, hi) = window.unwrap_or((T::zero(), tau::<T>()));
    if !(hi > lo) {
        return Err(Error::InvalidParameter("empty integration window".into()));
    }
    let splits_l: Vec<T> = splits.iter().map(|&s| lift(s, lo)).collect();
    let tiny = fl::<T>(1e-10);
    let grades: Vec<GradePoint<T>> = grade_rough
        .iter()
        .map(|&r| GradePoint { at: lift(r, lo), min_width: tiny, touch_exempt: false })
        .collect();
    let panels = build_panels(lo, hi, &splits_l, &grades, quad.panels_per_interval);
    let rule = quad.rule();
    let integral = integrate_panels(&rule, &panels, |theta| {
        let w = wrap_angle(theta);
        let pt = ParamPoint { theta: w, z: contour.map(w) };
        kernel.eval(t, &pt) * b(w) * contour.map_deriv(w)
    });
    // 1/(2 pi i)
    let factor = Cx::new(T::zero(), -(T::one() / (tau::<T>())));
    finite(integral * factor, "regular operator integral")
}

/// (K B_{m,k})(t) over the spline support.
pub fn regular_op_spline<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    kernel: &KernelFn<T>,
    knots: &SplineKnots<T>,
    k: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    let m = knots.order();
    let window = (knots.lifted_angle(k), knots.lifted_angle(k + m));
    let splits: Vec<T> = (k + 1..k + m).map(|j| knots.lifted_angle(j)).collect();
    let b = |theta: T| {
        let w = wrap_angle(theta);
        let pt = ParamPoint { theta: w, z: contour.map(w) };
        bspline_eval(knots, k, &pt).unwrap_or_else(|_| Cx::new(T::zero(), T::zero()))
    };
    regular_op(contour, quad, kernel, &b, Some(window), &splits, &[], t)
}

/// (K H_s)(t) over the step's support arc.
pub fn regular_op_step<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    kernel: &KernelFn<T>,
    jump_set: &JumpSet<T>,
    s: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    if s >= jump_set.n_d() {
        return Err(Error::InvalidParameter("step index out of range".into()));
    }
    let window = (jump_set.thetas()[s], tau::<T>());
    let one = |_theta: T| Cx::new(T::one(), T::zero());
    regular_op(contour, quad, kernel, &one, Some(window), &[], &[], t)
}

/// (K f)(t) for a general piecewise function, splitting at its rough angles.
pub fn regular_op_fn<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    kernel: &KernelFn<T>,
    f: &PiecewiseFn<T>,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    let rough = f.rough_angles();
    let fe = f.clone();
    let b = move |theta: T| fe.value(theta);
    regular_op(contour, quad, kernel, &b, None, &rough, &f.kink_angles().to_vec(), t)
}

/// Brute-force principal value: for each epsilon, integrate
/// (1/pi i) f(tau)/(tau - t) over the contour minus the symmetric angular
/// exclusion of half-width epsilon around t, then Richardson-extrapolate the
/// sequence to epsilon -> 0 by polynomial extrapolation. Independent of the
/// production subtraction and continued-log paths; this is the test oracle.
pub fn oracle_pv<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    f: &dyn Fn(T) -> Cx<T>,
    jump_angles: &[T],
    kink_angles: &[T],
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    check_on_contour(contour, t)?;
    for &j in jump_angles {
        if cyclic_distance(t.theta, j) < fl::<T>(1e-9) {
            return Err(Error::InvalidPoint(format!(
                "oracle evaluation point {} coincides with a jump angle",
                t.theta
            )));
        }
    }
    let rule = quad.rule();
    let zt = t.z;
    let mut values: Vec<(T, Cx<T>)> = Vec::with_capacity(quad.oracle_epsilons.len());
    for &eps in &quad.oracle_epsilons {
        let lo = t.theta + eps;
        let hi = t.theta + tau::<T>() - eps;
        if !(hi > lo) {
            return Err(Error::InvalidParameter("oracle epsilon too large".into()));
        }
        let mut splits: Vec<T> = jump_angles.iter().chain(kink_angles.iter()).map(|&a| lift(a, lo)).collect();
        splits.retain(|&s| s > lo && s < hi);
        let mut grades = vec![
            GradePoint { at: lo, min_width: eps / fl::<T>(8.0), touch_exempt: false },
            GradePoint { at: hi, min_width: eps / fl::<T>(8.0), touch_exempt: false },
        ];
        for &k in kink_angles {
            grades.push(GradePoint { at: lift(k, lo), min_width: fl::<T>(1e-9), touch_exempt: false });
        }
        let panels = build_panels(lo, hi, &splits, &grades, quad.panels_per_interval);
        let integral = integrate_panels(&rule, &panels, |theta| {
            let w = wrap_angle(theta);
            f(w) / (contour.map(w) - zt) * contour.map_deriv(w)
        });
        values.push((eps, integral * one_over_pi_i::<T>()));
    }
    richardson_limit(&values)
}

/// Neville polynomial extrapolation of (eps, I(eps)) to eps = 0; the last
/// two tableau diagonals must agree to 1e-6 relative.
fn richardson_limit<T: Real>(values: &[(T, Cx<T>)]) -> Result<Cx<T>> {
    let n = values.len();
    let mut tableau: Vec<Cx<T>> = values.iter().map(|v| v.1).collect();
    let eps: Vec<T> = values.iter().map(|v| v.0).collect();
    let mut prev_diag = tableau[n - 1];
    let mut last_diag = prev_diag;
    for level in 1..n {
        for i in (level..n).rev() {
            let x_hi = eps[i];
            let x_lo = eps[i - level];
            let num = tableau[i] * Cx::new(x_lo, T::zero()) - tableau[i - 1] * Cx::new(x_hi, T::zero());
            tableau[i] = num / Cx::new(x_lo - x_hi, T::zero());
        }
        prev_diag = last_diag;
        last_diag = tableau[n - 1];
    }
    if n >= 2 {
        let scale = T::one().max(last_diag.norm());
        if (last_diag - prev_diag).norm() > fl::<T>(1e-6) * scale {
            return Err(Error::OracleUnconverged(format!(
                "last two extrapolants differ by {} (scale {scale})",
                (last_diag - prev_diag).norm()
            )));
        }
    }
    finite(last_diag, "oracle extrapolation")
}

/// Computes (S b) and (K b) at every node for one basis column. Step
/// columns use the continued-log path for S; spline columns use the
/// subtraction path restricted to their supports.
pub fn operator_column<T: Real>(
    contour: &Contour<T>,
    quad: &QuadratureSpec<T>,
    kernel: Option<&KernelFn<T>>,
    knots: &SplineKnots<T>,
    jump_set: &JumpSet<T>,
    basis: BasisId,
    nodes: &[ParamPoint<T>],
) -> Result<OperatorColumn<T>> {
    let zero = Cx::new(T::zero(), T::zero());
    let mut s_values = Vec::with_capacity(nodes.len());
    let mut k_values = Vec::with_capacity(nodes.len());
    for node in nodes {
        let s_val = match basis {
            BasisId::Spline(k) => sing_spline(contour, quad, knots, k, node)?,
            BasisId::Step(s) => sing_heaviside(contour, jump_set, s, node)?,
        };
        let k_val = match (kernel, basis) {
            (None, _) => zero,
            (Some(h), BasisId::Spline(k)) => regular_op_spline(contour, quad, h, knots, k, node)?,
            (Some(h), BasisId::Step(s)) => regular_op_step(contour, quad, h, jump_set, s, node)?,
        };
        s_values.push(finite(s_val, "operator column S entry")?);
        k_values.push(finite(k_val, "operator column K entry")?);
    }
    Ok(OperatorColumn { basis, s_values, k_values })
}
