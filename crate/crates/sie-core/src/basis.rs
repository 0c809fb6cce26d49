//! The combined approximation basis: periodic contour B-splines built by the
//! Cox-de Boor recursion over complex knot positions, plus Heaviside steps
//! at the jump angles.
//!
//! The splines here are integral-normalized: the order-1 base function is
//! 1/(t_{j+1} - t_j) on its arc, so every basis spline has unit complex line
//! integral and the weighted sums ((t_{k+m} - t_k)/m) B_{m,k} partition
//! unity. Which recursion branch is active is decided by angular arc
//! membership, never by comparing complex values.

use crate::contour::{grid_angle, NodeGrid, ParamPoint};
use crate::error::{Error, Result};
use crate::linalg::{condition_one_norm, CMatrix, Lu};
use crate::piecewise::JumpSet;
use crate::scalar::{fl, tau, Cx, Real};

/// Periodic knot sequence for splines of order m on an n_B-point grid.
#[derive(Debug, Clone)]
pub struct SplineKnots<T: Real> {
    n_b: usize,
    m: usize,
    /// Canonical knot points t^B_1..t^B_{n_B} (the node grid).
    points: Vec<ParamPoint<T>>,
    h_min: T,
}

impl<T: Real> SplineKnots<T> {
    /// Builds the knot sequence from a node grid. The order must satisfy
    /// 2 <= m <= n_B; the periodic extension reuses the first m knots.
    pub fn from_grid(grid: &NodeGrid<T>, m: usize) -> Result<Self> {
        if m < 2 || m > grid.n_b {
            return Err(Error::InvalidParameter(format!(
                "spline order must satisfy 2 <= m <= n_B, got m={m}, n_B={}",
                grid.n_b
            )));
        }
        if !(grid.h_min > T::zero()) {
            return Err(Error::DegenerateKnots("zero minimal knot spacing".into()));
        }
        Ok(SplineKnots { n_b: grid.n_b, m, points: grid.points.clone(), h_min: grid.h_min })
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn h_min(&self) -> T {
        self.h_min
    }

    /// Canonical knot points (length n_B).
    pub fn points(&self) -> &[ParamPoint<T>] {
        &self.points
    }

    /// Lifted knot angle for an extended 0-based index (exceeds 2*pi for
    /// indices past the wrap).
    pub fn lifted_angle(&self, j: usize) -> T {
        if j < self.n_b {
            grid_angle::<T>(j, self.n_b)
        } else {
            grid_angle::<T>(j - self.n_b, self.n_b) + tau::<T>()
        }
    }

    /// Complex position of an extended knot (positions repeat periodically).
    pub fn position(&self, j: usize) -> Cx<T> {
        self.points[j % self.n_b].z
    }

    /// Knot spacing in angle.
    pub fn h_angle(&self) -> T {
        tau::<T>() / fl::<T>(self.n_b as f64)
    }
}

/// Identifier of one basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisId {
    /// 0-based spline index, < n_B.
    Spline(usize),
    /// 0-based step index, < n_d.
    Step(usize),
}

/// Coefficients of a combined spline + step expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCoeffs<T: Real> {
    pub alpha: Vec<Cx<T>>,
    pub beta: Vec<Cx<T>>,
}

/// Lifts a canonical angle into [start, start + 2*pi).
fn lift<T: Real>(theta: T, start: T) -> T {
    if theta >= start {
        theta
    } else {
        theta + tau::<T>()
    }
}

/// Evaluates B_{m,k} at a contour point by the Cox-de Boor recursion over
/// complex knot chords. Returns zero outside the support arc
/// [t^B_k, t^B_{k+m}).
pub fn bspline_eval<T: Real>(
    knots: &SplineKnots<T>,
    k: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    bspline_eval_order(knots, knots.m, k, t)
}

/// Same as `bspline_eval` but for an explicit order level; order 1 exposes
/// the recursion base case.
pub(crate) fn bspline_eval_order<T: Real>(
    knots: &SplineKnots<T>,
    order: usize,
    k: usize,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    let n_b = knots.n_b;
    if k >= n_b {
        return Err(Error::InvalidParameter(format!(
            "spline index {k} out of range for n_B={n_b}"
        )));
    }
    if order == 0 || order > knots.m {
        return Err(Error::InvalidParameter(format!(
            "order {order} out of range for m={}",
            knots.m
        )));
    }
    let zero = Cx::new(T::zero(), T::zero());
    let start = knots.lifted_angle(k);
    let end = knots.lifted_angle(k + order);
    let theta = lift(t.theta, start);
    if !(theta >= start && theta < end) {
        return Ok(zero);
    }
    let z_t = t.z;

    // Bottom-up over the recursion triangle: level 1 holds the indicator
    // base values, each level mixes adjacent entries.
    let mut vals: Vec<Cx<T>> = (k..k + order)
        .map(|j| {
            if theta >= knots.lifted_angle(j) && theta < knots.lifted_angle(j + 1) {
                let d = knots.position(j + 1) - knots.position(j);
                Cx::new(T::one(), T::zero()) / d
            } else {
                zero
            }
        })
        .collect();
    for level in 2..=order {
        let factor = fl::<T>(level as f64) / fl::<T>((level - 1) as f64);
        for idx in 0..=(order - level) {
            let j = k + idx;
            let d = knots.position(j + level) - knots.position(j);
            if !(d.norm() > T::zero()) {
                return Err(Error::DegenerateKnots(format!(
                    "coincident knots {j} and {}",
                    j + level
                )));
            }
            let left = (z_t - knots.position(j)) / d * vals[idx];
            let right = (knots.position(j + level) - z_t) / d * vals[idx + 1];
            vals[idx] = (left + right) * Cx::new(factor, T::zero());
        }
    }
    Ok(vals[0])
}

/// Heaviside step s evaluated at a point: 1 on the arc from the jump angle
/// (inclusive) counterclockwise to the reference angle 0 (exclusive),
/// 0 otherwise. Right-continuous at the jump.
pub fn heaviside_eval<T: Real>(jump_set: &JumpSet<T>, s: usize, t: &ParamPoint<T>) -> Result<T> {
    if s >= jump_set.n_d() {
        return Err(Error::InvalidParameter(format!(
            "step index {s} out of range for n_d={}",
            jump_set.n_d()
        )));
    }
    Ok(if t.theta >= jump_set.thetas()[s] { T::one() } else { T::zero() })
}

/// Evaluates the combined expansion
/// sum_k alpha_k B_{m,k}(t) + sum_s beta_s H_s(t).
pub fn reconstruct<T: Real>(
    coeffs: &BasisCoeffs<T>,
    knots: &SplineKnots<T>,
    jump_set: &JumpSet<T>,
    t: &ParamPoint<T>,
) -> Result<Cx<T>> {
    if coeffs.alpha.len() != knots.n_b {
        return Err(Error::InvalidCoeffs(format!(
            "alpha length {} does not match n_B={}",
            coeffs.alpha.len(),
            knots.n_b
        )));
    }
    if coeffs.beta.len() != jump_set.n_d() {
        return Err(Error::InvalidCoeffs(format!(
            "beta length {} does not match n_d={}",
            coeffs.beta.len(),
            jump_set.n_d()
        )));
    }
    let mut acc = Cx::new(T::zero(), T::zero());
    // Only m splines are supported at any angle.
    let h = knots.h_angle();
    let cell = (t.theta / h).to_usize().unwrap_or(0).min(knots.n_b - 1);
    for back in 0..knots.m {
        let k = (cell + knots.n_b - back) % knots.n_b;
        acc = acc + coeffs.alpha[k] * bspline_eval(knots, k, t)?;
    }
    for s in 0..jump_set.n_d() {
        let hval = heaviside_eval(jump_set, s, t)?;
        acc = acc + coeffs.beta[s] * Cx::new(hval, T::zero());
    }
    Ok(acc)
}

/// Solves the periodic spline interpolation problem at the knots: returns
/// alpha with sum_k alpha_k B_{m,k}(t^B_j) = values_j.
pub fn interpolate_continuous<T: Real>(
    values: &[Cx<T>],
    knots: &SplineKnots<T>,
) -> Result<Vec<Cx<T>>> {
    let n = knots.n_b;
    if values.len() != n {
        return Err(Error::InvalidParameter(format!(
            "need {n} knot values, got {}",
            values.len()
        )));
    }
    let mut g = CMatrix::zeros(n, n);
    for j in 0..n {
        let t = knots.points[j];
        for k in 0..n {
            g[(j, k)] = bspline_eval(knots, k, &t)?;
        }
    }
    let cond = condition_one_norm(&g);
    if !cond.is_finite() || cond > fl::<T>(1e12) {
        return Err(Error::InterpolationSingular(format!(
            "condition estimate {cond} exceeds 1e12 for m={}, n_B={n}",
            knots.m
        )));
    }
    let lu = Lu::factor(&g)
        .map_err(|e| Error::InterpolationSingular(format!("factorization failed: {e}")))?;
    let alpha = lu.solve(values)?;
    // residual check against the assembled matrix
    let resid = g.mul_vec(&alpha);
    let mut worst = T::zero();
    let mut scale = T::one();
    for (r, v) in resid.iter().zip(values.iter()) {
        worst = worst.max((*r - *v).norm());
        scale = scale.max(v.norm());
    }
    if worst > fl::<T>(1e-10) * scale {
        return Err(Error::InterpolationSingular(format!(
            "interpolation residual {worst} exceeds 1e-10 relative"
        )));
    }
    Ok(alpha)
}

/// The weights (t^B_{k+m} - t^B_k)/m that make the splines partition unity.
pub fn partition_weights<T: Real>(knots: &SplineKnots<T>) -> Vec<Cx<T>> {
    let m = fl::<T>(knots.m as f64);
    (0..knots.n_b)
        .map(|k| (knots.position(k + knots.m) - knots.position(k)) / Cx::new(m, T::zero()))
        .collect()
}
