//! Piecewise Holder functions with finite jumps: the continuous/step
//! decomposition, discrete piecewise-Holder norm estimates, and a
//! plumbing-grade jump detector for sampled data.
//!
//! Functions are represented on the cut parameter interval [0, 2*pi) with
//! the reference angle at 0. Values at jump angles follow the
//! left-continuity convention: the value equals the left limit.

use std::fmt;
use std::sync::Arc;

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::scalar::{fl, tau, wrap_angle, Cx, Real};

/// Offset used when one-sided limits must be probed numerically.
pub const PROBE_OFFSET: f64 = 1e-6;

/// Ordered jump angles with their complex jump sizes
/// beta_s = f(theta_s + 0) - f(theta_s - 0).
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSet<T: Real> {
    thetas: Vec<T>,
    jumps: Vec<Cx<T>>,
}

impl<T: Real> JumpSet<T> {
    pub fn empty() -> Self {
        JumpSet { thetas: Vec::new(), jumps: Vec::new() }
    }

    /// Builds a jump set from (theta, jump) pairs. Angles must be strictly
    /// increasing inside (0, 2*pi): the reference angle itself cannot carry
    /// a jump.
    pub fn new(pairs: Vec<(T, Cx<T>)>) -> Result<Self> {
        let mut thetas = Vec::with_capacity(pairs.len());
        let mut jumps = Vec::with_capacity(pairs.len());
        for (theta, beta) in pairs {
            if !theta.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
                return Err(Error::InvalidParameter("non-finite jump data".into()));
            }
            let w = wrap_angle(theta);
            if w == T::zero() {
                return Err(Error::InvalidParameter(
                    "jump angle coincides with the reference angle 0".into(),
                ));
            }
            thetas.push(w);
            jumps.push(beta);
        }
        let mut order: Vec<usize> = (0..thetas.len()).collect();
        order.sort_by(|&a, &b| thetas[a].partial_cmp(&thetas[b]).unwrap());
        let thetas: Vec<T> = order.iter().map(|&i| thetas[i]).collect();
        let jumps: Vec<Cx<T>> = order.iter().map(|&i| jumps[i]).collect();
        for w in thetas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(
                    "jump angles must be strictly increasing".into(),
                ));
            }
        }
        Ok(JumpSet { thetas, jumps })
    }

    pub fn n_d(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn jumps(&self) -> &[Cx<T>] {
        &self.jumps
    }

    /// Sum of the step functions weighted by the jump sizes, evaluated at a
    /// canonical angle. Each step is 1 on [theta_s, 2*pi) and 0 before.
    pub fn step_sum(&self, theta: T) -> Cx<T> {
        let w = wrap_angle(theta);
        let mut acc = Cx::new(T::zero(), T::zero());
        for (t, b) in self.thetas.iter().zip(self.jumps.iter()) {
            if w >= *t {
                acc = acc + *b;
            }
        }
        acc
    }
}

type EvalFn<T> = Arc<dyn Fn(T) -> Cx<T> + Send + Sync>;

/// A piecewise Holder function: an evaluator over the cut interval plus jump
/// metadata with one-sided limits at every jump angle.
#[derive(Clone)]
pub struct PiecewiseFn<T: Real> {
    eval: EvalFn<T>,
    jump_set: JumpSet<T>,
    one_sided: Vec<(Cx<T>, Cx<T>)>,
    hoelder_exponent: Option<T>,
    kink_angles: Vec<T>,
}

impl<T: Real> fmt::Debug for PiecewiseFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseFn")
            .field("n_d", &self.jump_set.n_d())
            .field("hoelder_exponent", &self.hoelder_exponent)
            .finish()
    }
}

impl<T: Real> PiecewiseFn<T> {
    /// A function continuous on the whole cut interval.
    pub fn continuous(eval: impl Fn(T) -> Cx<T> + Send + Sync + 'static) -> Self {
        PiecewiseFn {
            eval: Arc::new(eval),
            jump_set: JumpSet::empty(),
            one_sided: Vec::new(),
            hoelder_exponent: None,
            kink_angles: Vec::new(),
        }
    }

    /// A function with declared jumps and analytically known one-sided
    /// limits. The recorded jump sizes must match right - left to 1e-12
    /// (relative to the local scale).
    pub fn with_jumps(
        eval: impl Fn(T) -> Cx<T> + Send + Sync + 'static,
        jump_set: JumpSet<T>,
        one_sided: Vec<(Cx<T>, Cx<T>)>,
    ) -> Result<Self> {
        if one_sided.len() != jump_set.n_d() {
            return Err(Error::InvalidParameter(
                "one-sided limit count must match the jump set".into(),
            ));
        }
        for ((left, right), beta) in one_sided.iter().zip(jump_set.jumps().iter()) {
            let scale = T::one() + left.norm() + right.norm();
            if (*right - *left - *beta).norm() > fl::<T>(1e-12) * scale {
                return Err(Error::InconsistentJumpMetadata(
                    "recorded jump size differs from right - left limits".into(),
                ));
            }
        }
        Ok(PiecewiseFn {
            eval: Arc::new(eval),
            jump_set,
            one_sided,
            hoelder_exponent: None,
            kink_angles: Vec::new(),
        })
    }

    /// Builds jump metadata by probing the evaluator at +-1e-6 radians
    /// around each declared jump angle.
    pub fn probe_jumps(
        eval: impl Fn(T) -> Cx<T> + Send + Sync + 'static,
        jump_thetas: &[T],
    ) -> Result<Self> {
        let eval: EvalFn<T> = Arc::new(eval);
        let off = fl::<T>(PROBE_OFFSET);
        let mut pairs = Vec::with_capacity(jump_thetas.len());
        let mut one_sided = Vec::with_capacity(jump_thetas.len());
        for &theta in jump_thetas {
            let w = wrap_angle(theta);
            let left = (eval)(wrap_angle(w - off));
            let right = (eval)(wrap_angle(w + off));
            pairs.push((w, right - left));
            one_sided.push((left, right));
        }
        let jump_set = JumpSet::new(pairs)?;
        Ok(PiecewiseFn { eval, jump_set, one_sided, hoelder_exponent: None, kink_angles: Vec::new() })
    }

    pub fn with_exponent(mut self, alpha: T) -> Self {
        self.hoelder_exponent = Some(alpha);
        self
    }

    pub fn with_kinks(mut self, kinks: Vec<T>) -> Self {
        self.kink_angles = kinks;
        self
    }

    pub fn jump_set(&self) -> &JumpSet<T> {
        &self.jump_set
    }

    pub fn one_sided(&self) -> &[(Cx<T>, Cx<T>)] {
        &self.one_sided
    }

    pub fn hoelder_exponent(&self) -> Option<T> {
        self.hoelder_exponent
    }

    /// Angles where the function is continuous but not smooth, used to split
    /// quadrature panels.
    pub fn kink_angles(&self) -> &[T] {
        &self.kink_angles
    }

    /// Angles where the function is discontinuous as a periodic function of
    /// theta: the jump angles, plus the reference angle when steps are
    /// present (the step representation drops back at the wrap).
    pub fn discontinuity_angles(&self) -> Vec<T> {
        let mut d = self.jump_set.thetas().to_vec();
        if self.jump_set.n_d() > 0 {
            d.push(T::zero());
        }
        d
    }

    /// All angles where quadrature should split: jumps (with the wrap drop)
    /// plus kinks.
    pub fn rough_angles(&self) -> Vec<T> {
        let mut r = self.kink_angles.clone();
        r.extend(self.discontinuity_angles());
        r
    }

    /// Value at a canonical angle; exactly at a jump angle the left limit is
    /// returned (left-continuity convention).
    pub fn value(&self, theta: T) -> Cx<T> {
        let w = wrap_angle(theta);
        for (i, t) in self.jump_set.thetas().iter().enumerate() {
            if w == *t {
                return self.one_sided[i].0;
            }
        }
        (self.eval)(w)
    }

    pub fn evaluator(&self) -> EvalFn<T> {
        self.eval.clone()
    }
}

/// Result of the unique continuous + step decomposition.
#[derive(Clone)]
pub struct Decomposition<T: Real> {
    pub continuous: PiecewiseFn<T>,
    pub steps: JumpSet<T>,
}

/// Splits f into a continuous part and a weighted Heaviside sum carrying
/// the jumps: f_C = f - sum_s beta_s H_s. The declared jump sizes are
/// cross-checked against the recorded one-sided limits (tolerance 1e-8).
pub fn decompose<T: Real>(f: &PiecewiseFn<T>) -> Result<Decomposition<T>> {
    for ((left, right), beta) in f.one_sided.iter().zip(f.jump_set.jumps().iter()) {
        let scale = T::one() + left.norm() + right.norm();
        if (*right - *left - *beta).norm() > fl::<T>(1e-8) * scale {
            return Err(Error::InconsistentJumpMetadata(
                "declared jump sizes disagree with one-sided limits".into(),
            ));
        }
    }
    let steps = f.jump_set.clone();
    let eval = f.eval.clone();
    let steps_for_eval = steps.clone();
    let jump_thetas = steps.thetas().to_vec();
    let one_sided = f.one_sided.clone();
    let continuous = PiecewiseFn::continuous(move |theta: T| {
        let w = wrap_angle(theta);
        for (i, t) in jump_thetas.iter().enumerate() {
            if w == *t {
                return one_sided[i].0 - steps_for_eval.step_sum(w) + steps_for_eval.jumps()[i];
            }
        }
        (eval)(w) - steps_for_eval.step_sum(w)
    });
    let continuous = match f.hoelder_exponent {
        Some(a) => continuous.with_exponent(a),
        None => continuous,
    };
    Ok(Decomposition { continuous: continuous.with_kinks(f.kink_angles.clone()), steps })
}

/// Discrete piecewise-Holder norm data: per-arc sup and seminorm values.
#[derive(Debug, Clone)]
pub struct PHNormEstimate<T: Real> {
    pub exponent: T,
    pub arc_sups: Vec<T>,
    pub arc_seminorms: Vec<T>,
    pub total: T,
    pub sample_count: usize,
}

/// Per-arc cap on the all-pairs seminorm loop; larger arcs are decimated.
const SEMINORM_PAIR_CAP: usize = 512;

/// Estimates the piecewise-Holder norm of sampled values: per arc between
/// consecutive jump angles, the sup of |v| and the discrete Holder seminorm
/// max |v(t)-v(s)| / |z_t - z_s|^alpha over all retained sample pairs, using
/// chord distances. The total is the max over arcs of sup + seminorm.
pub fn ph_norm_estimate<T: Real>(
    contour: &Contour<T>,
    samples: &[(T, Cx<T>)],
    jump_set: &JumpSet<T>,
    exponent: T,
) -> Result<PHNormEstimate<T>> {
    if !(exponent > T::zero()) || exponent > T::one() {
        return Err(Error::InvalidParameter(format!(
            "Holder exponent must lie in (0, 1], got {exponent}"
        )));
    }
    let n_arcs = jump_set.n_d().max(1);
    let mut arcs: Vec<Vec<(T, Cx<T>)>> = vec![Vec::new(); n_arcs];
    for &(theta, v) in samples {
        let w = wrap_angle(theta);
        let idx = arc_index(jump_set, w);
        arcs[idx].push((w, v));
    }
    let mut arc_sups = Vec::with_capacity(n_arcs);
    let mut arc_seminorms = Vec::with_capacity(n_arcs);
    let mut total = T::zero();
    for (i, arc) in arcs.iter().enumerate() {
        if arc.len() < 2 {
            return Err(Error::InsufficientSamples(format!(
                "arc {i} has {} samples, need at least 2",
                arc.len()
            )));
        }
        let kept = decimate(arc, SEMINORM_PAIR_CAP);
        let mut sup = T::zero();
        for &(_, v) in arc {
            sup = sup.max(v.norm());
        }
        let mut semi = T::zero();
        for p in 0..kept.len() {
            for q in (p + 1)..kept.len() {
                let chord = contour.chord(kept[p].0, kept[q].0);
                if chord > T::zero() {
                    let quot = (kept[p].1 - kept[q].1).norm() / chord.powf(exponent);
                    semi = semi.max(quot);
                }
            }
        }
        total = total.max(sup + semi);
        arc_sups.push(sup);
        arc_seminorms.push(semi);
    }
    Ok(PHNormEstimate { exponent, arc_sups, arc_seminorms, total, sample_count: samples.len() })
}

/// Arc index for a canonical angle: arc s spans (theta_s, theta_{s+1}] with
/// wraparound; a sample exactly at a jump angle belongs to the arc ending
/// there (left-continuity).
fn arc_index<T: Real>(jump_set: &JumpSet<T>, w: T) -> usize {
    let n_d = jump_set.n_d();
    if n_d == 0 {
        return 0;
    }
    let below = jump_set.thetas().iter().filter(|&&t| t < w).count();
    (below + n_d - 1) % n_d
}

fn decimate<T: Real>(arc: &[(T, Cx<T>)], cap: usize) -> Vec<(T, Cx<T>)> {
    if arc.len() <= cap {
        return arc.to_vec();
    }
    let stride = arc.len().div_ceil(cap);
    let mut kept: Vec<(T, Cx<T>)> = arc.iter().copied().step_by(stride).collect();
    if let Some(&last) = arc.last() {
        if kept.last().map(|k| k.0 != last.0).unwrap_or(true) {
            kept.push(last);
        }
    }
    kept
}

/// Threshold jump detector over dense quasi-uniform samples: an index is
/// flagged when its first difference exceeds rel_threshold times the median
/// of the 8 neighboring first differences. The jump is reported at the
/// following sample angle with size equal to the difference.
///
/// Samples are treated as a sequence on the cut interval [0, 2*pi): the
/// wraparound pair is not tested, since every step representation drops
/// back at the reference angle by construction and that drop is not a data
/// jump.
pub fn detect_jumps<T: Real>(samples: &[(T, Cx<T>)], rel_threshold: T) -> Result<JumpSet<T>> {
    if samples.len() < 16 {
        return Err(Error::InsufficientSamples(format!(
            "jump detection needs at least 16 samples, got {}",
            samples.len()
        )));
    }
    if !(rel_threshold > T::one()) {
        return Err(Error::InvalidParameter(
            "relative threshold must exceed 1".into(),
        ));
    }
    let mut sorted: Vec<(T, Cx<T>)> = samples.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let n = sorted.len();
    let n_diffs = n - 1;
    let diffs: Vec<Cx<T>> = (0..n_diffs).map(|j| sorted[j + 1].1 - sorted[j].1).collect();
    let mags: Vec<T> = diffs.iter().map(|d| d.norm()).collect();

    let mut found: Vec<(T, Cx<T>)> = Vec::new();
    for j in 0..n_diffs {
        // the 8 nearest other differences, clamped to the sequence ends
        let lo = j.saturating_sub(4).min(n_diffs.saturating_sub(9));
        let mut window: Vec<T> = Vec::with_capacity(8);
        let mut idx = lo;
        while window.len() < 8 && idx < n_diffs {
            if idx != j {
                window.push(mags[idx]);
            }
            idx += 1;
        }
        window.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = window.len() / 2;
        let median = (window[mid - 1] + window[mid]) * fl::<T>(0.5);
        if mags[j] > rel_threshold * median {
            found.push((sorted[j + 1].0, diffs[j]));
        }
    }
    JumpSet::new(found)
}

/// Convenience: dense uniform samples of a piecewise function, staggered off
/// the grid angles by half a step so jump angles are never hit exactly.
pub fn sample_staggered<T: Real>(f: &PiecewiseFn<T>, n: usize) -> Vec<(T, Cx<T>)> {
    let h = tau::<T>() / fl::<T>(n as f64);
    (0..n)
        .map(|i| {
            let theta = h * (fl::<T>(i as f64) + fl::<T>(0.5));
            (theta, f.value(theta))
        })
        .collect()
}
