//! Composite Gauss-Legendre quadrature over panel decompositions of an
//! angular interval, with optional dyadic grading toward marked points.
//!
//! The panel builder is shared by the singular operators, the regular
//! operator, and the principal-value oracle. Grading keeps panel width
//! proportional to the distance from a marked point, so integrands whose
//! variation scale shrinks toward that point stay resolved.

use crate::scalar::{fl, Cx, Real};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    /// Computes the rule by Newton iteration on the Legendre polynomial.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "gauss order must be positive");
        let n = order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = fl::<T>(n as f64);
        for i in 0..n {
            // Chebyshev-like initial guess.
            let guess = (fl::<T>(std::f64::consts::PI) * (fl::<T>(i as f64) + fl::<T>(0.75))
                / (nf + fl::<T>(0.5)))
            .cos();
            let mut x = guess;
            let mut dp = T::one();
            for _ in 0..100 {
                // Legendre recurrence for P_n and P_n'.
                let mut p0 = T::one();
                let mut p1 = x;
                for k in 2..=n {
                    let kf = fl::<T>(k as f64);
                    let p2 = ((fl::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - T::one());
                let dx = p1 / dp;
                x = x - dx;
                if dx.abs() <= T::epsilon() * fl::<T>(4.0) {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = fl::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        }
        nodes.reverse();
        weights.reverse();
        GaussRule { nodes, weights }
    }

    /// Integrates a complex-valued function over [a, b].
    pub fn integrate<F: Fn(T) -> Cx<T>>(&self, a: T, b: T, f: F) -> Cx<T> {
        let half = (b - a) * fl::<T>(0.5);
        let mid = (a + b) * fl::<T>(0.5);
        let mut acc = Cx::new(T::zero(), T::zero());
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc = acc + f(mid + half * *x) * Cx::new(*w, T::zero());
        }
        acc * Cx::new(half, T::zero())
    }

    /// Integrates a real-valued function over [a, b].
    pub fn integrate_real<F: Fn(T) -> T>(&self, a: T, b: T, f: F) -> T {
        let half = (b - a) * fl::<T>(0.5);
        let mid = (a + b) * fl::<T>(0.5);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc = acc + f(mid + half * *x) * *w;
        }
        acc * half
    }
}

/// A point toward which panels are refined dyadically.
#[derive(Debug, Clone, Copy)]
pub struct GradePoint<T: Real> {
    /// Location on the (possibly lifted) angular axis.
    pub at: T,
    /// Panels touching or containing the point stop shrinking at this width.
    pub min_width: T,
    /// When true, panels touching the point are exempt from refinement
    /// (the integrand is known smooth up to the point itself).
    pub touch_exempt: bool,
}

/// Builds the panel decomposition of [lo, hi]: mandatory splits, a uniform
/// subdivision of every split interval, then dyadic refinement toward each
/// grade point until panel width <= max(2 * distance, min_width).
pub fn build_panels<T: Real>(
    lo: T,
    hi: T,
    splits: &[T],
    grades: &[GradePoint<T>],
    subdiv: usize,
) -> Vec<(T, T)> {
    debug_assert!(hi > lo);
    let range = hi - lo;
    let dedup_eps = range * fl::<T>(1e-13);

    let mut cuts: Vec<T> = vec![lo, hi];
    for &s in splits {
        if s > lo + dedup_eps && s < hi - dedup_eps {
            cuts.push(s);
        }
    }
    for g in grades {
        if g.at > lo + dedup_eps && g.at < hi - dedup_eps {
            cuts.push(g.at);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= dedup_eps);

    let sub = subdiv.max(1);
    let mut panels: Vec<(T, T)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let step = (b - a) / fl::<T>(sub as f64);
        for i in 0..sub {
            let p_lo = a + step * fl::<T>(i as f64);
            let p_hi = if i + 1 == sub { b } else { a + step * fl::<T>((i + 1) as f64) };
            panels.push((p_lo, p_hi));
        }
    }

    let mut out: Vec<(T, T)> = Vec::new();
    let mut work = panels;
    while let Some((a, b)) = work.pop() {
        let width = b - a;
        let mut must_split = false;
        for g in grades {
            let d = if g.at <= a {
                a - g.at
            } else if g.at >= b {
                g.at - b
            } else {
                T::zero()
            };
            let touching = d <= dedup_eps;
            if touching && g.touch_exempt {
                continue;
            }
            let limit = if touching {
                g.min_width
            } else {
                (d + d).max(g.min_width)
            };
            if width > limit && width > g.min_width + dedup_eps {
                must_split = true;
                break;
            }
        }
        if must_split {
            let mid = (a + b) * fl::<T>(0.5);
            work.push((a, mid));
            work.push((mid, b));
        } else {
            out.push((a, b));
        }
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    out
}

/// Sums panel integrals of a complex integrand.
pub fn integrate_panels<T: Real, F: Fn(T) -> Cx<T>>(
    rule: &GaussRule<T>,
    panels: &[(T, T)],
    f: F,
) -> Cx<T> {
    let mut acc = Cx::new(T::zero(), T::zero());
    for &(a, b) in panels {
        acc = acc + rule.integrate(a, b, &f);
    }
    acc
}
