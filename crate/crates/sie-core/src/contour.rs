//! Closed smooth contours given by their boundary parametrization
//! theta -> psi(e^{i theta}), node grids, and arc ordering utilities.
//!
//! Points are identified canonically by their angle; complex positions are
//! derived from the map. Arc membership and traversal order are therefore
//! exact and never require inverting the map numerically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;
use crate::scalar::{fl, tau, wrap_angle, Cx, Real};

type MapFn<T> = Arc<dyn Fn(T) -> Cx<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind<T: Real> {
    Circle { radius: T },
    Ellipse { a: T, b: T },
    Custom,
}

/// A closed smooth contour, counterclockwise oriented.
#[derive(Clone)]
pub struct Contour<T: Real> {
    kind: ContourKind<T>,
    map: MapFn<T>,
    map_deriv: MapFn<T>,
    length: T,
}

impl<T: Real> fmt::Debug for Contour<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Contour")
            .field("kind", &self.kind)
            .field("length", &self.length)
            .finish()
    }
}

/// A point on a contour, identified by its canonical angle in [0, 2*pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint<T: Real> {
    pub theta: T,
    pub z: Cx<T>,
}

/// The quasi-uniform node grid theta_j = 2*pi*(j-1)/n_B.
#[derive(Debug, Clone)]
pub struct NodeGrid<T: Real> {
    pub n_b: usize,
    pub points: Vec<ParamPoint<T>>,
    pub h_min: T,
}

/// Builds a circle of the given radius centered at the origin.
pub fn make_circle<T: Real>(radius: T) -> Result<Contour<T>> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    let r = radius;
    let map: MapFn<T> = Arc::new(move |theta: T| Cx::from_polar(r, theta));
    let deriv: MapFn<T> = Arc::new(move |theta: T| {
        // d/dtheta r e^{i theta} = i r e^{i theta}
        let z = Cx::from_polar(r, theta);
        Cx::new(-z.im, z.re)
    });
    Ok(Contour {
        kind: ContourKind::Circle { radius },
        map,
        map_deriv: deriv,
        length: tau::<T>() * radius,
    })
}

/// Builds an ellipse via the exterior Joukowski-type map
/// psi(w) = ((a+b) w + (a-b)/w) / 2, restricted to w = e^{i theta}.
/// The boundary image is a*cos(theta) + i*b*sin(theta).
pub fn make_ellipse<T: Real>(a: T, b: T) -> Result<Contour<T>> {
    if !(b > T::zero()) || !(a >= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ellipse semi-axes must satisfy a >= b > 0, got a={a}, b={b}"
        )));
    }
    let (aa, bb) = (a, b);
    let map: MapFn<T> = Arc::new(move |theta: T| Cx::new(aa * theta.cos(), bb * theta.sin()));
    let deriv: MapFn<T> = Arc::new(move |theta: T| Cx::new(-aa * theta.sin(), bb * theta.cos()));
    let length = closed_curve_length(&*deriv);
    Ok(Contour {
        kind: ContourKind::Ellipse { a, b },
        map,
        map_deriv: deriv,
        length,
    })
}

/// Registers a custom contour from a parametrization and its exact angular
/// derivative. No numeric differentiation is performed: the derivative
/// enters every quadrature weight and must be supplied analytically.
pub fn make_custom<T: Real>(
    map: impl Fn(T) -> Cx<T> + Send + Sync + 'static,
    map_deriv: impl Fn(T) -> Cx<T> + Send + Sync + 'static,
) -> Result<Contour<T>> {
    let map: MapFn<T> = Arc::new(map);
    let deriv: MapFn<T> = Arc::new(map_deriv);
    let length = closed_curve_length(&*deriv);
    if !length.is_finite() || !(length > T::zero()) {
        return Err(Error::InvalidParameter(
            "custom contour has non-finite or zero length".into(),
        ));
    }
    Ok(Contour {
        kind: ContourKind::Custom,
        map,
        map_deriv: deriv,
        length,
    })
}

fn closed_curve_length<T: Real>(deriv: &(dyn Fn(T) -> Cx<T> + Send + Sync)) -> T {
    let rule = GaussRule::new(16);
    let t = tau::<T>();
    let n = 64usize;
    let h = t / fl::<T>(n as f64);
    let mut acc = T::zero();
    for i in 0..n {
        let a = h * fl::<T>(i as f64);
        acc = acc + rule.integrate_real(a, a + h, |th| deriv(th).norm());
    }
    acc
}

impl<T: Real> Contour<T> {
    pub fn kind(&self) -> ContourKind<T> {
        self.kind
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// Position on the contour at the given angle.
    pub fn map(&self, theta: T) -> Cx<T> {
        (self.map)(wrap_angle(theta))
    }

    /// Angular derivative d psi / d theta at the given angle.
    pub fn map_deriv(&self, theta: T) -> Cx<T> {
        (self.map_deriv)(wrap_angle(theta))
    }

    /// Canonical point at the given angle.
    pub fn point(&self, theta: T) -> ParamPoint<T> {
        let w = wrap_angle(theta);
        ParamPoint { theta: w, z: self.map(w) }
    }

    /// The quasi-uniform grid theta_j = 2*pi*(j-1)/n_B, j = 1..n_B.
    pub fn nodes(&self, n_b: usize) -> Result<NodeGrid<T>> {
        if n_b < 2 {
            return Err(Error::InvalidParameter(format!(
                "node count must be at least 2, got {n_b}"
            )));
        }
        let points: Vec<ParamPoint<T>> =
            (0..n_b).map(|j| self.point(grid_angle::<T>(j, n_b))).collect();
        let mut h_min = T::infinity();
        for j in 0..n_b {
            let a = points[j].z;
            let b = points[(j + 1) % n_b].z;
            let chord = (b - a).norm();
            if chord < h_min {
                h_min = chord;
            }
        }
        if !(h_min > T::zero()) {
            return Err(Error::InvalidParameter(
                "consecutive grid nodes coincide; contour map may be degenerate".into(),
            ));
        }
        Ok(NodeGrid { n_b, points, h_min })
    }

    /// Chord distance between the positions at two angles.
    pub fn chord(&self, theta1: T, theta2: T) -> T {
        (self.map(theta2) - self.map(theta1)).norm()
    }

    /// Arc length traversed counterclockwise from theta1 to theta2.
    pub fn arc_length_between(&self, theta1: T, theta2: T) -> T {
        let a = wrap_angle(theta1);
        let mut b = wrap_angle(theta2);
        if b < a {
            b = b + tau::<T>();
        }
        if b == a {
            return T::zero();
        }
        let rule = GaussRule::new(16);
        let n = 16usize;
        let h = (b - a) / fl::<T>(n as f64);
        let mut acc = T::zero();
        for i in 0..n {
            let lo = a + h * fl::<T>(i as f64);
            acc = acc + rule.integrate_real(lo, lo + h, |th| self.map_deriv(th).norm());
        }
        acc
    }

    /// Estimates the arc-chord equivalence factor: the largest ratio of arc
    /// length to chord length over consecutive pairs of a dense sample.
    pub fn arc_chord_factor(&self, samples: usize) -> T {
        let n = samples.max(8);
        let h = tau::<T>() / fl::<T>(n as f64);
        let mut worst = T::one();
        for i in 0..n {
            let a = h * fl::<T>(i as f64);
            let b = a + h;
            let arc = self.arc_length_between(a, b);
            let chord = self.chord(a, b);
            if chord > T::zero() {
                let ratio = arc / chord;
                if ratio > worst {
                    worst = ratio;
                }
            }
        }
        worst
    }

    /// Dense-sample injectivity and smoothness check: positions closer than
    /// 1e-12 with angles differing by more than 1e-9 fail, as does any
    /// vanishing derivative.
    pub fn validate(&self, samples: usize) -> Result<()> {
        let n = samples.max(16);
        let h = tau::<T>() / fl::<T>(n as f64);
        let pts: Vec<Cx<T>> = (0..n).map(|i| self.map(h * fl::<T>(i as f64))).collect();
        for i in 0..n {
            let th = h * fl::<T>(i as f64);
            if !(self.map_deriv(th).norm() > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "contour derivative vanishes at theta = {th}"
                )));
            }
            for j in (i + 1)..n {
                let pos_close = (pts[i] - pts[j]).norm() < fl::<T>(1e-12);
                let ang_i = h * fl::<T>(i as f64);
                let ang_j = h * fl::<T>(j as f64);
                let ang_far = crate::scalar::cyclic_distance(ang_i, ang_j) > fl::<T>(1e-9);
                if pos_close && ang_far {
                    return Err(Error::InvalidParameter(format!(
                        "contour map is not injective: theta {ang_i} and {ang_j} coincide"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Exact grid angle 2*pi*j/n (0-based j), the single formula used everywhere
/// a knot or node angle is produced.
pub fn grid_angle<T: Real>(j: usize, n: usize) -> T {
    tau::<T>() * fl::<T>(j as f64) / fl::<T>(n as f64)
}

/// True iff traversing counterclockwise from ref_theta meets t1 strictly
/// before t2.
pub fn precedes<T: Real>(t1: &ParamPoint<T>, t2: &ParamPoint<T>, ref_theta: T) -> bool {
    let r1 = wrap_angle(t1.theta - ref_theta);
    let r2 = wrap_angle(t2.theta - ref_theta);
    r1 < r2
}

/// Half-open arc membership [arc_start, arc_end) under counterclockwise
/// traversal with wraparound. An arc with coincident endpoints is empty.
pub fn in_arc<T: Real>(t: &ParamPoint<T>, arc_start: T, arc_end: T) -> bool {
    let span = wrap_angle(arc_end - arc_start);
    if span == T::zero() {
        return false;
    }
    wrap_angle(t.theta - arc_start) < span
}
