//! Scalar abstraction: the whole library is generic over the real scalar
//! type behind the complex arithmetic (f32 or f64), with concrete aliases
//! exported from the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar usable for contour geometry and quadrature: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the chosen real scalar.
pub type Cx<T> = Complex<T>;

/// Converts an f64 literal into the working scalar.
#[inline]
pub fn fl<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// Full turn, 2*pi.
#[inline]
pub fn tau<T: Real>() -> T {
    T::PI() + T::PI()
}

/// Imaginary unit.
#[inline]
pub fn imag_unit<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::one())
}

/// Wraps an angle into the canonical interval [0, 2*pi).
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let t = tau::<T>();
    let mut w = theta % t;
    if w < T::zero() {
        w = w + t;
    }
    // `theta % tau` can round up to exactly tau for tiny negative inputs.
    if w >= t {
        w = w - t;
    }
    w
}

/// Distance between two angles on the circle, in [0, pi].
pub fn cyclic_distance<T: Real>(a: T, b: T) -> T {
    let t = tau::<T>();
    let d = wrap_angle(a - b);
    d.min(t - d)
}
