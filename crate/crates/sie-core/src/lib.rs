//! Solver library for Cauchy singular integral equations on smooth closed
//! contours whose coefficients and right-hand side are piecewise Holder
//! with finite jumps. The unknown is expanded in periodic contour B-splines
//! plus Heaviside steps at the jump angles, and the coefficients are fixed
//! by collocation at quasi-uniform nodes with a small shift away from the
//! jump angles.
//!
//! All numerics are generic over the real scalar behind the complex
//! arithmetic (`f32` or `f64`); the `*64` aliases at the crate root pin the
//! double-precision instantiations used by the CLI and the test suites.

pub mod basis;
pub mod catalog;
pub mod collocation;
pub mod contour;
pub mod error;
pub mod linalg;
pub mod piecewise;
pub mod quadrature;
pub mod scalar;
pub mod singular_ops;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

/// Double-precision aliases for the main domain types.
pub type Contour64 = contour::Contour<f64>;
pub type ParamPoint64 = contour::ParamPoint<f64>;
pub type NodeGrid64 = contour::NodeGrid<f64>;
pub type JumpSet64 = piecewise::JumpSet<f64>;
pub type PiecewiseFn64 = piecewise::PiecewiseFn<f64>;
pub type PHNormEstimate64 = piecewise::PHNormEstimate<f64>;
pub type SplineKnots64 = basis::SplineKnots<f64>;
pub type BasisCoeffs64 = basis::BasisCoeffs<f64>;
pub type QuadratureSpec64 = singular_ops::QuadratureSpec<f64>;
pub type KernelFn64 = singular_ops::KernelFn<f64>;
pub type ProblemSpec64 = collocation::ProblemSpec<f64>;
pub type CollocationSystem64 = collocation::CollocationSystem<f64>;
pub type SolvabilityReport64 = collocation::SolvabilityReport<f64>;
pub type ConvergenceReport64 = collocation::ConvergenceReport<f64>;
pub type Complex64 = Cx<f64>;
