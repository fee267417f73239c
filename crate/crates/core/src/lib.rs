//! Numerical laboratory for the homothetic quadratic discrepancy of planar
//! convex bodies.
//!
//! Geometry is generic over [`Scalar`]; the spectral and discrepancy layers
//! run in `f64`. The aliases below fix the scalar for callers that do not
//! care.

pub mod bounds;
pub mod discrepancy;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod io;
pub mod numeric;
pub mod pointsets;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Body = geometry::ConvexBody<f64>;
pub type Body32 = geometry::ConvexBody<f32>;
pub type Curve = geometry::BoundaryCurve<f64>;
pub type Segment = geometry::MonomialSegment<f64>;
pub type Chord = geometry::ChordQuery<f64>;
pub type BodyWindows = geometry::Windows<f64>;
pub type Sample = geometry::BoundarySample<f64>;
