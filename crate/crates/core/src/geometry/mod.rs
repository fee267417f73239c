//! Planar convex bodies, their chords, and the curvature-matched boundary
//! construction.

pub mod body;
pub mod chord;
pub mod curvature;
pub mod curve;
pub mod frame;
pub mod laws;
pub mod piece;
pub mod window;

pub use body::{BodyDocument, BoundarySample, Closure, ConvexBody, Variant};
pub use chord::{chord, chord_via_curvature, gamma, ChordQuery, SemiChords};
pub use curvature::{monomial_curvature, solve_curvature_level};
pub use curve::{build_glued_curve, ArclengthSample, BoundaryCurve, MonomialSegment, RigidMotion};
pub use frame::{dot, norm, sub, Angle, Placement, Vec2};
pub use laws::{invert_piecewise_power, predicted_chord_abeta, solve_chord_equation};
pub use piece::{Piece, Shape};
pub use window::{check_chord_monotonicity, estimate_windows, MonotonicityReport, RegimeWindow, Windows};
