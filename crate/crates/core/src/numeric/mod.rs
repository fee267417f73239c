//! Scalar numeric kernels shared by the geometry and transform layers.

pub mod bessel;
pub mod gauss;
pub mod nufft;
pub mod roots;
pub mod sum;

pub use bessel::{j1, j1_f64, jinc_f64};
pub use gauss::{gauss_rule, gregory_weights, GaussRule};
pub use roots::{solve_decreasing, solve_increasing};
pub use sum::{compensated, pairwise, Compensated};
