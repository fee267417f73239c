//! Counting discrepancy and the direct and spectral D₂ evaluators.

pub mod count;
pub mod direct;
pub mod estimate;
pub mod expgrid;
pub mod nested;
pub mod pointset;
pub mod spectral;

pub use count::{count_discrepancy, CountingFrame};
pub use direct::{d2_direct, Sampler};
pub use estimate::{D2Estimate, Method};
pub use expgrid::ExpSumGrid;
pub use nested::{compare_nested, NestedCheck, NestedMethod};
pub use pointset::{PointSet, Provenance};
pub use spectral::{d2_spectral, d2_spectral_cached, d2_spectral_lattice, d2_spectral_with_table, exp_sum, TailPolicy};
