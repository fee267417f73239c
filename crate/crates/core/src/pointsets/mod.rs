//! Point-set generators: anisotropic lattices, the greedy decomposition of
//! N into lattice sizes, composite sets and uniform random baselines.

pub mod decompose;
pub mod lattice;
pub mod random;

pub use decompose::{alpha_for_beta, greedy_decompose, lattice_size, Decomposition, Part};
pub use lattice::{anisotropic_lattice, floor_snapped, grid_lattice, LatticeParams};
pub use random::{composite_parts, composite_pointset, random_pointset};
