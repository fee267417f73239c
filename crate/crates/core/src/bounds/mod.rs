//! Lower-bound machinery: the Cassels–Montgomery inequality, the rotating
//! rectangle weight Φ, the X/Y/Z parameters and the domination scan.

pub mod cm;
pub mod phi;
pub mod witness;
pub mod xyz;

pub use cm::{cm_bound, cm_verify, CmRecord};
pub use phi::{phi_weight, PhiSpec, OMEGA_HALF};
pub use witness::{lower_bound_witness, is_flat_direction, uselem_arithmetic, verify_domination, DominationReport, ScanPoint, UselemArithmetic, WitnessRecord, DOMINATION_SLACK, SCAN_BUDGET};
pub use xyz::{xyz_params, XyzParams};
