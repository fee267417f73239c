//! Experiment harness behind the `hqd` binary: configuration, scaling fits,
//! the oscillation and nested-body demonstrators, verification suites and
//! report emission.

pub mod cli;
pub mod config;
pub mod fit;
pub mod nested;
pub mod oscillation;
pub mod plot;
pub mod report;
pub mod scaling;
pub mod verify;

use std::path::Path;

pub use config::{BodySpec, ExperimentConfig, MethodSpec, PointFamily, Schedule, Target};
pub use fit::{fit_slope, SlopeFit};
pub use nested::{run_nested_demo, NestedConfig, NestedReport};
pub use oscillation::{run_oscillation_demo, OscillationConfig, OscillationReport};
pub use scaling::{run_scaling, ScalingRecord, ScalingReport};
pub use verify::{Check, VerifyReport};

/// Failures of a CLI run, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    /// Bad flags, configs or missing inputs: exit 2.
    #[error("usage error: {0}")]
    Usage(String),
    /// Numeric or I/O failures carrying the core error: exit 1.
    #[error(transparent)]
    Core(#[from] hqd_core::Error),
}

impl LabError {
    pub(crate) fn file(path: &Path, e: hqd_core::Error) -> Self {
        match e {
            hqd_core::Error::Io(io) => LabError::Usage(format!("{}: {io}", path.display())),
            other => LabError::Core(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) => 2,
            LabError::Core(_) => 1,
        }
    }
}
