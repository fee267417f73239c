//! Indicator transforms, dilation-averaged weights and the weight cache.

pub mod lemmas;
pub mod nodes;
pub mod power;
pub mod table;
pub mod transform;

pub use lemmas::{
    avg_power_law, check_angular_comparison, check_far_chords, log_grid, loglog_slope, predicted_avg_power, verify_l1,
    AngularReport, BandReport, RatioStats,
};
pub use nodes::{boundary_nodes, NodeSet};
pub use power::{dilation_avg_power, dilation_avg_power_direct, disk_avg_power, NodeBank, WeightValue};
pub use table::{cache_dir, weight_table, SpectralWeightTable, Symmetry};
pub use transform::{ft_indicator, ft_with_estimate, Frequency};
