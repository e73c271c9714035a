//! Sharp-threshold constants, shell statistics, censuses and predictor dynamics.

pub mod census;
pub mod orbit;
pub mod shell;
pub mod thresholds;

pub use census::{fraction_curve_csv, sp_fraction, sp_fraction_curve, CensusCheckpoint, FractionMode, SpFraction};
pub use orbit::{graph_scan, predictor_orbit, GraphScan, OrbitReport, OrbitTerminal};
pub use shell::{bad_point_detect, bad_point_disagreement_bound, shell_bias, BadPoint, ShellBias};
pub use thresholds::{threshold_constants, ThresholdConstants};
