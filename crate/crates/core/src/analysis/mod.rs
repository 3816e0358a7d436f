//! Post-processing of flow runs.

mod isoperimetry;
mod probe;
mod rate;
mod symmetry;

pub use isoperimetry::{
    isoperimetry_report, prepare_symmetric, run_isoperimetry, IsoperimetryReport, IsoperimetryRun, PreparedCurve,
    ISO_SLACK, SYMMETRY_TOL,
};
pub use probe::{gradient_inequality_probe, ProbeOptions, ProbeResult, ProbeSample, ENERGY_GAP_FLOOR};
pub use rate::{estimate_rate, LogLinearFit, RateEstimate, DEFAULT_TAIL_FRACTION, DISTANCE_FLOOR, MIN_TAIL_POINTS};
pub use symmetry::{quantisation_check, reversed_class, symmetry_check, QuantisationCheck, QUANTISATION_SLACK};
