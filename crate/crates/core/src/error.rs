use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("signed area {area:e} is within the zero-area threshold {threshold:e}")]
    ZeroArea { area: f64, threshold: f64 },

    #[error("minimum speed {min_speed:e} below threshold {threshold:e}; curve is not immersed on the grid")]
    DegenerateSpeed { min_speed: f64, threshold: f64 },

    #[error("truncation order {n_modes} too small, need at least {needed}")]
    TruncationTooSmall { needed: usize, n_modes: usize },

    #[error("grid of {grid} points too small, need at least {required}")]
    GridTooSmall { grid: usize, required: usize },

    #[error("leaf endpoints are not at the origin (|start| = {start:e}, |end| = {end:e})")]
    LeafNotClosedAtOrigin { start: f64, end: f64 },

    #[error("invalid symmetry (n = {n}, m = {m}): need n >= 1 and m >= 1")]
    InvalidSymmetry { n: usize, m: usize },

    #[error(
        "ambiguous dominant frequency: k = {first_k} (energy {first_energy:e}) vs k = {second_k} (energy {second_energy:e})"
    )]
    AmbiguousFrequency {
        first_k: usize,
        first_energy: f64,
        second_k: usize,
        second_energy: f64,
    },

    #[error("curve has no oscillating modes")]
    DegenerateCurve,

    #[error("step size {step:e} underflowed at t = {t}")]
    StepFailure { t: f64, step: f64 },

    #[error("area collapsed to {area:e} at t = {t}")]
    AreaCollapse { t: f64, area: f64 },

    #[error("initial area {area:e} is not positive")]
    NonPositiveArea { area: f64 },

    #[error("time series has {len} record(s), need at least 2")]
    SeriesTooShort { len: usize },

    #[error("time series is not strictly increasing in t at index {index}")]
    NonMonotoneSeries { index: usize },

    #[error("rate fit needs {required} tail points above the noise floor, found {available}")]
    InsufficientTail { available: usize, required: usize },

    #[error("probe sample {sample} has area {area:e} below the guard")]
    AreaGuard { sample: usize, area: f64 },

    #[error("symmetry deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    SymmetryViolated { deviation: f64, tolerance: f64 },

    #[error("flow did not converge: gradient norm {grad_norm:e} >= grad_stop {grad_stop:e}")]
    NotConverged { grad_norm: f64, grad_stop: f64 },

    #[error("could not generate a positive-area curve after {attempts} attempts")]
    CouldNotGeneratePositiveArea { attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
