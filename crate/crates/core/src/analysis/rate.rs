//! Exponential convergence rate from the tail of a run.

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::flow::TimeSeries;

pub const DEFAULT_TAIL_FRACTION: f64 = 0.3;
/// Minimum number of tail points above the noise floor.
pub const MIN_TAIL_POINTS: usize = 10;
/// Absolute floor on the distance-to-terminal.
pub const DISTANCE_FLOOR: f64 = 1e-13;

/// Least-squares line through `(t, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLinearFit {
    /// `-slope`, positive for decay.
    pub rate: f64,
    /// `exp(intercept)`.
    pub prefactor: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl LogLinearFit {
    /// `None` with fewer than two points or a degenerate time spread.
    pub fn fit(points: &[(f64, f64)]) -> Option<Self> {
        let n = points.len();
        if n < 2 {
            return None;
        }
        let nf = n as f64;
        let mean_t = points.iter().map(|p| p.0).sum::<f64>() / nf;
        let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / nf;
        let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
        for &(t, y) in points {
            let (dt, dy) = (t - mean_t, y.ln() - mean_y);
            stt += dt * dt;
            sty += dt * dy;
            syy += dy * dy;
        }
        if !(stt > 0.0) {
            return None;
        }
        let slope = sty / stt;
        let intercept = mean_y - slope * mean_t;
        let r_squared = if syy > 0.0 {
            (sty * sty / (stt * syy)).min(1.0)
        } else {
            1.0
        };
        Some(Self {
            rate: -slope,
            prefactor: intercept.exp(),
            r_squared,
            points: n,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Fit of `ln ||X(t) - X(T)||_{H1}`.
    pub distance: LogLinearFit,
    /// Fit of `ln ||DE[X(t)]||_{H1}` over the same tail.
    pub gradient: Option<LogLinearFit>,
    /// Fit of `ln sqrt(E(t) - l)` with `l` the integer nearest to `E(T)`.
    pub energy_gap: Option<LogLinearFit>,
    /// Distances at or below this were excluded.
    pub noise_floor: f64,
    pub t_start: f64,
    pub t_end: f64,
}

/// Fits `||X(t) - terminal||_{H1} ~ C e^{-ct}` over the last `tail_fraction`
/// of the records.
///
/// The terminal curve is itself about `g(T) / c` away from the true limit,
/// where `g` is the gradient norm, so distances within ten times that
/// estimate (or below [`DISTANCE_FLOOR`]) are dropped before fitting.
pub fn estimate_rate(ts: &TimeSeries, terminal: &Curve, tail_fraction: f64) -> Result<RateEstimate> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    if ts.curves().len() != ts.len() {
        return Err(Error::InvalidParameter("time series carries no curve snapshots".into()));
    }
    let n = ts.len();
    let n_tail = ((n as f64 * tail_fraction).ceil() as usize).min(n);
    let start = n - n_tail;
    let records = &ts.records()[start..];
    let curves = &ts.curves()[start..];

    let grad_points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.diagnostics.t, r.diagnostics.grad_norm))
        .filter(|&(_, g)| g > 0.0 && g.is_finite())
        .collect();
    let gradient = LogLinearFit::fit(&grad_points);
    let terminal_error = match (gradient, grad_points.last()) {
        (Some(fit), Some(&(_, g_end))) if fit.rate > 0.0 => g_end / fit.rate,
        _ => 0.0,
    };
    let noise_floor = DISTANCE_FLOOR.max(10.0 * terminal_error);

    let points: Vec<(f64, f64)> = records
        .iter()
        .zip(curves)
        .map(|(r, c)| (r.diagnostics.t, (c - terminal).h1_norm()))
        .filter(|&(_, d)| d > noise_floor)
        .collect();
    if points.len() < MIN_TAIL_POINTS {
        return Err(Error::InsufficientTail {
            available: points.len(),
            required: MIN_TAIL_POINTS,
        });
    }
    let distance = LogLinearFit::fit(&points).ok_or(Error::InsufficientTail {
        available: points.len(),
        required: MIN_TAIL_POINTS,
    })?;

    let e_end = records.last().map(|r| r.diagnostics.energy).unwrap_or(f64::NAN);
    let ell = e_end.round();
    let gap_points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.diagnostics.t, (r.diagnostics.energy - ell).max(0.0).sqrt()))
        .filter(|&(_, phi)| phi * phi > 1e-13 * ell.max(1.0))
        .collect();
    let energy_gap = if gap_points.len() >= 3 {
        LogLinearFit::fit(&gap_points)
    } else {
        None
    };

    Ok(RateEstimate {
        distance,
        gradient,
        energy_gap,
        noise_floor,
        t_start: points[0].0,
        t_end: points[points.len() - 1].0,
    })
}
