//! Drift of the quantities the exact flow conserves, and the a priori
//! bounds that follow from them.

use serde::{Deserialize, Serialize};

use super::TimeSeries;
use crate::error::{Error, Result};

/// Uphill energy change tolerated between records, relative to `max(1, E)`.
pub const ENERGY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub samples: usize,
    /// `max_t | ||X(t)|| - ||X(0)|| | / ||X(0)||`.
    pub h1_norm_drift: f64,
    /// Centroid displacement relative to `max(|Xbar(0)|, ||X(0) - Xbar(0)||)`.
    pub centroid_drift: f64,
    pub centered_h1_drift: f64,
    pub max_drift: f64,
    /// Largest increase of `E` between consecutive records (0 if none).
    pub energy_max_increase: f64,
    pub energy_monotone: bool,
    /// `c0 = ||X(0) - Xbar(0)||^2`.
    pub c0: f64,
    pub dirichlet_min: f64,
    pub dirichlet_lower_bound: f64,
    pub dirichlet_bound_ok: bool,
    pub area_min: f64,
    pub area_max: f64,
    /// `[c0 / (4 E(0)), ||X(0)||^2 / 2]`.
    pub area_corridor: [f64; 2],
    pub area_corridor_ok: bool,
    /// Relative slack granted to the bounds, derived from the measured drift.
    pub bound_slack: f64,
}

impl ConservationReport {
    pub fn bounds_hold(&self) -> bool {
        self.energy_monotone && self.dirichlet_bound_ok && self.area_corridor_ok
    }
}

pub fn conservation_report(ts: &TimeSeries) -> Result<ConservationReport> {
    if ts.len() < 2 {
        return Err(Error::SeriesTooShort { len: ts.len() });
    }
    let d: Vec<_> = ts.diagnostics().collect();
    let first = d[0];
    let rel = |v: f64, v0: f64| if v0 > 0.0 { (v - v0).abs() / v0 } else { (v - v0).abs() };

    let h1_norm_drift = d.iter().map(|x| rel(x.h1_norm, first.h1_norm)).fold(0.0, f64::max);
    let centered_h1_drift = d
        .iter()
        .map(|x| rel(x.centered_h1_norm, first.centered_h1_norm))
        .fold(0.0, f64::max);
    let c_scale = first.centroid[0].hypot(first.centroid[1]).max(first.centered_h1_norm);
    let centroid_drift = d
        .iter()
        .map(|x| {
            let dist = (x.centroid[0] - first.centroid[0]).hypot(x.centroid[1] - first.centroid[1]);
            if c_scale > 0.0 {
                dist / c_scale
            } else {
                dist
            }
        })
        .fold(0.0, f64::max);
    let max_drift = h1_norm_drift.max(centroid_drift).max(centered_h1_drift);

    let mut energy_max_increase: f64 = 0.0;
    let mut energy_monotone = true;
    for w in d.windows(2) {
        let up = w[1].energy - w[0].energy;
        energy_max_increase = energy_max_increase.max(up);
        if !(up <= ENERGY_SLACK * w[0].energy.abs().max(1.0)) {
            energy_monotone = false;
        }
    }

    let c0 = first.centered_h1_norm * first.centered_h1_norm;
    let grow = |delta: f64| 2.0 * delta + delta * delta;
    let bound_slack = grow(centered_h1_drift.max(h1_norm_drift)) + 1e-12;

    let dirichlet_min = d.iter().map(|x| x.dirichlet).fold(f64::INFINITY, f64::min);
    let dirichlet_lower_bound = c0 / 4.0;
    let dirichlet_bound_ok = dirichlet_min >= dirichlet_lower_bound * (1.0 - bound_slack);

    let area_min = d.iter().map(|x| x.area).fold(f64::INFINITY, f64::min);
    let area_max = d.iter().map(|x| x.area).fold(f64::NEG_INFINITY, f64::max);
    let area_corridor = [c0 / (4.0 * first.energy), 0.5 * first.h1_norm * first.h1_norm];
    let energy_slack = energy_max_increase.max(0.0) / first.energy.abs().max(1.0);
    let area_corridor_ok = area_min >= area_corridor[0] * (1.0 - bound_slack - energy_slack - ENERGY_SLACK)
        && area_max <= area_corridor[1] * (1.0 + bound_slack);

    Ok(ConservationReport {
        samples: d.len(),
        h1_norm_drift,
        centroid_drift,
        centered_h1_drift,
        max_drift,
        energy_max_increase,
        energy_monotone,
        c0,
        dirichlet_min,
        dirichlet_lower_bound,
        dirichlet_bound_ok,
        area_min,
        area_max,
        area_corridor,
        area_corridor_ok,
        bound_slack,
    })
}
