//! Symmetric isoperimetric inequality `I[X] >= n` checked through the flow:
//! the constant-speed reparametrisation has `E = I`, the flow keeps the
//! symmetry and decreases `E`, and the limit is an `l`-fold circle with
//! `l = n (mod m)`.

use serde::{Deserialize, Serialize};

use super::symmetry::{quantisation_check, reversed_class, symmetry_check, QuantisationCheck};
use crate::curve::{reparam_constant_speed, Curve};
use crate::equilibria::{fit_equilibrium, EquilibriumFit};
use crate::error::{Error, Result};
use crate::flow::{flow_run, FlowConfig, FlowOutcome};

/// Admissible symmetry deviation of the input, relative to `max(1, ||X||_{H1})`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative slack on `I[X0] >= l`.
pub const ISO_SLACK: f64 = 1e-9;

/// Input curve made ready for the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedCurve {
    pub curve: Curve,
    /// Symmetry class after orienting the curve counter-clockwise.
    pub n: usize,
    pub m: usize,
    pub orientation_reversed: bool,
    pub symmetry_deviation: f64,
    pub iso_ratio: f64,
}

/// Checks the symmetry, orients counter-clockwise, reparametrises to
/// constant speed with `n_modes` modes and projects back onto the class.
pub fn prepare_symmetric(c0: &Curve, n: usize, m: usize, n_modes: usize) -> Result<PreparedCurve> {
    let symmetry_deviation = symmetry_check(c0, n, m)?;
    let tolerance = SYMMETRY_TOL * c0.h1_norm().max(1.0);
    if !(symmetry_deviation < tolerance) {
        return Err(Error::SymmetryViolated {
            deviation: symmetry_deviation,
            tolerance,
        });
    }
    let area = c0.area();
    if !(area.abs() > crate::curve::eps_area(c0)) {
        return Err(Error::NonPositiveArea { area });
    }
    let orientation_reversed = area < 0.0;
    let (oriented, n) = if orientation_reversed {
        (c0.reverse_orientation(), reversed_class(n, m))
    } else {
        (c0.clone(), n)
    };
    // dense enough that the length quadrature is far below the truncation error
    let grid = 16 * (2 * oriented.n_modes().max(n_modes) + 1);
    let curve = reparam_constant_speed(&oriented, grid, n_modes)?.symmetrize(n, m)?;
    Ok(PreparedCurve {
        curve,
        n,
        m,
        orientation_reversed,
        symmetry_deviation,
        iso_ratio: oriented.iso_ratio_on_grid(grid)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetryReport {
    pub n: usize,
    pub m: usize,
    pub orientation_reversed: bool,
    pub symmetry_deviation: f64,
    pub iso_ratio: f64,
    /// `E` of the constant-speed curve the flow starts from.
    pub prepared_energy: f64,
    pub terminal_energy: f64,
    pub terminal_grad_norm: f64,
    pub quantisation: QuantisationCheck,
    pub fit: EquilibriumFit,
    pub ell: u64,
    pub ell_congruent: bool,
    pub ell_at_least_n: bool,
    pub iso_at_least_ell: bool,
    /// Every flag above holds.
    pub chain_holds: bool,
}

/// Checks the chain `I[X0] >= l >= n`, `l = n (mod m)` for a flow started
/// from `prepared.curve` that ended at `terminal` with gradient norm
/// `grad_norm`.
pub fn isoperimetry_report(
    prepared: &PreparedCurve,
    terminal: &Curve,
    grad_norm: f64,
    grad_stop: f64,
) -> Result<IsoperimetryReport> {
    if !(grad_norm < grad_stop) {
        return Err(Error::NotConverged { grad_norm, grad_stop });
    }
    let prepared_energy = prepared.curve.energy()?;
    let terminal_energy = terminal.energy()?;
    let quantisation = quantisation_check(terminal_energy, prepared_energy);
    let fit = fit_equilibrium(terminal)?;
    let ell = quantisation.ell;
    let (n, m) = (prepared.n as u64, prepared.m as u64);
    let ell_congruent = ell % m == n % m && fit.params.ell as u64 == ell;
    let ell_at_least_n = ell >= n;
    let iso_at_least_ell = prepared.iso_ratio >= ell as f64 * (1.0 - ISO_SLACK);
    let chain_holds = quantisation.ok && ell_congruent && ell_at_least_n && iso_at_least_ell;
    Ok(IsoperimetryReport {
        n: prepared.n,
        m: prepared.m,
        orientation_reversed: prepared.orientation_reversed,
        symmetry_deviation: prepared.symmetry_deviation,
        iso_ratio: prepared.iso_ratio,
        prepared_energy,
        terminal_energy,
        terminal_grad_norm: grad_norm,
        quantisation,
        fit,
        ell,
        ell_congruent,
        ell_at_least_n,
        iso_at_least_ell,
        chain_holds,
    })
}

#[derive(Debug, Clone)]
pub struct IsoperimetryRun {
    pub prepared: PreparedCurve,
    pub outcome: FlowOutcome,
    pub report: IsoperimetryReport,
}

/// [`prepare_symmetric`], [`flow_run`] and [`isoperimetry_report`] in sequence.
pub fn run_isoperimetry(c0: &Curve, n: usize, m: usize, n_modes: usize, cfg: &FlowConfig) -> Result<IsoperimetryRun> {
    let prepared = prepare_symmetric(c0, n, m, n_modes)?;
    let outcome = flow_run(&prepared.curve, cfg)?;
    let report = isoperimetry_report(&prepared, &outcome.state.curve, outcome.grad_norm, cfg.grad_stop)?;
    Ok(IsoperimetryRun {
        prepared,
        outcome,
        report,
    })
}
