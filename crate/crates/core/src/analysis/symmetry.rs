//! Rotational symmetry and the integrality of terminal energies.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{default_grid, Curve};
use crate::error::{Error, Result};

/// Slack on `l <= E(0)` in [`quantisation_check`].
pub const QUANTISATION_SLACK: f64 = 1e-6;

/// `max_u |X(u + 2 pi/m) - Rot_{2 pi n/m} X(u)|` on the default grid.
///
/// The deviation is formed in coefficient space, mode `j` picking up
/// `exp(2 pi i j/m) - exp(2 pi i n/m)`, and only then sampled. `n` is
/// reduced modulo `m`.
pub fn symmetry_check(c: &Curve, n: usize, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSymmetry { n, m });
    }
    let n = (n % m) as f64;
    let rot = Complex64::from_polar(1.0, 2.0 * PI * n / m as f64);
    let dev = c.map_modes(|j, z| z * (Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64) - rot));
    let samples = dev.sample_complex(default_grid(c.n_modes()))?;
    Ok(samples.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Residue class of `n` after reversing the orientation: `-n mod m`, with
/// `0` mapped to `m`.
pub fn reversed_class(n: usize, m: usize) -> usize {
    match (m - n % m) % m {
        0 => m,
        r => r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantisationCheck {
    /// Nearest integer to the terminal energy, clamped at 0.
    pub ell: u64,
    pub deviation: f64,
    /// `l >= 1` and `l <= E(0) + QUANTISATION_SLACK`.
    pub ok: bool,
}

pub fn quantisation_check(e_terminal: f64, e_initial: f64) -> QuantisationCheck {
    let rounded = e_terminal.round().max(0.0);
    let deviation = (e_terminal - rounded).abs();
    let ok = rounded >= 1.0 && rounded <= e_initial + QUANTISATION_SLACK && deviation.is_finite();
    QuantisationCheck {
        ell: rounded as u64,
        deviation,
        ok,
    }
}
