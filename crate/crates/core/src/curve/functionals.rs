//! Length, signed area, Dirichlet energy, the area-normalised energy and the
//! isoperimetric ratio.
//!
//! Everything except the length is a quadratic form in the modes and is
//! evaluated exactly by Parseval:
//!
//! ```text
//! A[X] = -1/2 int X . R X_u du = pi sum_j j |z_j|^2
//! Q[X] =  1/2 int |X_u|^2 du   = pi sum_j j^2 |z_j|^2
//! ```
//!
//! The length integrand `|X_u|` is not a trigonometric polynomial, so it uses
//! the trapezoidal rule, which converges spectrally for smooth speed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Curve, Point};
use crate::error::{Error, Result};
use crate::gradients::grad_e;

/// Quadrature grid for nonlinear integrands: `4 (2N + 1)` points.
pub fn default_grid(n_modes: usize) -> usize {
    4 * (2 * n_modes + 1)
}

/// Scale-aware zero-area threshold `1e-12 (1 + ||X||_{H1}^2)`.
pub fn eps_area(c: &Curve) -> f64 {
    1e-12 * (1.0 + c.h1_inner(c))
}

impl Curve {
    /// `L[X] = int |X_u| du` by the trapezoidal rule on `m` points.
    pub fn length_on_grid(&self, m: usize) -> Result<f64> {
        let required = 2 * self.n_modes() + 1;
        if m < required {
            return Err(Error::GridTooSmall { grid: m, required });
        }
        let speeds = self.derivative().sample_complex(m)?;
        Ok(speeds.iter().map(|z| z.norm()).sum::<f64>() * 2.0 * PI / m as f64)
    }

    /// Length on the default grid.
    pub fn length(&self) -> f64 {
        self.length_on_grid(default_grid(self.n_modes()))
            .expect("default grid satisfies the Nyquist bound")
    }

    /// Signed area.
    pub fn area(&self) -> f64 {
        PI * self.iter_modes().map(|(j, z)| j as f64 * z.norm_sqr()).sum::<f64>()
    }

    /// Dirichlet energy `Q`.
    pub fn dirichlet(&self) -> f64 {
        PI * self
            .iter_modes()
            .map(|(j, z)| (j * j) as f64 * z.norm_sqr())
            .sum::<f64>()
    }

    /// `E = Q / A`; fails with `ZeroArea` when `|A| <= eps_area`.
    pub fn energy(&self) -> Result<f64> {
        let area = self.area();
        let threshold = eps_area(self);
        if area.abs() <= threshold {
            return Err(Error::ZeroArea { area, threshold });
        }
        Ok(self.dirichlet() / area)
    }

    /// `L^2 / (4 pi |A|)`, or `+inf` when the area vanishes.
    pub fn iso_ratio(&self) -> f64 {
        self.iso_ratio_on_grid(default_grid(self.n_modes()))
            .expect("default grid satisfies the Nyquist bound")
    }

    /// [`Curve::iso_ratio`] with the length taken on `m` points.
    pub fn iso_ratio_on_grid(&self, m: usize) -> Result<f64> {
        let area = self.area();
        if area.abs() <= eps_area(self) {
            return Ok(f64::INFINITY);
        }
        let l = self.length_on_grid(m)?;
        Ok(l * l / (4.0 * PI * area.abs()))
    }
}

/// Every scalar functional of a curve at one flow time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub length: f64,
    pub area: f64,
    pub dirichlet: f64,
    /// `+inf` when the area vanishes.
    #[serde(with = "crate::io::float_or_inf")]
    pub energy: f64,
    #[serde(with = "crate::io::float_or_inf")]
    pub iso_ratio: f64,
    pub h1_norm: f64,
    pub centered_h1_norm: f64,
    pub centroid: Point,
    /// `||DE[X]||_{H1}`, `+inf` when the area vanishes.
    #[serde(with = "crate::io::float_or_inf")]
    pub grad_norm: f64,
}

impl Diagnostics {
    pub fn compute(t: f64, c: &Curve) -> Self {
        let (energy, grad_norm) = match (c.energy(), grad_e(c)) {
            (Ok(e), Ok(g)) => (e, g.h1_norm()),
            _ => (f64::INFINITY, f64::INFINITY),
        };
        Self {
            t,
            length: c.length(),
            area: c.area(),
            dirichlet: c.dirichlet(),
            energy,
            iso_ratio: c.iso_ratio(),
            h1_norm: c.h1_norm(),
            centered_h1_norm: c.centered_h1_norm(),
            centroid: c.centroid(),
            grad_norm,
        }
    }
}
