//! Periodic Green's function of `d^2/du^2 - 1` and convolution against it.
//!
//! In Fourier space the convolution is the multiplier `-1 / (1 + k^2)`. The
//! closed-form kernel is kept for pointwise evaluation and as an independent
//! quadrature check of the multiplier.

use std::f64::consts::PI;

use crate::curve::{Curve, Point, SampledCurve};

/// Tabulated multipliers `-1 / (1 + k^2)` for `k = -N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenMultiplier {
    n_modes: usize,
    multipliers: Vec<f64>,
}

impl GreenMultiplier {
    pub fn new(n_modes: usize) -> Self {
        let n = n_modes as i64;
        let multipliers = (-n..=n).map(multiplier).collect();
        Self { n_modes, multipliers }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    /// Multiplier for mode `k`; zero outside the table.
    pub fn get(&self, k: i64) -> f64 {
        let n = self.n_modes as i64;
        if k.abs() > n {
            0.0
        } else {
            self.multipliers[(k + n) as usize]
        }
    }

    pub fn apply(&self, c: &Curve) -> Curve {
        let n = c.n_modes().min(self.n_modes);
        c.resized(n).map_modes(|k, z| z * self.get(k))
    }
}

fn multiplier(k: i64) -> f64 {
    -1.0 / (1.0 + (k * k) as f64)
}

/// `G(u, v) = -cosh(d - pi) / (2 sinh pi)` with `d = (u - v) mod 2 pi`.
pub fn green_eval(u: f64, v: f64) -> f64 {
    let d = (u - v).rem_euclid(2.0 * PI);
    -(d - PI).cosh() / (2.0 * PI.sinh())
}

/// Partial derivative of [`green_eval`] in its first argument, taking the
/// one-sided value `+1/2` on the diagonal.
pub fn green_eval_du(u: f64, v: f64) -> f64 {
    let d = (u - v).rem_euclid(2.0 * PI);
    -(d - PI).sinh() / (2.0 * PI.sinh())
}

/// `W * G` computed spectrally. Exact on band-limited input.
pub fn convolve_green(c: &Curve) -> Curve {
    c.map_modes(|k, z| z * multiplier(k))
}

/// `(W * G)(u_i) = int W(v) G(u_i, v) dv` by quadrature on the sample grid.
///
/// The diagonal value is subtracted first, using `int G = -1`, so the
/// remaining integrand vanishes where the kernel has its derivative jump.
/// On even grids a Richardson step against the every-other-node rule
/// anchored at `u_i` removes the leading `h^4` error.
pub fn convolve_green_quadrature(s: &SampledCurve) -> SampledCurve {
    let w = s.points();
    let m = w.len();
    let h = 2.0 * PI / m as f64;
    let kernel: Vec<f64> = (0..m).map(|k| green_eval(0.0, -(k as f64) * h)).collect();

    let rule = |i: usize, stride: usize| -> Point {
        let mut acc = [0.0; 2];
        for k in (stride..m).step_by(stride) {
            let p = w[(i + k) % m];
            let g = kernel[k];
            acc[0] += (p[0] - w[i][0]) * g;
            acc[1] += (p[1] - w[i][1]) * g;
        }
        let hs = h * stride as f64;
        [acc[0] * hs - w[i][0], acc[1] * hs - w[i][1]]
    };

    let points = (0..m)
        .map(|i| {
            let fine = rule(i, 1);
            if m.is_multiple_of(2) {
                let coarse = rule(i, 2);
                [(16.0 * fine[0] - coarse[0]) / 15.0, (16.0 * fine[1] - coarse[1]) / 15.0]
            } else {
                fine
            }
        })
        .collect();
    SampledCurve::from_points_unchecked(points)
}
