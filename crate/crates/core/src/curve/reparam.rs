//! Constant-speed reparametrisation.
//!
//! The cumulative arclength `s(u)` is built on a dense grid, inverted by
//! monotone linear interpolation, polished with a few Newton steps against
//! the spectral arclength series, and the curve is then evaluated exactly at
//! the new parameters and re-projected.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Curve, SampledCurve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ReparamOptions {
    /// Dense grid size; raised to `16 (2 max(N, n_out) + 1)` when smaller.
    pub grid: usize,
    /// Truncation order of the output curve.
    pub n_out: usize,
    pub newton_steps: usize,
    /// Minimum speed relative to the mean speed.
    pub min_speed_rel: f64,
}

impl ReparamOptions {
    pub fn new(grid: usize, n_out: usize) -> Self {
        Self {
            grid,
            n_out,
            newton_steps: 3,
            min_speed_rel: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reparametrisation {
    pub curve: Curve,
    /// Discarded/kept mode amplitude ratio of the final projection.
    pub discarded_relative_amplitude: f64,
    /// Largest `| |X_u| / mean - 1 |` of the resampled points before projection.
    pub speed_spread: f64,
    pub grid: usize,
}

/// `s(u) = mean u + sum_k 2 Re(s_k (e^{iku} - 1) / ik)` for a real speed series.
struct ArclengthMap {
    mean: f64,
    coeffs: Vec<Complex64>,
}

impl ArclengthMap {
    fn from_speed_samples(speed: &[f64]) -> Self {
        let m = speed.len();
        let mut buf: Vec<Complex64> = speed.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv_m = 1.0 / m as f64;
        let mean = buf[0].re * inv_m;
        // keep positive frequencies strictly below Nyquist, drop the negligible tail
        let mut coeffs: Vec<Complex64> = buf[1..m.div_ceil(2)].iter().map(|z| z * inv_m).collect();
        let floor = 1e-17 * mean.abs();
        while coeffs.last().is_some_and(|z| z.norm() <= floor) {
            coeffs.pop();
        }
        Self { mean, coeffs }
    }

    fn arclength(&self, u: f64) -> f64 {
        let mut s = self.mean * u;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (i + 1) as f64;
            let phase = Complex64::from_polar(1.0, k * u) - 1.0;
            s += 2.0 * (c * phase / Complex64::new(0.0, k)).re;
        }
        s
    }

    fn speed(&self, u: f64) -> f64 {
        self.mean
            + self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| 2.0 * (c * Complex64::from_polar(1.0, (i + 1) as f64 * u)).re)
                .sum::<f64>()
    }
}

/// Reparametrises `c` to constant speed on a dense grid of at least `grid`
/// points and projects the result to `n_out` modes.
pub fn reparam_constant_speed(c: &Curve, grid: usize, n_out: usize) -> Result<Curve> {
    Ok(reparam_constant_speed_with(c, ReparamOptions::new(grid, n_out))?.curve)
}

pub fn reparam_constant_speed_with(c: &Curve, opts: ReparamOptions) -> Result<Reparametrisation> {
    let m = opts.grid.max(16 * (2 * c.n_modes().max(opts.n_out) + 1));
    if m < 2 * opts.n_out + 1 {
        return Err(Error::GridTooSmall {
            grid: m,
            required: 2 * opts.n_out + 1,
        });
    }
    let h = 2.0 * PI / m as f64;
    let speed: Vec<f64> = c.derivative().sample_complex(m)?.iter().map(|z| z.norm()).collect();
    let mean = speed.iter().sum::<f64>() / m as f64;
    let min_speed = speed.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = opts.min_speed_rel * mean;
    if !(mean > 0.0) || min_speed <= threshold {
        return Err(Error::DegenerateSpeed { min_speed, threshold });
    }

    let map = ArclengthMap::from_speed_samples(&speed);
    let cumulative: Vec<f64> = (0..=m).map(|i| map.arclength(i as f64 * h)).collect();
    let total = 2.0 * PI * map.mean;

    let mut params = Vec::with_capacity(m);
    let mut seg = 0;
    for k in 0..m {
        let target = total * k as f64 / m as f64;
        while seg + 1 < m && cumulative[seg + 1] <= target {
            seg += 1;
        }
        let (s0, s1) = (cumulative[seg], cumulative[seg + 1]);
        let (lo, hi) = (seg as f64 * h, (seg + 1) as f64 * h);
        let mut u = lo + h * ((target - s0) / (s1 - s0)).clamp(0.0, 1.0);
        for _ in 0..opts.newton_steps {
            let step = (map.arclength(u) - target) / map.speed(u);
            u = (u - step).clamp(lo, hi);
        }
        params.push(u);
    }

    let d = c.derivative();
    let mut speed_spread: f64 = 0.0;
    let points = params
        .iter()
        .map(|&u| {
            // ratio of the true speed to the interpolated one; 1 means uniform output speed
            let v = d.evaluate_complex(u).norm() / map.speed(u);
            speed_spread = speed_spread.max((v - 1.0).abs());
            c.evaluate(u)
        })
        .collect();
    let proj = SampledCurve::new(points)?.project(opts.n_out)?;
    Ok(Reparametrisation {
        curve: proj.curve,
        discarded_relative_amplitude: proj.discarded_relative_amplitude,
        speed_spread,
        grid: m,
    })
}
