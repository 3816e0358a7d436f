use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Curve, Point};
use crate::error::{Error, Result};

/// Relative amplitude above which discarded modes raise the alias flag.
pub const ALIAS_RELATIVE_AMPLITUDE: f64 = 1e-10;

/// Samples of a closed curve on the uniform grid `u_j = 2 pi j / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<Point>,
}

/// Result of projecting samples onto a truncation order.
#[derive(Debug, Clone)]
pub struct Projection {
    pub curve: Curve,
    /// Largest discarded mode amplitude relative to the largest kept one.
    pub discarded_relative_amplitude: f64,
    /// Set when the samples carry content above the truncation order.
    pub alias_risk: bool,
}

impl SampledCurve {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::GridTooSmall {
                grid: points.len(),
                required: 4,
            });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        Ok(Self { points })
    }

    /// Caller guarantees at least four finite points.
    pub(crate) fn from_points_unchecked(points: Vec<Point>) -> Self {
        debug_assert!(points.len() >= 4);
        Self { points }
    }

    /// Samples `f(u_j)` on an `m`-point uniform grid.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> Point) -> Result<Self> {
        let h = 2.0 * PI / m as f64;
        Self::new((0..m).map(|j| f(j as f64 * h)).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> {
        let h = 2.0 * PI / self.points.len() as f64;
        (0..self.points.len()).map(move |j| j as f64 * h)
    }

    /// Discrete Fourier projection onto modes `|j| <= n_modes`. Exact for
    /// band-limited samples with `M >= 2N + 1`.
    pub fn project(&self, n_modes: usize) -> Result<Projection> {
        let m = self.points.len();
        if m < 2 * n_modes + 1 {
            return Err(Error::GridTooSmall {
                grid: m,
                required: 2 * n_modes + 1,
            });
        }
        let mut buf: Vec<Complex64> = self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv_m = 1.0 / m as f64;
        let curve = Curve::from_fn(n_modes, |j| buf[j.rem_euclid(m as i64) as usize] * inv_m);

        let kept = curve.max_abs_mode();
        let discarded = (n_modes + 1..m - n_modes)
            .map(|i| buf[i].norm() * inv_m)
            .fold(0.0, f64::max);
        let discarded_relative_amplitude = if kept > 0.0 {
            discarded / kept
        } else if discarded > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        Ok(Projection {
            curve,
            discarded_relative_amplitude,
            alias_risk: discarded_relative_amplitude > ALIAS_RELATIVE_AMPLITUDE,
        })
    }

    /// CSV with header `u,x,y`, one row per grid point.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["u", "x", "y"]).map_err(csv_err)?;
        for (u, p) in self.grid().zip(&self.points) {
            w.write_record([u.to_string(), p[0].to_string(), p[1].to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `u,x,y` CSV. The `u` column must match the uniform grid.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers().map_err(csv_err)?.clone();
        if headers.iter().collect::<Vec<_>>() != ["u", "x", "y"] {
            return Err(Error::Parse(format!("expected header u,x,y, got {headers:?}")));
        }
        let mut rows = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column {i}", line + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)))
            };
            rows.push((field(0)?, [field(1)?, field(2)?]));
        }
        let m = rows.len();
        let h = 2.0 * PI / m.max(1) as f64;
        for (j, (u, _)) in rows.iter().enumerate() {
            if (u - j as f64 * h).abs() > 1e-9 * (1.0 + u.abs()) {
                return Err(Error::Parse(format!(
                    "row {}: u = {u} is not on the uniform {m}-point grid",
                    j + 1
                )));
            }
        }
        Self::new(rows.into_iter().map(|(_, p)| p).collect())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

impl Curve {
    /// Exact samples on an `m`-point uniform grid. Modes above the Nyquist
    /// limit wrap onto their grid aliases, which is still exact pointwise.
    pub fn sample(&self, m: usize) -> Result<SampledCurve> {
        SampledCurve::new(self.sample_complex(m)?.into_iter().map(|z| [z.re, z.im]).collect())
    }

    pub(crate) fn sample_complex(&self, m: usize) -> Result<Vec<Complex64>> {
        if m < 4 {
            return Err(Error::GridTooSmall { grid: m, required: 4 });
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (j, z) in self.iter_modes() {
            buf[j.rem_euclid(m as i64) as usize] += z;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        Ok(buf)
    }
}
