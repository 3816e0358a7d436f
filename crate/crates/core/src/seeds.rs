//! Initial curves.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::curve::{Curve, Point, SampledCurve};
use crate::error::{Error, Result};

/// Attempts made by [`random_positive_area`].
pub const RANDOM_ATTEMPTS: usize = 100;

/// `r (cos lu, sin lu) + center`.
pub fn circle(r: f64, ell: usize, center: Point, n_modes: usize) -> Result<Curve> {
    if !(r > 0.0 && r.is_finite()) || ell == 0 {
        return Err(Error::InvalidParameter(format!(
            "circle needs r > 0 and ell >= 1, got r = {r}, ell = {ell}"
        )));
    }
    if n_modes < ell {
        return Err(Error::TruncationTooSmall { needed: ell, n_modes });
    }
    let mut c = Curve::zero(n_modes);
    c.set_mode(ell as i64, Complex64::new(r, 0.0));
    c.set_mode(0, Complex64::new(center[0], center[1]));
    Ok(c)
}

/// `(a cos u, b sin u)`.
pub fn ellipse(a: f64, b: f64, n_modes: usize) -> Result<Curve> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("ellipse needs a, b > 0, got {a}, {b}")));
    }
    if n_modes < 1 {
        return Err(Error::TruncationTooSmall { needed: 1, n_modes });
    }
    let mut c = Curve::zero(n_modes);
    c.set_mode(1, Complex64::new(0.5 * (a + b), 0.0));
    c.set_mode(-1, Complex64::new(0.5 * (a - b), 0.0));
    Ok(c)
}

/// Radius-modulated `l`-circle `r (1 + eps cos ku) (cos lu, sin lu)`.
pub fn perturbed_circle(r: f64, ell: usize, k: usize, eps: f64, n_modes: usize) -> Result<Curve> {
    let mut c = circle(r, ell, [0.0, 0.0], n_modes)?;
    if n_modes < ell + k {
        return Err(Error::TruncationTooSmall {
            needed: ell + k,
            n_modes,
        });
    }
    if !eps.is_finite() {
        return Err(Error::InvalidParameter("non-finite perturbation amplitude".into()));
    }
    let half = Complex64::new(0.5 * r * eps, 0.0);
    for j in [ell as i64 + k as i64, ell as i64 - k as i64] {
        c.set_mode(j, c.mode(j) + half);
    }
    let area = c.area();
    if !(area > 0.0) {
        return Err(Error::NonPositiveArea { area });
    }
    Ok(c)
}

/// Random curve with `||X||_{H1} = norm_bound` and `A > 0.1 norm_bound^2`,
/// reproducible from `seed`.
pub fn random_positive_area(n_modes: usize, norm_bound: f64, seed: u64) -> Result<Curve> {
    if !(norm_bound > 0.0 && norm_bound.is_finite()) || n_modes == 0 {
        return Err(Error::InvalidParameter(format!(
            "random curve needs n_modes >= 1 and norm_bound > 0, got {n_modes}, {norm_bound}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let raw = Curve::from_fn(n_modes, |j| {
            let sigma = if j == 0 { 0.1 } else { 1.0 / (1.0 + (j * j) as f64) };
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) * sigma
        });
        let norm = raw.h1_norm();
        if norm == 0.0 {
            continue;
        }
        let c = raw.scale(norm_bound / norm);
        if c.area() > 0.1 * norm_bound * norm_bound {
            return Ok(c);
        }
    }
    Err(Error::CouldNotGeneratePositiveArea {
        attempts: RANDOM_ATTEMPTS,
    })
}

/// One leaf of a symmetric curve: samples at `u_i = i (2 pi / m) / K`,
/// `i = 0..=K`, so both endpoints are included.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    m: usize,
    points: Vec<Point>,
}

impl Leaf {
    pub fn new(m: usize, points: Vec<Point>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSymmetry { n: 0, m });
        }
        if points.len() < 3 {
            return Err(Error::GridTooSmall {
                grid: points.len(),
                required: 3,
            });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite leaf sample".into()));
        }
        Ok(Self { m, points })
    }

    /// Samples `f` at `samples + 1` points spanning `[0, 2 pi / m]`.
    pub fn from_fn(m: usize, samples: usize, f: impl Fn(f64) -> Point) -> Result<Self> {
        let h = 2.0 * PI / (m.max(1) * samples.max(1)) as f64;
        Self::new(m, (0..=samples).map(|i| f(i as f64 * h)).collect())
    }

    /// A single petal of the rose `r = cos(m theta / 2)`:
    /// `leaf(u) = cos(m theta / 2) (cos theta, sin theta)`, `theta = u - pi/m`.
    pub fn petal(m: usize, samples: usize) -> Result<Self> {
        let mf = m as f64;
        Self::from_fn(m, samples, |u| {
            let theta = u - PI / mf;
            let r = (0.5 * mf * theta).cos();
            [r * theta.cos(), r * theta.sin()]
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// Builds `X(u + 2 pi j / m) = Rot_{2 pi n j / m} leaf(u)` for
/// `j = 0..m-1` and projects onto the `(n, m)`-symmetric modes `|k| <= N`.
pub fn symmetric_from_leaf(leaf: &Leaf, n: usize, n_modes: usize) -> Result<Curve> {
    let m = leaf.m;
    if n == 0 {
        return Err(Error::InvalidSymmetry { n, m });
    }
    let pts = &leaf.points;
    let scale = pts.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let eps_join = 1e-9 * (1.0 + scale);
    let (start, end) = (pts[0][0].hypot(pts[0][1]), {
        let p = pts[pts.len() - 1];
        p[0].hypot(p[1])
    });
    if start > eps_join || end > eps_join {
        return Err(Error::LeafNotClosedAtOrigin { start, end });
    }
    let k = pts.len() - 1;
    let mut samples = Vec::with_capacity(m * k);
    for j in 0..m {
        let angle = 2.0 * PI * (n * j) as f64 / m as f64;
        let rot = Complex64::from_polar(1.0, angle);
        for p in &pts[..k] {
            let z = rot * Complex64::new(p[0], p[1]);
            samples.push([z.re, z.im]);
        }
    }
    let proj = SampledCurve::new(samples)?.project(n_modes)?;
    proj.curve.symmetrize(n, m)
}
