#![allow(dead_code)]

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sobolev_flow::Curve;

/// Band-limited curve with Gaussian modes of size `1 / (1 + j^2)`.
pub fn random_curve(n_modes: usize, seed: u64) -> Curve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Curve::from_fn(n_modes, |j| {
        let s = 1.0 / (1.0 + (j * j) as f64);
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * s
    })
}

/// Random curve rescaled so that `A >= min_area`, by adding a positive
/// first mode when needed.
pub fn random_curve_with_area(n_modes: usize, seed: u64, min_area: f64) -> Curve {
    let mut c = random_curve(n_modes, seed);
    while c.area() < min_area {
        c.set_mode(1, c.mode(1) + Complex64::new(0.5, 0.0));
    }
    c
}

/// Perimeter of the ellipse with semi-axes `a >= b` by the arithmetic-geometric
/// mean: `L = 4 a E(k)`, `E = K (1 - sum_n 2^{n-1} c_n^2)`.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let (mut x, mut y) = (1.0f64, b / a);
    let k2 = 1.0 - y * y;
    let mut sum = 0.5 * k2;
    let mut pow = 0.5;
    for _ in 0..40 {
        let c = 0.5 * (x - y);
        pow *= 2.0;
        sum += pow * c * c;
        let (nx, ny) = (0.5 * (x + y), (x * y).sqrt());
        x = nx;
        y = ny;
        if c.abs() < 1e-17 {
            break;
        }
    }
    let k = std::f64::consts::PI / (2.0 * x);
    4.0 * a * k * (1.0 - sum)
}

pub fn max_point_diff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()))
        .fold(0.0, f64::max)
}
