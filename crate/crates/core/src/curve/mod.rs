//! Band-limited closed plane curves.
//!
//! A curve `X: S -> R^2` of truncation order `N` is stored through the complex
//! Fourier coefficients of `z(u) = x(u) + i y(u)`:
//!
//! ```text
//! z(u) = sum_{j=-N..N} z_j e^{iju}
//! ```
//!
//! This is equivalent to the real-vector form `X(u) = sum_k c_k e^{iku}` with
//! `c_k = (x_k, y_k)` and `c_{-k} = conj(c_k)`: `z_j = x_j + i y_j` and, going
//! back, `x_k = (z_k + conj z_{-k}) / 2`, `y_k = (z_k - conj z_{-k}) / 2i`.
//! Every `2N+1` complex vector is a valid real curve, so the conjugate
//! symmetry of `c_k` holds structurally rather than by re-checking.
//!
//! In this basis the quarter rotation `R` is multiplication by `i`, the
//! parameter shift `u -> u + s` multiplies mode `j` by `e^{ijs}`, and the
//! rotation `Rot_theta` multiplies every mode by `e^{i theta}`.

mod functionals;
mod reparam;
mod sampling;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use functionals::{default_grid, eps_area, Diagnostics};
pub use reparam::{reparam_constant_speed, reparam_constant_speed_with, ReparamOptions, Reparametrisation};
pub use sampling::{Projection, SampledCurve, ALIAS_RELATIVE_AMPLITUDE};

/// A point in the plane.
pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    n_modes: usize,
    /// `z_j` stored at index `j + n_modes`.
    modes: Vec<Complex64>,
}

impl Curve {
    pub fn zero(n_modes: usize) -> Self {
        Self {
            n_modes,
            modes: vec![Complex64::new(0.0, 0.0); 2 * n_modes + 1],
        }
    }

    /// Builds a curve from complex modes `z_{-N}..z_N` in ascending order.
    pub fn from_complex_modes(modes: Vec<Complex64>) -> Result<Self> {
        if modes.len().is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!(
                "expected an odd number of modes, got {}",
                modes.len()
            )));
        }
        if modes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidCurve("non-finite coefficient".into()));
        }
        Ok(Self {
            n_modes: (modes.len() - 1) / 2,
            modes,
        })
    }

    /// Builds a curve from real-vector coefficients `c_k = (x_k, y_k)` for
    /// `k = -N..N` in ascending order. The conjugate symmetry
    /// `c_{-k} = conj(c_k)` is checked against `sym_tol` times the
    /// coefficient scale.
    pub fn from_vector_coeffs(coeffs: &[[Complex64; 2]], sym_tol: f64) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!(
                "expected 2N+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        let n = (coeffs.len() - 1) / 2;
        let scale = coeffs
            .iter()
            .map(|c| c[0].norm().max(c[1].norm()))
            .fold(1.0_f64, f64::max);
        for k in 0..=n {
            let (pos, neg) = (coeffs[n + k], coeffs[n - k]);
            for comp in 0..2 {
                let gap = (pos[comp] - neg[comp].conj()).norm();
                if !gap.is_finite() {
                    return Err(Error::InvalidCurve("non-finite coefficient".into()));
                }
                if gap > sym_tol * scale {
                    return Err(Error::InvalidCurve(format!(
                        "conjugate symmetry violated at k = {k} (gap {gap:e})"
                    )));
                }
            }
        }
        let modes = coeffs.iter().map(|c| c[0] + Complex64::i() * c[1]).collect();
        Self::from_complex_modes(modes)
    }

    /// Builds the curve `z_j = f(j)` for `j = -N..N`.
    pub fn from_fn(n_modes: usize, f: impl FnMut(i64) -> Complex64) -> Self {
        let n = n_modes as i64;
        Self {
            n_modes,
            modes: (-n..=n).map(f).collect(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Complex modes `z_{-N}..z_N`.
    pub fn complex_modes(&self) -> &[Complex64] {
        &self.modes
    }

    /// Iterates `(j, z_j)` for `j = -N..N`.
    pub fn iter_modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.n_modes as i64;
        self.modes.iter().enumerate().map(move |(i, z)| (i as i64 - n, *z))
    }

    /// `z_j`, zero outside the truncation range.
    pub fn mode(&self, j: i64) -> Complex64 {
        if j.unsigned_abs() as usize > self.n_modes {
            Complex64::new(0.0, 0.0)
        } else {
            self.modes[(j + self.n_modes as i64) as usize]
        }
    }

    pub fn set_mode(&mut self, j: i64, value: Complex64) {
        assert!(
            j.unsigned_abs() as usize <= self.n_modes,
            "mode {j} outside truncation {}",
            self.n_modes
        );
        assert!(value.re.is_finite() && value.im.is_finite(), "non-finite mode");
        let n = self.n_modes as i64;
        self.modes[(j + n) as usize] = value;
    }

    /// Real-vector coefficient `c_k = (x_k, y_k)`.
    pub fn vector_coeff(&self, k: i64) -> [Complex64; 2] {
        let zp = self.mode(k);
        let zm = self.mode(-k).conj();
        [(zp + zm) * 0.5, (zp - zm) / Complex64::new(0.0, 2.0)]
    }

    /// All `c_k` for `k = -N..N` in ascending order.
    pub fn vector_coeffs(&self) -> Vec<[Complex64; 2]> {
        let n = self.n_modes as i64;
        (-n..=n).map(|k| self.vector_coeff(k)).collect()
    }

    /// Same curve at truncation order `n_modes`, zero-padding or truncating.
    pub fn resized(&self, n_modes: usize) -> Self {
        Self::from_fn(n_modes, |j| self.mode(j))
    }

    pub fn evaluate(&self, u: f64) -> Point {
        let z = self.evaluate_complex(u);
        [z.re, z.im]
    }

    pub(crate) fn evaluate_complex(&self, u: f64) -> Complex64 {
        // Horner in w = e^{iu}, starting from the highest mode.
        let w = Complex64::from_polar(1.0, u);
        let mut acc = Complex64::new(0.0, 0.0);
        for z in self.modes.iter().rev() {
            acc = acc * w + z;
        }
        acc * Complex64::from_polar(1.0, -(self.n_modes as f64) * u)
    }

    /// `X_u`, coefficients `i j z_j`.
    pub fn derivative(&self) -> Self {
        self.map_modes(|j, z| z * Complex64::new(0.0, j as f64))
    }

    /// `R X` with `R` the counter-clockwise quarter rotation.
    pub fn rotate_quarter(&self) -> Self {
        self.map_modes(|_, z| z * Complex64::i())
    }

    /// `Rot_theta X`.
    pub fn rotate(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        self.map_modes(|_, z| z * r)
    }

    /// `u -> X(u + s)`.
    pub fn shift(&self, s: f64) -> Self {
        self.map_modes(|j, z| z * Complex64::from_polar(1.0, j as f64 * s))
    }

    pub fn translate(&self, offset: Point) -> Self {
        let mut out = self.clone();
        out.modes[self.n_modes] += Complex64::new(offset[0], offset[1]);
        out
    }

    /// `u -> X(2 pi - u)`, which flips the sign of the signed area.
    pub fn reverse_orientation(&self) -> Self {
        Self::from_fn(self.n_modes, |j| self.mode(-j))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_modes(|_, z| z * a)
    }

    pub(crate) fn map_modes(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self::from_fn(self.n_modes, |j| f(j, self.mode(j)))
    }

    /// `self += a * other`; `other` may have a smaller truncation order.
    pub fn axpy(&mut self, a: f64, other: &Curve) {
        assert!(other.n_modes <= self.n_modes, "axpy target has fewer modes than source");
        let off = self.n_modes - other.n_modes;
        for (dst, src) in self.modes[off..].iter_mut().zip(&other.modes) {
            *dst += src * a;
        }
    }

    /// Projection onto curves with `X(u + 2 pi/m) = Rot_{2 pi n/m} X(u)`:
    /// keeps exactly the modes `j = n (mod m)`.
    pub fn symmetrize(&self, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidSymmetry { n, m });
        }
        let (n, m) = (n as i64, m as i64);
        Ok(self.map_modes(|j, z| {
            if (j - n).rem_euclid(m) == 0 {
                z
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Largest `|z_j|` over all modes.
    pub fn max_abs_mode(&self) -> f64 {
        self.modes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `<V, W>_{L2} = int V . W du = 2 pi sum_j Re(v_j conj w_j)`.
    pub fn l2_inner(&self, other: &Curve) -> f64 {
        self.weighted_inner(other, |_| 1.0)
    }

    /// `<V, W>_{H1} = int V . W + V_u . W_u du = 2 pi sum_j (1 + j^2) Re(v_j conj w_j)`.
    pub fn h1_inner(&self, other: &Curve) -> f64 {
        self.weighted_inner(other, |j| 1.0 + (j * j) as f64)
    }

    fn weighted_inner(&self, other: &Curve, weight: impl Fn(i64) -> f64) -> f64 {
        let n = self.n_modes.min(other.n_modes) as i64;
        2.0 * PI
            * (-n..=n)
                .map(|j| weight(j) * (self.mode(j) * other.mode(j).conj()).re)
                .sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).sqrt()
    }

    pub fn h1_norm(&self) -> f64 {
        self.h1_inner(self).sqrt()
    }

    /// `||X - Xbar||_{H1}`.
    pub fn centered_h1_norm(&self) -> f64 {
        let mut centered = self.clone();
        centered.modes[self.n_modes] = Complex64::new(0.0, 0.0);
        centered.h1_norm()
    }

    /// `Xbar = (1/2 pi) int X du`, the real part of `c_0`.
    pub fn centroid(&self) -> Point {
        let z0 = self.modes[self.n_modes];
        [z0.re, z0.im]
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn binary(lhs: &Curve, rhs: &Curve, f: impl Fn(Complex64, Complex64) -> Complex64) -> Curve {
    let n = lhs.n_modes.max(rhs.n_modes);
    Curve::from_fn(n, |j| f(lhs.mode(j), rhs.mode(j)))
}

impl Add for &Curve {
    type Output = Curve;
    fn add(self, rhs: &Curve) -> Curve {
        binary(self, rhs, |a, b| a + b)
    }
}

impl Sub for &Curve {
    type Output = Curve;
    fn sub(self, rhs: &Curve) -> Curve {
        binary(self, rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &Curve {
    type Output = Curve;
    fn mul(self, rhs: f64) -> Curve {
        self.scale(rhs)
    }
}

impl Neg for &Curve {
    type Output = Curve;
    fn neg(self) -> Curve {
        self.scale(-1.0)
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random band-limited curve with mode amplitudes decaying like `1/(1+|j|)`.
    pub fn random_curve(n_modes: usize, seed: u64) -> Curve {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Curve::from_fn(n_modes, |j| {
            let amp = 1.0 / (1.0 + j.abs() as f64);
            Complex64::new(amp * rng.random_range(-1.0..1.0), amp * rng.random_range(-1.0..1.0))
        })
    }

    pub fn unit_circle(n_modes: usize) -> Curve {
        let mut c = Curve::zero(n_modes);
        c.set_mode(1, Complex64::new(1.0, 0.0));
        c
    }

    /// `(a cos u, b sin u)`.
    pub fn ellipse(a: f64, b: f64, n_modes: usize) -> Curve {
        let mut c = Curve::zero(n_modes);
        c.set_mode(1, Complex64::new(0.5 * (a + b), 0.0));
        c.set_mode(-1, Complex64::new(0.5 * (a - b), 0.0));
        c
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(p: Point, q: Point, tol: f64) {
        assert!((p[0] - q[0]).abs() < tol && (p[1] - q[1]).abs() < tol, "{p:?} vs {q:?}");
    }

    #[test]
    fn evaluate_examples() {
        close(unit_circle(3).evaluate(0.0), [1.0, 0.0], 1e-15);
        close(ellipse(2.0, 1.0, 2).evaluate(PI / 2.0), [0.0, 1.0], 1e-15);
        let c = random_curve(7, 3);
        close(c.evaluate(0.7), c.evaluate(0.7 + 2.0 * PI), 1e-12);
    }

    #[test]
    fn evaluate_matches_direct_sum() {
        let c = random_curve(6, 11);
        let u = 1.234;
        let direct: Complex64 = c
            .iter_modes()
            .map(|(j, z)| z * Complex64::from_polar(1.0, j as f64 * u))
            .sum();
        let p = c.evaluate(u);
        close(p, [direct.re, direct.im], 1e-13);
    }

    #[test]
    fn vector_coeffs_round_trip_and_symmetry() {
        let c = random_curve(5, 2);
        let coeffs = c.vector_coeffs();
        for k in 0..=5 {
            for (p, q) in coeffs[5 + k].iter().zip(&coeffs[5 - k]) {
                assert!((p - q.conj()).norm() < 1e-15);
            }
        }
        let back = Curve::from_vector_coeffs(&coeffs, 1e-12).unwrap();
        assert!((&back - &c).max_abs_mode() < 1e-15);
    }

    #[test]
    fn unit_circle_vector_coeffs() {
        // cos u = (e^{iu} + e^{-iu})/2, sin u = (e^{iu} - e^{-iu})/2i
        let c = unit_circle(1).vector_coeff(1);
        assert_abs_diff_eq!(c[0].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c[1].im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_asymmetric_or_nonfinite_coeffs() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let bad = [[one, zero], [zero, zero], [zero, zero]];
        assert!(matches!(
            Curve::from_vector_coeffs(&bad, 1e-12),
            Err(Error::InvalidCurve(_))
        ));
        let nan = [[Complex64::new(f64::NAN, 0.0), zero]];
        assert!(Curve::from_vector_coeffs(&nan, 1e-12).is_err());
        assert!(Curve::from_complex_modes(vec![one, one]).is_err());
    }

    #[test]
    fn derivative_examples() {
        let constant = Curve::zero(3).translate([2.0, -1.0]);
        assert_eq!(constant.derivative().max_abs_mode(), 0.0);
        // (cos u, sin u)' = (-sin u, cos u)
        let d = unit_circle(2).derivative();
        close(d.evaluate(0.3), [-(0.3f64).sin(), (0.3f64).cos()], 1e-15);
        let c = random_curve(6, 5);
        let twice = c.derivative().derivative();
        for (j, z) in twice.iter_modes() {
            assert!((z + c.mode(j) * (j * j) as f64).norm() < 1e-13);
        }
    }

    #[test]
    fn h1_inner_examples() {
        let c = unit_circle(4);
        assert_abs_diff_eq!(c.h1_inner(&c), 4.0 * PI, epsilon = 1e-13);
        assert_eq!(c.h1_inner(&Curve::zero(4)), 0.0);
        let (v, w) = (random_curve(8, 1), random_curve(5, 2));
        assert_abs_diff_eq!(v.h1_inner(&w), w.h1_inner(&v), epsilon = 1e-13);
    }

    #[test]
    fn h1_inner_matches_quadrature() {
        let (v, w) = (random_curve(6, 7), random_curve(6, 8));
        let (dv, dw) = (v.derivative(), w.derivative());
        let m = 64;
        let h = 2.0 * PI / m as f64;
        let quad: f64 = (0..m)
            .map(|i| {
                let u = i as f64 * h;
                let (a, b, da, db) = (v.evaluate(u), w.evaluate(u), dv.evaluate(u), dw.evaluate(u));
                a[0] * b[0] + a[1] * b[1] + da[0] * db[0] + da[1] * db[1]
            })
            .sum::<f64>()
            * h;
        assert_abs_diff_eq!(v.h1_inner(&w), quad, epsilon = 1e-12);
    }

    #[test]
    fn reverse_orientation_is_involution() {
        let c = random_curve(6, 9);
        assert_eq!(c.reverse_orientation().reverse_orientation(), c);
        close(c.reverse_orientation().evaluate(0.4), c.evaluate(2.0 * PI - 0.4), 1e-13);
    }

    #[test]
    fn symmetry_operations() {
        let c = random_curve(8, 4);
        close(c.shift(0.3).evaluate(1.0), c.evaluate(1.3), 1e-13);
        let p = c.evaluate(1.0);
        let (s, co) = (0.7f64.sin(), 0.7f64.cos());
        close(
            c.rotate(0.7).evaluate(1.0),
            [co * p[0] - s * p[1], s * p[0] + co * p[1]],
            1e-13,
        );
        close(c.rotate_quarter().evaluate(1.0), [-p[1], p[0]], 1e-13);
        let sym = c.symmetrize(3, 4).unwrap();
        for (j, z) in sym.iter_modes() {
            if (j - 3).rem_euclid(4) != 0 {
                assert_eq!(z, Complex64::new(0.0, 0.0));
            }
        }
        assert!(c.symmetrize(0, 4).is_err());
    }

    #[test]
    fn resized_pads_and_truncates() {
        let c = random_curve(3, 1);
        let big = c.resized(6);
        assert_eq!(big.n_modes(), 6);
        assert_eq!(big.resized(3), c);
        assert_eq!(big.mode(5), Complex64::new(0.0, 0.0));
    }
}
