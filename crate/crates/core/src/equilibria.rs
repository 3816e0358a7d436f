//! Stationary curves: `l`-times covered round circles
//!
//! ```text
//! Y(u) = (1/l) (a sin lu + b cos lu - b, -a cos lu + b sin lu + a) + (c, d)
//! ```
//!
//! In complex form `Y = ((b - ia)/l) e^{ilu} + (c - b/l) + i (d + a/l)`, so
//! `(c, d) = Y(0)` and the centroid is `(c - b/l, d + a/l)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};

/// Relative energy gap below which the dominant frequency is ambiguous.
pub const AMBIGUITY_GAP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub ell: usize,
}

impl EquilibriumParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, ell: usize) -> Self {
        Self { a, b, c, d, ell }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        if ![self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite equilibrium parameter".into()));
        }
        Ok(())
    }

    /// `a = b = 0`: the constant curve at `(c, d)`.
    pub fn is_degenerate(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    /// Radius of the covered circle, `sqrt(a^2 + b^2) / l`.
    pub fn radius(&self) -> f64 {
        self.a.hypot(self.b) / self.ell as f64
    }

    pub fn centroid(&self) -> [f64; 2] {
        let l = self.ell as f64;
        [self.c - self.b / l, self.d + self.a / l]
    }
}

/// Fitted parameters and `||c - Y||_{H1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumFit {
    #[serde(flatten)]
    pub params: EquilibriumParams,
    pub residual: f64,
}

pub fn equilibrium_curve(p: &EquilibriumParams, n_modes: usize) -> Result<Curve> {
    p.validate()?;
    if n_modes < p.ell {
        return Err(Error::TruncationTooSmall { needed: p.ell, n_modes });
    }
    let l = p.ell as f64;
    let mut c = Curve::zero(n_modes);
    c.set_mode(p.ell as i64, Complex64::new(p.b, -p.a) / l);
    c.set_mode(0, Complex64::new(p.c - p.b / l, p.d + p.a / l));
    Ok(c)
}

/// `pi (a^2 + b^2) / l`.
pub fn equilibrium_area(p: &EquilibriumParams) -> f64 {
    PI * (p.a * p.a + p.b * p.b) / p.ell as f64
}

/// Projects `c` onto the stationary family through its dominant frequency.
///
/// The frequency is the `k >= 1` maximising `|c_k|^2`, i.e. the energy of
/// the `+k` and `-k` complex modes together.
pub fn fit_equilibrium(c: &Curve) -> Result<EquilibriumFit> {
    let mut energies: Vec<(usize, f64)> = (1..=c.n_modes())
        .map(|k| {
            let k = k as i64;
            (k as usize, c.mode(k).norm_sqr() + c.mode(-k).norm_sqr())
        })
        .collect();
    energies.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    let Some(&(ell, top)) = energies.first() else {
        return Err(Error::DegenerateCurve);
    };
    if !(top > 0.0) {
        return Err(Error::DegenerateCurve);
    }
    if let Some(&(k2, second)) = energies.get(1) {
        if top - second < AMBIGUITY_GAP * top {
            return Err(Error::AmbiguousFrequency {
                first_k: ell,
                first_energy: top,
                second_k: k2,
                second_energy: second,
            });
        }
    }
    let l = ell as f64;
    let z = c.mode(ell as i64);
    let y0 = c.mode(0) + z;
    let params = EquilibriumParams::new(-l * z.im, l * z.re, y0.re, y0.im, ell);
    let fitted = equilibrium_curve(&params, c.n_modes())?;
    Ok(EquilibriumFit {
        params,
        residual: (c - &fitted).h1_norm(),
    })
}

/// `||X_uu - E[X] R X_u||_{L2}`, zero exactly on the stationary family.
pub fn stationarity_residual(c: &Curve) -> Result<f64> {
    let e = c.energy()?;
    let sum: f64 = c
        .iter_modes()
        .map(|(j, z)| {
            let j = j as f64;
            (j * (e - j)).powi(2) * z.norm_sqr()
        })
        .sum();
    Ok((2.0 * PI * sum).sqrt())
}

/// `sqrt(a^2 + b^2)` of the limit predicted from conservation of the
/// centred norm: `||Y - Ybar||^2 = 2 pi (1 + l^2) (a^2 + b^2) / l^2 = c0`.
pub fn predicted_limit_amplitude(c0: f64, ell: usize) -> f64 {
    let l = ell as f64;
    (l * l * c0 / (2.0 * PI * (1.0 + l * l))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::test_support::*;
    use crate::gradients::grad_e;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn closed_form_matches_coefficients() {
        let p = EquilibriumParams::new(0.7, -1.2, 0.3, 2.0, 3);
        let c = equilibrium_curve(&p, 5).unwrap();
        let l = 3.0;
        for i in 0..17 {
            let u = 0.4 * i as f64;
            let x = (p.a * (l * u).sin() + p.b * (l * u).cos() - p.b) / l + p.c;
            let y = (-p.a * (l * u).cos() + p.b * (l * u).sin() + p.a) / l + p.d;
            let q = c.evaluate(u);
            assert_abs_diff_eq!(q[0], x, epsilon = 1e-14);
            assert_abs_diff_eq!(q[1], y, epsilon = 1e-14);
        }
        assert_eq!(c.evaluate(0.0), [p.c, p.d]);
    }

    #[test]
    fn unit_example() {
        let p = EquilibriumParams::new(1.0, 0.0, 0.0, 0.0, 1);
        let c = equilibrium_curve(&p, 2).unwrap();
        let q = c.evaluate(0.9);
        assert_abs_diff_eq!(q[0], 0.9f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(q[1], 1.0 - 0.9f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.area(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(equilibrium_area(&p), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(
            equilibrium_area(&EquilibriumParams::new(1.0, 1.0, 0.0, 0.0, 2)),
            PI,
            epsilon = 1e-15
        );
        assert_eq!(equilibrium_area(&EquilibriumParams::new(0.0, 0.0, 1.0, 1.0, 4)), 0.0);
    }

    #[test]
    fn centroid_is_offset_from_base_point() {
        let p = EquilibriumParams::new(1.0, 0.0, 5.0, 7.0, 2);
        let c = equilibrium_curve(&p, 3).unwrap();
        assert_eq!(c.centroid(), [5.0, 7.5]);
        assert_eq!(p.centroid(), [5.0, 7.5]);
    }

    #[test]
    fn degenerate_and_invalid() {
        let p = EquilibriumParams::new(0.0, 0.0, 1.0, -2.0, 1);
        assert!(p.is_degenerate());
        let c = equilibrium_curve(&p, 2).unwrap();
        assert_eq!(c.centroid(), [1.0, -2.0]);
        assert!(matches!(fit_equilibrium(&c), Err(Error::DegenerateCurve)));
        let too_small = EquilibriumParams::new(1.0, 0.0, 0.0, 0.0, 4);
        assert!(matches!(
            equilibrium_curve(&too_small, 3),
            Err(Error::TruncationTooSmall { needed: 4, n_modes: 3 })
        ));
        assert!(equilibrium_curve(&EquilibriumParams::new(1.0, 0.0, 0.0, 0.0, 0), 2).is_err());
    }

    #[test]
    fn ellipse_is_not_stationary() {
        let e = ellipse(2.0, 1.0, 4);
        let fit = fit_equilibrium(&e).unwrap();
        assert_eq!(fit.params.ell, 1);
        assert!(fit.residual > 0.1);
        // quadrature oracle: X_uu - (5/4) R X_u = (-3/4 cos u, 3/2 sin u)
        let m = 64;
        let h = 2.0 * PI / m as f64;
        let oracle: f64 = (0..m)
            .map(|i| {
                let u = i as f64 * h;
                let (x, y) = (-0.75 * u.cos(), 1.5 * u.sin());
                x * x + y * y
            })
            .sum::<f64>()
            * h;
        let r = stationarity_residual(&e).unwrap();
        assert_abs_diff_eq!(r, oracle.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r, 2.972_495_473_204_508, epsilon = 1e-12);
    }

    #[test]
    fn ambiguous_frequencies_are_reported() {
        let mut c = Curve::zero(3);
        c.set_mode(1, Complex64::new(1.0, 0.0));
        c.set_mode(2, Complex64::new(0.0, 0.999));
        match fit_equilibrium(&c) {
            Err(Error::AmbiguousFrequency { first_k, second_k, .. }) => {
                assert_eq!((first_k, second_k), (1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        c.set_mode(2, Complex64::new(0.0, 0.9));
        assert_eq!(fit_equilibrium(&c).unwrap().params.ell, 1);
    }

    #[test]
    fn fit_serialises_flat() {
        let fit = fit_equilibrium(&unit_circle(2)).unwrap();
        let v: serde_json::Value = serde_json::to_value(fit).unwrap();
        for key in ["a", "b", "c", "d", "ell", "residual"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: EquilibriumFit = serde_json::from_value(v).unwrap();
        assert_eq!(back, fit);
    }

    #[test]
    fn limit_amplitude_matches_equilibria() {
        let p = EquilibriumParams::new(0.3, -0.8, 1.0, 1.0, 3);
        let y = equilibrium_curve(&p, 4).unwrap();
        let c0 = y.centered_h1_norm().powi(2);
        assert_abs_diff_eq!(predicted_limit_amplitude(c0, 3), p.a.hypot(p.b), epsilon = 1e-14);
    }

    fn params() -> impl Strategy<Value = EquilibriumParams> {
        (-2.0f64..2.0, -2.0f64..2.0, -5.0f64..5.0, -5.0f64..5.0, 1usize..6)
            .prop_filter("non-degenerate", |(a, b, ..)| a.hypot(*b) > 0.05)
            .prop_map(|(a, b, c, d, l)| EquilibriumParams::new(a, b, c, d, l))
    }

    proptest! {
        #[test]
        fn stationary_family(p in params()) {
            let y = equilibrium_curve(&p, 6).unwrap();
            prop_assert!(grad_e(&y).unwrap().h1_norm() < 1e-12);
            prop_assert!((y.energy().unwrap() - p.ell as f64).abs() < 1e-12);
            prop_assert!((y.area() - equilibrium_area(&p)).abs() < 1e-12 * (1.0 + y.area()));
            prop_assert!((y.iso_ratio() - p.ell as f64).abs() < 1e-10);
            prop_assert!(stationarity_residual(&y).unwrap() < 1e-12);
            prop_assert!(stationarity_residual(&y.scale(3.0)).unwrap() < 1e-12);
        }

        #[test]
        fn fit_round_trip(p in params()) {
            let y = equilibrium_curve(&p, 6).unwrap();
            let fit = fit_equilibrium(&y).unwrap();
            prop_assert_eq!(fit.params.ell, p.ell);
            for (u, v) in [(fit.params.a, p.a), (fit.params.b, p.b), (fit.params.c, p.c), (fit.params.d, p.d)] {
                prop_assert!((u - v).abs() < 1e-12);
            }
            prop_assert!(fit.residual < 1e-12);
        }
    }
}
