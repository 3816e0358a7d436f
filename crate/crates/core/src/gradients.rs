//! Sobolev gradients of the Dirichlet energy, the signed area and the
//! area-normalised energy `E = Q / A`.
//!
//! Each gradient is the Riesz representative of the differential in the
//! `H1` inner product, obtained by convolving the `L2` gradient against the
//! Green's function.

use crate::curve::Curve;
use crate::error::Result;
use crate::greens::convolve_green;

/// `DQ = X'' * G`, with modes `k^2 / (1 + k^2) z_k`.
pub fn grad_q(c: &Curve) -> Curve {
    convolve_green(&c.derivative().derivative())
}

/// `DA = R X' * G`, with modes `k / (1 + k^2) z_k`.
pub fn grad_a(c: &Curve) -> Curve {
    convolve_green(&c.derivative().rotate_quarter())
}

/// `DE = (DQ - E DA) / A`. Fails with `ZeroArea` when `|A| <= eps_area`.
pub fn grad_e(c: &Curve) -> Result<Curve> {
    let e = c.energy()?;
    Ok(grad_e_with(c, c.area(), e))
}

/// Same as [`grad_e`] with area and energy supplied by the caller.
pub(crate) fn grad_e_with(c: &Curve, area: f64, energy: f64) -> Curve {
    let mut g = grad_q(c);
    g.axpy(-energy, &grad_a(c));
    g.scale(1.0 / area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::test_support::*;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn constant() -> Curve {
        Curve::zero(4).translate([2.0, -1.0])
    }

    fn central_difference(f: impl Fn(&Curve) -> f64, x: &Curve, v: &Curve, h: f64) -> f64 {
        let mut plus = x.clone();
        plus.axpy(h, v);
        let mut minus = x.clone();
        minus.axpy(-h, v);
        (f(&plus) - f(&minus)) / (2.0 * h)
    }

    #[test]
    fn constant_curve_has_zero_gradients() {
        assert_eq!(grad_q(&constant()).max_abs_mode(), 0.0);
        assert_eq!(grad_a(&constant()).max_abs_mode(), 0.0);
        assert!(matches!(grad_e(&constant()), Err(Error::ZeroArea { .. })));
    }

    #[test]
    fn unit_circle_gradients() {
        let c = unit_circle(4);
        assert!((&grad_q(&c) - &c.scale(0.5)).max_abs_mode() < 1e-16);
        assert!((&grad_a(&c) - &c.scale(0.5)).max_abs_mode() < 1e-16);
        assert!(grad_e(&c).unwrap().max_abs_mode() < 1e-16);
    }

    #[test]
    fn circle_centroid_does_not_matter() {
        let c = unit_circle(4).translate([3.0, 1.0]).scale(2.5);
        assert!(grad_e(&c).unwrap().h1_norm() < 1e-15);
    }

    #[test]
    fn ellipse_matches_finite_difference() {
        let x = ellipse(2.0, 1.0, 6);
        let g = grad_e(&x).unwrap();
        for seed in 0..5 {
            let v = random_curve(6, 100 + seed);
            let fd = central_difference(|c| c.energy().unwrap(), &x, &v, 1e-5);
            assert_abs_diff_eq!(g.h1_inner(&v), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn energy_gradient_is_not_additive() {
        let x = ellipse(2.0, 1.0, 3);
        let y = unit_circle(3).scale(0.5).shift(0.4);
        let mut y = y;
        y.set_mode(2, Complex64::new(0.3, 0.1));
        let sum = &x + &y;
        let lhs = grad_e(&sum).unwrap();
        let rhs = &grad_e(&x).unwrap() + &grad_e(&y).unwrap();
        assert!((&lhs - &rhs).h1_norm() > 1e-3);
    }

    proptest! {
        #[test]
        fn riesz_consistency(a in 0u64..1000, b in 0u64..1000) {
            let (x, v) = (random_curve(8, a), random_curve(8, b));
            let dq = grad_q(&x).h1_inner(&v);
            prop_assert!((dq - x.derivative().l2_inner(&v.derivative())).abs() < 1e-10);
            let da = grad_a(&x).h1_inner(&v);
            prop_assert!((da + x.derivative().rotate_quarter().l2_inner(&v)).abs() < 1e-10);
        }

        #[test]
        fn finite_differences(a in 0u64..1000, b in 0u64..1000) {
            let (x, v) = (random_curve(6, a), random_curve(6, b));
            let h = 1e-5;
            let fq = central_difference(Curve::dirichlet, &x, &v, h);
            prop_assert!((grad_q(&x).h1_inner(&v) - fq).abs() < 1e-7);
            let fa = central_difference(Curve::area, &x, &v, h);
            prop_assert!((grad_a(&x).h1_inner(&v) - fa).abs() < 1e-7);
        }

        #[test]
        fn linearity(a in 0u64..1000, b in 0u64..1000, s in -3.0f64..3.0) {
            let (x, y) = (random_curve(5, a), random_curve(5, b));
            let mut comb = x.clone();
            comb.axpy(s, &y);
            let mut expect = grad_q(&x);
            expect.axpy(s, &grad_q(&y));
            prop_assert!((&grad_q(&comb) - &expect).max_abs_mode() < 1e-12);
            let mut expect = grad_a(&x);
            expect.axpy(s, &grad_a(&y));
            prop_assert!((&grad_a(&comb) - &expect).max_abs_mode() < 1e-12);
        }

        #[test]
        fn homogeneity_and_orthogonality(a in 0u64..1000) {
            let x = random_curve(6, a);
            prop_assume!(x.area().abs() > 1e-3);
            let g = grad_e(&x).unwrap();
            let g2 = grad_e(&x.scale(2.0)).unwrap();
            prop_assert!((&g2 - &g.scale(0.5)).max_abs_mode() < 1e-12 * (1.0 + g.max_abs_mode()));
            prop_assert!(x.h1_inner(&g).abs() < 1e-10 * (1.0 + x.h1_norm() * g.h1_norm()));
        }

        #[test]
        fn upper_bound(a in 0u64..1000) {
            let x = random_curve(6, a);
            let area = x.area();
            prop_assume!(area > 1e-3);
            let e = x.energy().unwrap();
            let g = grad_e(&x).unwrap();
            prop_assert!(g.h1_norm() <= (4.0 + e) * x.h1_norm() / area * (1.0 + 1e-12));
        }

        #[test]
        fn composition_identity(a in 0u64..1000) {
            let x = random_curve(6, a);
            prop_assume!(x.area().abs() > 1e-3);
            let g = grad_e(&x).unwrap();
            let (area, e) = (x.area(), x.energy().unwrap());
            let direct = x.map_modes(|j, z| {
                let j = j as f64;
                z * (j * (j - e) / (area * (1.0 + j * j)))
            });
            prop_assert!((&g - &direct).max_abs_mode() < 1e-12 * (1.0 + direct.max_abs_mode()));
        }
    }
}
