//! Reductions of the 8-dimensional model: connections pulled back from a
//! 7-manifold to its circle product, and (1,1)-curvature on the flat
//! Kaehler model, where the residual operators collapse to lower
//! structures. Curvature stays in real-coefficient form (the honest
//! curvature is `sqrt(-1)` times the stored form).

use crate::error::Error;
use crate::fm::{ddt_residual_g2, ddt_residual_spin7};
use crate::form::{Form, LinearMap};
use crate::report::close_tol;
use crate::scalar::Scalar;
use crate::spin7::{include_v, restrict_v, split_e0, Spin7Data};

/// Outcome of reducing a pulled-back connection on the circle product:
/// the 7-dimensional residual, the 8-dimensional residual pair, and the
/// structural defects tying them together.
#[derive(Clone, Debug)]
pub struct ProductReduction<S: Scalar> {
    /// `*phi ^ F - F^3/6` of the underlying 7-dimensional form.
    pub g2_residual: Form<S>,
    /// Degree-2 residual of the pullback.
    pub r1: Form<S>,
    /// Degree-4 residual of the pullback.
    pub r2: Form<S>,
    /// Volume coefficient of the fourth power; pullbacks have none.
    pub quartic_top: S,
    /// Circle-free part of `4 * (star r1)` minus the 7-dimensional
    /// residual; an identity, zero for every pullback.
    pub split_defect: Form<S>,
    /// `r2 + lam4(*7(phi ^ *7 F^2))/sqrt(8)`; ties the degree-4 residual
    /// to the second 7-dimensional residual. Zero for every pullback.
    pub second_route_defect: Form<S>,
}

impl<S: Scalar> ProductReduction<S> {
    /// Float norm of the largest structural defect.
    pub fn structural_defect(&self) -> f64 {
        let a = self.split_defect.norm_sq().to_f64();
        let b = self.second_route_defect.norm_sq().to_f64();
        let c = self.quartic_top.to_f64().powi(2);
        a.max(b).max(c).max(0.0).sqrt()
    }
}

/// Reduces the residual pair of a curvature form pulled back from the
/// 7-manifold factor. `f8` must have no circle component.
pub fn g2_reduction_check<S: Scalar>(
    sp: &Spin7Data<S>,
    f8: &Form<S>,
) -> Result<ProductReduction<S>, Error> {
    assert_eq!((f8.dim(), f8.grade()), (8, 2));
    let f7 = restrict_v(f8)?;
    let (g2_residual, g2_second) = ddt_residual_g2(&sp.g2, &f7);
    let (r1, r2) = ddt_residual_spin7(sp, f8);
    let f8sq = f8.wedge(f8);
    let quartic_top = f8sq.wedge(&f8sq).hodge().coeffs()[0].clone();

    // 4 * (star of the degree-2 residual) splits into a circle factor and
    // the 7-dimensional residual on the nose.
    let (_circle, pure) = split_e0(&r1.hodge().scaled(4, 1));
    let split_defect = &pure - &g2_residual;

    // The degree-4 residual is the grade-4 isometry applied to the dual
    // of the second 7-dimensional residual, up to the 1/sqrt(8) factor.
    let dual_second = include_v(&g2_second.hodge());
    let inv_sqrt8 = S::sqrt2() * S::from_ratio(1, 4);
    let second_route_defect = &r2 + &sp.lambda(4, &dual_second)?.scale(&inv_sqrt8);

    Ok(ProductReduction { g2_residual, r1, r2, quartic_top, split_defect, second_route_defect })
}

/// The flat Kaehler model: complex structure pairing axes
/// `(0,1), (2,3), (4,5), (6,7)`, its Kaehler form, and the holomorphic
/// volume form rotated by a phase. The 4-form `w^2/2 + Re(Omega_phase)`
/// is the pullback of the standard structure under an isometry, so every
/// projection for the rotated structure is computed by conjugation.
#[derive(Clone, Debug)]
pub struct CY4Data<S: Scalar> {
    pub omega: Form<S>,
    pub omega_re: Form<S>,
    pub omega_im: Form<S>,
    /// The rotated calibration `w^2/2 + cos * Re Omega + sin * Im Omega`.
    pub phi_theta: Form<S>,
    pub spin7: Spin7Data<S>,
    pub cos: S,
    pub sin: S,
    j: LinearMap<S>,
    rot: LinearMap<S>,
    rot_inv: LinearMap<S>,
}

fn complex_volume<S: Scalar>() -> (Form<S>, Form<S>) {
    let mut re = Form::scalar(8, S::one());
    let mut im = Form::zero(8, 0);
    for k in 0..4 {
        let a = Form::basis(8, &[2 * k]);
        let b = Form::basis(8, &[2 * k + 1]);
        let next_re = &re.wedge(&a) - &im.wedge(&b);
        let next_im = &re.wedge(&b) + &im.wedge(&a);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

impl<S: Scalar> CY4Data<S> {
    /// Phase 0: the calibration is the standard one.
    pub fn standard() -> Self {
        Self::with_phase(S::one(), S::zero()).expect("unit phase")
    }

    /// Builds the model with calibration rotated by the phase `(c, s)`,
    /// a point on the unit circle.
    pub fn with_phase(cos: S, sin: S) -> Result<Self, Error> {
        let unit_defect = cos.clone() * cos.clone() + sin.clone() * sin.clone() - S::one();
        let ok = if S::IS_EXACT {
            unit_defect.is_zero()
        } else {
            unit_defect.to_f64().abs() <= close_tol(1.0)
        };
        if !ok {
            return Err(Error::Invalid("phase must lie on the unit circle".into()));
        }

        let mut omega = Form::zero(8, 2);
        for k in 0..4 {
            *omega.coeff_mut((1 << (2 * k)) | (1 << (2 * k + 1))) = S::one();
        }
        let (omega_re, omega_im) = complex_volume::<S>();
        let spin7 = Spin7Data::standard();

        // The standard calibration must be the Kaehler expression; the
        // axis pairing above is chosen to make this exact.
        let half_omega_sq = omega.wedge(&omega).scaled(1, 2);
        let rebuilt = &half_omega_sq + &omega_re;
        assert_eq!(rebuilt, spin7.phi4, "axis pairing reproduces the calibration");

        let mut j = LinearMap::identity(8);
        let mut rot = LinearMap::identity(8);
        let mut rot_inv = LinearMap::identity(8);
        for k in 0..4 {
            *j.entry_mut(2 * k, 2 * k) = S::zero();
            *j.entry_mut(2 * k + 1, 2 * k + 1) = S::zero();
            *j.entry_mut(2 * k, 2 * k + 1) = -S::one();
            *j.entry_mut(2 * k + 1, 2 * k) = S::one();
        }
        *rot.entry_mut(0, 0) = cos.clone();
        *rot.entry_mut(0, 1) = sin.clone();
        *rot.entry_mut(1, 0) = -sin.clone();
        *rot.entry_mut(1, 1) = cos.clone();
        *rot_inv.entry_mut(0, 0) = cos.clone();
        *rot_inv.entry_mut(0, 1) = -sin.clone();
        *rot_inv.entry_mut(1, 0) = sin.clone();
        *rot_inv.entry_mut(1, 1) = cos.clone();

        let phi_theta =
            &half_omega_sq + &(&omega_re.scale(&cos) + &omega_im.scale(&sin));

        Ok(CY4Data {
            omega,
            omega_re,
            omega_im,
            phi_theta,
            spin7,
            cos,
            sin,
            j,
            rot,
            rot_inv,
        })
    }

    /// Pullback under the complex structure. Fixed points of this map on
    /// 2-forms are exactly the real (1,1)-forms.
    pub fn j_pullback(&self, f: &Form<S>) -> Form<S> {
        self.j.pullback(f)
    }

    /// The (1,1)-part of a real 2-form.
    pub fn project11(&self, f: &Form<S>) -> Form<S> {
        (&self.j_pullback(f) + f).scaled(1, 2)
    }

    pub fn type11_defect(&self, f: &Form<S>) -> f64 {
        (&self.j_pullback(f) - f).norm_sq().to_f64().max(0.0).sqrt()
    }

    pub fn is_type11(&self, f: &Form<S>) -> bool {
        let d = &self.j_pullback(f) - f;
        if S::IS_EXACT {
            d.is_zero()
        } else {
            d.norm_sq().to_f64().max(0.0).sqrt() <= close_tol(f.max_abs())
        }
    }

    /// 7-summand projection for the rotated calibration, computed by
    /// conjugating the standard projection with the rotation.
    pub fn project7_theta(&self, k: usize, xi: &Form<S>) -> Result<Form<S>, Error> {
        let back = self.rot_inv.pullback(xi);
        let projected = self.spin7.project7(k, &back)?;
        Ok(self.rot.pullback(&projected))
    }

    /// Volume coefficient of `w^3 ^ F - w ^ F^3`, which vanishes exactly
    /// when the connection solves the phase-1 equation.
    pub fn phase_scalar(&self, f: &Form<S>) -> S {
        let w3 = self.omega.wedge(&self.omega).wedge(&self.omega);
        let f3 = f.wedge(f).wedge(f);
        (&w3.wedge(f) - &self.omega.wedge(&f3)).hodge().coeffs()[0].clone()
    }
}

/// Residuals and structural defects of a (1,1) curvature form on the
/// Kaehler model.
#[derive(Clone, Debug)]
pub struct Cy4Outcome<S: Scalar> {
    /// Degree-2 residual under the rotated calibration.
    pub r1: Form<S>,
    /// Degree-4 residual; identically zero on (1,1) input.
    pub r2: Form<S>,
    /// Phase-1 defect scalar.
    pub phase: S,
    /// `<w, F - *F^3/6> - phase/6`; an identity, zero always.
    pub scalar_identity_defect: S,
    /// `r1` minus its component along the Kaehler form; zero on (1,1)
    /// input, where the 7-summand meets the (1,1)-forms in the Kaehler
    /// line only.
    pub line_defect: Form<S>,
    /// `r1` minus the unrotated projection; zero: the phase family does
    /// not move the residual of (1,1) input.
    pub rotation_defect: Form<S>,
}

impl<S: Scalar> Cy4Outcome<S> {
    pub fn structural_defect(&self) -> f64 {
        let a = self.r2.norm_sq().to_f64();
        let b = self.scalar_identity_defect.to_f64().powi(2);
        let c = self.line_defect.norm_sq().to_f64();
        let d = self.rotation_defect.norm_sq().to_f64();
        a.max(b).max(c).max(d).max(0.0).sqrt()
    }
}

impl<S: Scalar> CY4Data<S> {
    /// Evaluates the residual pair of a (1,1) form together with the
    /// identities that reduce it to the phase-1 scalar equation.
    /// Non-(1,1) input is refused.
    pub fn check(&self, f: &Form<S>) -> Result<Cy4Outcome<S>, Error> {
        assert_eq!((f.dim(), f.grade()), (8, 2));
        if !self.is_type11(f) {
            return Err(Error::NotType11 { defect: self.type11_defect(f) });
        }

        let fsq = f.wedge(f);
        let arg = f - &f.wedge(&fsq).hodge().scaled(1, 6);
        let r1 = self.project7_theta(2, &arg)?;
        let r2 = self.project7_theta(4, &fsq)?;

        let phase = self.phase_scalar(f);
        let scalar_identity_defect =
            arg.inner(&self.omega) - phase.clone() * S::from_ratio(1, 6);
        let line_defect =
            &r1 - &self.omega.scale(&(arg.inner(&self.omega) * S::from_ratio(1, 4)));
        let rotation_defect = &r1 - &self.spin7.project7(2, &arg)?;

        Ok(Cy4Outcome { r1, r2, phase, scalar_identity_defect, line_defect, rotation_defect })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_form, seeded};
    use crate::scalar::Exact;

    #[test]
    fn kaehler_pair_rebuilds_the_calibration() {
        let cy = CY4Data::<Exact>::standard();
        // Constructor asserts the identity; spot-check a mixed term and
        // the volume normalizations on top.
        assert_eq!(*cy.omega_re.coeff_labeled(&[0, 2, 4, 6]), Exact::one());
        assert_eq!(cy.omega.norm_sq(), Exact::from_int(4));
        assert_eq!(cy.phi_theta, cy.spin7.phi4);
    }

    #[test]
    fn rotation_matches_rotated_volume_form() {
        let cy = CY4Data::<Exact>::with_phase(
            Exact::from_ratio(3, 5),
            Exact::from_ratio(4, 5),
        )
        .unwrap();
        let pulled = cy.rot.pullback(&cy.spin7.phi4);
        assert_eq!(pulled, cy.phi_theta);
        // The rotation fixes the Kaehler form.
        assert_eq!(cy.rot.pullback(&cy.omega), cy.omega);

        let bad = CY4Data::<Exact>::with_phase(Exact::one(), Exact::one());
        assert!(bad.is_err());
    }

    #[test]
    fn type_11_projection_and_rejection() {
        let cy = CY4Data::<Exact>::standard();
        let f = Form::basis(8, &[0, 2]);
        assert!(!cy.is_type11(&f));
        assert!(matches!(cy.check(&f), Err(Error::NotType11 { .. })));

        let mut r = seeded(31);
        for _ in 0..5 {
            let f = cy.project11(&random_form::<Exact, _>(&mut r, 8, 2));
            assert!(cy.is_type11(&f));
            // Projection is idempotent.
            assert_eq!(cy.project11(&f), f);
        }
    }

    #[test]
    fn structural_identities_on_random_11_forms() {
        let phases = [
            CY4Data::<Exact>::standard(),
            CY4Data::<Exact>::with_phase(Exact::from_ratio(3, 5), Exact::from_ratio(4, 5))
                .unwrap(),
        ];
        for cy in &phases {
            let mut r = seeded(32);
            for _ in 0..5 {
                let f = cy.project11(&random_form::<Exact, _>(&mut r, 8, 2));
                let out = cy.check(&f).unwrap();
                assert!(out.r2.is_zero(), "degree-4 residual survives");
                assert!(out.scalar_identity_defect.is_zero());
                assert!(out.line_defect.is_zero());
                assert!(out.rotation_defect.is_zero());
            }
        }
    }

    #[test]
    fn kaehler_multiples_pin_the_phase_family() {
        let cy = CY4Data::<Exact>::standard();
        for mu_num in [-2i64, -1, 0, 1, 2, 3] {
            let mu = Exact::from_int(mu_num);
            let f = cy.omega.scale(&mu);
            let out = cy.check(&f).unwrap();
            let coef = mu.clone() * (Exact::one() - mu.clone() * mu.clone());
            assert_eq!(out.r1, cy.omega.scale(&coef));
            assert_eq!(out.phase, coef.clone() * Exact::from_int(24));
            assert_eq!(out.r1.is_zero(), mu_num == 0 || mu_num == 1 || mu_num == -1);
        }
    }

    #[test]
    fn product_reduction_identities_hold() {
        let sp = Spin7Data::<Exact>::standard();
        let mut r = seeded(33);
        for _ in 0..5 {
            let f7 = random_form::<Exact, _>(&mut r, 7, 2);
            let f8 = include_v(&f7);
            let out = g2_reduction_check(&sp, &f8).unwrap();
            assert!(out.quartic_top.is_zero());
            assert!(out.split_defect.is_zero(), "split defect {:?}", out.split_defect);
            assert!(
                out.second_route_defect.is_zero(),
                "second route defect {:?}",
                out.second_route_defect
            );
        }

        // Circle components are refused.
        let bad = Form::basis(8, &[0, 1]);
        assert!(matches!(g2_reduction_check(&sp, &bad), Err(Error::E0Component)));
    }

    #[test]
    fn zero_connection_reduces_trivially() {
        let sp = Spin7Data::<Exact>::standard();
        let out = g2_reduction_check(&sp, &Form::zero(8, 2)).unwrap();
        assert!(out.g2_residual.is_zero() && out.r1.is_zero() && out.r2.is_zero());
    }
}
