//! The flat Spin(7)-structure on R^8.
//!
//! Coordinates are labeled `x^0..x^3, y^4..y^7`; the subspace `V` spanned by
//! axes `1..7` carries the G2 model of [`crate::g2`] and `e^0` is the
//! distinguished covector, so the Cayley 4-form is
//!
//! ```text
//! Phi = e^0 ^ phi + *7 phi,
//! ```
//!
//! self-dual, with `|Phi|^2 = 14`. It also fibers over the `x`-plane as
//! `Phi = dx^0123 + dy^4567 + t1^w1 + t2^w2 + t3^w3` with
//! `t_i` the self-dual base 2-forms and `w_i` the fiber 2-forms.
//!
//! For each even grade `k` in {2, 4, 6} the 7-dimensional invariant summand
//! of `Lambda^k` is the image of a normalized injection `lambda^k` of
//! covectors on `V`; those maps, the resulting projections, the 4-frame
//! defect map `tau`, and the anti-self-duality checks on calibrated
//! 4-planes live here.

use crate::error::Error;
use crate::form::{Form, Vector};
use crate::g2::{intrinsic_asd, G2Data};
use crate::scalar::Scalar;

/// Includes a form on `V = span{e1..e7}` into R^8 (axis `i -> i+1`).
pub fn include_v<S: Scalar>(f7: &Form<S>) -> Form<S> {
    assert_eq!(f7.dim(), 7, "inclusion expects a form on R^7");
    let mut out = Form::zero(8, f7.grade());
    for (mask, c) in f7.terms() {
        if !c.is_zero() {
            *out.coeff_mut(mask << 1) = c.clone();
        }
    }
    out
}

/// Restricts a form on R^8 to `V`; errors if any term touches axis 0.
pub fn restrict_v<S: Scalar>(f8: &Form<S>) -> Result<Form<S>, Error> {
    assert_eq!(f8.dim(), 8, "restriction expects a form on R^8");
    let mut out = Form::zero(7, f8.grade());
    for (mask, c) in f8.terms() {
        if c.is_zero() {
            continue;
        }
        if mask & 1 != 0 {
            return Err(Error::E0Component);
        }
        *out.coeff_mut(mask >> 1) = c.clone();
    }
    Ok(out)
}

/// Includes a vector on `V` into R^8.
pub fn include_v_vector<S: Scalar>(v7: &Vector<S>) -> Vector<S> {
    assert_eq!(v7.dim(), 7);
    let mut out = Vector::zero(8);
    for (i, c) in v7.comps().iter().enumerate() {
        *out.comp_mut(i + 1) = c.clone();
    }
    out
}

/// Splits `a = e^0 ^ beta + gamma` into the pair `(beta, gamma)` of forms
/// on `V`, both returned in the 7-dimensional model.
pub fn split_e0<S: Scalar>(a: &Form<S>) -> (Form<S>, Form<S>) {
    assert_eq!(a.dim(), 8, "split expects a form on R^8");
    let beta8 = a.interior(&Vector::basis(8, 0));
    let gamma8 = a - &Form::basis(8, &[0]).wedge(&beta8);
    let beta = restrict_v(&beta8).expect("interior with e0 cannot retain axis 0");
    let gamma = restrict_v(&gamma8).expect("e0 part already removed");
    (beta, gamma)
}

/// Cached images of the covector basis under the three grade injections.
#[derive(Clone, Debug)]
pub struct Lambda7Basis<S: Scalar> {
    pub k2: Vec<Form<S>>,
    pub k4: Vec<Form<S>>,
    pub k6: Vec<Form<S>>,
}

impl<S: Scalar> Lambda7Basis<S> {
    pub fn images(&self, k: usize) -> Result<&[Form<S>], Error> {
        match k {
            2 => Ok(&self.k2),
            4 => Ok(&self.k4),
            6 => Ok(&self.k6),
            other => Err(Error::UnsupportedGrade(other)),
        }
    }
}

/// Structure data for the flat Spin(7) geometry.
#[derive(Clone, Debug)]
pub struct Spin7Data<S: Scalar> {
    pub g2: G2Data<S>,
    /// The Cayley 4-form.
    pub phi4: Form<S>,
    pub vol: Form<S>,
    /// Self-dual base 2-forms `t1 = dx^01 + dx^23`, `t2 = dx^02 + dx^31`,
    /// `t3 = dx^03 + dx^12`.
    pub tau2: [Form<S>; 3],
    /// Fiber 2-forms, the G2 fiber forms seen in R^8.
    pub omega: [Form<S>; 3],
    pub lambda_basis: Lambda7Basis<S>,
}

impl<S: Scalar> Spin7Data<S> {
    pub fn standard() -> Self {
        Self::from_g2(G2Data::standard())
    }

    /// Derives the 8-dimensional structure from (possibly corrupted) G2
    /// data, keeping fault injection coherent across both models.
    pub fn from_g2(g2: G2Data<S>) -> Self {
        let e0 = Form::basis(8, &[0]);
        let phi4 = &e0.wedge(&include_v(&g2.phi)) + &include_v(&g2.star_phi);
        let vol = Form::basis(8, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let tau2 = [
            Form::from_labeled_terms(8, 2, &[(&[0, 1][..], S::one()), (&[2, 3][..], S::one())]),
            Form::from_labeled_terms(8, 2, &[(&[0, 2][..], S::one()), (&[1, 3][..], -S::one())]),
            Form::from_labeled_terms(8, 2, &[(&[0, 3][..], S::one()), (&[1, 2][..], S::one())]),
        ];
        let omega = [include_v(&g2.omega[0]), include_v(&g2.omega[1]), include_v(&g2.omega[2])];

        // lambda^2(a) = (e^0 ^ a + i(a#) phi) / 2
        // lambda^4(a) = (e^0 ^ i(a#) *phi - a ^ phi) / sqrt(8)
        // lambda^6(a) = Phi ^ lambda^2(a) / 3
        let inv_sqrt8 = S::sqrt2() * S::from_ratio(1, 4);
        let mut k2 = Vec::with_capacity(7);
        let mut k4 = Vec::with_capacity(7);
        let mut k6 = Vec::with_capacity(7);
        for mu in 0..7 {
            let a7 = Form::basis(7, &[mu]);
            let sharp = Vector::basis(7, mu);
            let l2 = (&e0.wedge(&include_v(&a7)) + &include_v(&g2.phi.interior(&sharp)))
                .scaled(1, 2);
            let l4 = (&e0.wedge(&include_v(&g2.star_phi.interior(&sharp)))
                - &include_v(&a7.wedge(&g2.phi)))
                .scale(&inv_sqrt8);
            let l6 = phi4.wedge(&l2).scaled(1, 3);
            k2.push(l2);
            k4.push(l4);
            k6.push(l6);
        }
        Spin7Data { g2, phi4, vol, tau2, omega, lambda_basis: Lambda7Basis { k2, k4, k6 } }
    }

    /// The grade-`k` injection of a covector supported on `V`, for `k` in
    /// {2, 4, 6}. The input is an ambient 1-form; a nonzero `e^0` component
    /// is an explicit error.
    pub fn lambda(&self, k: usize, alpha: &Form<S>) -> Result<Form<S>, Error> {
        assert_eq!(alpha.dim(), 8, "lambda expects an ambient 1-form");
        assert_eq!(alpha.grade(), 1, "lambda expects a 1-form");
        let a7 = restrict_v(alpha)?;
        let images = self.lambda_basis.images(k)?;
        let mut out = Form::zero(8, k);
        for (mu, img) in images.iter().enumerate() {
            let c = a7.coeffs()[mu].clone();
            if !c.is_zero() {
                out = &out + &img.scale(&c);
            }
        }
        Ok(out)
    }

    /// Inverse of the grade-`k` injection on its image: recovers the
    /// covector on `V` (as a form in the 7-dimensional model).
    pub fn lambda_inv(&self, k: usize, xi: &Form<S>) -> Result<Form<S>, Error> {
        let images = self.lambda_basis.images(k)?;
        let mut out = Form::zero(7, 1);
        for (mu, img) in images.iter().enumerate() {
            *out.coeff_mut(1 << mu) = xi.inner(img);
        }
        Ok(out)
    }

    /// Orthogonal projection of a grade-`k` form onto the 7-dimensional
    /// summand, computed from the cached orthonormal images.
    pub fn project7(&self, k: usize, xi: &Form<S>) -> Result<Form<S>, Error> {
        assert_eq!(xi.dim(), 8, "projection expects a form on R^8");
        assert_eq!(xi.grade(), k, "grade mismatch in projection");
        let images = self.lambda_basis.images(k)?;
        let mut out = Form::zero(8, k);
        for img in images {
            let c = xi.inner(img);
            if !c.is_zero() {
                out = &out + &img.scale(&c);
            }
        }
        Ok(out)
    }

    /// Degree-2 split through the Cayley form: `(xi + *(Phi ^ xi)) / 4` on
    /// the 7-summand and `(3 xi - *(Phi ^ xi)) / 4` on the 21-summand.
    /// Cross-checked against [`Self::project7`] by the identity suite.
    pub fn project2_via_phi(&self, xi: &Form<S>) -> (Form<S>, Form<S>) {
        assert_eq!(xi.dim(), 8);
        assert_eq!(xi.grade(), 2);
        let op = self.phi4.wedge(xi).hodge();
        let p7 = (xi + &op).scaled(1, 4);
        let p21 = (&xi.scaled(3, 1) - &op).scaled(1, 4);
        (p7, p21)
    }

    /// Degree-6 projection through the Cayley form:
    /// `(xi + Phi ^ *xi) / 4`.
    pub fn project6_via_phi(&self, xi: &Form<S>) -> Form<S> {
        assert_eq!(xi.dim(), 8);
        assert_eq!(xi.grade(), 6);
        (xi + &self.phi4.wedge(&xi.hodge())).scaled(1, 4)
    }

    /// The grade-4 defect of a 4-frame: the projection of
    /// `u0^flat ^ ... ^ u3^flat` onto the 7-summand. Zero exactly on Cayley
    /// planes.
    pub fn tau(&self, frame: &[Vector<S>; 4]) -> Form<S> {
        let wedge = frame[0]
            .flat()
            .wedge(&frame[1].flat())
            .wedge(&frame[2].flat())
            .wedge(&frame[3].flat());
        self.project7(4, &wedge).expect("grade 4 is always supported")
    }

    /// The three squared invariants of a 4-frame: the Cayley form value,
    /// eight times the squared defect, and the squared frame volume. They
    /// satisfy `phi^2 + 8 tau^2 = vol^2`.
    pub fn cayley_defect(&self, frame: &[Vector<S>; 4]) -> (S, S, S) {
        let phi_val = self.phi4.eval(&frame.to_vec());
        let tau = self.tau(frame);
        let wedge = frame[0]
            .flat()
            .wedge(&frame[1].flat())
            .wedge(&frame[2].flat())
            .wedge(&frame[3].flat());
        (phi_val.clone() * phi_val, tau.norm_sq() * S::from_int(8), wedge.norm_sq())
    }

    /// Checks a 2-form on a Cayley 4-plane for anti-self-duality both ways:
    /// the ambient projection residual (zero iff ASD) and the intrinsic
    /// flag computed in the induced metric with the calibration
    /// orientation.
    pub fn asd_cayley_check(
        &self,
        frame: &[Vector<S>; 4],
        alpha: &Form<S>,
    ) -> Result<AsdCheck<S>, Error> {
        let (_phi_sq, tau_sq8, vol_sq) = self.cayley_defect(frame);
        if vol_sq.is_zero() {
            return Err(Error::DependentFrame);
        }
        let rel = tau_sq8.to_f64() / vol_sq.to_f64();
        let calibrated = if S::IS_EXACT { tau_sq8.is_zero() } else { rel <= 1e-18 };
        if !calibrated {
            return Err(Error::NotCalibrated { defect: rel });
        }
        check_support(frame, alpha)?;
        let residual = self.project7(2, alpha)?;
        let (is_asd, intrinsic_defect) = intrinsic_asd(frame, alpha, &self.phi4)?;
        Ok(AsdCheck { residual, is_asd, intrinsic_defect })
    }
}

/// Result of an anti-self-duality check: an ambient residual form that
/// vanishes exactly on ASD input, the intrinsic verdict, and the float
/// magnitude of the intrinsic self-dual component.
#[derive(Clone, Debug)]
pub struct AsdCheck<S: Scalar> {
    pub residual: Form<S>,
    pub is_asd: bool,
    pub intrinsic_defect: f64,
}

/// Checks a 2-form on a coassociative 4-plane in R^7: the residual
/// `alpha ^ *phi` vanishes iff `alpha` lies in the 14-summand, which on
/// such planes is exactly anti-self-duality; the intrinsic flag recomputes
/// the verdict in the induced metric with the orientation that makes `*phi`
/// restrict positively.
pub fn asd_coassoc_check<S: Scalar>(
    g2: &G2Data<S>,
    frame: &[Vector<S>; 4],
    alpha: &Form<S>,
) -> Result<AsdCheck<S>, Error> {
    let wedge =
        frame[0].flat().wedge(&frame[1].flat()).wedge(&frame[2].flat()).wedge(&frame[3].flat());
    let vol_sq = wedge.norm_sq();
    if vol_sq.is_zero() {
        return Err(Error::DependentFrame);
    }
    let res = g2.coassociative_residual(frame);
    let defect_sq: f64 = res.iter().map(|v| v.to_f64() * v.to_f64()).sum();
    let rel = defect_sq / vol_sq.to_f64();
    let coassoc = if S::IS_EXACT { res.iter().all(S::is_zero) } else { rel <= 1e-18 };
    if !coassoc {
        return Err(Error::NotCalibrated { defect: rel });
    }
    check_support(frame, alpha)?;
    let residual = alpha.wedge(&g2.star_phi);
    let (is_asd, intrinsic_defect) = intrinsic_asd(frame, alpha, &g2.star_phi)?;
    Ok(AsdCheck { residual, is_asd, intrinsic_defect })
}

/// Verifies that `alpha` annihilates the orthogonal complement of the
/// frame's span.
fn check_support<S: Scalar>(frame: &[Vector<S>; 4], alpha: &Form<S>) -> Result<(), Error> {
    let dim = frame[0].dim();
    assert_eq!(alpha.dim(), dim, "support check across different dimensions");
    let mut basis = crate::form::orthogonalize(&frame.to_vec())?;
    for i in 0..dim {
        let e = Vector::basis(dim, i);
        let mut n = e.clone();
        for w in &basis {
            let coef = n.inner(w) / w.norm_sq();
            n = &n - &w.scale(&coef);
        }
        if n.is_zero() {
            continue;
        }
        let contraction = alpha.interior(&n);
        let ok = if S::IS_EXACT {
            contraction.is_zero()
        } else {
            contraction.max_abs() <= 1e-8 * alpha.max_abs().max(1.0) * n.norm_sq().to_f64().sqrt()
        };
        if !ok {
            return Err(Error::Invalid(
                "2-form is not supported on the span of the frame".into(),
            ));
        }
        basis.push(n);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{grade_masks, matrix_rank};
    use crate::rng;
    use crate::scalar::Exact;

    fn spin7() -> Spin7Data<Exact> {
        Spin7Data::standard()
    }

    fn one() -> Exact {
        Exact::one()
    }

    #[test]
    fn cayley_form_frozen_term_list() {
        let expect = Form::from_labeled_terms(
            8,
            4,
            &[
                (&[0, 1, 2, 3][..], one()),
                (&[0, 1, 4, 5][..], one()),
                (&[0, 1, 6, 7][..], one()),
                (&[0, 2, 4, 6][..], one()),
                (&[0, 2, 5, 7][..], -one()),
                (&[0, 3, 4, 7][..], -one()),
                (&[0, 3, 5, 6][..], -one()),
                (&[4, 5, 6, 7][..], one()),
                (&[2, 3, 6, 7][..], one()),
                (&[2, 3, 4, 5][..], one()),
                (&[1, 3, 5, 7][..], one()),
                (&[1, 3, 4, 6][..], -one()),
                (&[1, 2, 5, 6][..], -one()),
                (&[1, 2, 4, 7][..], -one()),
            ],
        );
        assert_eq!(spin7().phi4, expect);
    }

    #[test]
    fn cayley_form_is_self_dual_of_norm_14() {
        let s = spin7();
        assert_eq!(s.phi4.hodge(), s.phi4);
        assert_eq!(s.phi4.norm_sq(), Exact::from_int(14));
        assert_eq!(s.phi4.wedge(&s.phi4), s.vol.scaled(14, 1));
    }

    #[test]
    fn cayley_form_fibered_presentation() {
        let s = spin7();
        let mut sum = Form::from_labeled_terms(
            8,
            4,
            &[(&[0, 1, 2, 3][..], one()), (&[4, 5, 6, 7][..], one())],
        );
        for i in 0..3 {
            sum = &sum + &s.tau2[i].wedge(&s.omega[i]);
        }
        assert_eq!(sum, s.phi4);
    }

    #[test]
    fn hodge_split_relations() {
        // For a form a on V: *8(a) = (-1)^k e^0 ^ *7(a) and
        // *7(a) = *8(e^0 ^ a), checked on every basis monomial.
        let e0 = Form::<Exact>::basis(8, &[0]);
        for k in 0..=7usize {
            for mask in grade_masks(7, k) {
                let mut a7 = Form::<Exact>::zero(7, k);
                *a7.coeff_mut(*mask) = one();
                let a8 = include_v(&a7);
                let rhs = e0.wedge(&include_v(&a7.hodge()));
                let lhs = a8.hodge();
                if k % 2 == 0 {
                    assert_eq!(lhs, rhs);
                } else {
                    assert_eq!(lhs, -&rhs);
                }
                assert_eq!(include_v(&a7.hodge()), e0.wedge(&a8).hodge());
            }
        }
    }

    #[test]
    fn lambda_images_are_orthonormal_isometries() {
        let s = spin7();
        for k in [2usize, 4, 6] {
            let images = s.lambda_basis.images(k).unwrap();
            for (i, a) in images.iter().enumerate() {
                for (j, b) in images.iter().enumerate() {
                    assert_eq!(a.inner(b), Exact::from_int((i == j) as i64), "k={k}");
                }
            }
        }
        let mut r = rng::seeded(37);
        for _ in 0..10 {
            let a7: Form<Exact> = rng::random_form(&mut r, 7, 1);
            let a8 = include_v(&a7);
            for k in [2usize, 4, 6] {
                let img = s.lambda(k, &a8).unwrap();
                assert_eq!(img.norm_sq(), a7.norm_sq(), "k={k}");
                assert_eq!(s.lambda_inv(k, &img).unwrap(), a7, "k={k}");
            }
        }
    }

    #[test]
    fn lambda_rejects_e0_component() {
        let s = spin7();
        let bad = Form::<Exact>::basis(8, &[0]);
        assert!(matches!(s.lambda(2, &bad), Err(Error::E0Component)));
        let ok = Form::<Exact>::basis(8, &[1]);
        assert!(matches!(s.lambda(3, &ok), Err(Error::UnsupportedGrade(3))));
    }

    #[test]
    fn lambda_frozen_images_of_e1() {
        let s = spin7();
        let l2 = &s.lambda_basis.k2[0];
        let expect = Form::from_labeled_terms(
            8,
            2,
            &[
                (&[0, 1][..], one()),
                (&[2, 3][..], one()),
                (&[4, 5][..], one()),
                (&[6, 7][..], one()),
            ],
        )
        .scaled(1, 2);
        assert_eq!(l2, &expect);

        let l4 = &s.lambda_basis.k4[0];
        assert_eq!(l4.norm_sq(), one());
        let c = Exact::sqrt2() * Exact::from_ratio(1, 4);
        assert_eq!(l4.coeff_labeled(&[0, 3, 5, 7]).clone(), c);
        assert_eq!(l4.coeff_labeled(&[1, 2, 4, 6]).clone(), -c.clone());
        // The two contraction halves have squared norms 4|a|^2 and 4|a|^2.
        let phi = &s.g2.phi;
        let star_phi = &s.g2.star_phi;
        let u = Vector::<Exact>::basis(7, 0);
        assert_eq!(star_phi.interior(&u).norm_sq(), Exact::from_int(4));
        assert_eq!(Form::basis(7, &[0]).wedge(phi).norm_sq(), Exact::from_int(4));
        assert_eq!(phi.interior(&u).norm_sq(), Exact::from_int(3));
    }

    #[test]
    fn lambda6_matches_hodge_of_lambda2() {
        let s = spin7();
        for mu in 0..7 {
            assert_eq!(s.lambda_basis.k6[mu], s.lambda_basis.k2[mu].hodge());
        }
    }

    #[test]
    fn contraction_norm_scalings() {
        let g2 = G2Data::<Exact>::standard();
        let mut r = rng::seeded(41);
        for _ in 0..15 {
            let a: Form<Exact> = rng::random_form(&mut r, 7, 1);
            let v = a.sharp_vector();
            let n = a.norm_sq();
            assert_eq!(g2.phi.interior(&v).norm_sq(), n.clone() * Exact::from_int(3));
            assert_eq!(g2.star_phi.interior(&v).norm_sq(), n.clone() * Exact::from_int(4));
            assert_eq!(a.wedge(&g2.phi).norm_sq(), n * Exact::from_int(4));
        }
    }

    #[test]
    fn projections_agree_across_routes() {
        let s = spin7();
        let mut r = rng::seeded(43);
        for _ in 0..10 {
            let xi: Form<Exact> = rng::random_form(&mut r, 8, 2);
            let p7 = s.project7(2, &xi).unwrap();
            let (q7, q21) = s.project2_via_phi(&xi);
            assert_eq!(p7, q7);
            assert_eq!(&q7 + &q21, xi);
            assert!(q7.inner(&q21).is_zero());
            // Eigenconditions on the two summands.
            assert_eq!(s.phi4.wedge(&q7).hodge(), q7.scaled(3, 1));
            assert_eq!(s.phi4.wedge(&q21).hodge(), -&q21);

            let eta: Form<Exact> = rng::random_form(&mut r, 8, 6);
            assert_eq!(s.project7(6, &eta).unwrap(), s.project6_via_phi(&eta));

            let zeta: Form<Exact> = rng::random_form(&mut r, 8, 4);
            let p4 = s.project7(4, &zeta).unwrap();
            assert_eq!(s.project7(4, &p4).unwrap(), p4);
            assert!(p4.inner(&(&zeta - &p4)).is_zero());
        }
    }

    #[test]
    fn projection_ranks() {
        let s = spin7();
        for (k, expect_im, expect_rest) in [(2usize, 7, 21), (4, 7, 63), (6, 7, 21)] {
            let mut rows_im = Vec::new();
            let mut rows_rest = Vec::new();
            for mask in grade_masks(8, k) {
                let mut a = Form::<Exact>::zero(8, k);
                *a.coeff_mut(*mask) = one();
                let p = s.project7(k, &a).unwrap();
                rows_rest.push((&a - &p).coeffs().to_vec());
                rows_im.push(p.coeffs().to_vec());
            }
            assert_eq!(matrix_rank(rows_im, 0.0), expect_im, "k={k}");
            assert_eq!(matrix_rank(rows_rest, 0.0), expect_rest, "k={k}");
        }
    }

    #[test]
    fn frozen_projection_of_e01() {
        let s = spin7();
        let xi = Form::<Exact>::basis(8, &[0, 1]);
        let expect = Form::from_labeled_terms(
            8,
            2,
            &[
                (&[0, 1][..], one()),
                (&[2, 3][..], one()),
                (&[4, 5][..], one()),
                (&[6, 7][..], one()),
            ],
        )
        .scaled(1, 4);
        assert_eq!(s.project7(2, &xi).unwrap(), expect);
    }

    #[test]
    fn tau_vanishes_on_coordinate_cayley_planes() {
        let s = spin7();
        let e = |i: usize| Vector::<Exact>::basis(8, i);
        assert!(s.tau(&[e(0), e(1), e(2), e(3)]).is_zero());
        // A complex coordinate plane for the pairing (01)(23)(45)(67).
        assert!(s.tau(&[e(0), e(1), e(4), e(5)]).is_zero());
        let (p, t, v) = s.cayley_defect(&[e(0), e(1), e(4), e(5)]);
        assert_eq!((p, t, v), (one(), Exact::zero(), one()));
    }

    #[test]
    fn tilted_frame_family_splits_k_and_l() {
        let s = spin7();
        let e = |i: usize| Vector::<Exact>::basis(8, i);
        for (k, l) in [(1i64, 0i64), (0, 1), (2, 3), (-5, 7), (3, -4)] {
            let last = &e(3).scale(&Exact::from_int(k)) + &e(4).scale(&Exact::from_int(l));
            let (p, t, v) = s.cayley_defect(&[e(0), e(1), e(2), last]);
            assert_eq!(p, Exact::from_int(k * k));
            assert_eq!(t, Exact::from_int(l * l));
            assert_eq!(v, Exact::from_int(k * k + l * l));
        }
    }

    #[test]
    fn frame_identity_squares_to_volume() {
        let s = spin7();
        let mut r = rng::seeded(47);
        for _ in 0..25 {
            let frame: [Vector<Exact>; 4] = std::array::from_fn(|_| rng::random_vector(&mut r, 8));
            let (p, t, v) = s.cayley_defect(&frame);
            assert_eq!(p + t, v);
        }
    }

    #[test]
    fn asd_check_on_the_base_plane() {
        let s = spin7();
        let e = |i: usize| Vector::<Exact>::basis(8, i);
        let plane = [e(0), e(1), e(2), e(3)];
        let asd = Form::from_labeled_terms(8, 2, &[(&[0, 1][..], one()), (&[2, 3][..], -one())]);
        let out = s.asd_cayley_check(&plane, &asd).unwrap();
        assert!(out.residual.is_zero());
        assert!(out.is_asd);

        let out = s.asd_cayley_check(&plane, &s.tau2[0]).unwrap();
        assert_eq!(out.residual, s.lambda_basis.k2[0]);
        assert!(!out.is_asd);
        assert!(out.intrinsic_defect > 0.5);
    }

    #[test]
    fn asd_check_rejects_bad_input() {
        let s = spin7();
        let e = |i: usize| Vector::<Exact>::basis(8, i);
        // Not a Cayley plane: tau is nonzero on it.
        let bad_plane = [e(0), e(1), e(2), e(4)];
        let alpha = Form::from_labeled_terms(8, 2, &[(&[0, 1][..], one())]);
        assert!(matches!(
            s.asd_cayley_check(&bad_plane, &alpha),
            Err(Error::NotCalibrated { .. })
        ));
        // Support leaking off the plane.
        let plane = [e(0), e(1), e(2), e(3)];
        let leak = Form::from_labeled_terms(8, 2, &[(&[0, 4][..], one())]);
        assert!(matches!(s.asd_cayley_check(&plane, &leak), Err(Error::Invalid(_))));
        // Dependent frame.
        let dep = [e(0), e(1), e(2), e(2)];
        assert!(matches!(s.asd_cayley_check(&dep, &alpha), Err(Error::DependentFrame)));
    }

    #[test]
    fn coassoc_asd_classification_on_the_fiber() {
        let g2 = G2Data::<Exact>::standard();
        let e = |i: usize| Vector::<Exact>::basis(7, i);
        let fiber = [e(3), e(4), e(5), e(6)];
        for w in &g2.omega {
            let out = asd_coassoc_check(&g2, &fiber, w).unwrap();
            assert!(!out.is_asd);
            assert!(!out.residual.is_zero());
        }
        let asd = Form::from_labeled_terms(
            7,
            2,
            &[(&[4, 6][..], one()), (&[5, 7][..], one())],
        );
        let out = asd_coassoc_check(&g2, &fiber, &asd).unwrap();
        assert!(out.is_asd);
        assert!(out.residual.is_zero());
    }

    #[test]
    fn coassoc_residual_expansion_on_fiber_forms() {
        // For alpha supported on the fiber:
        // alpha ^ *phi = <a,w3> e^124567 + <a,w1> e^234567 - <a,w2> e^134567
        let g2 = G2Data::<Exact>::standard();
        let mut r = rng::seeded(53);
        for _ in 0..10 {
            let mut alpha = Form::<Exact>::zero(7, 2);
            for mask in grade_masks(7, 2) {
                // Fiber axes are internal 3..6.
                if mask & 0b111 == 0 {
                    *alpha.coeff_mut(*mask) = Exact::sample(&mut r);
                }
            }
            let lhs = alpha.wedge(&g2.star_phi);
            let term = |labels: &[usize], c: Exact| {
                Form::from_labeled_terms(7, 6, &[(labels, c)])
            };
            let rhs = &(&term(&[1, 2, 4, 5, 6, 7], alpha.inner(&g2.omega[2]))
                + &term(&[2, 3, 4, 5, 6, 7], alpha.inner(&g2.omega[0])))
                - &term(&[1, 3, 4, 5, 6, 7], alpha.inner(&g2.omega[1]));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn split_e0_round_trip() {
        let mut r = rng::seeded(59);
        let a: Form<Exact> = rng::random_form(&mut r, 8, 3);
        let (beta, gamma) = split_e0(&a);
        let rebuilt = &Form::basis(8, &[0]).wedge(&include_v(&beta)) + &include_v(&gamma);
        assert_eq!(rebuilt, a);
    }
}
