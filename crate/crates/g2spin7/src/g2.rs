//! The flat G2-structure on R^7.
//!
//! Coordinates are labeled `x^1, x^2, x^3, y^4, ..., y^7`. The structure
//! 3-form is
//!
//! ```text
//! phi = e^123 + e^145 + e^167 + e^246 - e^257 - e^347 - e^356
//! ```
//!
//! which fibers as `phi = dx^123 + dx^1 ^ w1 + dx^2 ^ w2 + dx^3 ^ w3` over
//! the (y^4..y^7)-torus, with
//!
//! ```text
//! w1 = dy^45 + dy^67,  w2 = dy^46 + dy^75,  w3 = -(dy^47 + dy^56).
//! ```
//!
//! The coclosed side, the metric, the degree-2 splitting into the 7- and
//! 14-dimensional invariant summands, and the two calibration residuals all
//! live here.

use crate::error::Error;
use crate::form::{Form, Vector};
use crate::scalar::Scalar;

/// Labeled terms of `phi` (external labels 1..7).
pub const PHI_TERMS: [([usize; 3], i64); 7] = [
    ([1, 2, 3], 1),
    ([1, 4, 5], 1),
    ([1, 6, 7], 1),
    ([2, 4, 6], 1),
    ([2, 5, 7], -1),
    ([3, 4, 7], -1),
    ([3, 5, 6], -1),
];

/// Structure data for the flat G2 geometry.
#[derive(Clone, Debug)]
pub struct G2Data<S: Scalar> {
    pub phi: Form<S>,
    pub star_phi: Form<S>,
    pub vol: Form<S>,
    /// Fiber 2-forms `w1, w2, w3` of the torus fibration.
    pub omega: [Form<S>; 3],
}

impl<S: Scalar> G2Data<S> {
    pub fn standard() -> Self {
        let terms: Vec<(&[usize], S)> =
            PHI_TERMS.iter().map(|(ls, c)| (&ls[..], S::from_int(*c))).collect();
        let phi = Form::from_labeled_terms(7, 3, &terms);
        Self::from_phi(phi)
    }

    /// Builds the derived data from a (possibly corrupted) 3-form. Used by
    /// the fault-injection hook; identities are expected to fail when the
    /// input is not the standard form.
    pub fn from_phi(phi: Form<S>) -> Self {
        let star_phi = phi.hodge();
        let vol = Form::basis(7, &[0, 1, 2, 3, 4, 5, 6]);
        let omega = [
            Form::from_labeled_terms(7, 2, &[(&[4, 5], S::one()), (&[6, 7], S::one())]),
            Form::from_labeled_terms(7, 2, &[(&[4, 6], S::one()), (&[5, 7], -S::one())]),
            Form::from_labeled_terms(7, 2, &[(&[4, 7], -S::one()), (&[5, 6], -S::one())]),
        ];
        G2Data { phi, star_phi, vol, omega }
    }

    /// Flips the sign of one monomial of `phi` (by external labels) and
    /// rebuilds the derived data.
    pub fn with_flipped_sign(labels: &[usize]) -> Self {
        let standard = Self::standard();
        let mut phi = standard.phi;
        let mut mask = 0u8;
        for &l in labels {
            let i = crate::form::axis_from_label(7, l).expect("label out of range");
            mask |= 1 << i;
        }
        let c = phi.coeff(mask).clone();
        *phi.coeff_mut(mask) = -c;
        Self::from_phi(phi)
    }

    /// Metric recovered from the 3-form: `g(u, v) vol = (1/6) i(u)phi ^
    /// i(v)phi ^ phi`. For the standard flat structure this is the
    /// Euclidean dot product, which the tests pin down.
    pub fn metric(&self, u: &Vector<S>, v: &Vector<S>) -> S {
        let w = self.phi.interior(u).wedge(&self.phi.interior(v)).wedge(&self.phi);
        w.coeffs()[0].clone() * S::from_ratio(1, 6)
    }

    /// Splits a 2-form into its components in the 7- and 14-dimensional
    /// summands. The operator `a -> *(phi ^ a)` has eigenvalue 2 on the
    /// first and -1 on the second, which fixes the two projectors.
    pub fn project2(&self, a: &Form<S>) -> (Form<S>, Form<S>) {
        assert_eq!(a.dim(), 7, "projection needs a form on R^7");
        assert_eq!(a.grade(), 2, "projection splits 2-forms");
        let op = self.phi.wedge(a).hodge();
        let p7 = (a + &op).scaled(1, 3);
        let p14 = (&a.scaled(2, 1) - &op).scaled(1, 3);
        (p7, p14)
    }

    /// Residuals of the three contraction identities tying `phi`, its dual
    /// and the flat of a vector. All four returned forms vanish exactly for
    /// the standard structure:
    ///
    /// ```text
    /// phi ^ i(u)*phi + 4 *(u^flat)          = 0
    /// *phi ^ i(u)phi - 3 *(u^flat)          = 0
    /// phi ^ i(u)phi  - 2 *(i(u)phi)         = 0
    /// phi ^ i(u)phi  - 2 u^flat ^ *phi      = 0
    /// ```
    pub fn contraction_residuals(&self, u: &Vector<S>) -> Vec<(&'static str, Form<S>)> {
        let star_u = u.flat().hodge();
        let iu_phi = self.phi.interior(u);
        let phi_iu_phi = self.phi.wedge(&iu_phi);
        vec![
            (
                "phi ^ i(u)*phi = -4 *u",
                &self.phi.wedge(&self.star_phi.interior(u)) + &star_u.scaled(4, 1),
            ),
            (
                "*phi ^ i(u)phi = 3 *u",
                &self.star_phi.wedge(&iu_phi) - &star_u.scaled(3, 1),
            ),
            (
                "phi ^ i(u)phi = 2 *(i(u)phi)",
                &phi_iu_phi - &iu_phi.hodge().scaled(2, 1),
            ),
            (
                "phi ^ i(u)phi = 2 u ^ *phi",
                &phi_iu_phi - &u.flat().wedge(&self.star_phi).scaled(2, 1),
            ),
        ]
    }

    /// The 1-form `*phi(v1, v2, v3, .)`, zero exactly when the span of the
    /// frame is associative.
    pub fn associative_residual(&self, frame: &[Vector<S>; 3]) -> Form<S> {
        self.star_phi.interior(&frame[0]).interior(&frame[1]).interior(&frame[2])
    }

    /// The four values of `phi` on coordinate triples of the frame, all
    /// zero exactly when the span is coassociative.
    pub fn coassociative_residual(&self, frame: &[Vector<S>; 4]) -> [S; 4] {
        let f = |a: usize, b: usize, c: usize| {
            self.phi.eval(&[frame[a].clone(), frame[b].clone(), frame[c].clone()])
        };
        [f(1, 2, 3), f(0, 2, 3), f(0, 1, 3), f(0, 1, 2)]
    }
}

/// Intrinsic anti-self-duality test on an oriented 4-plane.
///
/// `frame` spans the plane, `alpha` is an ambient 2-form supported on it,
/// and `orientation` is the calibration 4-form whose positive restriction
/// fixes the orientation. Works over both scalar modes: the decision uses
/// sign and square comparisons only, so exact mode never leaves its field.
/// Also returns a float defect (the norm of the self-dual component in the
/// induced metric) for tolerance-banded reporting.
pub fn intrinsic_asd<S: Scalar>(
    frame: &[Vector<S>; 4],
    alpha: &Form<S>,
    orientation: &Form<S>,
) -> Result<(bool, f64), Error> {
    let mut basis = crate::form::orthogonalize(&frame.to_vec())?;
    let orient = orientation.eval(&basis.to_vec());
    match orient.signum() {
        0 => return Err(Error::OrientationUndetermined),
        s if s < 0 => basis.swap(2, 3),
        _ => {}
    }
    let g: Vec<S> = basis.iter().map(Vector::norm_sq).collect();
    let s = |i: usize, j: usize| alpha.eval(&[basis[i].clone(), basis[j].clone()]);
    // Pairings of the three self-dual generators e^a ^ e^b + e^c ^ e^d in
    // an oriented orthonormal basis; with an orthogonal basis of square
    // norms g_i the vanishing of <alpha, generator> becomes a sign
    // condition plus a square identity.
    let pairs = [((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))];
    let mut is_asd = true;
    let mut defect_sq = 0.0f64;
    for ((a, b), (c, d)) in pairs {
        let x = s(a, b);
        let y = s(c, d);
        let gx = g[a].clone() * g[b].clone();
        let gy = g[c].clone() * g[d].clone();
        if S::IS_EXACT {
            let same_sign = x.signum() * y.signum() > 0;
            let squares_match =
                (x.clone() * x.clone() * gy.clone()) == (y.clone() * y.clone() * gx.clone());
            if same_sign || !squares_match {
                is_asd = false;
            }
        }
        // Self-dual component in the induced metric, as a float.
        let c_f = x.to_f64() / gx.to_f64().sqrt() + y.to_f64() / gy.to_f64().sqrt();
        defect_sq += 0.5 * c_f * c_f;
    }
    let defect = defect_sq.sqrt();
    if !S::IS_EXACT {
        let scale = alpha.max_abs().max(1.0);
        is_asd = defect <= 1e-9 * scale;
    }
    Ok((is_asd, defect))
}
