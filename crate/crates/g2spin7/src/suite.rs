//! Registry of verifiable identities behind `verify-identities`.
//!
//! Every check evaluates a family of exact identities (or tolerance-banded
//! float versions) and reports its worst residual as a [`report::Entry`].
//! Checks draw randomness from per-check streams of one seeded generator,
//! so a `(seed, samples)` pair pins the entire run regardless of registry
//! order changes.

use crate::error::Error;
use crate::fm::{associator_equality, cayley_equality, j_split, j_split_lambda_routes};
use crate::form::{grade_masks, Form, Vector};
use crate::g2::G2Data;
use crate::report::{approx_zero, classify, fmt_value, Entry, Status};
use crate::rng::{random_form, random_vector, seeded};
use crate::scalar::Scalar;
use crate::spin7::{asd_coassoc_check, include_v, Spin7Data};
use rand_chacha::ChaCha8Rng;

/// Deliberate fault injections for exercising the failure path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of one monomial of the structure 3-form, given by its
    /// axis labels.
    PhiFlipSign(Vec<usize>),
}

impl std::str::FromStr for Mutation {
    type Err = Error;

    /// Accepts `phi:flip-sign:e<labels>`, e.g. `phi:flip-sign:e246`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = s.split(':');
        let (target, action, arg) = (parts.next(), parts.next(), parts.next());
        if parts.next().is_some() {
            return Err(Error::Invalid(format!("malformed mutation {s:?}")));
        }
        match (target, action, arg) {
            (Some("phi"), Some("flip-sign"), Some(monomial)) => {
                let digits = monomial
                    .strip_prefix('e')
                    .ok_or_else(|| Error::Invalid(format!("expected e<labels> in {s:?}")))?;
                let mut labels = Vec::new();
                for ch in digits.chars() {
                    let l = ch
                        .to_digit(10)
                        .ok_or_else(|| Error::Invalid(format!("bad label {ch:?} in {s:?}")))?
                        as usize;
                    if !(1..=7).contains(&l) || labels.contains(&l) {
                        return Err(Error::Invalid(format!("bad monomial {monomial:?} in {s:?}")));
                    }
                    labels.push(l);
                }
                if labels.len() != 3 {
                    return Err(Error::Invalid(format!("monomial {monomial:?} is not grade 3")));
                }
                Ok(Mutation::PhiFlipSign(labels))
            }
            _ => Err(Error::Invalid(format!(
                "unknown mutation {s:?}; supported: phi:flip-sign:e<labels>"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub mutation: Option<Mutation>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7, samples: 100, mutation: None }
    }
}

struct Ctx<S: Scalar> {
    g2: G2Data<S>,
    sp: Spin7Data<S>,
}

/// Worst-residual accumulator for one check. Exactness is tracked
/// separately so exact mode never consults the float bands.
struct Worst {
    sup: f64,
    scale: f64,
    exact_zero: bool,
    broken: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst { sup: 0.0, scale: 1.0, exact_zero: true, broken: None }
    }

    fn form<S: Scalar>(&mut self, f: &Form<S>) {
        if !f.is_zero() {
            self.exact_zero = false;
        }
        self.sup = self.sup.max(f.norm_sq().to_f64().max(0.0).sqrt());
    }

    fn scalar<S: Scalar>(&mut self, s: &S) {
        if !s.is_zero() {
            self.exact_zero = false;
        }
        self.sup = self.sup.max(s.to_f64().abs());
    }

    fn float(&mut self, v: f64) {
        if v != 0.0 {
            self.exact_zero = false;
        }
        self.sup = self.sup.max(v.abs());
    }

    fn track(&mut self, scale: f64) {
        self.scale = self.scale.max(scale);
    }

    /// Records a structural fact that is not a residual (a flag, a rank).
    /// A false fact fails the check outright.
    fn expect(&mut self, ok: bool, what: &str) {
        if !ok && self.broken.is_none() {
            self.broken = Some(format!("violated: {what}"));
        }
    }

    fn entry<S: Scalar>(self, id: &str, statement: &str) -> Entry {
        let residual_zero = if S::IS_EXACT {
            self.exact_zero
        } else {
            classify(self.sup, self.scale) == Status::Zero
        };
        let pass = self.broken.is_none() && residual_zero;
        let status = if residual_zero { Status::Zero } else { Status::Nonzero };
        let value = match &self.broken {
            Some(msg) => msg.clone(),
            None => fmt_value(S::IS_EXACT && self.exact_zero, self.sup),
        };
        Entry::gating(id, statement, value, status, pass)
    }
}

/// Rank over the coefficient field by Gaussian elimination. Pivots are
/// chosen by float magnitude; zero tests are exact in exact mode and
/// tolerance-banded otherwise (entries here are structure constants, so
/// the band has huge margin).
fn rank_of<S: Scalar>(mut rows: Vec<Vec<S>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let piv = (rank..rows.len())
            .max_by(|&a, &b| {
                let x = rows[a][c].to_f64().abs();
                let y = rows[b][c].to_f64().abs();
                x.partial_cmp(&y).expect("structure constants are finite")
            })
            .expect("row range is nonempty");
        let nonzero = if S::IS_EXACT {
            !rows[piv][c].is_zero()
        } else {
            rows[piv][c].to_f64().abs() > 1e-9
        };
        if !nonzero {
            continue;
        }
        rows.swap(rank, piv);
        let inv = rows[rank][c].clone().recip();
        for r in (rank + 1)..rows.len() {
            let factor = rows[r][c].clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            for cc in c..cols {
                let delta = factor.clone() * rows[rank][cc].clone();
                rows[r][cc] = rows[r][cc].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}

fn dot<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> S {
    u.comps()
        .iter()
        .zip(v.comps())
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn check_g2_contraction<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    let basis = (0..7).map(|i| Vector::basis(7, i));
    let randoms = (0..samples).map(|_| random_vector::<S, _>(rng, 7));
    for u in basis.chain(randoms) {
        w.track(dot(&u, &u).to_f64());
        for (_, r) in ctx.g2.contraction_residuals(&u) {
            w.form(&r);
        }
    }
    Ok(w)
}

fn check_g2_metric<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for i in 0..7 {
        for j in 0..7 {
            let d = ctx.g2.metric(&Vector::basis(7, i), &Vector::basis(7, j))
                - if i == j { S::one() } else { S::zero() };
            w.scalar(&d);
        }
    }
    for _ in 0..samples {
        let u = random_vector::<S, _>(rng, 7);
        let v = random_vector::<S, _>(rng, 7);
        w.track((dot(&u, &u).to_f64() * dot(&v, &v).to_f64()).abs().sqrt());
        w.scalar(&(ctx.g2.metric(&u, &v) - dot(&u, &v)));
    }
    Ok(w)
}

fn check_g2_projections<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for _ in 0..samples {
        let a = random_form::<S, _>(rng, 7, 2);
        w.track(a.max_abs());
        let (p7, p14) = ctx.g2.project2(&a);
        w.form(&(&(&p7 + &p14) - &a));
        w.scalar(&p7.inner(&p14));
        let (pp, cross) = ctx.g2.project2(&p7);
        w.form(&(&pp - &p7));
        w.form(&cross);
        // Eigenconditions of *(phi ^ .): 2 on the 7-summand, -1 on the 14.
        w.form(&(&ctx.g2.phi.wedge(&p7).hodge() - &p7.scaled(2, 1)));
        w.form(&(&ctx.g2.phi.wedge(&p14).hodge() + &p14));
        w.form(&ctx.g2.star_phi.wedge(&p14));
    }
    let mut rows7 = Vec::new();
    let mut rows14 = Vec::new();
    for &mask in grade_masks(7, 2) {
        let mut a = Form::<S>::zero(7, 2);
        *a.coeff_mut(mask) = S::one();
        let (p7, p14) = ctx.g2.project2(&a);
        rows7.push(p7.coeffs().to_vec());
        rows14.push(p14.coeffs().to_vec());
    }
    w.expect(rank_of(rows7) == 7, "2-form 7-summand has rank 7");
    w.expect(rank_of(rows14) == 14, "2-form 14-summand has rank 14");
    Ok(w)
}

fn check_g2_planes<S: Scalar>(
    ctx: &Ctx<S>,
    _rng: &mut ChaCha8Rng,
    _samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    let e = |i| Vector::<S>::basis(7, i);
    w.form(&ctx.g2.associative_residual(&[e(0), e(1), e(2)]));
    for v in ctx.g2.coassociative_residual(&[e(3), e(4), e(5), e(6)]) {
        w.scalar(&v);
    }
    let tilted = ctx.g2.associative_residual(&[&e(0) + &e(3), e(1), e(2)]);
    w.expect(!tilted.is_zero(), "tilted frame leaves the calibrated locus");
    w.scalar(&(ctx.g2.phi.eval(&[e(0), e(1), e(2)]) - S::one()));
    Ok(w)
}

fn check_spin7_constants<S: Scalar>(
    ctx: &Ctx<S>,
    _rng: &mut ChaCha8Rng,
    _samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    w.scalar(&(ctx.g2.phi.norm_sq() - S::from_int(7)));
    w.scalar(&(ctx.sp.phi4.norm_sq() - S::from_int(14)));
    w.form(&(&ctx.sp.phi4.hodge() - &ctx.sp.phi4));
    let product = &Form::basis(8, &[0]).wedge(&include_v(&ctx.g2.phi))
        + &include_v(&ctx.g2.star_phi);
    w.form(&(&product - &ctx.sp.phi4));
    let mut fibration = &Form::basis(8, &[0, 1, 2, 3]) + &Form::basis(8, &[4, 5, 6, 7]);
    for (t, o) in ctx.sp.tau2.iter().zip(&ctx.sp.omega) {
        fibration = &fibration + &t.wedge(o);
    }
    w.form(&(&fibration - &ctx.sp.phi4));
    Ok(w)
}

fn check_spin7_lambda<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for k in [2usize, 4, 6] {
        let images = ctx.sp.lambda_basis.images(k)?;
        for (i, a) in images.iter().enumerate() {
            for (j, b) in images.iter().enumerate() {
                let d = a.inner(b) - if i == j { S::one() } else { S::zero() };
                w.scalar(&d);
            }
        }
    }
    for _ in 0..samples {
        let alpha = include_v(&random_form::<S, _>(rng, 7, 1));
        w.track(alpha.max_abs());
        let l2 = ctx.sp.lambda(2, &alpha)?;
        let l4 = ctx.sp.lambda(4, &alpha)?;
        let l6 = ctx.sp.lambda(6, &alpha)?;
        let n = alpha.norm_sq();
        w.scalar(&(l2.norm_sq() - n.clone()));
        w.scalar(&(l4.norm_sq() - n.clone()));
        w.scalar(&(l6.norm_sq() - n));
        w.form(&(&l6 - &l2.hodge()));
        w.form(&(&l6 - &ctx.sp.phi4.wedge(&l2).scaled(1, 3)));
        // Eigencondition on the 7-summand of 2-forms.
        w.form(&(&ctx.sp.phi4.wedge(&l2) - &l2.hodge().scaled(3, 1)));
        // Round trips through the inverse maps.
        for k in [2usize, 4, 6] {
            let lk = ctx.sp.lambda(k, &alpha)?;
            let back = include_v(&ctx.sp.lambda_inv(k, &lk)?);
            w.form(&(&back - &alpha));
        }
    }
    Ok(w)
}

fn check_spin7_projections<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for &mask in grade_masks(8, 2) {
        let mut xi = Form::<S>::zero(8, 2);
        *xi.coeff_mut(mask) = S::one();
        let p7 = ctx.sp.project7(2, &xi)?;
        let (via_phi, p21) = ctx.sp.project2_via_phi(&xi);
        w.form(&(&p7 - &via_phi));
        // The complement obeys the -1 eigencondition.
        w.form(&(&ctx.sp.phi4.wedge(&p21) + &p21.hodge()));
        let xi6 = xi.hodge();
        let p67 = ctx.sp.project7(6, &xi6)?;
        w.form(&(&p67 - &ctx.sp.project6_via_phi(&xi6)));
    }
    for _ in 0..samples {
        for k in [2usize, 4, 6] {
            let xi = random_form::<S, _>(rng, 8, k);
            w.track(xi.max_abs());
            let p = ctx.sp.project7(k, &xi)?;
            let pp = ctx.sp.project7(k, &p)?;
            w.form(&(&pp - &p));
            w.scalar(&(&xi - &p).inner(&p));
        }
    }
    for k in [2usize, 4, 6] {
        let mut rows = Vec::new();
        for &mask in grade_masks(8, k) {
            let mut xi = Form::<S>::zero(8, k);
            *xi.coeff_mut(mask) = S::one();
            rows.push(ctx.sp.project7(k, &xi)?.coeffs().to_vec());
        }
        w.expect(rank_of(rows) == 7, "7-summand projections have rank 7");
    }
    w.form(&ctx.sp.project7(4, &ctx.sp.phi4)?);
    Ok(w)
}

fn check_spin7_hodge_split<S: Scalar>(
    ctx: &Ctx<S>,
    _rng: &mut ChaCha8Rng,
    _samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    let e0 = Form::<S>::basis(8, &[0]);
    for k in 0..=7usize {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for &mask in grade_masks(7, k) {
            let mut a = Form::<S>::zero(7, k);
            *a.coeff_mut(mask) = S::one();
            let amb = include_v(&a);
            let lhs = amb.hodge();
            let rhs = e0.wedge(&include_v(&a.hodge())).scaled(sign, 1);
            w.form(&(&lhs - &rhs));
            w.form(&(&e0.wedge(&amb).hodge() - &include_v(&a.hodge())));
        }
    }
    let _ = ctx;
    Ok(w)
}

fn check_cayley_identity<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for _ in 0..samples {
        let frame =
            [0, 1, 2, 3].map(|_| random_vector::<S, _>(rng, 8));
        let (phi_sq, tau_sq8, vol_sq) = ctx.sp.cayley_defect(&frame);
        w.track(vol_sq.to_f64());
        w.scalar(&(phi_sq + tau_sq8 - vol_sq));
    }
    // One-parameter tilt of a coordinate plane splits the volume between
    // the calibration value and the defect.
    let e = |i| Vector::<S>::basis(8, i);
    for _ in 0..samples.min(100) {
        let k = S::sample(rng);
        let l = S::sample(rng);
        let last = &e(3).scale(&k) + &e(4).scale(&l);
        let (phi_sq, tau_sq8, vol_sq) = ctx.sp.cayley_defect(&[e(0), e(1), e(2), last]);
        w.track(vol_sq.to_f64());
        w.scalar(&(phi_sq - k.clone() * k.clone()));
        w.scalar(&(tau_sq8 - l.clone() * l.clone()));
        w.scalar(&(vol_sq - (k.clone() * k + l.clone() * l)));
    }
    let quad = [e(0), e(1), e(2), e(3)];
    w.form(&ctx.sp.tau(&quad));
    let fiber = [e(4), e(5), e(6), e(7)];
    w.form(&ctx.sp.tau(&fiber));
    let (_, t8, _) = ctx.sp.cayley_defect(&[e(0), e(1), e(2), e(4)]);
    w.scalar(&(t8 - S::one()));
    Ok(w)
}

fn check_asd_planes<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    let e8 = |i| Vector::<S>::basis(8, i);
    let base = [e8(0), e8(1), e8(2), e8(3)];
    let asd = &Form::basis(8, &[0, 1]) - &Form::basis(8, &[2, 3]);
    let check = ctx.sp.asd_cayley_check(&base, &asd)?;
    w.form(&check.residual);
    w.expect(check.is_asd, "coordinate anti-self-dual form is flagged");
    let sd = ctx.sp.asd_cayley_check(&base, &ctx.sp.tau2[0])?;
    w.expect(!sd.is_asd, "self-dual form is rejected");
    let l2e1 = ctx.sp.lambda(2, &Form::basis(8, &[1]))?;
    w.form(&(&sd.residual - &l2e1));

    let e7 = |i| Vector::<S>::basis(7, i);
    let fiber = [e7(3), e7(4), e7(5), e7(6)];
    let asd7 = &Form::basis(7, &[3, 4]) - &Form::basis(7, &[5, 6]);
    let check = asd_coassoc_check(&ctx.g2, &fiber, &asd7)?;
    w.form(&check.residual);
    w.expect(check.is_asd, "coordinate anti-self-dual form is flagged");
    let sd7 = asd_coassoc_check(&ctx.g2, &fiber, &ctx.g2.omega[0])?;
    w.expect(!sd7.is_asd, "self-dual form is rejected");
    w.expect(!sd7.residual.is_zero(), "self-dual residual is nonzero");

    // Random support forms: residual vanishing and the intrinsic verdict
    // must coincide on both plane types.
    for _ in 0..samples {
        let mut alpha8 = Form::zero(8, 2);
        for i in 0..4u8 {
            for j in (i + 1)..4 {
                *alpha8.coeff_mut((1 << i) | (1 << j)) = S::sample(rng);
            }
        }
        let c = ctx.sp.asd_cayley_check(&base, &alpha8)?;
        w.expect(
            c.is_asd == approx_zero(c.residual.norm_sq().to_f64().sqrt(), alpha8.max_abs()),
            "projection residual decides anti-self-duality",
        );
        let mut alpha7 = Form::zero(7, 2);
        for i in 3..7u8 {
            for j in (i + 1)..7 {
                *alpha7.coeff_mut((1 << i) | (1 << j)) = S::sample(rng);
            }
        }
        let c = asd_coassoc_check(&ctx.g2, &fiber, &alpha7)?;
        w.expect(
            c.is_asd == approx_zero(c.residual.norm_sq().to_f64().sqrt(), alpha7.max_abs()),
            "calibration wedge decides anti-self-duality",
        );
    }
    Ok(w)
}

fn check_split_routes<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for _ in 0..samples {
        let (f1, f2) = random_graph_pair::<S>(rng);
        w.track(f1.max_abs().max(f2.max_abs()).powi(3).max(1.0));
        let js = j_split(&ctx.g2, &f1, &f2);
        w.float(js.route_defect());
        for (lhs, rhs) in j_split_lambda_routes(&ctx.sp, &f1, &f2) {
            w.form(&(&lhs - &rhs));
        }
    }
    Ok(w)
}

/// Graph-shaped data on the 7-dimensional model: `F1` a fiber 1-form,
/// `F2` spanning the `dx^i ^ dy^a` block.
fn random_graph_pair<S: Scalar>(rng: &mut ChaCha8Rng) -> (Form<S>, Form<S>) {
    let mut f1 = Form::zero(7, 1);
    for a in 3..7u8 {
        *f1.coeff_mut(1 << a) = S::sample(rng);
    }
    let mut f2 = Form::zero(7, 2);
    for i in 0..3u8 {
        for a in 3..7u8 {
            *f2.coeff_mut((1 << i) | (1 << a)) = S::sample(rng);
        }
    }
    (f1, f2)
}

fn check_associator_equality<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for _ in 0..samples {
        let mut f = Form::zero(7, 2);
        for i in 0..3u8 {
            for a in 3..7u8 {
                *f.coeff_mut((1 << i) | (1 << a)) = S::sample(rng);
            }
        }
        let (lhs, rhs) = associator_equality(&ctx.g2, &f);
        w.track(rhs.to_f64().abs());
        w.scalar(&(lhs - rhs.clone()));
        w.expect(rhs.to_f64() >= 1.0 - 1e-9, "graph determinant is at least one");
    }
    Ok(w)
}

fn check_cayley_equality<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    let mut w = Worst::new();
    for _ in 0..samples {
        let mut f = Form::zero(8, 2);
        for i in 0..4u8 {
            for a in 4..8u8 {
                *f.coeff_mut((1 << i) | (1 << a)) = S::sample(rng);
            }
        }
        let (lhs, rhs) = cayley_equality(&ctx.sp, &f);
        w.track(rhs.to_f64().abs());
        w.scalar(&(lhs - rhs.clone()));
        w.expect(rhs.to_f64() >= 1.0 - 1e-9, "graph determinant is at least one");
    }
    Ok(w)
}

fn check_kaehler_reduction<S: Scalar>(
    _ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    use crate::compat::CY4Data;
    let mut w = Worst::new();
    let phases = [
        CY4Data::<S>::standard(),
        CY4Data::<S>::with_phase(S::from_ratio(3, 5), S::from_ratio(4, 5))?,
    ];
    for cy in &phases {
        for _ in 0..samples {
            let f = cy.project11(&random_form::<S, _>(rng, 8, 2));
            w.track(f.max_abs().powi(3).max(1.0));
            let out = cy.check(&f)?;
            w.form(&out.r2);
            w.scalar(&out.scalar_identity_defect);
            w.form(&out.line_defect);
            w.form(&out.rotation_defect);
        }
    }
    let cy = &phases[0];
    for mu_int in [-2i64, -1, 0, 1, 2] {
        let mu = S::from_int(mu_int);
        let out = cy.check(&cy.omega.scale(&mu))?;
        let coef = mu.clone() * (S::one() - mu.clone() * mu);
        w.form(&(&out.r1 - &cy.omega.scale(&coef)));
        let solved = approx_zero(out.r1.norm_sq().to_f64().max(0.0).sqrt(), 10.0);
        w.expect(
            solved == (mu_int.abs() <= 1),
            "Kaehler multiples solve the equation exactly at 0 and +-1",
        );
    }
    Ok(w)
}

fn check_product_reduction<S: Scalar>(
    ctx: &Ctx<S>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Worst, Error> {
    use crate::compat::g2_reduction_check;
    let mut w = Worst::new();
    for _ in 0..samples {
        let f7 = random_form::<S, _>(rng, 7, 2);
        w.track(f7.max_abs().powi(3).max(1.0));
        let out = g2_reduction_check(&ctx.sp, &include_v(&f7))?;
        w.scalar(&out.quartic_top);
        w.form(&out.split_defect);
        w.form(&out.second_route_defect);
    }
    Ok(w)
}

type CheckFn<S> = fn(&Ctx<S>, &mut ChaCha8Rng, usize) -> Result<Worst, Error>;

fn registry<S: Scalar>() -> Vec<(&'static str, &'static str, CheckFn<S>)> {
    vec![
        (
            "g2.contraction",
            "the four contraction identities tie phi, its dual, and vector flats",
            check_g2_contraction,
        ),
        (
            "g2.metric",
            "the metric recovered from phi is the Euclidean one",
            check_g2_metric,
        ),
        (
            "g2.projections",
            "the 2-form projections are orthogonal idempotents of ranks 7 and 14 with the right eigenvalues",
            check_g2_projections,
        ),
        (
            "g2.calibrated-planes",
            "coordinate associative and coassociative planes have zero residual, tilted ones do not",
            check_g2_planes,
        ),
        (
            "spin7.constants",
            "norms of the structure forms, self-duality, and the two product expansions of the calibration",
            check_spin7_constants,
        ),
        (
            "spin7.lambda",
            "the three grade injections are isometries with orthonormal images and dual top maps",
            check_spin7_lambda,
        ),
        (
            "spin7.projections",
            "basis-expansion and wedge-formula projections agree, idempotent, of rank 7 in grades 2, 4, 6",
            check_spin7_projections,
        ),
        (
            "spin7.hodge-split",
            "the 8-dimensional star restricts through the circle split to the 7-dimensional one",
            check_spin7_hodge_split,
        ),
        (
            "spin7.cayley-identity",
            "the calibration value and defect norm exhaust the squared volume of any 4-frame",
            check_cayley_identity,
        ),
        (
            "asd.planes",
            "anti-self-duality on calibrated planes is decided by the projection and wedge residuals",
            check_asd_planes,
        ),
        (
            "fm.split-routes",
            "the frame and closed-form residual splits agree and match the projected 8-dimensional pair",
            check_split_routes,
        ),
        (
            "fm.associator-equality",
            "the associative residual package squares to the graph determinant",
            check_associator_equality,
        ),
        (
            "fm.cayley-equality",
            "the Cayley residual package squares to the graph determinant",
            check_cayley_equality,
        ),
        (
            "compat.kaehler-reduction",
            "(1,1) curvature reduces the residual pair to the phase-1 scalar across the phase family",
            check_kaehler_reduction,
        ),
        (
            "compat.product-reduction",
            "pullback curvature reduces the residual pair to the 7-dimensional operators",
            check_product_reduction,
        ),
    ]
}

/// Runs every registered identity and returns one report entry per check.
/// All entries are gating: a single failure fails the run.
pub fn run_identities<S: Scalar>(cfg: &SuiteConfig) -> Vec<Entry> {
    let g2 = match &cfg.mutation {
        Some(Mutation::PhiFlipSign(labels)) => G2Data::with_flipped_sign(labels),
        None => G2Data::standard(),
    };
    let sp = Spin7Data::from_g2(g2.clone());
    let ctx = Ctx { g2, sp };

    let mut entries = Vec::new();
    for (idx, (id, statement, check)) in registry::<S>().into_iter().enumerate() {
        let mut rng = seeded(cfg.seed);
        rng.set_stream(idx as u64 + 1);
        let entry = match check(&ctx, &mut rng, cfg.samples) {
            Ok(worst) => worst.entry::<S>(id, statement),
            Err(e) => Entry::gating(id, statement, format!("error: {e}"), Status::Nonzero, false),
        };
        entries.push(entry);
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn small(samples: usize) -> SuiteConfig {
        SuiteConfig { seed: 7, samples, mutation: None }
    }

    #[test]
    fn exact_registry_is_all_zero() {
        let entries = run_identities::<Exact>(&small(8));
        assert_eq!(entries.len(), registry::<Exact>().len());
        for e in &entries {
            assert_eq!(e.pass, Some(true), "{}: {}", e.id, e.value);
            assert_eq!(e.value, "0", "{} left residual {}", e.id, e.value);
        }
    }

    #[test]
    fn float_registry_stays_in_band() {
        let entries = run_identities::<f64>(&small(16));
        for e in &entries {
            assert_eq!(e.pass, Some(true), "{}: {}", e.id, e.value);
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_identities::<f64>(&small(8));
        let b = run_identities::<f64>(&small(8));
        let render = |es: &[Entry]| {
            es.iter().map(|e| format!("{}={}", e.id, e.value)).collect::<Vec<_>>().join(";")
        };
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn flipped_sign_breaks_the_contraction_identities() {
        let cfg = SuiteConfig {
            seed: 7,
            samples: 4,
            mutation: Some("phi:flip-sign:e246".parse().unwrap()),
        };
        let entries = run_identities::<Exact>(&cfg);
        let by_id = |id: &str| entries.iter().find(|e| e.id == id).unwrap();
        assert_eq!(by_id("g2.contraction").pass, Some(false));
        assert_eq!(by_id("g2.metric").pass, Some(false));
        assert!(entries.iter().any(|e| e.pass == Some(false)));
    }

    #[test]
    fn mutation_parsing_rejects_garbage() {
        assert!("phi:flip-sign:e246".parse::<Mutation>().is_ok());
        assert_eq!(
            "phi:flip-sign:e246".parse::<Mutation>().unwrap(),
            Mutation::PhiFlipSign(vec![2, 4, 6])
        );
        for bad in ["phi:flip-sign:e248", "phi:flip-sign:246", "tau:flip-sign:e246", "phi:flip-sign:e2466", "nonsense"] {
            assert!(bad.parse::<Mutation>().is_err(), "{bad} parsed");
        }
    }
}
