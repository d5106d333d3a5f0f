//! Seeded random data for identity sweeps and property tests.
//!
//! Exact mode draws rationals with numerator and denominator bounded by
//! 1000; float mode draws standard normals. Everything is driven by a
//! counter-based generator so a (seed, sample count) pair pins the whole
//! run.

use crate::form::{binomial, grade_masks, Form, LinearMap, SkewEndo, Vector};
use crate::scalar::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_form<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, grade: usize) -> Form<S> {
    let mut f = Form::zero(dim, grade);
    for &mask in grade_masks(dim, grade) {
        *f.coeff_mut(mask) = S::sample(rng);
    }
    f
}

pub fn random_vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<S> {
    Vector::new((0..dim).map(|_| S::sample(rng)).collect())
}

pub fn random_linear_map<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> LinearMap<S> {
    LinearMap::from_rows((0..dim).map(|_| (0..dim).map(|_| S::sample(rng)).collect()).collect())
}

pub fn random_skew<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SkewEndo<S> {
    SkewEndo::sharp_two_form(&random_form(rng, dim, 2))
}

/// Sparse variant: at most `terms` random monomials, useful when a dense
/// draw would swamp a structured zero.
pub fn random_sparse_form<S: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    grade: usize,
    terms: usize,
) -> Form<S> {
    let masks = grade_masks(dim, grade);
    let mut f = Form::zero(dim, grade);
    for _ in 0..terms.min(binomial(dim, grade)) {
        let mask = masks[rng.gen_range(0..masks.len())];
        *f.coeff_mut(mask) = S::sample(rng);
    }
    f
}
