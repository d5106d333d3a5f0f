//! Multivariate polynomials with coefficients in a [`Scalar`] mode.
//!
//! Sections and base potentials are polynomial maps of the base
//! coordinates, so their curvature comes from symbolic differentiation,
//! never finite differencing. The degree cap keeps exact-mode sweeps
//! cheap while still covering quadratic holomorphic graphs.

use crate::error::Error;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Largest total degree accepted for a section or potential component.
pub const MAX_DEGREE: usize = 6;

/// Polynomial in `nvars` variables, stored sparsely by exponent tuple.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: S) -> Self {
        let mut p = Poly::zero(nvars);
        p.push(vec![0; nvars], value);
        p
    }

    /// The coordinate monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0u8; nvars];
        exps[i] = 1;
        let mut p = Poly::zero(nvars);
        p.push(exps, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: &[(S, &[u8])]) -> Self {
        let mut p = Poly::zero(nvars);
        for (c, exps) in terms {
            assert_eq!(exps.len(), nvars, "exponent tuple length mismatch");
            p.push(exps.to_vec(), c.clone());
        }
        p
    }

    fn push(&mut self, exps: Vec<u8>, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn check_degree_cap(&self) -> Result<(), Error> {
        let d = self.total_degree();
        if d > MAX_DEGREE {
            return Err(Error::DegreeCap(d, MAX_DEGREE));
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &S)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add(&self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u8> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.push(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Poly<S> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.push(e.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Poly<S> {
        assert!(i < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.push(exps, c.clone() * S::from_int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t *= xi.clone();
                }
            }
            acc += t;
        }
        acc
    }
}

impl<S: Scalar> std::fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => write!(f, "*t{}", i)?,
                    _ => write!(f, "*t{}^{}", i, ei)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn x(i: usize) -> Poly<Exact> {
        Poly::var(3, i)
    }

    #[test]
    fn product_rule_on_a_witness() {
        // d/dx0 [(x0^2 + x1)(x0 - x2)] = 3x0^2 - 2x0*x2 + x1
        let p = x(0).mul(&x(0)).add(&x(1));
        let q = x(0).sub(&x(2));
        let lhs = p.mul(&q).partial(0);
        let rhs = p.partial(0).mul(&q).add(&p.mul(&q.partial(0)));
        assert_eq!(lhs, rhs);
        let pt = [Exact::from_int(2), Exact::from_int(-1), Exact::from_int(5)];
        assert_eq!(lhs.eval(&pt), Exact::from_int(3 * 4 - 2 * 2 * 5 - 1));
    }

    #[test]
    fn eval_matches_expansion() {
        let p = Poly::from_terms(
            2,
            &[
                (Exact::from_ratio(3, 2), &[2, 0][..]),
                (Exact::from_int(-1), &[1, 1][..]),
                (Exact::from_int(7), &[0, 0][..]),
            ],
        );
        let v = p.eval(&[Exact::from_int(4), Exact::from_int(3)]);
        assert_eq!(v, Exact::from_int(24 - 12 + 7));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let mut p = Poly::constant(1, Exact::one());
        for _ in 0..7 {
            p = p.mul(&Poly::var(1, 0));
        }
        assert!(matches!(p.check_degree_cap(), Err(Error::DegreeCap(7, 6))));
    }

    #[test]
    fn partials_commute() {
        let p = x(0).mul(&x(1)).mul(&x(1)).add(&x(2).mul(&x(0)));
        assert_eq!(p.partial(0).partial(1), p.partial(1).partial(0));
    }
}
