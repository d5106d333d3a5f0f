//! Scalar arithmetic for the two computation modes.
//!
//! Every geometric operation in this crate is generic over [`Scalar`]. Two
//! implementations are provided:
//!
//! * [`Exact`]: elements of the field Q(sqrt 2), stored as a pair of
//!   arbitrary-precision rationals `a + b*sqrt(2)`. All structure constants
//!   are rational, and the only irrationality the toolkit ever needs is the
//!   `1/sqrt(8) = sqrt(2)/4` normalization of the grade-4 isometry, so this
//!   field is closed under every operation we perform. Equality is exact.
//! * `f64`: floating point. Comparisons against zero must go through the
//!   tolerance machinery in [`crate::report`]; plain `==` is reserved for
//!   structurally identical results.
//!
//! The mode is a type parameter, so mixing modes inside one computation is a
//! compile error rather than a runtime surprise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Field operations shared by the exact and floating-point modes.
///
/// Implementors form an ordered subfield of the reals containing sqrt(2).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// True when equality and sign tests are exact (no tolerance needed).
    const IS_EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`; panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The element sqrt(2).
    fn sqrt2() -> Self;
    fn is_zero(&self) -> bool;
    /// Exact sign in {-1, 0, 1}.
    fn signum(&self) -> i32;
    /// Multiplicative inverse; panics on zero.
    fn recip(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational value, if the element lies in Q.
    fn to_rational(&self) -> Option<BigRational>;
    /// Injects a rational; `None` when the mode cannot represent it exactly
    /// (never the case for [`Exact`], always a rounding for `f64`).
    fn from_rational(r: &BigRational) -> Self;
    /// Injects a float; `None` in exact mode, where decimal input is refused
    /// rather than silently rationalized.
    fn from_f64(x: f64) -> Option<Self>;
    /// Draws a sample for randomized identity sweeps: bounded rationals in
    /// exact mode, standard normal in float mode.
    fn sample<R: rand::Rng + ?Sized>(rng: &mut R) -> Self;
}

/// An element `a + b*sqrt(2)` of Q(sqrt 2) with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq)]
pub struct Exact {
    a: BigRational,
    b: BigRational,
}

impl Exact {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Exact { a, b }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    /// Parses `"p"` or `"p/q"` with arbitrary-precision integer parts.
    pub fn parse_rational(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let ratio = match s.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator: {e}"))?;
                let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator: {e}"))?;
                if q.is_zero() {
                    return Err("zero denominator".into());
                }
                BigRational::new(p, q)
            }
            None => {
                let p = BigInt::from_str(s).map_err(|e| format!("bad integer: {e}"))?;
                BigRational::from_integer(p)
            }
        };
        Ok(Exact::new(ratio, BigRational::zero()))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt2", self.b);
        }
        write!(f, "{}{}{}*sqrt2", self.a, if self.b.is_negative() { "" } else { "+" }, self.b)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        // Rational-by-rational is the hot path in the identity sweeps.
        if self.b.is_zero() && rhs.b.is_zero() {
            return Exact::new(self.a * rhs.a, BigRational::zero());
        }
        let two = BigRational::from_integer(BigInt::from(2));
        Exact::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Div for Exact {
    type Output = Exact;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Exact) -> Exact {
        self * rhs.recip()
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact::new(-self.a, -self.b)
    }
}

impl AddAssign for Exact {
    fn add_assign(&mut self, rhs: Exact) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl SubAssign for Exact {
    fn sub_assign(&mut self, rhs: Exact) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl MulAssign for Exact {
    fn mul_assign(&mut self, rhs: Exact) {
        *self = self.clone() * rhs;
    }
}

impl Scalar for Exact {
    const IS_EXACT: bool = true;

    fn zero() -> Self {
        Exact::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Exact::new(BigRational::from_integer(BigInt::from(1)), BigRational::zero())
    }

    fn from_int(n: i64) -> Self {
        Exact::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Exact::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    fn sqrt2() -> Self {
        Exact::new(BigRational::zero(), BigRational::from_integer(BigInt::from(1)))
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn signum(&self) -> i32 {
        let sa = if self.a.is_zero() { 0 } else if self.a.is_positive() { 1 } else { -1 };
        let sb = if self.b.is_zero() { 0 } else if self.b.is_positive() { 1 } else { -1 };
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (x, y) if x == y => x,
            // Opposite signs: a + b*sqrt2 has the sign of whichever of
            // a^2 and 2 b^2 dominates (sqrt2 is irrational, so no tie).
            _ => {
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
                if a2 > b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        // 1/(a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2)
        let norm = &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
        Exact::new(&self.a / &norm, -(&self.b / &norm))
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    fn to_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn from_rational(r: &BigRational) -> Self {
        Exact::new(r.clone(), BigRational::zero())
    }

    fn from_f64(_x: f64) -> Option<Self> {
        None
    }

    fn sample<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let num = rng.gen_range(-1000..=1000i64);
        let den = rng.gen_range(1..=1000i64);
        Exact::from_ratio(num, den)
    }
}

impl Scalar for f64 {
    const IS_EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn signum(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn recip(&self) -> Self {
        assert!(*self != 0.0, "division by zero");
        1.0 / *self
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_f64(*self)
    }

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn sample<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        // Box-Muller; keeps the dependency footprint to `rand` itself.
        loop {
            let u: f64 = rng.gen::<f64>();
            if u > 0.0 {
                let v: f64 = rng.gen::<f64>();
                return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn field_axioms_on_sqrt2() {
        let r2 = Exact::sqrt2();
        assert_eq!(r2.clone() * r2.clone(), ex(2, 1));
        let x = ex(3, 4) + ex(5, 7) * r2.clone();
        let y = x.clone().recip();
        assert_eq!(x * y, Exact::one());
    }

    #[test]
    fn inv_sqrt8_squares_to_eighth() {
        let inv = Exact::sqrt2() / Exact::from_int(4);
        assert_eq!(inv.clone() * inv, ex(1, 8));
    }

    #[test]
    fn signum_mixed_terms() {
        // 3 - 2 sqrt2 = 3 - 2.828... > 0
        let x = ex(3, 1) - ex(2, 1) * Exact::sqrt2();
        assert_eq!(x.signum(), 1);
        // 4 - 3 sqrt2 < 0
        let y = ex(4, 1) - ex(3, 1) * Exact::sqrt2();
        assert_eq!(y.signum(), -1);
        assert_eq!(Exact::zero().signum(), 0);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let x = Exact::parse_rational("-35/21").unwrap();
        assert_eq!(x, ex(-5, 3));
        assert_eq!(format!("{x}"), "-5/3");
        assert!(Exact::parse_rational("1/0").is_err());
        assert!(Exact::parse_rational("q").is_err());
    }

    #[test]
    fn float_mode_refused_in_exact() {
        assert!(<Exact as Scalar>::from_f64(0.5).is_none());
        assert_eq!(<f64 as Scalar>::from_f64(0.5), Some(0.5));
    }

    #[test]
    fn to_f64_matches() {
        let x = ex(1, 2) + ex(3, 1) * Exact::sqrt2();
        assert!((x.to_f64() - (0.5 + 3.0 * std::f64::consts::SQRT_2)).abs() < 1e-15);
    }
}
