//! Exterior-algebra toolkit for the flat G2 and Spin(7) models.
//!
//! Everything here works pointwise on an oriented Euclidean R^n with
//! 4 <= n <= 8 and the coordinate frame taken as an oriented orthonormal
//! basis. Two coefficient modes are supported through the [`Scalar`]
//! trait: exact arithmetic in Q(sqrt 2) ([`scalar::Exact`]) and `f64`.
//! Mixing modes in one expression is a compile error.
//!
//! Axis-label conventions, used consistently by every module, printer,
//! and JSON surface:
//!
//! | ambient dim | labels  | distinguished split                         |
//! |-------------|---------|---------------------------------------------|
//! | 7           | 1 ... 7 | base x^1..x^3, fiber y^4..y^7               |
//! | 8           | 0 ... 7 | e^0 plus the dim-7 block; base x^0..x^3,    |
//! |             |         | fiber y^4..y^7 in the graph setting         |
//! | other       | 0 ... n-1 | none                                      |
//!
//! The volume form is e^{1...7} resp. e^{0...7}. On the dim-7 model the
//! structure 3-form is
//! `phi = e^123 + e^145 + e^167 + e^246 - e^257 - e^347 - e^356`,
//! on the dim-8 model `Phi = e^0 ^ phi + *7 phi`.
//!
//! Curvature forms of unitary connections are purely imaginary; this
//! crate stores their real coefficient forms throughout (`F` stands for
//! the real 2-form with `F_nabla = sqrt(-1) F`). Under that convention
//! odd powers of the curvature pick up a sign relative to the
//! sqrt(-1)-valued notation, so the residual operators read
//!
//! * dim 7: `(*phi ^ F - F^3/6, phi ^ *F^2)`
//! * dim 8: `(pi27(F - *F^3/6), pi47(F^2))`
//!
//! and the graph equalities square to `det(id + F#)` with the sharp of
//! the real form. All identity suites, sweeps, and reports use these
//! real-form residuals.

pub mod compat;
pub mod error;
pub mod fm;
pub mod form;
pub mod g2;
pub mod io;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spin7;
pub mod suite;

pub use error::Error;
pub use form::{Form, LinearMap, SkewEndo, Vector};
pub use scalar::{Exact, Scalar};
