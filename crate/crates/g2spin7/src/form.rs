//! Exterior algebra over an oriented Euclidean coordinate space.
//!
//! Forms live on `R^n` for `4 <= n <= 8` with the standard orthonormal basis
//! and the orientation of the coordinate order. A `k`-form is stored densely:
//! one coefficient per strictly increasing index tuple, ordered by the rank
//! of the tuple in lexicographic order. Index tuples are carried as bitmasks
//! (`n <= 8`, so a `u8` suffices) and all signs reduce to the parity of the
//! merge permutation that sorts a concatenation of two increasing tuples.
//!
//! Axis labels: dimension 7 uses labels `1..=7` externally (the ambient
//! 8-dimensional model reserves label 0 for the distinguished axis), all
//! other dimensions label from 0. Internally everything is 0-based; only
//! constructors and serialization translate.

use crate::error::Error;
use crate::scalar::Scalar;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

pub const MAX_DIM: usize = 8;
pub const MIN_DIM: usize = 4;

/// Binomial coefficient for the small range used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// External label of internal axis `i` in dimension `dim`.
pub fn axis_label(dim: usize, i: usize) -> usize {
    if dim == 7 {
        i + 1
    } else {
        i
    }
}

/// Internal axis for an external label; `None` when out of range.
pub fn axis_from_label(dim: usize, label: usize) -> Option<usize> {
    let base = if dim == 7 { 1 } else { 0 };
    label.checked_sub(base).filter(|&i| i < dim)
}

struct IndexTable {
    /// Masks of increasing tuples, position = lex rank of the tuple.
    masks: Vec<u8>,
    /// Inverse: rank_of[mask] for masks with the right popcount.
    rank_of: Vec<u16>,
}

fn tables() -> &'static Vec<Vec<IndexTable>> {
    static TABLES: OnceLock<Vec<Vec<IndexTable>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| {
                (0..=MAX_DIM)
                    .map(|k| {
                        let mut masks = Vec::with_capacity(binomial(n, k));
                        let mut tuple: Vec<usize> = (0..k).collect();
                        if k <= n {
                            loop {
                                masks.push(tuple.iter().fold(0u8, |m, &i| m | (1 << i)));
                                // Advance to the next tuple in lex order.
                                let mut pos = k;
                                while pos > 0 {
                                    pos -= 1;
                                    if tuple[pos] < n - (k - pos) {
                                        tuple[pos] += 1;
                                        for q in pos + 1..k {
                                            tuple[q] = tuple[q - 1] + 1;
                                        }
                                        break;
                                    }
                                    if pos == 0 {
                                        tuple.clear();
                                    }
                                }
                                if tuple.is_empty() || k == 0 {
                                    break;
                                }
                            }
                        }
                        let mut rank_of = vec![u16::MAX; 1 << n.max(1)];
                        for (r, &m) in masks.iter().enumerate() {
                            rank_of[m as usize] = r as u16;
                        }
                        IndexTable { masks, rank_of }
                    })
                    .collect()
            })
            .collect()
    })
}

/// Lex-ordered index masks for grade `k` in dimension `n`.
pub fn grade_masks(n: usize, k: usize) -> &'static [u8] {
    &tables()[n][k].masks
}

/// Lex rank of an increasing tuple given as a bitmask.
pub fn mask_rank(n: usize, k: usize, mask: u8) -> usize {
    debug_assert_eq!(mask.count_ones() as usize, k);
    tables()[n][k].rank_of[mask as usize] as usize
}

/// Parity sign of merging two disjoint increasing tuples `a`, `b` into one
/// increasing tuple: `e_a ^ e_b = merge_sign(a, b) * e_{a|b}`.
pub fn merge_sign(a: u8, b: u8) -> i32 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += ((a as u32) >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn apply_sign<S: Scalar>(s: S, sign: i32) -> S {
    if sign < 0 {
        -s
    } else {
        s
    }
}

/// Dense exterior form of a single grade.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    dim: usize,
    grade: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, grade: usize) -> Self {
        assert!((MIN_DIM..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Form { dim, grade, coeffs: vec![S::zero(); binomial(dim, grade)] }
    }

    /// Grade-0 form holding one scalar.
    pub fn scalar(dim: usize, value: S) -> Self {
        Form { dim, grade: 0, coeffs: vec![value] }
    }

    /// Basis monomial `e^{i1} ^ ... ^ e^{ik}` from strictly increasing
    /// internal indices.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = Form::zero(dim, indices.len());
        let mut mask = 0u8;
        for w in indices.windows(2) {
            assert!(w[0] < w[1], "indices must be strictly increasing");
        }
        for &i in indices {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            mask |= 1 << i;
        }
        let r = mask_rank(dim, indices.len(), mask);
        f.coeffs[r] = S::one();
        f
    }

    /// Builds a form from `(labels, coefficient)` terms using the external
    /// labeling convention for `dim`.
    pub fn from_labeled_terms(dim: usize, grade: usize, terms: &[(&[usize], S)]) -> Self {
        let mut f = Form::zero(dim, grade);
        for (labels, c) in terms {
            assert_eq!(labels.len(), grade, "term grade mismatch");
            let mut mask = 0u8;
            for w in labels.windows(2) {
                assert!(w[0] < w[1], "labels must be strictly increasing");
            }
            for &l in labels.iter() {
                let i = axis_from_label(dim, l)
                    .unwrap_or_else(|| panic!("label {l} out of range for dimension {dim}"));
                mask |= 1 << i;
            }
            let r = mask_rank(dim, grade, mask);
            f.coeffs[r] += c.clone();
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S::is_zero)
    }

    /// Coefficient of the basis monomial for `mask`.
    pub fn coeff(&self, mask: u8) -> &S {
        &self.coeffs[mask_rank(self.dim, self.grade, mask)]
    }

    pub fn coeff_mut(&mut self, mask: u8) -> &mut S {
        let r = mask_rank(self.dim, self.grade, mask);
        &mut self.coeffs[r]
    }

    /// Coefficient addressed by external labels (strictly increasing).
    pub fn coeff_labeled(&self, labels: &[usize]) -> &S {
        let mut mask = 0u8;
        for &l in labels {
            let i = axis_from_label(self.dim, l).expect("label out of range");
            mask |= 1 << i;
        }
        self.coeff(mask)
    }

    /// Iterates `(mask, coefficient)` in storage (lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (u8, &S)> {
        grade_masks(self.dim, self.grade).iter().copied().zip(self.coeffs.iter())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s.clone();
        }
        out
    }

    /// Multiplies by the rational constant `num/den`.
    pub fn scaled(&self, num: i64, den: i64) -> Self {
        self.scale(&S::from_ratio(num, den))
    }

    pub fn wedge(&self, rhs: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, rhs.dim, "wedge across different dimensions");
        let k = self.grade + rhs.grade;
        let mut out = Form::zero(self.dim, k);
        if k > self.dim {
            return out;
        }
        for (ma, ca) in self.terms() {
            if ca.is_zero() {
                continue;
            }
            for (mb, cb) in rhs.terms() {
                if ma & mb != 0 || cb.is_zero() {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let r = mask_rank(self.dim, k, ma | mb);
                out.coeffs[r] += apply_sign(ca.clone() * cb.clone(), sign);
            }
        }
        out
    }

    /// Interior product `i(v) self`.
    pub fn interior(&self, v: &Vector<S>) -> Form<S> {
        assert_eq!(self.dim, v.dim(), "interior across different dimensions");
        assert!(self.grade >= 1, "interior product needs grade >= 1");
        let mut out = Form::zero(self.dim, self.grade - 1);
        for (mask, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if mask & (1 << j) == 0 || v.comps[j].is_zero() {
                    continue;
                }
                // i(e_j) e_A = (-1)^{position of j in A} e_{A \ j}
                let below = (mask & ((1u8 << j) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                let r = mask_rank(self.dim, self.grade - 1, mask & !(1 << j));
                out.coeffs[r] += apply_sign(v.comps[j].clone() * c.clone(), sign);
            }
        }
        out
    }

    /// Hodge star for the Euclidean metric and coordinate orientation.
    pub fn hodge(&self) -> Form<S> {
        assert!(self.grade <= self.dim, "hodge of overflow grade");
        let full: u8 = if self.dim == 8 { 0xff } else { (1u8 << self.dim) - 1 };
        let mut out = Form::zero(self.dim, self.dim - self.grade);
        for (mask, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let comp = full & !mask;
            let sign = merge_sign(mask, comp);
            let r = mask_rank(self.dim, self.dim - self.grade, comp);
            out.coeffs[r] = apply_sign(c.clone(), sign);
        }
        out
    }

    /// Euclidean inner product extended to forms (orthonormal monomials).
    pub fn inner(&self, rhs: &Form<S>) -> S {
        assert_eq!(self.dim, rhs.dim, "inner across different dimensions");
        assert_eq!(self.grade, rhs.grade, "inner across different grades");
        let mut acc = S::zero();
        for (a, b) in self.coeffs.iter().zip(rhs.coeffs.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self)
    }

    /// Evaluates the form on `grade` vectors.
    pub fn eval(&self, vectors: &[Vector<S>]) -> S {
        assert_eq!(vectors.len(), self.grade, "evaluation arity mismatch");
        if self.grade == 0 {
            return self.coeffs[0].clone();
        }
        let mut wedge = vectors[0].flat();
        for v in &vectors[1..] {
            wedge = wedge.wedge(&v.flat());
        }
        self.inner(&wedge)
    }

    /// Musical isomorphism for 1-forms (orthonormal coordinates).
    pub fn sharp_vector(&self) -> Vector<S> {
        assert_eq!(self.grade, 1, "sharp of a non-1-form");
        Vector { comps: self.coeffs.clone() }
    }

    /// Largest coefficient magnitude, as a float (tolerance scales).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form { dim: self.dim, grade: self.grade, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, rhs.dim, "sum across different dimensions");
        assert_eq!(self.grade, rhs.grade, "sum across different grades");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b.clone();
        }
        out
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, rhs.dim, "difference across different dimensions");
        assert_eq!(self.grade, rhs.grade, "difference across different grades");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b.clone();
        }
        out
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -c.clone();
        }
        out
    }
}

impl<S: Scalar> std::fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut any = false;
        for (mask, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if any {
                write!(f, " + ")?;
            }
            any = true;
            write!(f, "({c})e")?;
            for i in 0..self.dim {
                if mask & (1 << i) != 0 {
                    write!(f, "{}", axis_label(self.dim, i))?;
                }
            }
        }
        if !any {
            write!(f, "0[{}-form on R^{}]", self.grade, self.dim)?;
        }
        Ok(())
    }
}

/// Tangent vector in coordinates.
#[derive(Clone, PartialEq)]
pub struct Vector<S> {
    comps: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(comps: Vec<S>) -> Self {
        assert!((MIN_DIM..=MAX_DIM).contains(&comps.len()), "dimension out of range");
        Vector { comps }
    }

    pub fn zero(dim: usize) -> Self {
        Vector::new(vec![S::zero(); dim])
    }

    /// Standard basis vector for an internal axis index.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.comps[i] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[S] {
        &self.comps
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut S {
        &mut self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(S::is_zero)
    }

    /// Musical isomorphism to a 1-form (orthonormal coordinates).
    pub fn flat(&self) -> Form<S> {
        Form { dim: self.comps.len(), grade: 1, coeffs: self.comps.clone() }
    }

    pub fn inner(&self, rhs: &Vector<S>) -> S {
        assert_eq!(self.dim(), rhs.dim(), "inner across different dimensions");
        let mut acc = S::zero();
        for (a, b) in self.comps.iter().zip(rhs.comps.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self)
    }

    pub fn scale(&self, s: &S) -> Self {
        Vector { comps: self.comps.iter().map(|c| c.clone() * s.clone()).collect() }
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim());
        Vector {
            comps: self.comps.iter().zip(rhs.comps.iter()).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim());
        Vector {
            comps: self.comps.iter().zip(rhs.comps.iter()).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> std::fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Square matrix acting on vectors; also pulls forms back.
#[derive(Clone, PartialEq)]
pub struct LinearMap<S> {
    dim: usize,
    /// Row-major entries: `apply(v)_r = sum_c a[r][c] v_c`.
    a: Vec<S>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        assert!((MIN_DIM..=MAX_DIM).contains(&dim), "dimension out of range");
        assert!(rows.iter().all(|r| r.len() == dim), "ragged matrix");
        LinearMap { dim, a: rows.into_iter().flatten().collect() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = LinearMap { dim, a: vec![S::zero(); dim * dim] };
        for i in 0..dim {
            m.a[i * dim + i] = S::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> &S {
        &self.a[r * self.dim + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut S {
        &mut self.a[r * self.dim + c]
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(v.dim(), self.dim);
        let mut out = Vector::zero(self.dim);
        for r in 0..self.dim {
            let mut acc = S::zero();
            for c in 0..self.dim {
                let e = self.entry(r, c);
                if !e.is_zero() && !v.comps[c].is_zero() {
                    acc += e.clone() * v.comps[c].clone();
                }
            }
            out.comps[r] = acc;
        }
        out
    }

    pub fn column(&self, c: usize) -> Vector<S> {
        Vector { comps: (0..self.dim).map(|r| self.entry(r, c).clone()).collect() }
    }

    pub fn add(&self, rhs: &LinearMap<S>) -> LinearMap<S> {
        assert_eq!(self.dim, rhs.dim);
        LinearMap {
            dim: self.dim,
            a: self.a.iter().zip(rhs.a.iter()).map(|(x, y)| x.clone() + y.clone()).collect(),
        }
    }

    pub fn compose(&self, rhs: &LinearMap<S>) -> LinearMap<S> {
        assert_eq!(self.dim, rhs.dim);
        let mut out = LinearMap { dim: self.dim, a: vec![S::zero(); self.dim * self.dim] };
        for r in 0..self.dim {
            for k in 0..self.dim {
                let x = self.entry(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..self.dim {
                    let y = rhs.entry(k, c);
                    if !y.is_zero() {
                        *out.entry_mut(r, c) += x.clone() * y.clone();
                    }
                }
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with magnitude pivoting.
    pub fn det(&self) -> S {
        let n = self.dim;
        let mut a = self.a.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r * n + col].is_zero())
                .max_by(|&r, &s| {
                    a[r * n + col]
                        .to_f64()
                        .abs()
                        .partial_cmp(&a[s * n + col].to_f64().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot else { return S::zero() };
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pv = a[col * n + col].clone();
            det *= pv.clone();
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone() / pv.clone();
                for c in col..n {
                    let delta = factor.clone() * a[col * n + c].clone();
                    a[r * n + c] -= delta;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; singular input is an explicit error.
    pub fn inverse(&self) -> Result<LinearMap<S>, Error> {
        let n = self.dim;
        let mut a = self.a.clone();
        let mut inv = LinearMap::<S>::identity(n).a;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r * n + col].is_zero())
                .max_by(|&r, &s| {
                    a[r * n + col]
                        .to_f64()
                        .abs()
                        .partial_cmp(&a[s * n + col].to_f64().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot else {
                return Err(Error::SingularMap);
            };
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                    inv.swap(p * n + c, col * n + c);
                }
            }
            let pv = a[col * n + col].clone();
            for c in 0..n {
                a[col * n + c] = a[col * n + c].clone() / pv.clone();
                inv[col * n + c] = inv[col * n + c].clone() / pv.clone();
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for c in 0..n {
                    let da = factor.clone() * a[col * n + c].clone();
                    a[r * n + c] -= da;
                    let di = factor.clone() * inv[col * n + c].clone();
                    inv[r * n + c] -= di;
                }
            }
        }
        Ok(LinearMap { dim: n, a: inv })
    }

    /// Pullback `(T^* w)(v_1, ..., v_k) = w(T v_1, ..., T v_k)`.
    pub fn pullback(&self, w: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, w.dim(), "pullback across different dimensions");
        let k = w.grade();
        let cols: Vec<Vector<S>> = (0..self.dim).map(|c| self.column(c)).collect();
        let mut out = Form::zero(self.dim, k);
        if k == 0 {
            return w.clone();
        }
        for (slot, mask) in grade_masks(self.dim, k).iter().enumerate() {
            let tuple: Vec<Vector<S>> =
                (0..self.dim).filter(|i| mask & (1 << i) != 0).map(|i| cols[i].clone()).collect();
            out.coeffs[slot] = w.eval(&tuple);
        }
        out
    }
}

impl<S: Scalar> std::fmt::Debug for LinearMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.dim {
            for c in 0..self.dim {
                write!(f, "{}{}", if c > 0 { " " } else { "[" }, self.entry(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Skew-symmetric endomorphism, the `sharp` of a 2-form in the metric.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewEndo<S: Scalar> {
    map: LinearMap<S>,
}

impl<S: Scalar> SkewEndo<S> {
    /// `sharp` of a 2-form: the endomorphism with `<M u, v> = F(u, v)`.
    pub fn sharp_two_form(f: &Form<S>) -> Self {
        assert_eq!(f.grade(), 2, "sharp of a non-2-form");
        let dim = f.dim();
        let mut map = LinearMap { dim, a: vec![S::zero(); dim * dim] };
        for (mask, c) in f.terms() {
            if c.is_zero() {
                continue;
            }
            let i = mask.trailing_zeros() as usize;
            let j = (7 - mask.leading_zeros()) as usize;
            // F = c e^i ^ e^j contributes <M e_i, e_j> = c.
            *map.entry_mut(j, i) += c.clone();
            *map.entry_mut(i, j) -= c.clone();
        }
        SkewEndo { map }
    }

    pub fn from_matrix(map: LinearMap<S>) -> Self {
        for r in 0..map.dim {
            for c in 0..=r {
                let sum = map.entry(r, c).clone() + map.entry(c, r).clone();
                assert!(sum.is_zero(), "matrix is not skew-symmetric");
            }
        }
        SkewEndo { map }
    }

    pub fn matrix(&self) -> &LinearMap<S> {
        &self.map
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        self.map.apply(v)
    }

    /// `det(id + M)`; always `>= 1` for skew `M`.
    pub fn det_id_plus(&self) -> S {
        let mut m = self.map.clone();
        for i in 0..m.dim {
            *m.entry_mut(i, i) += S::one();
        }
        m.det()
    }

    pub fn id_plus(&self) -> LinearMap<S> {
        let mut m = self.map.clone();
        for i in 0..m.dim {
            *m.entry_mut(i, i) += S::one();
        }
        m
    }
}

/// Rank by Gaussian elimination over the scalar field. `zero_tol` is the
/// absolute pivot floor for float mode; pass `0.0` in exact mode, where a
/// pivot is zero only when it is exactly zero.
pub fn matrix_rank<S: Scalar>(mut rows: Vec<Vec<S>>, zero_tol: f64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero() && rows[r][col].to_f64().abs() > zero_tol)
            .max_by(|&r, &s| {
                rows[r][col]
                    .to_f64()
                    .abs()
                    .partial_cmp(&rows[s][col].to_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let pv = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / pv.clone();
            for c in col..ncols {
                let delta = factor.clone() * rows[rank][c].clone();
                rows[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Gram-Schmidt orthogonalization without normalization, so exact modes stay
/// inside their field. Errors on linearly dependent input.
pub fn orthogonalize<S: Scalar>(frame: &[Vector<S>]) -> Result<Vec<Vector<S>>, Error> {
    let mut out: Vec<Vector<S>> = Vec::with_capacity(frame.len());
    for v in frame {
        let mut u = v.clone();
        for w in &out {
            let coef = u.inner(w) / w.norm_sq();
            u = &u - &w.scale(&coef);
        }
        if u.is_zero() {
            return Err(Error::DependentFrame);
        }
        out.push(u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use proptest::prelude::*;

    type FQ = Form<Exact>;

    fn exact(n: i64) -> Exact {
        Exact::from_int(n)
    }

    #[test]
    fn binomial_table() {
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn merge_sign_small_cases() {
        // e1 ^ e0 = -e01
        assert_eq!(merge_sign(0b10, 0b01), -1);
        // e0 ^ e1 = +e01
        assert_eq!(merge_sign(0b01, 0b10), 1);
        // e_{02} ^ e_{13}: inversions (2,1) -> odd
        assert_eq!(merge_sign(0b0101, 0b1010), -1);
        // e_{01} ^ e_{23}
        assert_eq!(merge_sign(0b0011, 0b1100), 1);
    }

    #[test]
    fn lex_rank_order() {
        // Dimension 4, grade 2 in lex order of tuples:
        // 01, 02, 03, 12, 13, 23
        let masks = grade_masks(4, 2);
        assert_eq!(masks, &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        for (r, &m) in masks.iter().enumerate() {
            assert_eq!(mask_rank(4, 2, m), r);
        }
    }

    #[test]
    fn wedge_anticommutes_on_basis() {
        let e0 = FQ::basis(4, &[0]);
        let e1 = FQ::basis(4, &[1]);
        let a = e0.wedge(&e1);
        let b = e1.wedge(&e0);
        assert_eq!(a, -&b);
        assert_eq!(*a.coeff(0b11), exact(1));
    }

    #[test]
    fn hodge_of_volume_pieces() {
        // In dimension 7 (labels 1..7): *(e^123) = e^4567.
        let a = FQ::basis(7, &[0, 1, 2]);
        assert_eq!(a.hodge(), FQ::basis(7, &[3, 4, 5, 6]));
        // *(1) = vol, *(vol) = 1.
        let one = FQ::scalar(8, exact(1));
        let vol = one.hodge();
        assert_eq!(vol, FQ::basis(8, &[0, 1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(vol.hodge(), one);
    }

    #[test]
    fn sharp_two_form_matches_contract() {
        // F = e^{01}: M e0 = e1, M e1 = -e0.
        let f = FQ::basis(8, &[0, 1]);
        let m = SkewEndo::sharp_two_form(&f);
        assert_eq!(m.apply(&Vector::basis(8, 0)), Vector::basis(8, 1));
        assert_eq!(m.apply(&Vector::basis(8, 1)), Vector::basis(8, 0).scale(&exact(-1)));
        // det(id + M) on the 01-block is 1 + 1 = 2.
        assert_eq!(m.det_id_plus(), exact(2));
    }

    #[test]
    fn interior_is_adjoint_to_flat_wedge() {
        // <i(v) a, b> = <a, v^flat ^ b> on random rational data.
        let mut rng = crate::rng::seeded(7);
        for _ in 0..40 {
            let a: FQ = crate::rng::random_form(&mut rng, 7, 3);
            let b: FQ = crate::rng::random_form(&mut rng, 7, 2);
            let v: Vector<Exact> = crate::rng::random_vector(&mut rng, 7);
            assert_eq!(a.interior(&v).inner(&b), a.inner(&v.flat().wedge(&b)));
        }
    }

    #[test]
    fn eval_on_permuted_arguments_alternates() {
        let mut rng = crate::rng::seeded(11);
        let a: FQ = crate::rng::random_form(&mut rng, 7, 3);
        let u: Vector<Exact> = crate::rng::random_vector(&mut rng, 7);
        let v: Vector<Exact> = crate::rng::random_vector(&mut rng, 7);
        let w: Vector<Exact> = crate::rng::random_vector(&mut rng, 7);
        let x = a.eval(&[u.clone(), v.clone(), w.clone()]);
        let y = a.eval(&[v.clone(), u.clone(), w.clone()]);
        assert_eq!(x, -y);
        let z = a.eval(&[u.clone(), u.clone(), w]);
        assert!(z.is_zero());
    }

    #[test]
    fn inverse_round_trip_and_singular_error() {
        let mut rng = crate::rng::seeded(13);
        let m: LinearMap<Exact> = crate::rng::random_linear_map(&mut rng, 5);
        if let Ok(inv) = m.inverse() {
            assert_eq!(m.compose(&inv), LinearMap::identity(5));
        }
        let z = LinearMap::from_rows(vec![vec![Exact::zero(); 4]; 4]);
        assert!(matches!(z.inverse(), Err(Error::SingularMap)));
    }

    #[test]
    fn orthogonalize_keeps_span_and_errors_on_dependence() {
        let mut rng = crate::rng::seeded(17);
        let frame: Vec<Vector<Exact>> = (0..3).map(|_| crate::rng::random_vector(&mut rng, 6)).collect();
        let ortho = orthogonalize(&frame).unwrap();
        for i in 0..3 {
            for j in 0..i {
                assert!(ortho[i].inner(&ortho[j]).is_zero());
            }
        }
        let dep = vec![frame[0].clone(), frame[0].scale(&exact(3))];
        assert!(matches!(orthogonalize(&dep), Err(Error::DependentFrame)));
    }

    /// Brute-force alternating evaluation: sum over permutations. Kept free
    /// of the wedge/inner kernels so it can serve as an independent oracle.
    fn eval_by_permutations(w: &FQ, vs: &[Vector<Exact>]) -> Exact {
        fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
            if k == 1 {
                return vec![(vec![0], 1)];
            }
            let mut out = Vec::new();
            for (perm, sign) in permutations(k - 1) {
                for slot in 0..k {
                    let mut p = perm.clone();
                    p.insert(slot, k - 1);
                    let moved = (k - 1) - slot;
                    let s = if moved % 2 == 0 { sign } else { -sign };
                    out.push((p, s));
                }
            }
            out
        }
        let k = w.grade();
        let mut acc = Exact::zero();
        for (mask, c) in w.terms() {
            if c.is_zero() {
                continue;
            }
            let axes: Vec<usize> = (0..w.dim()).filter(|i| mask & (1 << i) != 0).collect();
            for (perm, sign) in permutations(k) {
                let mut prod = c.clone();
                for (slot, &p) in perm.iter().enumerate() {
                    prod *= vs[slot].comps()[axes[p]].clone();
                }
                if sign < 0 {
                    prod = -prod;
                }
                acc += prod;
            }
        }
        acc
    }

    #[test]
    fn pullback_agrees_with_permutation_oracle() {
        let mut rng = crate::rng::seeded(19);
        for _ in 0..10 {
            let t: LinearMap<Exact> = crate::rng::random_linear_map(&mut rng, 5);
            let w: FQ = crate::rng::random_form(&mut rng, 5, 3);
            let back = t.pullback(&w);
            for (mask, c) in back.terms() {
                let vs: Vec<Vector<Exact>> =
                    (0..5).filter(|i| mask & (1 << i) != 0).map(|i| t.column(i)).collect();
                assert_eq!(*c, eval_by_permutations(&w, &vs));
            }
        }
    }

    #[test]
    fn det_id_plus_skew_examples() {
        // Block skew with parameters a, b: det = (1+a^2)(1+b^2).
        let mut f = FQ::zero(4, 2);
        *f.coeff_mut(0b0011) = Exact::from_ratio(3, 2);
        *f.coeff_mut(0b1100) = Exact::from_ratio(-5, 7);
        let m = SkewEndo::sharp_two_form(&f);
        let expect = (Exact::one() + Exact::from_ratio(9, 4))
            * (Exact::one() + Exact::from_ratio(25, 49));
        assert_eq!(m.det_id_plus(), expect);
    }

    fn small_rational() -> impl Strategy<Value = Exact> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Exact::from_ratio(n, d))
    }

    fn rational_form(dim: usize, grade: usize) -> impl Strategy<Value = FQ> {
        proptest::collection::vec(small_rational(), binomial(dim, grade)).prop_map(move |coeffs| {
            let mut f = FQ::zero(dim, grade);
            for (slot, c) in coeffs.into_iter().enumerate() {
                f.coeffs[slot] = c;
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hodge_involution_sign(f in rational_form(6, 3)) {
            // The exhaustive sweep over all (n, k) runs in the identity
            // suite; this spot-checks the odd case k(n-k) = 9.
            let twice = f.hodge().hodge();
            prop_assert_eq!(twice, -&f);
        }

        #[test]
        fn wedge_graded_commutativity(a in rational_form(7, 2), b in rational_form(7, 3)) {
            let ab = a.wedge(&b);
            let ba = b.wedge(&a);
            prop_assert_eq!(ab, ba); // (-1)^{2*3} = +1
        }

        #[test]
        fn wedge_odd_grades_anticommute(a in rational_form(7, 1), b in rational_form(7, 3)) {
            prop_assert_eq!(a.wedge(&b), -&b.wedge(&a));
        }

        #[test]
        fn hodge_is_isometry(a in rational_form(7, 2), b in rational_form(7, 2)) {
            prop_assert_eq!(a.hodge().inner(&b.hodge()), a.inner(&b));
        }

        #[test]
        fn wedge_pairing_is_inner(a in rational_form(7, 3), b in rational_form(7, 3)) {
            // a ^ *b = <a, b> vol
            let pairing = a.wedge(&b.hodge());
            let mut expect = FQ::zero(7, 7);
            expect.coeffs[0] = a.inner(&b);
            prop_assert_eq!(pairing, expect);
        }

        #[test]
        fn interior_star_flat_relations(
            a in rational_form(7, 2),
            comps in proptest::collection::vec(small_rational(), 7),
        ) {
            let v = Vector::new(comps);
            // i(v) * a = (-1)^k * (v^flat ^ a), k = grade(a)
            let lhs = a.hodge().interior(&v);
            let rhs = v.flat().wedge(&a).hodge();
            prop_assert_eq!(lhs, rhs); // k = 2 even
            // *(i(v) a) = (-1)^{k+1} v^flat ^ *a
            let lhs2 = a.interior(&v).hodge();
            let rhs2 = -&v.flat().wedge(&a.hodge());
            prop_assert_eq!(lhs2, rhs2);
        }

        #[test]
        fn interior_is_antiderivation(
            a in rational_form(6, 2),
            b in rational_form(6, 2),
            comps in proptest::collection::vec(small_rational(), 6),
        ) {
            let v = Vector::new(comps);
            let lhs = a.wedge(&b).interior(&v);
            let rhs = &a.interior(&v).wedge(&b) + &a.wedge(&b.interior(&v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn det_id_plus_skew_at_least_one(f in rational_form(6, 2)) {
            let det = SkewEndo::sharp_two_form(&f).det_id_plus();
            prop_assert!((det - Exact::one()).signum() >= 0);
        }
    }
}
