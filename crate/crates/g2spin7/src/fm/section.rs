//! Graph sections of the torus fibrations and their transform curvature.
//!
//! A section is a polynomial map `f` from the base into the torus fiber
//! together with a polynomial base potential `A`. Its transform is the
//! unitary connection `d + sqrt(-1)(sum A^j e^j + sum f^a e^a)`; we store
//! the real coefficient 1-form and differentiate symbolically, so the
//! curvature samples below are exact in exact mode.

use crate::error::Error;
use crate::fm::poly::Poly;
use crate::form::{axis_label, merge_sign, Form, Vector};
use crate::scalar::Scalar;
use serde::Deserialize;
use std::collections::BTreeMap;

/// Which fibration carries the graph.
///
/// The base/fiber split fixes both the ambient dimension and which axes
/// the section may depend on:
///
/// * `G2Assoc`: dim 7, base `x^1..x^3`, fiber `y^4..y^7`; graphs are
///   3-dimensional and calibrated by `phi`.
/// * `G2Coassoc`: dim 7, base `y^4..y^7`, fiber `x^1..x^3`; graphs are
///   4-dimensional and calibrated by `*phi`.
/// * `Spin7`: dim 8, base `x^0..x^3`, fiber `y^4..y^7`; graphs are
///   4-dimensional and calibrated by `Phi`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureCase {
    G2Assoc,
    G2Coassoc,
    Spin7,
}

impl StructureCase {
    pub fn name(self) -> &'static str {
        match self {
            StructureCase::G2Assoc => "g2_assoc",
            StructureCase::G2Coassoc => "g2_coassoc",
            StructureCase::Spin7 => "spin7",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "g2_assoc" => Ok(StructureCase::G2Assoc),
            "g2_coassoc" => Ok(StructureCase::G2Coassoc),
            "spin7" => Ok(StructureCase::Spin7),
            other => Err(Error::Invalid(format!(
                "unknown case {other:?}; expected g2_assoc, g2_coassoc, or spin7"
            ))),
        }
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            StructureCase::Spin7 => 8,
            _ => 7,
        }
    }

    /// Internal axis indices of the base coordinates, in variable order.
    pub fn base_axes(self) -> &'static [usize] {
        match self {
            StructureCase::G2Assoc => &[0, 1, 2],
            StructureCase::G2Coassoc => &[3, 4, 5, 6],
            StructureCase::Spin7 => &[0, 1, 2, 3],
        }
    }

    /// Internal axis indices of the fiber coordinates.
    pub fn fiber_axes(self) -> &'static [usize] {
        match self {
            StructureCase::G2Assoc => &[3, 4, 5, 6],
            StructureCase::G2Coassoc => &[0, 1, 2],
            StructureCase::Spin7 => &[4, 5, 6, 7],
        }
    }

    pub fn base_dim(self) -> usize {
        self.base_axes().len()
    }

    pub fn fiber_dim(self) -> usize {
        self.fiber_axes().len()
    }

    /// External labels of the base axes (the `j` of `A^j`).
    pub fn base_labels(self) -> Vec<usize> {
        self.base_axes().iter().map(|&i| axis_label(self.ambient_dim(), i)).collect()
    }

    /// External labels of the fiber axes (the `a` of `f^a`).
    pub fn fiber_labels(self) -> Vec<usize> {
        self.fiber_axes().iter().map(|&i| axis_label(self.ambient_dim(), i)).collect()
    }
}

/// Polynomial graph section plus base potential over a boxed domain.
#[derive(Clone, Debug)]
pub struct GraphSection<S: Scalar> {
    case: StructureCase,
    /// Fiber components `f^a`, in `fiber_axes` order, as polynomials in
    /// the base variables.
    f: Vec<Poly<S>>,
    /// Base potential components `A^j`, in `base_axes` order.
    a: Vec<Poly<S>>,
    dom_min: Vec<S>,
    dom_max: Vec<S>,
    grid: usize,
}

impl<S: Scalar> GraphSection<S> {
    pub fn new(
        case: StructureCase,
        f: Vec<Poly<S>>,
        a: Vec<Poly<S>>,
        dom_min: Vec<S>,
        dom_max: Vec<S>,
        grid: usize,
    ) -> Result<Self, Error> {
        let nb = case.base_dim();
        if f.len() != case.fiber_dim() {
            return Err(Error::Invalid(format!(
                "expected {} fiber components, got {}",
                case.fiber_dim(),
                f.len()
            )));
        }
        if a.len() != nb {
            return Err(Error::Invalid(format!(
                "expected {} potential components, got {}",
                nb,
                a.len()
            )));
        }
        if dom_min.len() != nb || dom_max.len() != nb {
            return Err(Error::Invalid("domain bounds must have base arity".into()));
        }
        if grid == 0 {
            return Err(Error::Invalid("grid must be positive".into()));
        }
        for p in f.iter().chain(&a) {
            if p.nvars() != nb {
                return Err(Error::Invalid("component arity differs from base arity".into()));
            }
            p.check_degree_cap()?;
        }
        for (lo, hi) in dom_min.iter().zip(&dom_max) {
            if (hi.clone() - lo.clone()).signum() < 0 {
                return Err(Error::Invalid("domain has min > max".into()));
            }
        }
        Ok(GraphSection { case, f, a, dom_min, dom_max, grid })
    }

    /// Section with constant fiber values and zero potential over the
    /// unit box.
    pub fn constant(case: StructureCase, values: &[S]) -> Self {
        let nb = case.base_dim();
        let f = values.iter().map(|v| Poly::constant(nb, v.clone())).collect();
        let a = vec![Poly::zero(nb); nb];
        GraphSection::unit_box(case, f, a, 5)
    }

    /// Linear section `f^a = sum_j m[a][j] x^j` with zero potential.
    pub fn linear(case: StructureCase, m: &[Vec<S>]) -> Self {
        let nb = case.base_dim();
        assert_eq!(m.len(), case.fiber_dim(), "one row per fiber component");
        let f = m
            .iter()
            .map(|row| {
                assert_eq!(row.len(), nb, "one column per base variable");
                let mut p = Poly::zero(nb);
                for (j, c) in row.iter().enumerate() {
                    p = p.add(&Poly::var(nb, j).scale(c));
                }
                p
            })
            .collect();
        let a = vec![Poly::zero(nb); nb];
        GraphSection::unit_box(case, f, a, 5)
    }

    /// Section over the unit box `[0,1]^base`.
    pub fn unit_box(case: StructureCase, f: Vec<Poly<S>>, a: Vec<Poly<S>>, grid: usize) -> Self {
        let nb = case.base_dim();
        GraphSection::new(
            case,
            f,
            a,
            vec![S::zero(); nb],
            vec![S::one(); nb],
            grid,
        )
        .expect("constructor invariants hold for built-in sections")
    }

    pub fn with_potential(mut self, a: Vec<Poly<S>>) -> Result<Self, Error> {
        if a.len() != self.case.base_dim() {
            return Err(Error::Invalid("potential arity mismatch".into()));
        }
        for p in &a {
            if p.nvars() != self.case.base_dim() {
                return Err(Error::Invalid("component arity differs from base arity".into()));
            }
            p.check_degree_cap()?;
        }
        self.a = a;
        Ok(self)
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        assert!(grid > 0);
        self.grid = grid;
        self
    }

    pub fn case(&self) -> StructureCase {
        self.case
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn fiber_components(&self) -> &[Poly<S>] {
        &self.f
    }

    pub fn potential_components(&self) -> &[Poly<S>] {
        &self.a
    }

    pub fn contains(&self, x: &[S]) -> bool {
        x.len() == self.dom_min.len()
            && x.iter().zip(&self.dom_min).all(|(xi, lo)| (xi.clone() - lo.clone()).signum() >= 0)
            && x.iter().zip(&self.dom_max).all(|(xi, hi)| (hi.clone() - xi.clone()).signum() >= 0)
    }

    /// Grid sample points: `grid` evenly spaced values per axis including
    /// both endpoints (the box midpoint when `grid == 1`), in lexicographic
    /// order with the first base variable slowest.
    pub fn grid_points(&self) -> Vec<Vec<S>> {
        let nb = self.case.base_dim();
        let axis_values: Vec<Vec<S>> = (0..nb)
            .map(|i| {
                let lo = self.dom_min[i].clone();
                let hi = self.dom_max[i].clone();
                if self.grid == 1 {
                    vec![(lo + hi) * S::from_ratio(1, 2)]
                } else {
                    let step = (hi - lo.clone()) * S::from_ratio(1, self.grid as i64 - 1);
                    (0..self.grid)
                        .map(|k| lo.clone() + step.clone() * S::from_int(k as i64))
                        .collect()
                }
            })
            .collect();
        let mut points = vec![Vec::with_capacity(nb)];
        for vals in &axis_values {
            let mut next = Vec::with_capacity(points.len() * vals.len());
            for p in &points {
                for v in vals {
                    let mut q = p.clone();
                    q.push(v.clone());
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }

    /// Jacobian `J[a][j] = df^a/dx^j` at `x` (rows fiber, columns base).
    pub fn jacobian_at(&self, x: &[S]) -> Vec<Vec<S>> {
        self.f
            .iter()
            .map(|fa| (0..self.case.base_dim()).map(|j| fa.partial(j).eval(x)).collect())
            .collect()
    }

    /// Tangent frame of the graph at `x`: one vector
    /// `v_j = d_j + sum_a (df^a/dx^j) d_a` per base axis.
    pub fn tangent_frame_at(&self, x: &[S]) -> Vec<Vector<S>> {
        let dim = self.case.ambient_dim();
        let jac = self.jacobian_at(x);
        self.case
            .base_axes()
            .iter()
            .enumerate()
            .map(|(j, &bj)| {
                let mut v = Vector::basis(dim, bj);
                for (fa, &axis) in self.case.fiber_axes().iter().enumerate() {
                    *v.comp_mut(axis) = jac[fa][j].clone();
                }
                v
            })
            .collect()
    }

    /// Real coefficient 1-form of the transform connection.
    pub fn potential(&self) -> ConnectionPotential<S> {
        let mut comps = Vec::new();
        for (j, &axis) in self.case.base_axes().iter().enumerate() {
            comps.push((axis, self.a[j].clone()));
        }
        for (a, &axis) in self.case.fiber_axes().iter().enumerate() {
            comps.push((axis, self.f[a].clone()));
        }
        comps.sort_by_key(|(axis, _)| *axis);
        ConnectionPotential { case: self.case, comps }
    }

    /// Pointwise curvature of the transform connection.
    pub fn curvature_at(&self, x: &[S]) -> Result<CurvatureSample<S>, Error> {
        if !self.contains(x) {
            return Err(Error::Invalid("sample point outside the section domain".into()));
        }
        let dim = self.case.ambient_dim();
        let base = self.case.base_axes();
        let mut f_base = Form::zero(dim, 2);
        let mut f_sect = Form::zero(dim, 2);

        for (j, &bj) in base.iter().enumerate() {
            let dxj = Form::basis(dim, &[bj]);
            // Base-base part from the potential.
            for (c, &bc) in base.iter().enumerate() {
                if bc == bj {
                    continue;
                }
                let coef = self.a[c].partial(j).eval(x);
                f_base = &f_base + &dxj.wedge(&Form::basis(dim, &[bc])).scale(&coef);
            }
            // Mixed part from the section.
            for (a, &fa) in self.case.fiber_axes().iter().enumerate() {
                let coef = self.f[a].partial(j).eval(x);
                f_sect = &f_sect + &dxj.wedge(&Form::basis(dim, &[fa])).scale(&coef);
            }
        }

        let (f1, f2) = if self.case == StructureCase::Spin7 {
            let jac = self.jacobian_at(x);
            let mut f1 = Form::zero(7, 1);
            let mut f2 = Form::zero(7, 2);
            for (a, &label) in self.case.fiber_labels().iter().enumerate() {
                f1 = &f1 + &Form::from_labeled_terms(7, 1, &[(&[label], jac[a][0].clone())]);
                for j in 1..4 {
                    f2 = &f2
                        + &Form::from_labeled_terms(7, 2, &[(&[j, label], jac[a][j].clone())]);
                }
            }
            (Some(f1), Some(f2))
        } else {
            (None, None)
        };

        Ok(CurvatureSample {
            case: self.case,
            point: x.to_vec(),
            f: &f_base + &f_sect,
            f_base,
            f_sect,
            f1,
            f2,
        })
    }

    /// Symbolic check that the curvature 2-form is closed. Returns the
    /// largest number of grade-3 coefficient polynomials that survive
    /// differentiation; 0 means `dF = 0` identically on the domain.
    pub fn curvature_closedness_defects(&self) -> usize {
        let base = self.case.base_axes();
        let mut two: BTreeMap<u8, Poly<S>> = BTreeMap::new();
        let mut add_terms = |polys: &[Poly<S>], axes: &[usize]| {
            for (c, &axis) in axes.iter().enumerate() {
                for (j, &bj) in base.iter().enumerate() {
                    if bj == axis {
                        continue;
                    }
                    let p = polys[c].partial(j);
                    if p.is_zero() {
                        continue;
                    }
                    let mask = (1u8 << bj) | (1u8 << axis);
                    let signed = if merge_sign(1 << bj, 1 << axis) < 0 { p.scale(&-S::one()) } else { p };
                    let entry = two.entry(mask).or_insert_with(|| Poly::zero(base.len()));
                    *entry = entry.add(&signed);
                }
            }
        };
        add_terms(&self.a, base);
        add_terms(&self.f, self.case.fiber_axes());

        let mut three: BTreeMap<u8, Poly<S>> = BTreeMap::new();
        for (&mask, p) in &two {
            for (j, &bj) in base.iter().enumerate() {
                if mask & (1 << bj) != 0 {
                    continue;
                }
                let q = p.partial(j);
                if q.is_zero() {
                    continue;
                }
                let signed =
                    if merge_sign(1 << bj, mask) < 0 { q.scale(&-S::one()) } else { q };
                let entry =
                    three.entry(mask | (1 << bj)).or_insert_with(|| Poly::zero(base.len()));
                *entry = entry.add(&signed);
            }
        }
        three.values().filter(|p| !p.is_zero()).count()
    }
}

/// Real coefficient 1-form of a transform connection, one polynomial per
/// ambient axis it touches.
#[derive(Clone, Debug)]
pub struct ConnectionPotential<S: Scalar> {
    case: StructureCase,
    comps: Vec<(usize, Poly<S>)>,
}

impl<S: Scalar> ConnectionPotential<S> {
    pub fn case(&self) -> StructureCase {
        self.case
    }

    pub fn components(&self) -> &[(usize, Poly<S>)] {
        &self.comps
    }

    pub fn one_form_at(&self, x: &[S]) -> Form<S> {
        let dim = self.case.ambient_dim();
        let mut out = Form::zero(dim, 1);
        for (axis, p) in &self.comps {
            out = &out + &Form::basis(dim, &[*axis]).scale(&p.eval(x));
        }
        out
    }
}

/// Pointwise curvature data of a transform connection.
///
/// All forms carry real coefficients; the actual curvature of the
/// unitary connection is `sqrt(-1)` times them.
#[derive(Clone, Debug)]
pub struct CurvatureSample<S: Scalar> {
    pub case: StructureCase,
    pub point: Vec<S>,
    /// Base-base part (combinations of base axis pairs only).
    pub f_base: Form<S>,
    /// Mixed base-fiber part.
    pub f_sect: Form<S>,
    /// Total curvature `f_base + f_sect`.
    pub f: Form<S>,
    /// Spin(7) split: the `dy` 1-form with `F_S = dx^0 ^ F_1 + F_2`,
    /// as a dim-7 form. Populated only in the `Spin7` case.
    pub f1: Option<Form<S>>,
    /// Spin(7) split: the `dx^i ^ dy^a` (i >= 1) part, as a dim-7 form.
    pub f2: Option<Form<S>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum CoefValue {
    Str(String),
    Num(f64),
}

#[derive(Deserialize)]
struct RawDomain {
    min: Vec<CoefValue>,
    max: Vec<CoefValue>,
}

#[derive(Deserialize)]
struct RawSection {
    case: String,
    #[serde(default)]
    f: BTreeMap<String, Vec<(CoefValue, Vec<u8>)>>,
    #[serde(default, rename = "A")]
    a: BTreeMap<String, Vec<(CoefValue, Vec<u8>)>>,
    domain: Option<RawDomain>,
    grid: Option<usize>,
}

impl RawSection {
    fn coef_values(&self) -> Vec<&CoefValue> {
        let mut out = Vec::new();
        for terms in self.f.values().chain(self.a.values()) {
            for (c, _) in terms {
                out.push(c);
            }
        }
        if let Some(d) = &self.domain {
            out.extend(d.min.iter());
            out.extend(d.max.iter());
        }
        out
    }
}

/// Reads the section config mode: rational strings force exact, numeric
/// literals force float, and mixing the two is rejected.
pub fn infer_mode(json: &str) -> Result<Mode, Error> {
    let raw: RawSection = serde_json::from_str(json)?;
    let mut mode = None;
    for c in raw.coef_values() {
        let this = match c {
            CoefValue::Str(_) => Mode::Exact,
            CoefValue::Num(_) => Mode::Float,
        };
        match mode {
            None => mode = Some(this),
            Some(m) if m != this => return Err(Error::MixedModes),
            _ => {}
        }
    }
    Ok(mode.unwrap_or(Mode::Exact))
}

pub(crate) fn parse_coef<S: Scalar>(c: &CoefValue) -> Result<S, Error> {
    match c {
        CoefValue::Str(s) => {
            let e = crate::scalar::Exact::parse_rational(s).map_err(Error::CoefficientMode)?;
            Ok(S::from_rational(
                &e.to_rational().expect("parse_rational returns a rational"),
            ))
        }
        CoefValue::Num(x) => S::from_f64(*x).ok_or_else(|| {
            Error::CoefficientMode(format!("float literal {x} is not accepted in exact mode"))
        }),
    }
}

/// Parses a section config. The scalar mode must match what
/// [`infer_mode`] reports for the same input.
pub fn load_section<S: Scalar>(json: &str) -> Result<GraphSection<S>, Error> {
    let raw: RawSection = serde_json::from_str(json)?;
    let case = StructureCase::parse(&raw.case)?;
    let nb = case.base_dim();

    let read_component =
        |map: &BTreeMap<String, Vec<(CoefValue, Vec<u8>)>>, key: &str| -> Result<Poly<S>, Error> {
            match map.get(key) {
                None => Ok(Poly::zero(nb)),
                Some(terms) => {
                    let mut p = Poly::zero(nb);
                    for (c, exps) in terms {
                        if exps.len() != nb {
                            return Err(Error::Invalid(format!(
                                "{key}: exponent tuple must have {nb} entries"
                            )));
                        }
                        let coef: S = parse_coef(c)?;
                        p = p.add(&Poly::from_terms(nb, &[(coef, exps.as_slice())]));
                    }
                    Ok(p)
                }
            }
        };

    let fiber_keys: Vec<String> =
        case.fiber_labels().iter().map(|l| format!("f{l}")).collect();
    let base_keys: Vec<String> = case.base_labels().iter().map(|l| format!("A{l}")).collect();
    for k in raw.f.keys() {
        if !fiber_keys.iter().any(|fk| fk == k) {
            return Err(Error::Invalid(format!(
                "unknown section component {k:?}; expected one of {fiber_keys:?}"
            )));
        }
    }
    for k in raw.a.keys() {
        if !base_keys.iter().any(|bk| bk == k) {
            return Err(Error::Invalid(format!(
                "unknown potential component {k:?}; expected one of {base_keys:?}"
            )));
        }
    }

    let f = fiber_keys
        .iter()
        .map(|k| read_component(&raw.f, k))
        .collect::<Result<Vec<_>, _>>()?;
    let a = base_keys
        .iter()
        .map(|k| read_component(&raw.a, k))
        .collect::<Result<Vec<_>, _>>()?;

    let (dom_min, dom_max) = match &raw.domain {
        None => (vec![S::zero(); nb], vec![S::one(); nb]),
        Some(d) => {
            if d.min.len() != nb || d.max.len() != nb {
                return Err(Error::Invalid(format!("domain bounds must have {nb} entries")));
            }
            (
                d.min.iter().map(parse_coef).collect::<Result<Vec<S>, _>>()?,
                d.max.iter().map(parse_coef).collect::<Result<Vec<S>, _>>()?,
            )
        }
    };

    GraphSection::new(case, f, a, dom_min, dom_max, raw.grid.unwrap_or(5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn curvature_of_a_linear_section_is_the_jacobian_pattern() {
        // f^4 = x^1 in the dim-7 associative fibration.
        let mut rows = vec![vec![Exact::zero(); 3]; 4];
        rows[0][0] = Exact::one();
        let s = GraphSection::linear(StructureCase::G2Assoc, &rows);
        let x = vec![q(1, 2), q(1, 3), q(1, 5)];
        let c = s.curvature_at(&x).unwrap();
        assert!(c.f_base.is_zero());
        assert_eq!(c.f_sect, Form::from_labeled_terms(7, 2, &[(&[1, 4], Exact::one())]));
        assert_eq!(c.f, c.f_sect);
        assert_eq!(s.curvature_closedness_defects(), 0);
    }

    #[test]
    fn spin7_split_recomposes_the_mixed_part() {
        // f^5 = x^0 * x^2 gives F_1 = x^2 dy^5 and F_2 = x^0 dx^2 ^ dy^5.
        let nb = 4;
        let mut f = vec![Poly::zero(nb); 4];
        f[1] = Poly::var(nb, 0).mul(&Poly::var(nb, 2));
        let s = GraphSection::new(
            StructureCase::Spin7,
            f,
            vec![Poly::zero(nb); 4],
            vec![Exact::zero(); 4],
            vec![Exact::one(); 4],
            3,
        )
        .unwrap();
        let x = vec![q(1, 2), q(0, 1), q(1, 3), q(0, 1)];
        let c = s.curvature_at(&x).unwrap();
        let f1 = c.f1.clone().unwrap();
        let f2 = c.f2.clone().unwrap();
        assert_eq!(f1, Form::from_labeled_terms(7, 1, &[(&[5], q(1, 3))]));
        assert_eq!(f2, Form::from_labeled_terms(7, 2, &[(&[2, 5], q(1, 2))]));
        // F_S = dx^0 ^ F_1 + F_2 after inclusion into dim 8.
        let e0 = Form::basis(8, &[0]);
        let rebuilt =
            &e0.wedge(&crate::spin7::include_v(&f1)) + &crate::spin7::include_v(&f2);
        assert_eq!(c.f_sect, rebuilt);
    }

    #[test]
    fn potential_curvature_antisymmetrizes() {
        // A^4 = y^5, A^5 = -y^4 in the coassociative fibration:
        // F_B = -2 dy^4 ^ dy^5.
        let nb = 4;
        let mut a = vec![Poly::zero(nb); 4];
        a[0] = Poly::var(nb, 1);
        a[1] = Poly::var(nb, 0).scale(&-Exact::one());
        let s = GraphSection::constant(StructureCase::G2Coassoc, &vec![Exact::zero(); 3])
            .with_potential(a)
            .unwrap();
        let x = vec![q(1, 7); 4];
        let c = s.curvature_at(&x).unwrap();
        assert_eq!(c.f_base, Form::from_labeled_terms(7, 2, &[(&[4, 5], q(-2, 1))]));
        assert!(c.f_sect.is_zero());
        assert_eq!(s.curvature_closedness_defects(), 0);
    }

    #[test]
    fn grid_points_cover_the_box() {
        let s = GraphSection::constant(StructureCase::G2Assoc, &vec![Exact::zero(); 4]).with_grid(3);
        let pts = s.grid_points();
        assert_eq!(pts.len(), 27);
        assert_eq!(pts[0], vec![Exact::zero(); 3]);
        assert_eq!(pts[26], vec![Exact::one(); 3]);
        assert_eq!(pts[1], vec![Exact::zero(), Exact::zero(), q(1, 2)]);
        assert!(pts.iter().all(|p| s.contains(p)));
    }

    #[test]
    fn section_json_round_trip_and_mode_inference() {
        let json = r#"{
            "case": "spin7",
            "f": {"f4": [["1/2", [1, 0, 0, 0]], ["3", [0, 2, 0, 0]]]},
            "A": {"A0": [["-2/3", [0, 0, 0, 1]]]},
            "domain": {"min": ["0", "0", "0", "0"], "max": ["1", "1", "1", "1"]},
            "grid": 2
        }"#;
        assert_eq!(infer_mode(json).unwrap(), Mode::Exact);
        let s: GraphSection<Exact> = load_section(json).unwrap();
        assert_eq!(s.grid(), 2);
        let x = vec![q(1, 1), q(1, 2), q(0, 1), q(1, 3)];
        let c = s.curvature_at(&x).unwrap();
        // dA^0/dy-part: A^0 = -2/3 x^3 so F_B = -2/3 dx^3 ^ dx^0 = 2/3 dx^0 ^ dx^3.
        assert_eq!(c.f_base, Form::from_labeled_terms(8, 2, &[(&[0, 3], q(2, 3))]));
        // df^4 = 1/2 dx^0 + 6 x^1 dx^1.
        assert_eq!(
            c.f_sect,
            Form::from_labeled_terms(8, 2, &[(&[0, 4], q(1, 2)), (&[1, 4], q(3, 1))])
        );

        let mixed_json = json.replace("\"1/2\"", "0.5");
        assert!(matches!(infer_mode(&mixed_json), Err(Error::MixedModes)));

        let bad = r#"{"case": "spin7", "f": {"f9": []}}"#;
        assert!(load_section::<Exact>(bad).is_err());
    }

    #[test]
    fn float_mode_sections_load() {
        let json = r#"{
            "case": "g2_assoc",
            "f": {"f4": [[0.5, [1, 0, 0]]]},
            "grid": 2
        }"#;
        assert_eq!(infer_mode(json).unwrap(), Mode::Float);
        let s: GraphSection<f64> = load_section(json).unwrap();
        let c = s.curvature_at(&[0.0, 0.0, 0.0]).unwrap();
        assert!((*c.f_sect.coeff_labeled(&[1, 4]) - 0.5).abs() < 1e-15);
        assert!(load_section::<Exact>(json).is_err());
    }
}
