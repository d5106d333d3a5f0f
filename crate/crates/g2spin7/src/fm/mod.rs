//! The graph transform: polynomial sections of a torus fibration, the
//! connections they induce, residual operators for the deformed flat
//! connection equations, and pointwise equivalence sweeps between the
//! geometry of a graph and the analysis of its connection.
//!
//! Curvature is handled in real-coefficient form throughout: the stored
//! 2-form `F` is the connection curvature divided by `sqrt(-1)`, so odd
//! powers of the honest curvature pick up a sign relative to even ones.
//! The residual operators below bake those signs in; see the crate docs.

pub mod poly;
pub mod section;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::form::{Form, LinearMap, SkewEndo, Vector};
use crate::g2::G2Data;
use crate::report::{classify, classify_exact, Status};
use crate::scalar::Scalar;
use crate::spin7::{asd_coassoc_check, include_v, Spin7Data};
use section::{CurvatureSample, GraphSection, StructureCase};

/// Internal-axis mask of the base directions in the 7-dimensional model
/// (labels `x^1..x^3`).
const BASE7: u8 = 0b0000_0111;
/// Base directions in the 8-dimensional model (labels `x^0..x^3`).
const BASE8: u8 = 0b0000_1111;

/// Coefficient of the volume form in a top-degree form.
fn top_coeff<S: Scalar>(f: &Form<S>) -> S {
    assert_eq!(f.grade(), f.dim(), "need a top-degree form");
    f.hodge().coeffs()[0].clone()
}

/// Every nonzero term must pair one base index with one fiber index.
fn assert_mixed_shape<S: Scalar>(f: &Form<S>, base_mask: u8, what: &str) {
    assert_eq!(f.grade(), 2, "{what} must have degree 2");
    for (mask, c) in f.terms() {
        if !c.is_zero() {
            assert_eq!(
                (mask & base_mask).count_ones(),
                1,
                "{what} must pair base with fiber directions"
            );
        }
    }
}

/// Residual pair of the deformed flat equations for a G2 connection with
/// curvature `sqrt(-1) F`, where `F` is a real 2-form on R^7. The
/// connection solves the equations iff both degree-6 forms vanish.
pub fn ddt_residual_g2<S: Scalar>(g2: &G2Data<S>, f: &Form<S>) -> (Form<S>, Form<S>) {
    assert_eq!((f.dim(), f.grade()), (7, 2));
    let f2 = f.wedge(f);
    let r1 = &g2.star_phi.wedge(f) - &f.wedge(&f2).scaled(1, 6);
    let r2 = g2.phi.wedge(&f2.hodge());
    (r1, r2)
}

/// Residual pair of the deformed flat equations for a Spin(7) connection
/// with curvature `sqrt(-1) F` on R^8: the 7-summand projections of
/// `F - *F^3/6` (degree 2) and of `F^2` (degree 4).
pub fn ddt_residual_spin7<S: Scalar>(sp: &Spin7Data<S>, f: &Form<S>) -> (Form<S>, Form<S>) {
    assert_eq!((f.dim(), f.grade()), (8, 2));
    let f2 = f.wedge(f);
    let arg = f - &f.wedge(&f2).hodge().scaled(1, 6);
    let r1 = sp.project7(2, &arg).expect("degree 2 projects");
    let r2 = sp.project7(4, &f2).expect("degree 4 projects");
    (r1, r2)
}

/// The Spin(7) residual pair of a 7-dimensional curvature form seen
/// through the inclusion R^7 -> R^8, in the degree-6 presentation:
/// `(pi^6_7(*F~ - F~^3/6), pi^4_7(F~^2))` with `F~` the included form.
/// Used to reduce the coassociative fibration to the Cayley one.
pub fn ddt_residual_spin7_embedded<S: Scalar>(
    sp: &Spin7Data<S>,
    f7: &Form<S>,
) -> (Form<S>, Form<S>) {
    assert_eq!((f7.dim(), f7.grade()), (7, 2));
    let ft = include_v(f7);
    let f2 = ft.wedge(&ft);
    let arg = &ft.hodge() - &ft.wedge(&f2).scaled(1, 6);
    let r1 = sp.project7(6, &arg).expect("degree 6 projects");
    let r2 = sp.project7(4, &f2).expect("degree 4 projects");
    (r1, r2)
}

/// Pointwise calibration defect of a graph tangent plane, in the shape
/// native to each structure.
#[derive(Clone, Debug)]
pub enum CalibrationResidual<S: Scalar> {
    /// Associative case: a 1-form vanishing iff the plane is associative.
    OneForm(Form<S>),
    /// Coassociative case: the four evaluations of the 3-form against
    /// triples from the frame.
    PhiValues([S; 4]),
    /// Cayley case: the 7-summand projection of the frame 4-form.
    Tau(Form<S>),
}

impl<S: Scalar> CalibrationResidual<S> {
    pub fn norm_sq(&self) -> S {
        match self {
            CalibrationResidual::OneForm(f) => f.norm_sq(),
            CalibrationResidual::PhiValues(vs) => {
                vs.iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone())
            }
            CalibrationResidual::Tau(f) => f.norm_sq(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CalibrationResidual::OneForm(f) => f.is_zero(),
            CalibrationResidual::PhiValues(vs) => vs.iter().all(S::is_zero),
            CalibrationResidual::Tau(f) => f.is_zero(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().to_f64().max(0.0).sqrt()
    }
}

/// Calibration residual of the section's tangent plane at `x`.
pub fn graph_calibration_residual<S: Scalar>(
    sp: &Spin7Data<S>,
    section: &GraphSection<S>,
    x: &[S],
) -> CalibrationResidual<S> {
    let frame = section.tangent_frame_at(x);
    match section.case() {
        StructureCase::G2Assoc => {
            let fr = [frame[0].clone(), frame[1].clone(), frame[2].clone()];
            CalibrationResidual::OneForm(sp.g2.associative_residual(&fr))
        }
        StructureCase::G2Coassoc => {
            let fr = [frame[0].clone(), frame[1].clone(), frame[2].clone(), frame[3].clone()];
            CalibrationResidual::PhiValues(sp.g2.coassociative_residual(&fr))
        }
        StructureCase::Spin7 => {
            let fr = [frame[0].clone(), frame[1].clone(), frame[2].clone(), frame[3].clone()];
            CalibrationResidual::Tau(sp.tau(&fr))
        }
    }
}

/// Both computations of the split residual pair of a Cayley-graph
/// connection with curvature split `F = dx^0 ^ F1 + F2` (both pieces
/// 7-dimensional, `F1` a fiber 1-form, `F2` mixed): the closed formulas
/// in `(F1, F2)` alone, and the expansion through the graph tangent
/// frame `v_k = d/dx^k + (i(d/dx^k) F2)#`, `k = 1..3`. The two must agree
/// identically, as must the two evaluations of the frame scalar and of
/// the mixing 1-form.
#[derive(Clone, Debug)]
pub struct JSplit<S: Scalar> {
    /// Degree-6 residual, closed formula.
    pub j1: Form<S>,
    /// Degree-6 residual, closed formula.
    pub j2: Form<S>,
    /// Same residuals from the tangent-frame expansion.
    pub j1_frames: Form<S>,
    pub j2_frames: Form<S>,
    /// `phi(v1, v2, v3)` evaluated directly.
    pub frame_phi: S,
    /// The same scalar via `1 - *(phi ^ F2^2)/2`.
    pub frame_phi_formula: S,
    /// `sum_k phi(F1#, v_{k+1}, v_{k+2}) dx^k` evaluated directly.
    pub mix: Form<S>,
    /// The same 1-form via `-*(F1 ^ F2 ^ phi)`.
    pub mix_formula: Form<S>,
}

impl<S: Scalar> JSplit<S> {
    /// Largest disagreement between the two routes, as a float norm.
    pub fn route_defect(&self) -> f64 {
        let d1 = (&self.j1 - &self.j1_frames).norm_sq().to_f64();
        let d2 = (&self.j2 - &self.j2_frames).norm_sq().to_f64();
        let dphi = {
            let d = self.frame_phi.clone() - self.frame_phi_formula.clone();
            d.to_f64().powi(2)
        };
        let dmix = (&self.mix - &self.mix_formula).norm_sq().to_f64();
        d1.max(d2).max(dphi).max(dmix).max(0.0).sqrt()
    }

    pub fn routes_agree_exactly(&self) -> bool {
        self.j1 == self.j1_frames
            && self.j2 == self.j2_frames
            && self.frame_phi == self.frame_phi_formula
            && self.mix == self.mix_formula
    }
}

/// Splits the Cayley residual pair of `F = dx^0 ^ F1 + F2`.
///
/// `f1` must be a fiber 1-form on R^7 (labels 4..7) and `f2` a mixed
/// 2-form (one base, one fiber index per term); these are exactly the
/// shapes produced by [`GraphSection::curvature_at`] in the Cayley case.
pub fn j_split<S: Scalar>(g2: &G2Data<S>, f1: &Form<S>, f2: &Form<S>) -> JSplit<S> {
    assert_eq!((f1.dim(), f1.grade()), (7, 1), "F1 must be a 1-form on R^7");
    for (mask, c) in f1.terms() {
        if !c.is_zero() {
            assert_eq!(mask & BASE7, 0, "F1 must be a fiber form");
        }
    }
    assert_eq!(f2.dim(), 7);
    assert_mixed_shape(f2, BASE7, "F2");

    let phi = &g2.phi;
    let half = S::from_ratio(1, 2);
    let f2sq = f2.wedge(f2);

    // Closed route.
    let frame_phi_formula = S::one() - top_coeff(&phi.wedge(&f2sq)) * half.clone();
    let mix_formula = -&f1.wedge(f2).wedge(phi).hodge();
    let j1 = &(&(&f2.wedge(&f2sq).scaled(1, 6) - &g2.star_phi.wedge(f2))
        - &f1.hodge().scale(&frame_phi_formula))
        - &mix_formula.wedge(&f2.hodge());
    let j2 = &phi.wedge(&f2sq.hodge()).scale(&half) - &f1.wedge(f2).wedge(phi);

    // Frame route: the three tangent vectors of the graph over the
    // 3-torus directions, with the fiber tilt read off F2.
    let vs: Vec<Vector<S>> = (0..3)
        .map(|k| {
            let e = Vector::basis(7, k);
            &e + &f2.interior(&e).sharp_vector()
        })
        .collect();
    let frame_phi = phi.eval(&vs);
    let f1_sharp = f1.sharp_vector();
    let mut mix = Form::zero(7, 1);
    let mut j1_frames = &f2.wedge(&f2sq).scaled(1, 6) - &g2.star_phi.wedge(f2);
    j1_frames = &j1_frames - &f1.hodge().scale(&frame_phi);
    let mut j2_frames = phi.wedge(&f2sq.hodge()).scale(&half);
    for k in 0..3 {
        let c = phi.eval(&[f1_sharp.clone(), vs[(k + 1) % 3].clone(), vs[(k + 2) % 3].clone()]);
        *mix.coeff_mut(1 << k) = c.clone();
        let dxk = Form::basis(7, &[k]);
        j1_frames = &j1_frames + &f2.interior(&Vector::basis(7, k)).hodge().scale(&c);
        j2_frames = &j2_frames + &dxk.hodge().scale(&c);
    }

    JSplit { j1, j2, j1_frames, j2_frames, frame_phi, frame_phi_formula, mix, mix_formula }
}

/// The pair of identities tying the split residuals to the projected
/// 8-dimensional residuals of `F = dx^0 ^ F1 + F2`:
/// `*J1 = 2 lam2^{-1}(pi^2_7(-F + *F^3/6))` and
/// `*J2 = -sqrt(2) lam4^{-1}(pi^4_7(F^2))`
/// (Hodge stars on the left are 7-dimensional). Returns the two
/// (lhs, rhs) pairs for comparison.
pub fn j_split_lambda_routes<S: Scalar>(
    sp: &Spin7Data<S>,
    f1: &Form<S>,
    f2: &Form<S>,
) -> [(Form<S>, Form<S>); 2] {
    let js = j_split(&sp.g2, f1, f2);
    let f8 = &Form::basis(8, &[0]).wedge(&include_v(f1)) + &include_v(f2);
    let f8sq = f8.wedge(&f8);
    let arg = &f8.wedge(&f8sq).hodge().scaled(1, 6) - &f8;
    let p2 = sp.project7(2, &arg).expect("degree 2 projects");
    let rhs1 = sp.lambda_inv(2, &p2).expect("lambda 2 inverts").scaled(2, 1);
    let p4 = sp.project7(4, &f8sq).expect("degree 4 projects");
    let rhs2 = sp.lambda_inv(4, &p4).expect("lambda 4 inverts").scale(&-S::sqrt2());
    [(js.j1.hodge(), rhs1), (js.j2.hodge(), rhs2)]
}

/// Scalar identity equating the calibration defect and residual norms of
/// a mixed (graph-shaped) 2-form on R^7 with the squared volume
/// distortion of the graph: returns
/// `((1 - <F^2,*phi>/2)^2 + |*phi^F - F^3/6|^2 + |phi^*F^2|^2/4, det(id + F#))`,
/// which are equal.
pub fn associator_equality<S: Scalar>(g2: &G2Data<S>, f: &Form<S>) -> (S, S) {
    assert_eq!(f.dim(), 7);
    assert_mixed_shape(f, BASE7, "F");
    let (r1, r2) = ddt_residual_g2(g2, f);
    let t = S::one() - f.wedge(f).inner(&g2.star_phi) * S::from_ratio(1, 2);
    let lhs = t.clone() * t + r1.norm_sq() + r2.norm_sq() * S::from_ratio(1, 4);
    let rhs = SkewEndo::sharp_two_form(f).det_id_plus();
    (lhs, rhs)
}

/// The 8-dimensional analogue for mixed 2-forms on R^8: returns
/// `((1 - <F^2,Phi>/2 + *F^4/24)^2 + 4|pi^2_7(F - *F^3/6)|^2 + 2|pi^4_7(F^2)|^2, det(id + F#))`.
pub fn cayley_equality<S: Scalar>(sp: &Spin7Data<S>, f: &Form<S>) -> (S, S) {
    assert_eq!(f.dim(), 8);
    assert_mixed_shape(f, BASE8, "F");
    let f2 = f.wedge(f);
    let t = S::one() - f2.inner(&sp.phi4) * S::from_ratio(1, 2)
        + top_coeff(&f2.wedge(&f2)) * S::from_ratio(1, 24);
    let (r1, r2) = ddt_residual_spin7(sp, f);
    let lhs = t.clone() * t
        + r1.norm_sq() * S::from_int(4)
        + r2.norm_sq() * S::from_int(2);
    let rhs = SkewEndo::sharp_two_form(f).det_id_plus();
    (lhs, rhs)
}

/// Sup-norm of one named residual over a sweep.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub id: &'static str,
    pub statement: &'static str,
    /// Largest float norm over all evaluated points.
    pub sup: f64,
    /// Exact mode: the residual was exactly zero at every point.
    pub exact_zero: bool,
    /// Number of points where this residual was evaluated (routes guarded
    /// by calibration or invertibility skip points).
    pub points: usize,
    pub status: Status,
}

/// Verdict of one zero/nonzero status agreement over a sweep.
#[derive(Clone, Debug)]
pub struct SweepAgreement {
    pub id: &'static str,
    pub statement: &'static str,
    /// Agreement held at every decided point.
    pub holds: bool,
    pub decided_points: usize,
    /// Points where some input status fell in the indeterminate band.
    pub indeterminate_points: usize,
}

/// Aggregate of a pointwise equivalence sweep over a section's grid.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub case: StructureCase,
    pub points: usize,
    pub residuals: Vec<SweepEntry>,
    pub agreements: Vec<SweepAgreement>,
    /// Monomials of the symbolic exterior derivative of the curvature
    /// that failed to cancel; nonzero means the transform is broken.
    pub closedness_defects: usize,
    /// Per-point anomalies: singular transports, undetermined
    /// orientations, support failures.
    pub notes: Vec<String>,
}

impl Sweep {
    /// All agreements hold and nothing was left undecided.
    pub fn all_agree(&self) -> bool {
        self.agreements.iter().all(|a| a.holds && a.indeterminate_points == 0)
            && self.closedness_defects == 0
    }
}

struct Accum {
    id: &'static str,
    statement: &'static str,
    sup: f64,
    exact_zero: bool,
    points: usize,
    worst_scale: f64,
    any_float: bool,
}

impl Accum {
    fn new(id: &'static str, statement: &'static str) -> Self {
        Accum { id, statement, sup: 0.0, exact_zero: true, points: 0, worst_scale: 0.0, any_float: false }
    }

    fn entry(&self) -> SweepEntry {
        let status = if self.any_float {
            classify(self.sup, self.worst_scale)
        } else {
            classify_exact(self.exact_zero)
        };
        SweepEntry {
            id: self.id,
            statement: self.statement,
            sup: self.sup,
            exact_zero: self.exact_zero && !self.any_float,
            points: self.points,
            status,
        }
    }
}

struct AgreeAccum {
    id: &'static str,
    statement: &'static str,
    holds: bool,
    decided: usize,
    indeterminate: usize,
}

impl AgreeAccum {
    fn new(id: &'static str, statement: &'static str) -> Self {
        AgreeAccum { id, statement, holds: true, decided: 0, indeterminate: 0 }
    }

    /// Records one point. `None` statuses mean the claim does not apply.
    fn record(&mut self, lhs: Option<Status>, rhs: Option<Status>) {
        match (lhs, rhs) {
            (Some(Status::Indeterminate), _) | (_, Some(Status::Indeterminate)) => {
                self.indeterminate += 1;
            }
            (Some(l), Some(r)) => {
                self.decided += 1;
                if l != r {
                    self.holds = false;
                }
            }
            _ => {}
        }
    }

    fn agreement(&self) -> SweepAgreement {
        SweepAgreement {
            id: self.id,
            statement: self.statement,
            holds: self.holds,
            decided_points: self.decided,
            indeterminate_points: self.indeterminate,
        }
    }
}

/// One measured residual at one point.
struct Measured {
    norm: f64,
    exact_zero: bool,
    status: Status,
}

fn measure<S: Scalar>(norm_sq: S, scale: f64) -> Measured {
    let norm = norm_sq.to_f64().max(0.0).sqrt();
    if S::IS_EXACT {
        let z = norm_sq.is_zero();
        Measured { norm, exact_zero: z, status: classify_exact(z) }
    } else {
        Measured { norm, exact_zero: false, status: classify(norm, scale) }
    }
}

fn measure_float<S: Scalar>(norm: f64, exact_zero_hint: Option<bool>, scale: f64) -> Measured {
    if S::IS_EXACT {
        let z = exact_zero_hint.unwrap_or(norm == 0.0);
        Measured { norm, exact_zero: z, status: classify_exact(z) }
    } else {
        Measured { norm, exact_zero: false, status: classify(norm, scale) }
    }
}

fn record(acc: &mut Accum, m: &Measured, scale: f64, is_float_mode: bool) {
    acc.sup = acc.sup.max(m.norm);
    acc.exact_zero &= m.exact_zero;
    acc.points += 1;
    acc.worst_scale = acc.worst_scale.max(scale);
    acc.any_float |= is_float_mode;
}

/// Status of "both residuals in the pair are zero".
fn pair_status(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Indeterminate, _) | (_, Status::Indeterminate) => Status::Indeterminate,
        (Status::Zero, Status::Zero) => Status::Zero,
        _ => Status::Nonzero,
    }
}

fn point_scale<S: Scalar>(sample: &CurvatureSample<S>, frame: &[Vector<S>]) -> f64 {
    let mut s: f64 = 1.0;
    s = s.max(sample.f.max_abs());
    for v in frame {
        for c in v.comps() {
            s = s.max(c.to_f64().abs());
        }
    }
    s
}

/// Walks the section's grid and checks, point by point, that the
/// geometric state of the graph (calibrated or not, base curvature
/// anti-self-dual or not) matches the vanishing of the connection-side
/// residuals, through every route the structure admits. Residual
/// sup-norms, agreement verdicts, and per-point anomalies are aggregated;
/// points where a guarded route does not apply are skipped for that route
/// and counted in its entry.
pub fn equivalence_sweep<S: Scalar>(sp: &Spin7Data<S>, section: &GraphSection<S>) -> Sweep {
    match section.case() {
        StructureCase::G2Assoc => sweep_g2_assoc(sp, section),
        StructureCase::G2Coassoc => sweep_g2_coassoc(sp, section),
        StructureCase::Spin7 => sweep_spin7(sp, section),
    }
}

fn sweep_g2_assoc<S: Scalar>(sp: &Spin7Data<S>, section: &GraphSection<S>) -> Sweep {
    let g2 = &sp.g2;
    let is_float = !S::IS_EXACT;
    let mut geo = Accum::new("geo.assoc", "calibration residual of the tangent frame");
    let mut base = Accum::new("geo.base-curvature", "norm of the base-base curvature");
    let mut sr1 = Accum::new("conn.section.r1", "first residual on the section curvature");
    let mut sr2 = Accum::new("conn.section.r2", "second residual on the section curvature");
    let mut fr1 = Accum::new("conn.full.r1", "first residual on the total curvature");
    let mut fr2 = Accum::new("conn.full.r2", "second residual on the total curvature");
    let mut ag1 = AgreeAccum::new(
        "assoc-iff-section-pair",
        "the frame is associative exactly when the section residual pair vanishes",
    );
    let mut ag2 = AgreeAccum::new(
        "section-r1-decides",
        "the first section residual vanishes exactly when the whole pair does",
    );
    let mut ag3 = AgreeAccum::new(
        "full-pair-iff-assoc-flat",
        "the total residual pair vanishes exactly when the frame is associative and the base curvature is zero",
    );
    let notes = Vec::new();

    for x in section.grid_points() {
        let sample = section.curvature_at(&x).expect("grid point lies in the domain");
        let frame = section.tangent_frame_at(&x);
        let scale = point_scale(&sample, &frame);

        let cal = graph_calibration_residual(sp, section, &x);
        let m_geo = measure(cal.norm_sq(), scale);
        let m_base = measure(sample.f_base.norm_sq(), scale);
        let (a, b) = ddt_residual_g2(g2, &sample.f_sect);
        let m_sr1 = measure(a.norm_sq(), scale);
        let m_sr2 = measure(b.norm_sq(), scale);
        let (a, b) = ddt_residual_g2(g2, &sample.f);
        let m_fr1 = measure(a.norm_sq(), scale);
        let m_fr2 = measure(b.norm_sq(), scale);

        record(&mut geo, &m_geo, scale, is_float);
        record(&mut base, &m_base, scale, is_float);
        record(&mut sr1, &m_sr1, scale, is_float);
        record(&mut sr2, &m_sr2, scale, is_float);
        record(&mut fr1, &m_fr1, scale, is_float);
        record(&mut fr2, &m_fr2, scale, is_float);

        let sect_pair = pair_status(m_sr1.status, m_sr2.status);
        let full_pair = pair_status(m_fr1.status, m_fr2.status);
        ag1.record(Some(m_geo.status), Some(sect_pair));
        ag2.record(Some(m_sr1.status), Some(sect_pair));
        ag3.record(Some(pair_status(m_geo.status, m_base.status)), Some(full_pair));
    }

    Sweep {
        case: section.case(),
        points: section.grid_points().len(),
        residuals: vec![geo.entry(), base.entry(), sr1.entry(), sr2.entry(), fr1.entry(), fr2.entry()],
        agreements: vec![ag1.agreement(), ag2.agreement(), ag3.agreement()],
        closedness_defects: section.curvature_closedness_defects(),
        notes,
    }
}

fn sweep_g2_coassoc<S: Scalar>(sp: &Spin7Data<S>, section: &GraphSection<S>) -> Sweep {
    let g2 = &sp.g2;
    let is_float = !S::IS_EXACT;
    let mut geo = Accum::new("geo.coassoc", "calibration residual of the tangent frame");
    let mut base = Accum::new("geo.base-curvature", "norm of the base-base curvature");
    let mut asd = Accum::new("geo.asd-defect", "self-dual part of the pulled-back base curvature");
    let mut sr1 = Accum::new("conn.section.r1", "first residual on the section curvature");
    let mut sr2 = Accum::new("conn.section.r2", "second residual on the section curvature");
    let mut fr1 = Accum::new("conn.full.r1", "first residual on the total curvature");
    let mut fr2 = Accum::new("conn.full.r2", "second residual on the total curvature");
    let mut er1 = Accum::new("conn.embed.r1", "first embedded residual on the section curvature");
    let mut er2 = Accum::new("conn.embed.r2", "second embedded residual on the section curvature");
    let mut pb = Accum::new("conn.pullback.asd", "calibration wedge of the pulled-back base curvature");
    let mut ag1 = AgreeAccum::new(
        "coassoc-iff-section-pair",
        "the frame is coassociative exactly when the section residual pair vanishes",
    );
    let mut ag2 = AgreeAccum::new(
        "coassoc-iff-embedded-pair",
        "the embedded residual pair agrees with the section pair",
    );
    let mut ag3 = AgreeAccum::new(
        "full-pair-iff-coassoc-asd",
        "the total residual pair vanishes exactly when the frame is coassociative and the pulled-back base curvature is anti-self-dual",
    );
    let mut ag4 = AgreeAccum::new(
        "asd-routes-agree",
        "the calibration-wedge test matches the intrinsic anti-self-duality verdict",
    );
    let mut ag5 = AgreeAccum::new(
        "section-r1-decides",
        "the first section residual vanishes exactly when the whole pair does",
    );
    let mut notes = Vec::new();

    for x in section.grid_points() {
        let sample = section.curvature_at(&x).expect("grid point lies in the domain");
        let frame = section.tangent_frame_at(&x);
        let scale = point_scale(&sample, &frame);

        let cal = graph_calibration_residual(sp, section, &x);
        let m_geo = measure(cal.norm_sq(), scale);
        let m_base = measure(sample.f_base.norm_sq(), scale);
        let (a, b) = ddt_residual_g2(g2, &sample.f_sect);
        let m_sr1 = measure(a.norm_sq(), scale);
        let m_sr2 = measure(b.norm_sq(), scale);
        let (a, b) = ddt_residual_g2(g2, &sample.f);
        let m_fr1 = measure(a.norm_sq(), scale);
        let m_fr2 = measure(b.norm_sq(), scale);
        let (a, b) = ddt_residual_spin7_embedded(sp, &sample.f_sect);
        let m_er1 = measure(a.norm_sq(), scale);
        let m_er2 = measure(b.norm_sq(), scale);

        record(&mut geo, &m_geo, scale, is_float);
        record(&mut base, &m_base, scale, is_float);
        record(&mut sr1, &m_sr1, scale, is_float);
        record(&mut sr2, &m_sr2, scale, is_float);
        record(&mut fr1, &m_fr1, scale, is_float);
        record(&mut fr2, &m_fr2, scale, is_float);
        record(&mut er1, &m_er1, scale, is_float);
        record(&mut er2, &m_er2, scale, is_float);

        let sect_pair = pair_status(m_sr1.status, m_sr2.status);
        let full_pair = pair_status(m_fr1.status, m_fr2.status);
        let embed_pair = pair_status(m_er1.status, m_er2.status);
        ag1.record(Some(m_geo.status), Some(sect_pair));
        ag2.record(Some(embed_pair), Some(sect_pair));
        ag5.record(Some(m_sr1.status), Some(sect_pair));

        // Anti-self-duality of the base curvature transported to the
        // graph tangent plane; defined only over calibrated points.
        let mut m_asd: Option<Measured> = None;
        if m_geo.status == Status::Zero {
            match transported_base(&sample.f_sect, &sample.f_base) {
                Ok(pulled) => {
                    let fr4 = [frame[0].clone(), frame[1].clone(), frame[2].clone(), frame[3].clone()];
                    match asd_coassoc_check(g2, &fr4, &pulled) {
                        Ok(check) => {
                            let m_res = measure(check.residual.norm_sq(), scale);
                            let m_int = measure_float::<S>(
                                check.intrinsic_defect,
                                Some(check.is_asd),
                                scale,
                            );
                            record(&mut pb, &m_res, scale, is_float);
                            record(&mut asd, &m_int, scale, is_float);
                            ag4.record(Some(m_res.status), Some(m_int.status));
                            m_asd = Some(m_int);
                        }
                        Err(e) => notes.push(format!("point {:?}: {e}", point_f64(&x))),
                    }
                }
                Err(e) => notes.push(format!("point {:?}: {e}", point_f64(&x))),
            }
        }

        // Total pair vanishes iff coassociative and transported base
        // curvature anti-self-dual. Over non-calibrated points the left
        // side is already nonzero.
        let lhs = match (m_geo.status, &m_asd) {
            (Status::Zero, Some(m)) => Some(pair_status(Status::Zero, m.status)),
            (Status::Zero, None) => None,
            (s, _) => Some(s),
        };
        ag3.record(lhs, Some(full_pair));
    }

    Sweep {
        case: section.case(),
        points: section.grid_points().len(),
        residuals: vec![
            geo.entry(),
            base.entry(),
            asd.entry(),
            sr1.entry(),
            sr2.entry(),
            fr1.entry(),
            fr2.entry(),
            er1.entry(),
            er2.entry(),
            pb.entry(),
        ],
        agreements: vec![
            ag1.agreement(),
            ag2.agreement(),
            ag3.agreement(),
            ag4.agreement(),
            ag5.agreement(),
        ],
        closedness_defects: section.curvature_closedness_defects(),
        notes,
    }
}

fn sweep_spin7<S: Scalar>(sp: &Spin7Data<S>, section: &GraphSection<S>) -> Sweep {
    let is_float = !S::IS_EXACT;
    let mut geo = Accum::new("geo.tau", "calibration residual of the tangent frame");
    let mut base = Accum::new("geo.base-curvature", "norm of the base-base curvature");
    let mut asd = Accum::new("geo.asd-defect", "self-dual part of the pulled-back base curvature");
    let mut sr1 = Accum::new("conn.section.r1", "first residual on the section curvature");
    let mut sr2 = Accum::new("conn.section.r2", "second residual on the section curvature");
    let mut fr1 = Accum::new("conn.full.r1", "first residual on the total curvature");
    let mut fr2 = Accum::new("conn.full.r2", "second residual on the total curvature");
    let mut cr1 = Accum::new("conn.split.r1", "degree-2 cross residual of base against section");
    let mut cr2 = Accum::new("conn.split.r2", "degree-4 cross residual of base against section");
    let mut pb = Accum::new("conn.pullback.r1", "7-summand projection of the pulled-back base curvature");
    let mut dec = Accum::new(
        "defect.split-decomposition",
        "total residuals minus their section and cross parts",
    );
    let mut ag1 = AgreeAccum::new(
        "cayley-iff-section-pair",
        "the frame is calibrated exactly when the section residual pair vanishes",
    );
    let mut ag2 = AgreeAccum::new(
        "full-pair-iff-cayley-asd",
        "the total residual pair vanishes exactly when the frame is calibrated and the pulled-back base curvature is anti-self-dual",
    );
    let mut ag3 = AgreeAccum::new(
        "cross-pair-iff-asd",
        "over calibrated points the cross residual pair vanishes exactly when the pulled-back base curvature is anti-self-dual",
    );
    let mut ag4 = AgreeAccum::new(
        "pullback-route-iff-cross-pair",
        "over calibrated points the projected pullback vanishes exactly when the cross pair does",
    );
    let mut ag5 = AgreeAccum::new(
        "projection-detects-asd",
        "over calibrated points the 7-summand projection vanishes exactly on anti-self-dual input",
    );
    let mut notes = Vec::new();

    for x in section.grid_points() {
        let sample = section.curvature_at(&x).expect("grid point lies in the domain");
        let frame = section.tangent_frame_at(&x);
        let scale = point_scale(&sample, &frame);
        let fb = &sample.f_base;
        let fs = &sample.f_sect;

        let cal = graph_calibration_residual(sp, section, &x);
        let m_geo = measure(cal.norm_sq(), scale);
        let m_base = measure(fb.norm_sq(), scale);
        let (a2, b2) = ddt_residual_spin7(sp, fs);
        let m_sr1 = measure(a2.norm_sq(), scale);
        let m_sr2 = measure(b2.norm_sq(), scale);
        let (a8, b8) = ddt_residual_spin7(sp, &sample.f);
        let m_fr1 = measure(a8.norm_sq(), scale);
        let m_fr2 = measure(b8.norm_sq(), scale);

        // Cross residuals of the mixed terms in the expansion of the
        // total curvature's powers.
        let fs2 = fs.wedge(fs);
        let c1 = sp
            .project7(2, &(fb - &fb.wedge(&fs2).hodge().scale(&S::from_ratio(1, 2))))
            .expect("degree 2 projects");
        let c2 = sp.project7(4, &fb.wedge(fs)).expect("degree 4 projects");
        let m_cr1 = measure(c1.norm_sq(), scale);
        let m_cr2 = measure(c2.norm_sq(), scale);

        // The total residuals decompose exactly into section plus cross
        // parts; base-base terms beyond the cross ones die for degree
        // reasons on a 4-dimensional base.
        let d1 = &a8 - &(&a2 + &c1);
        let d2 = &b8 - &(&b2 + &c2.scaled(2, 1));
        let m_dec = measure(d1.norm_sq() + d2.norm_sq(), scale);

        record(&mut geo, &m_geo, scale, is_float);
        record(&mut base, &m_base, scale, is_float);
        record(&mut sr1, &m_sr1, scale, is_float);
        record(&mut sr2, &m_sr2, scale, is_float);
        record(&mut fr1, &m_fr1, scale, is_float);
        record(&mut fr2, &m_fr2, scale, is_float);
        record(&mut cr1, &m_cr1, scale, is_float);
        record(&mut cr2, &m_cr2, scale, is_float);
        record(&mut dec, &m_dec, scale, is_float);

        let sect_pair = pair_status(m_sr1.status, m_sr2.status);
        let full_pair = pair_status(m_fr1.status, m_fr2.status);
        let cross_pair = pair_status(m_cr1.status, m_cr2.status);
        ag1.record(Some(m_geo.status), Some(sect_pair));

        // Transported base curvature, defined over calibrated points with
        // invertible transport.
        let mut m_asd: Option<Measured> = None;
        let mut m_pb: Option<Measured> = None;
        if m_geo.status == Status::Zero {
            match transported_base(fs, fb) {
                Ok(pulled) => {
                    let fr4 = [frame[0].clone(), frame[1].clone(), frame[2].clone(), frame[3].clone()];
                    match sp.asd_cayley_check(&fr4, &pulled) {
                        Ok(check) => {
                            let m_res = measure(check.residual.norm_sq(), scale);
                            let m_int = measure_float::<S>(
                                check.intrinsic_defect,
                                Some(check.is_asd),
                                scale,
                            );
                            record(&mut pb, &m_res, scale, is_float);
                            record(&mut asd, &m_int, scale, is_float);
                            m_pb = Some(m_res);
                            m_asd = Some(m_int);
                        }
                        Err(e) => notes.push(format!("point {:?}: {e}", point_f64(&x))),
                    }
                }
                Err(e) => notes.push(format!("point {:?}: {e}", point_f64(&x))),
            }
        }

        let lhs_full = match (m_geo.status, &m_asd) {
            (Status::Zero, Some(m)) => Some(pair_status(Status::Zero, m.status)),
            (Status::Zero, None) => None,
            (s, _) => Some(s),
        };
        ag2.record(lhs_full, Some(full_pair));
        if m_geo.status == Status::Zero {
            ag3.record(Some(cross_pair), m_asd.as_ref().map(|m| m.status));
            ag4.record(m_pb.as_ref().map(|m| m.status), Some(cross_pair));
            ag5.record(m_pb.as_ref().map(|m| m.status), m_asd.as_ref().map(|m| m.status));
        }
    }

    Sweep {
        case: section.case(),
        points: section.grid_points().len(),
        residuals: vec![
            geo.entry(),
            base.entry(),
            asd.entry(),
            sr1.entry(),
            sr2.entry(),
            fr1.entry(),
            fr2.entry(),
            cr1.entry(),
            cr2.entry(),
            pb.entry(),
            dec.entry(),
        ],
        agreements: vec![
            ag1.agreement(),
            ag2.agreement(),
            ag3.agreement(),
            ag4.agreement(),
            ag5.agreement(),
        ],
        closedness_defects: section.curvature_closedness_defects(),
        notes,
    }
}

/// Pulls the base-base curvature back to the graph tangent plane through
/// the inverse of `id + F_S#`, the map carrying coordinate base vectors
/// to the tangent frame.
fn transported_base<S: Scalar>(f_sect: &Form<S>, f_base: &Form<S>) -> Result<Form<S>, Error> {
    let t = SkewEndo::sharp_two_form(f_sect).id_plus();
    let t_inv = t.inverse()?;
    Ok(t_inv.pullback(f_base))
}

fn point_f64<S: Scalar>(x: &[S]) -> Vec<f64> {
    x.iter().map(S::to_f64).collect()
}

/// A linear Cayley-graph configuration answering the search for a
/// connection whose first projected residual vanishes while the second
/// does not, at unit Jacobian determinant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchWitness {
    /// Fiber-by-base Jacobian of the linear section.
    pub jacobian: Vec<Vec<f64>>,
    pub det: f64,
    /// Norm of the degree-2 projected residual (should be ~0).
    pub r1_norm: f64,
    /// Norm of the degree-4 projected residual (must be far from 0).
    pub r2_norm: f64,
}

/// Outcome of the randomized search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub witness: Option<SearchWitness>,
    pub restarts: usize,
    /// Smallest value of the penalized objective seen over all restarts.
    pub best_objective: f64,
}

fn witness_residuals(sp: &Spin7Data<f64>, m: &[[f64; 4]; 4]) -> (f64, f64, f64) {
    let mut terms: Vec<([usize; 2], f64)> = Vec::with_capacity(16);
    for (a, row) in m.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            terms.push(([i, 4 + a], c));
        }
    }
    let refs: Vec<(&[usize], f64)> = terms.iter().map(|(ix, c)| (&ix[..], *c)).collect();
    let f = Form::from_labeled_terms(8, 2, &refs);
    let (r1, r2) = ddt_residual_spin7(sp, &f);
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    let det = LinearMap::from_rows(rows).det();
    (r1.norm_sq().sqrt(), r2.norm_sq().sqrt(), det)
}

/// Randomized descent for a linear section whose connection kills the
/// first residual but not the second, restricted to unit-determinant
/// Jacobians (away from that locus the first residual is known to
/// control the second). Float mode only; a found witness is suitable for
/// freezing as a regression fixture.
pub fn counterexample_search(
    sp: &Spin7Data<f64>,
    seed: u64,
    restarts: usize,
    iters: usize,
) -> SearchReport {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let objective = |m: &[[f64; 4]; 4]| {
        let (r1, _r2, det) = witness_residuals(sp, m);
        r1 * r1 + (det - 1.0) * (det - 1.0)
    };
    let mut best_objective = f64::INFINITY;

    for restart in 0..restarts {
        // Mix random starts with structured near-diagonal ones; the
        // diagonal family reaches det 1 easily and descent explores the
        // off-diagonal directions from there.
        let structured = restart % 2 == 1;
        let mut m = [[0.0f64; 4]; 4];
        for (a, row) in m.iter_mut().enumerate() {
            for (i, entry) in row.iter_mut().enumerate() {
                let noise: f64 = rng.gen_range(-1.0..1.0);
                *entry = if !structured {
                    noise
                } else if i == a {
                    1.0 + 0.3 * noise
                } else {
                    0.1 * noise
                };
            }
        }

        let mut step = 0.1;
        let mut cur = objective(&m);
        for _ in 0..iters {
            // Coordinate finite-difference gradient.
            let mut grad = [[0.0f64; 4]; 4];
            let h = 1e-6;
            for a in 0..4 {
                for i in 0..4 {
                    let mut mp = m;
                    mp[a][i] += h;
                    let mut mm = m;
                    mm[a][i] -= h;
                    grad[a][i] = (objective(&mp) - objective(&mm)) / (2.0 * h);
                }
            }
            let gnorm: f64 = grad.iter().flatten().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                break;
            }
            // Backtracking line search.
            let mut advanced = false;
            for _ in 0..30 {
                let mut mt = m;
                for a in 0..4 {
                    for i in 0..4 {
                        mt[a][i] -= step * grad[a][i] / gnorm;
                    }
                }
                let next = objective(&mt);
                if next < cur {
                    m = mt;
                    cur = next;
                    step *= 1.5;
                    advanced = true;
                    break;
                }
                step *= 0.5;
            }
            if !advanced || cur < 1e-24 {
                break;
            }
        }

        best_objective = best_objective.min(cur);
        let (r1, r2, det) = witness_residuals(sp, &m);
        let scale = m.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
        if classify(r1, scale) == Status::Zero
            && (det - 1.0).abs() <= 1e-9 * scale.max(1.0)
            && classify(r2, scale) == Status::Nonzero
        {
            return SearchReport {
                witness: Some(SearchWitness {
                    jacobian: m.iter().map(|r| r.to_vec()).collect(),
                    det,
                    r1_norm: r1,
                    r2_norm: r2,
                }),
                restarts: restart + 1,
                best_objective,
            };
        }
    }

    SearchReport { witness: None, restarts, best_objective }
}

/// Recomputes the residuals of a stored witness and checks it still
/// exhibits the gap.
pub fn verify_witness(sp: &Spin7Data<f64>, w: &SearchWitness) -> bool {
    let mut m = [[0.0f64; 4]; 4];
    for (a, row) in w.jacobian.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            m[a][i] = c;
        }
    }
    let (r1, r2, det) = witness_residuals(sp, &m);
    let scale = m.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
    classify(r1, scale) == Status::Zero
        && (det - 1.0).abs() <= 1e-9 * scale.max(1.0)
        && classify(r2, scale) == Status::Nonzero
}
