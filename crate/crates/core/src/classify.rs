//! Membership in the bilocality hierarchy across the 1|23 cut.
//!
//! Every class except NS is the convex hull of finitely many boxes of the form
//! `party-1 deterministic response (x) bipartite extremal term`, so membership
//! reduces to a certified convex-hull test over an enumerated vertex set. The
//! hidden variable becomes the vertex index and its distribution the weights.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::constructors::{
    det_box1, det_box2_local, det_box2_oneway, det_box2_twoway, pr_box, BitFn, PairFn, PrVariant,
    Signaling,
};
use crate::error::{Error, Result};
use crate::lp::{
    self, solve_equality_system, solve_feasibility, EqualitySystem, FeasibilityProblem,
    MembershipResult, SystemOutcome, Verdict,
};
use crate::tensor::{no_signaling_check, Box2, Box3, NsReport, ProbTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HierarchyClass {
    Fl,
    Nsbl,
    Tobl,
    /// Decompositions with `p_{2<-3}` terms (party 3 may signal to party 2).
    AtoblLeft,
    /// Decompositions with `p_{2->3}` terms (party 2 may signal to party 3).
    AtoblRight,
    AtoblUnion,
    AtoblHull,
    Bl,
    Ns,
}

impl HierarchyClass {
    /// Finest first; `finest_class` picks the first member in this order.
    pub const ALL: [HierarchyClass; 9] = [
        HierarchyClass::Fl,
        HierarchyClass::Nsbl,
        HierarchyClass::Tobl,
        HierarchyClass::AtoblLeft,
        HierarchyClass::AtoblRight,
        HierarchyClass::AtoblUnion,
        HierarchyClass::AtoblHull,
        HierarchyClass::Bl,
        HierarchyClass::Ns,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HierarchyClass::Fl => "FL",
            HierarchyClass::Nsbl => "NSBL",
            HierarchyClass::Tobl => "TOBL",
            HierarchyClass::AtoblLeft => "ATOBL_LEFT",
            HierarchyClass::AtoblRight => "ATOBL_RIGHT",
            HierarchyClass::AtoblUnion => "ATOBL_UNION",
            HierarchyClass::AtoblHull => "ATOBL_HULL",
            HierarchyClass::Bl => "BL",
            HierarchyClass::Ns => "NS",
        }
    }
}

/// `(subset, superset)` pairs that hold as set inclusions for every box.
/// BL does not imply NS: two-way signaling terms can make the box signal.
pub const INCLUSIONS: [(HierarchyClass, HierarchyClass); 9] = [
    (HierarchyClass::Fl, HierarchyClass::Nsbl),
    (HierarchyClass::Nsbl, HierarchyClass::Tobl),
    (HierarchyClass::Tobl, HierarchyClass::AtoblLeft),
    (HierarchyClass::Tobl, HierarchyClass::AtoblRight),
    (HierarchyClass::AtoblLeft, HierarchyClass::AtoblUnion),
    (HierarchyClass::AtoblRight, HierarchyClass::AtoblUnion),
    (HierarchyClass::AtoblUnion, HierarchyClass::AtoblHull),
    (HierarchyClass::AtoblHull, HierarchyClass::Bl),
    (HierarchyClass::Tobl, HierarchyClass::Ns),
];

impl fmt::Display for HierarchyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HierarchyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        HierarchyClass::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown class {s:?}")))
    }
}

/// Extremal term for parties 2 and 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bipartite {
    /// `o2 = o2(i2)`, `o3 = o3(i3)`.
    Local { o2: BitFn, o3: BitFn },
    Pr(PrVariant),
    /// See [`det_box2_oneway`].
    OneWay { dir: Signaling, local: BitFn, joint: PairFn },
    /// `o2 = o2(i2, i3)`, `o3 = o3(i2, i3)`.
    TwoWay { o2: PairFn, o3: PairFn },
}

impl Bipartite {
    pub fn to_box2(self) -> Box2 {
        match self {
            Bipartite::Local { o2, o3 } => det_box2_local(o2, o3),
            Bipartite::Pr(v) => pr_box(v),
            Bipartite::OneWay { dir, local, joint } => det_box2_oneway(dir, local, joint),
            Bipartite::TwoWay { o2, o3 } => det_box2_twoway(o2, o3),
        }
    }
}

impl fmt::Display for Bipartite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bipartite::Local { o2, o3 } => {
                write!(f, "local[o2=f{}(i2), o3=f{}(i3)]", o2.code(), o3.code())
            }
            Bipartite::Pr(v) => write!(f, "{v}"),
            Bipartite::OneWay { dir: Signaling::TwoToThree, local, joint } => {
                write!(f, "2->3[o2=f{}(i2), o3=g{}(i2,i3)]", local.code(), joint.code())
            }
            Bipartite::OneWay { dir: Signaling::ThreeToTwo, local, joint } => {
                write!(f, "2<-3[o2=g{}(i2,i3), o3=f{}(i3)]", joint.code(), local.code())
            }
            Bipartite::TwoWay { o2, o3 } => {
                write!(f, "two-way[o2=g{}(i2,i3), o3=g{}(i2,i3)]", o2.code(), o3.code())
            }
        }
    }
}

/// Strategy behind one vertex: party 1's deterministic response and the
/// bipartite extremal term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDescriptor {
    pub party1: BitFn,
    pub bipartite: Bipartite,
}

impl VertexDescriptor {
    pub fn to_box3(self) -> Box3 {
        Box3::product(&det_box1(self.party1), &self.bipartite.to_box2())
    }
}

impl fmt::Display for VertexDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o1=f{}(i1) x {}", self.party1.code(), self.bipartite)
    }
}

#[derive(Clone, Debug)]
pub struct VertexSet {
    pub class: HierarchyClass,
    pub vertices: Vec<Box3>,
    pub descriptors: Vec<VertexDescriptor>,
    /// Column-major, 64 entries per vertex.
    matrix: Vec<f64>,
}

impl VertexSet {
    fn build(class: HierarchyClass, terms: &[Bipartite]) -> Self {
        let descriptors: Vec<VertexDescriptor> = BitFn::all()
            .flat_map(|party1| terms.iter().map(move |&bipartite| VertexDescriptor { party1, bipartite }))
            .collect();
        let vertices: Vec<Box3> = descriptors.iter().map(|d| d.to_box3()).collect();
        let matrix = vertices.iter().flat_map(|v| v.flat().iter().copied()).collect();
        Self { class, vertices, descriptors, matrix }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn problem<'a>(&'a self, b: &'a Box3, tol: f64) -> Result<FeasibilityProblem<'a>> {
        FeasibilityProblem::new(self.matrix.as_slice(), 64, b.flat(), tol)
    }
}

fn local_terms() -> Vec<Bipartite> {
    BitFn::all().flat_map(|o2| BitFn::all().map(move |o3| Bipartite::Local { o2, o3 })).collect()
}

fn ns_terms() -> Vec<Bipartite> {
    let mut t = local_terms();
    t.extend(PrVariant::all().map(Bipartite::Pr));
    t
}

fn oneway_terms(dir: Signaling) -> Vec<Bipartite> {
    BitFn::all()
        .flat_map(|local| PairFn::all().map(move |joint| Bipartite::OneWay { dir, local, joint }))
        .collect()
}

fn twoway_terms() -> Vec<Bipartite> {
    PairFn::all().flat_map(|o2| PairFn::all().map(move |o3| Bipartite::TwoWay { o2, o3 })).collect()
}

static FL_SET: OnceLock<VertexSet> = OnceLock::new();
static NSBL_SET: OnceLock<VertexSet> = OnceLock::new();
static LEFT_SET: OnceLock<VertexSet> = OnceLock::new();
static RIGHT_SET: OnceLock<VertexSet> = OnceLock::new();
static HULL_SET: OnceLock<VertexSet> = OnceLock::new();
static BL_SET: OnceLock<VertexSet> = OnceLock::new();

fn vertex_set(c: HierarchyClass) -> Option<&'static VertexSet> {
    use HierarchyClass::*;
    Some(match c {
        Fl => FL_SET.get_or_init(|| VertexSet::build(Fl, &local_terms())),
        Nsbl => NSBL_SET.get_or_init(|| VertexSet::build(Nsbl, &ns_terms())),
        AtoblLeft => {
            LEFT_SET.get_or_init(|| VertexSet::build(AtoblLeft, &oneway_terms(Signaling::ThreeToTwo)))
        }
        AtoblRight => RIGHT_SET
            .get_or_init(|| VertexSet::build(AtoblRight, &oneway_terms(Signaling::TwoToThree))),
        Bl => BL_SET.get_or_init(|| VertexSet::build(Bl, &twoway_terms())),
        _ => return None,
    })
}

/// Left vertices followed by right vertices.
fn hull_set() -> &'static VertexSet {
    HULL_SET.get_or_init(|| {
        let left = vertex_set(HierarchyClass::AtoblLeft).unwrap();
        let right = vertex_set(HierarchyClass::AtoblRight).unwrap();
        VertexSet {
            class: HierarchyClass::AtoblHull,
            vertices: [left.vertices.clone(), right.vertices.clone()].concat(),
            descriptors: [left.descriptors.clone(), right.descriptors.clone()].concat(),
            matrix: [left.matrix.clone(), right.matrix.clone()].concat(),
        }
    })
}

/// Vertex set of a polytope class. NS, TOBL, the union and the hull are not
/// single vertex-enumerated polytopes here and yield `UnsupportedClass`.
pub fn enumerate_vertices(c: HierarchyClass) -> Result<&'static VertexSet> {
    vertex_set(c).ok_or_else(|| Error::UnsupportedClass(c.to_string()))
}

/// Supporting data for a class verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Evidence {
    /// Convex weights or a separating functional over the class's vertices
    /// (for TOBL: over the 16,384 triples).
    Lp(MembershipResult),
    Union { left: MembershipResult, right: MembershipResult },
    NoSignaling(NsReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassResult {
    pub class: HierarchyClass,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl ClassResult {
    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    /// The LP result behind this verdict, if there is a single one.
    pub fn lp_result(&self) -> Option<&MembershipResult> {
        match &self.evidence {
            Evidence::Lp(r) => Some(r),
            _ => None,
        }
    }
}

fn lp_class(b: &Box3, class: HierarchyClass, set: &VertexSet, tol: f64) -> Result<ClassResult> {
    let r = solve_feasibility(&set.problem(b, tol)?)?;
    Ok(ClassResult { class, verdict: r.verdict, evidence: Evidence::Lp(r) })
}

fn union_result(left: MembershipResult, right: MembershipResult) -> ClassResult {
    let verdict = if left.is_in() || right.is_in() { Verdict::In } else { Verdict::Out };
    ClassResult { class: HierarchyClass::AtoblUnion, verdict, evidence: Evidence::Union { left, right } }
}

pub fn membership(b: &Box3, c: HierarchyClass, tol: f64) -> Result<ClassResult> {
    use HierarchyClass::*;
    match c {
        Fl | Nsbl | AtoblLeft | AtoblRight | Bl => lp_class(b, c, vertex_set(c).unwrap(), tol),
        AtoblHull => lp_class(b, c, hull_set(), tol),
        AtoblUnion => {
            let left = solve_feasibility(&vertex_set(AtoblLeft).unwrap().problem(b, tol)?)?;
            let right = solve_feasibility(&vertex_set(AtoblRight).unwrap().problem(b, tol)?)?;
            Ok(union_result(left, right))
        }
        Ns => {
            let r = no_signaling_check(b, tol);
            let verdict = if r.is_ns { Verdict::In } else { Verdict::Out };
            Ok(ClassResult { class: Ns, verdict, evidence: Evidence::NoSignaling(r) })
        }
        Tobl => {
            let r = tobl_membership(b, tol)?;
            Ok(ClassResult { class: Tobl, verdict: r.verdict, evidence: Evidence::Lp(r) })
        }
    }
}

/// Number of shared hidden-variable values in the TOBL model: party-1
/// response x right one-way term x left one-way term.
pub const TOBL_TRIPLES: usize = 4 * 64 * 64;

/// Column index of triple `(a, r, l)`; `a` is party 1's response code, `r`
/// and `l` index the 64 right and left one-way terms.
#[inline]
pub fn tobl_triple_index(a: usize, r: usize, l: usize) -> usize {
    (a * 64 + r) * 64 + l
}

static TOBL_MATRICES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Column-major vertex matrices of the two TOBL systems over all triples:
/// `(a x right_r)` and `(a x left_l)`.
fn tobl_matrices() -> &'static (Vec<f64>, Vec<f64>) {
    TOBL_MATRICES.get_or_init(|| {
        let right = vertex_set(HierarchyClass::AtoblRight).unwrap();
        let left = vertex_set(HierarchyClass::AtoblLeft).unwrap();
        let mut mr = Vec::with_capacity(TOBL_TRIPLES * 64);
        let mut ml = Vec::with_capacity(TOBL_TRIPLES * 64);
        for a in 0..4 {
            for r in 0..64 {
                for l in 0..64 {
                    mr.extend_from_slice(right.vertices[a * 64 + r].flat());
                    ml.extend_from_slice(left.vertices[a * 64 + l].flat());
                }
            }
        }
        (mr, ml)
    })
}

/// The two literal TOBL systems sharing one weight vector over all triples.
pub fn tobl_problems<'a>(b: &'a Box3, tol: f64) -> Result<[FeasibilityProblem<'a>; 2]> {
    let (mr, ml) = tobl_matrices();
    Ok([
        FeasibilityProblem::new(mr.as_slice(), 64, b.flat(), tol)?,
        FeasibilityProblem::new(ml.as_slice(), 64, b.flat(), tol)?,
    ])
}

/// Shared hidden-variable TOBL membership.
///
/// A triple model exists iff there are weights `w[a][r]` and `v[a][l]` that
/// reproduce the box with right and left terms respectively and put the same
/// total weight on every party-1 response `a`: given those, the triple weights
/// `w[a][r] v[a][l] / m[a]` solve the full system, and any triple solution
/// marginalizes to such a pair. The pair system has 512 columns instead of
/// 16,384. Its certificates are lifted to triple space and re-verified
/// against the full triple systems.
pub fn tobl_membership(b: &Box3, tol: f64) -> Result<MembershipResult> {
    let right = vertex_set(HierarchyClass::AtoblRight).unwrap();
    let left = vertex_set(HierarchyClass::AtoblLeft).unwrap();
    let target = b.flat();

    // rows: right system (64), left system (64), coupling (4), normalization
    let mut sys = EqualitySystem::zeros(64 + 64 + 4 + 1, 512);
    for j in 0..256 {
        for (k, v) in right.vertices[j].flat().iter().enumerate() {
            sys.set(k, j, *v);
        }
        for (k, v) in left.vertices[j].flat().iter().enumerate() {
            sys.set(64 + k, 256 + j, *v);
        }
        let a = j / 64;
        sys.set(128 + a, j, 1.0);
        sys.set(128 + a, 256 + j, -1.0);
        sys.set(132, j, 1.0);
    }
    sys.b[..64].copy_from_slice(target);
    sys.b[64..128].copy_from_slice(target);
    sys.b[132] = 1.0;

    let problems = tobl_problems(b, tol)?;
    let result = match solve_equality_system(&sys, tol)? {
        SystemOutcome::Feasible { x, .. } => {
            let (w, v) = x.split_at(256);
            let mut triple = vec![0.0; TOBL_TRIPLES];
            for a in 0..4 {
                let mass: f64 = w[a * 64..(a + 1) * 64].iter().sum();
                if mass <= 0.0 {
                    continue;
                }
                for r in 0..64 {
                    let wr = w[a * 64 + r];
                    if wr == 0.0 {
                        continue;
                    }
                    for l in 0..64 {
                        let vl = v[a * 64 + l];
                        if vl != 0.0 {
                            triple[tobl_triple_index(a, r, l)] = wr * vl / mass;
                        }
                    }
                }
            }
            MembershipResult::inside(triple)
        }
        SystemOutcome::Infeasible { y, .. } => {
            MembershipResult::outside(lp::witness_from_functional(&problems, y[..128].to_vec()))
        }
    };
    lp::verify_certificate(&problems, &result)?;
    Ok(result)
}

/// TOBL membership by solving the full 16,384-column joint system directly.
pub fn tobl_membership_direct(b: &Box3, tol: f64) -> Result<MembershipResult> {
    lp::solve_joint_feasibility(&tobl_problems(b, tol)?)
}

/// Feasibility problems behind an LP-backed verdict, for re-checking its
/// certificate: the vertex system for the polytope classes and the hull, the
/// two triple systems for TOBL.
pub fn class_problems<'a>(
    b: &'a Box3,
    c: HierarchyClass,
    tol: f64,
) -> Result<Vec<FeasibilityProblem<'a>>> {
    use HierarchyClass::*;
    match c {
        Tobl => Ok(tobl_problems(b, tol)?.into()),
        AtoblHull => Ok(vec![hull_set().problem(b, tol)?]),
        _ => Ok(vec![enumerate_vertices(c)?.problem(b, tol)?]),
    }
}

/// Descriptor of a TOBL triple column.
pub fn tobl_triple_descriptor(index: usize) -> (VertexDescriptor, VertexDescriptor) {
    let (a, rest) = (index / 4096, index % 4096);
    let (r, l) = (rest / 64, rest % 64);
    let right = vertex_set(HierarchyClass::AtoblRight).unwrap();
    let left = vertex_set(HierarchyClass::AtoblLeft).unwrap();
    (right.descriptors[a * 64 + r], left.descriptors[a * 64 + l])
}

/// Vertex descriptors for the weights of an LP-backed class result.
pub fn class_descriptor(class: HierarchyClass, index: usize) -> Option<String> {
    match class {
        HierarchyClass::Tobl => {
            let (r, l) = tobl_triple_descriptor(index);
            Some(format!("{r} | {}", l.bipartite))
        }
        HierarchyClass::AtoblHull => hull_set().descriptors.get(index).map(|d| d.to_string()),
        c => vertex_set(c).and_then(|s| s.descriptors.get(index)).map(|d| d.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// One entry per class, in [`HierarchyClass::ALL`] order.
    pub results: Vec<ClassResult>,
    pub finest_class: Option<HierarchyClass>,
    pub ns_report: NsReport,
    /// In both asymmetric classes but not in the shared-variable class.
    pub tobl_intersection_gap: bool,
}

impl ClassificationReport {
    pub fn get(&self, c: HierarchyClass) -> &ClassResult {
        self.results.iter().find(|r| r.class == c).expect("report covers every class")
    }

    pub fn verdict(&self, c: HierarchyClass) -> Verdict {
        self.get(c).verdict
    }

    pub fn is_in(&self, c: HierarchyClass) -> bool {
        self.verdict(c) == Verdict::In
    }
}

/// Fails with `HierarchyInconsistency` if any known inclusion is contradicted.
pub fn check_monotone(verdict: impl Fn(HierarchyClass) -> Verdict) -> Result<()> {
    for (sub, sup) in INCLUSIONS {
        if verdict(sub) == Verdict::In && verdict(sup) == Verdict::Out {
            return Err(Error::HierarchyInconsistency(format!("In {sub} but Out {sup}")));
        }
    }
    Ok(())
}

pub fn classify_full(b: &Box3, tol: f64) -> Result<ClassificationReport> {
    use HierarchyClass::*;
    let mut results = Vec::with_capacity(9);
    for c in [Fl, Nsbl, Tobl, AtoblLeft, AtoblRight] {
        results.push(membership(b, c, tol)?);
    }
    let left = results[3].lp_result().unwrap().clone();
    let right = results[4].lp_result().unwrap().clone();
    results.push(union_result(left, right));
    for c in [AtoblHull, Bl, Ns] {
        results.push(membership(b, c, tol)?);
    }
    debug_assert!(results.iter().map(|r| r.class).eq(HierarchyClass::ALL));

    let verdict = |c: HierarchyClass| results.iter().find(|r| r.class == c).unwrap().verdict;
    check_monotone(verdict)?;
    let finest_class = HierarchyClass::ALL.into_iter().find(|c| verdict(*c) == Verdict::In);
    let tobl_intersection_gap = verdict(AtoblLeft) == Verdict::In
        && verdict(AtoblRight) == Verdict::In
        && verdict(Tobl) == Verdict::Out;
    let ns_report = match &results[8].evidence {
        Evidence::NoSignaling(r) => r.clone(),
        _ => unreachable!(),
    };
    Ok(ClassificationReport { results, finest_class, ns_report, tobl_intersection_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::noise_box;

    #[test]
    fn vertex_counts() {
        let expect = [
            (HierarchyClass::Fl, 64),
            (HierarchyClass::Nsbl, 96),
            (HierarchyClass::AtoblLeft, 256),
            (HierarchyClass::AtoblRight, 256),
            (HierarchyClass::Bl, 1024),
        ];
        for (c, n) in expect {
            let s = enumerate_vertices(c).unwrap();
            assert_eq!(s.len(), n, "{c}");
            assert_eq!(s.descriptors.len(), n);
            assert_eq!(s.class, c);
        }
        assert_eq!(hull_set().len(), 512);
    }

    #[test]
    fn unsupported_classes() {
        for c in [HierarchyClass::Ns, HierarchyClass::Tobl, HierarchyClass::AtoblHull, HierarchyClass::AtoblUnion] {
            assert!(matches!(enumerate_vertices(c), Err(Error::UnsupportedClass(_))));
        }
    }

    #[test]
    fn fl_vertices_are_zero_one() {
        for v in &enumerate_vertices(HierarchyClass::Fl).unwrap().vertices {
            assert!(v.flat().iter().all(|x| *x == 0.0 || *x == 1.0));
        }
    }

    #[test]
    fn nsbl_vertices() {
        let s = enumerate_vertices(HierarchyClass::Nsbl).unwrap();
        for (v, d) in s.vertices.iter().zip(&s.descriptors) {
            assert!(d.bipartite.to_box2().no_signaling(1e-15).is_ns);
            if matches!(d.bipartite, Bipartite::Pr(_)) {
                assert!(v.flat().iter().all(|x| *x == 0.0 || *x == 0.5));
            }
        }
        let pr_count = s.descriptors.iter().filter(|d| matches!(d.bipartite, Bipartite::Pr(_))).count();
        assert_eq!(pr_count, 32);
    }

    #[test]
    fn twoway_swap_vertex_only_in_bl() {
        let swap = Bipartite::TwoWay {
            o2: PairFn::from_fn(|_, i3| i3),
            o3: PairFn::from_fn(|i2, _| i2),
        };
        let target = VertexDescriptor { party1: BitFn::ZERO, bipartite: swap }.to_box3();
        let has = |c| enumerate_vertices(c).unwrap().vertices.iter().any(|v| *v == target);
        assert!(has(HierarchyClass::Bl));
        assert!(!has(HierarchyClass::AtoblLeft));
        assert!(!has(HierarchyClass::AtoblRight));
    }

    #[test]
    fn noise_is_fully_local() {
        let r = membership(&noise_box(), HierarchyClass::Fl, 1e-9).unwrap();
        assert!(r.is_in());
        let rep = classify_full(&noise_box(), 1e-9).unwrap();
        assert_eq!(rep.finest_class, Some(HierarchyClass::Fl));
        assert!(HierarchyClass::ALL.iter().all(|c| rep.is_in(*c)));
    }

    #[test]
    fn class_names_round_trip() {
        for c in HierarchyClass::ALL {
            assert_eq!(c.name().parse::<HierarchyClass>().unwrap(), c);
        }
        assert_eq!("atobl-left".parse::<HierarchyClass>().unwrap(), HierarchyClass::AtoblLeft);
        assert!("LOCAL".parse::<HierarchyClass>().is_err());
    }

    #[test]
    fn monotone_check_flags_violations() {
        let v = |c| if c == HierarchyClass::Fl { Verdict::In } else { Verdict::Out };
        assert!(matches!(check_monotone(v), Err(Error::HierarchyInconsistency(_))));
        assert!(check_monotone(|_| Verdict::In).is_ok());
        assert!(check_monotone(|_| Verdict::Out).is_ok());
    }

    #[test]
    fn triple_descriptor_indexing() {
        let (r, l) = tobl_triple_descriptor(tobl_triple_index(3, 5, 7));
        assert_eq!(r.party1.code(), 3);
        assert_eq!(l.party1.code(), 3);
        let right = enumerate_vertices(HierarchyClass::AtoblRight).unwrap();
        assert_eq!(right.descriptors[3 * 64 + 5], r);
    }
}
