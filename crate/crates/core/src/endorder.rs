//! The integer `n(x1, x2)` (positive minus negative cusps of the broken
//! curve between two positive ends), the linear order it induces on positive
//! ends, and the decomposition of end triples into shared sub-paths and
//! special cusps.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::model::{EdgeId, EndRef, JunctionId, LeafSpace, QueryError, VertexId};
use crate::paths::{broken_path_ends, BrokenPath, Cusp, SegmentElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndOrderError {
    SameEnd,
    DuplicateEnd(String),
    NotPositiveEnd(String),
    /// No positive-end pair with exactly one cusp exists.
    NotFound,
    Query(QueryError),
}

impl fmt::Display for EndOrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndOrderError::SameEnd => write!(f, "SameEnd: the ends coincide"),
            EndOrderError::DuplicateEnd(e) => write!(f, "DuplicateEnd: {e}"),
            EndOrderError::NotPositiveEnd(e) => write!(f, "NotPositiveEnd: {e}"),
            EndOrderError::NotFound => write!(f, "NotFound: no positive-end pair with exactly one cusp"),
            EndOrderError::Query(q) => write!(f, "{q}"),
        }
    }
}

impl From<QueryError> for EndOrderError {
    fn from(q: QueryError) -> Self {
        match q {
            QueryError::SameEnd => EndOrderError::SameEnd,
            other => EndOrderError::Query(other),
        }
    }
}

/// Signed cusp tally of one broken curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspCount {
    pub positive: usize,
    pub negative: usize,
}

impl CuspCount {
    pub fn n(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative
    }
}

pub fn cusp_count(path: &BrokenPath) -> CuspCount {
    let (positive, negative) = path.cusp_signs();
    CuspCount { positive, negative }
}

fn require_positive(ls: &LeafSpace, x: &EndRef) -> Result<EndRef, EndOrderError> {
    let canonical = ls
        .end_by_name(x.name.as_str())
        .ok_or_else(|| EndOrderError::Query(QueryError::UnknownEnd(x.name.as_str().to_string())))?;
    if !canonical.is_positive() {
        return Err(EndOrderError::NotPositiveEnd(x.name.as_str().to_string()));
    }
    Ok(canonical.clone())
}

/// `n(x1, x2)`: positive minus negative cusps of the broken curve between
/// two distinct positive ends. Always odd.
pub fn n(ls: &LeafSpace, x1: &EndRef, x2: &EndRef) -> Result<i64, EndOrderError> {
    if x1.name == x2.name {
        return Err(EndOrderError::SameEnd);
    }
    let a = require_positive(ls, x1)?;
    let b = require_positive(ls, x2)?;
    let path = broken_path_ends(ls, &a, &b)?;
    Ok(cusp_count(&path).n())
}

/// The positive ends sorted by the order `x < y iff n(x, y) < 0`.
pub fn end_order(ls: &LeafSpace) -> Result<Vec<EndRef>, EndOrderError> {
    let mut ends: Vec<EndRef> = ls.positive_ends().to_vec();
    let m = ends.len();
    // Pairwise counts over the name-sorted list; the comparator below only
    // consults i < j entries.
    let mut above = alloc::vec![alloc::vec![false; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = n(ls, &ends[i], &ends[j])?;
            above[i][j] = v > 0;
        }
    }
    let index_of = |e: &EndRef, ends: &[EndRef]| ends.iter().position(|x| x.name == e.name).unwrap();
    let original = ends.clone();
    ends.sort_by(|a, b| {
        let i = index_of(a, &original);
        let j = index_of(b, &original);
        if i == j {
            Ordering::Equal
        } else if i < j {
            // n(a, b) > 0 means b < a in the end order.
            if above[i][j] {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if above[j][i] {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    Ok(ends)
}

/// The three pairwise counts of an end triple and the defect
/// `delta = n13 - (n12 + n23)`, which always lies in `{-1, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleCheck {
    pub n12: i64,
    pub n23: i64,
    pub n13: i64,
    pub delta: i64,
}

impl TriangleCheck {
    pub fn holds(&self) -> bool {
        self.delta == 1 || self.delta == -1
    }
}

fn require_distinct(
    ls: &LeafSpace,
    xs: &[&EndRef],
) -> Result<Vec<EndRef>, EndOrderError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in xs {
        if !seen.insert(x.name.clone()) {
            return Err(EndOrderError::DuplicateEnd(x.name.as_str().to_string()));
        }
        out.push(require_positive(ls, x)?);
    }
    Ok(out)
}

pub fn triangle_check(
    ls: &LeafSpace,
    x1: &EndRef,
    x2: &EndRef,
    x3: &EndRef,
) -> Result<TriangleCheck, EndOrderError> {
    let ends = require_distinct(ls, &[x1, x2, x3])?;
    let n12 = n(ls, &ends[0], &ends[1])?;
    let n23 = n(ls, &ends[1], &ends[2])?;
    let n13 = n(ls, &ends[0], &ends[2])?;
    Ok(TriangleCheck {
        n12,
        n23,
        n13,
        delta: n13 - (n12 + n23),
    })
}

/// Which of the three broken curves owns an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveId {
    X1X2,
    X1X3,
    X2X3,
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::X1X2 => write!(f, "a(x1,x2)"),
            CurveId::X1X3 => write!(f, "a(x1,x3)"),
            CurveId::X2X3 => write!(f, "a(x2,x3)"),
        }
    }
}

/// The proof case of a triple decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleCase {
    /// No special cusp on the outer curve `a(x1,x3)`.
    Case1,
    /// A special cusp on `a(x1,x3)` whose points meet no special cusp of a
    /// side curve.
    Case2,
    /// Special cusps of `a(x1,x3)` and a side curve share a member point.
    Case3,
}

impl fmt::Display for TripleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleCase::Case1 => write!(f, "Case1"),
            TripleCase::Case2 => write!(f, "Case2"),
            TripleCase::Case3 => write!(f, "Case3"),
        }
    }
}

/// Where a turning point of `a(x1,x3)` meets a special cusp of a side curve:
/// in the shared prefix with `a(x1,x2)` (beta1), in the shared suffix with
/// `a(x2,x3)` (beta3), or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurnSide {
    Beta1,
    Beta3,
    Both,
}

impl fmt::Display for TurnSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurnSide::Beta1 => write!(f, "beta1"),
            TurnSide::Beta3 => write!(f, "beta3"),
            TurnSide::Both => write!(f, "both"),
        }
    }
}

/// Ordered element of a shared sub-path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaItem {
    Vertex(VertexId),
    Edge(EdgeId),
    Cusp(Cusp),
}

/// A shared sub-broken-path, as an ordered element list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BetaPath {
    pub items: Vec<BetaItem>,
}

impl BetaPath {
    pub fn cusps(&self) -> impl Iterator<Item = &Cusp> {
        self.items.iter().filter_map(|i| match i {
            BetaItem::Cusp(c) => Some(c),
            _ => None,
        })
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.items
            .iter()
            .any(|i| matches!(i, BetaItem::Vertex(w) if w == v))
    }
}

/// Triple decomposition: the three pairwise intersections, the special
/// cusps with owners, and the proof case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleDecomposition {
    pub beta1: BetaPath,
    pub beta2: BetaPath,
    pub beta3: BetaPath,
    pub special_cusps: Vec<(Cusp, CurveId)>,
    pub case: TripleCase,
    pub turn: Option<TurnSide>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CuspKey(JunctionId, VertexId, VertexId);

struct PathItems {
    items: Vec<BetaItem>,
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
    cusps: BTreeSet<CuspKey>,
}

fn flatten(path: &BrokenPath) -> PathItems {
    let mut items = Vec::new();
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut cusps = BTreeSet::new();
    for (k, seg) in path.segments.iter().enumerate() {
        if let crate::paths::PathPoint::Point(crate::model::PointRef::AtVertex(v)) = &seg.start {
            if items.last() != Some(&BetaItem::Vertex(v.clone())) {
                items.push(BetaItem::Vertex(v.clone()));
                vertices.insert(v.clone());
            }
        }
        for el in &seg.via {
            match el {
                SegmentElement::Vertex(v) => {
                    items.push(BetaItem::Vertex(v.clone()));
                    vertices.insert(v.clone());
                }
                SegmentElement::EdgeRun { edge, .. } => {
                    items.push(BetaItem::Edge(edge.clone()));
                    edges.insert(edge.clone());
                }
            }
        }
        if let crate::paths::PathPoint::Point(crate::model::PointRef::AtVertex(v)) = &seg.end {
            if items.last() != Some(&BetaItem::Vertex(v.clone())) {
                items.push(BetaItem::Vertex(v.clone()));
            }
            vertices.insert(v.clone());
        }
        if let Some(c) = path.cusps.get(k) {
            cusps.insert(CuspKey(c.junction.clone(), c.from.clone(), c.to.clone()));
            items.push(BetaItem::Cusp(c.clone()));
        }
    }
    PathItems {
        items,
        vertices,
        edges,
        cusps,
    }
}

fn shared(base: &PathItems, other: &PathItems, reversed_cusps: bool) -> BetaPath {
    let items = base
        .items
        .iter()
        .filter(|item| match item {
            BetaItem::Vertex(v) => other.vertices.contains(v),
            BetaItem::Edge(e) => other.edges.contains(e),
            BetaItem::Cusp(c) => {
                let key = if reversed_cusps {
                    CuspKey(c.junction.clone(), c.to.clone(), c.from.clone())
                } else {
                    CuspKey(c.junction.clone(), c.from.clone(), c.to.clone())
                };
                other.cusps.contains(&key)
            }
        })
        .cloned()
        .collect();
    BetaPath { items }
}

/// Decompose the three broken curves of an end triple.
pub fn triple_decompose(
    ls: &LeafSpace,
    x1: &EndRef,
    x2: &EndRef,
    x3: &EndRef,
) -> Result<TripleDecomposition, EndOrderError> {
    let ends = require_distinct(ls, &[x1, x2, x3])?;
    let p12 = broken_path_ends(ls, &ends[0], &ends[1])?;
    let p13 = broken_path_ends(ls, &ends[0], &ends[2])?;
    let p23 = broken_path_ends(ls, &ends[1], &ends[2])?;
    let f12 = flatten(&p12);
    let f13 = flatten(&p13);
    let f23 = flatten(&p23);

    // Orientations: beta1 and beta3 are induced from a(x1,x3), beta2 from
    // a(x1,x2). A cusp shared by a(x1,x2) and a(x2,x3) appears reversed in
    // the latter.
    let beta1 = shared(&f13, &f12, false);
    let beta2 = shared(&f12, &f23, true);
    let beta3 = shared(&f13, &f23, false);

    let mut special_cusps: Vec<(Cusp, CurveId)> = Vec::new();
    for c in &p12.cusps {
        let same = CuspKey(c.junction.clone(), c.from.clone(), c.to.clone());
        let rev = CuspKey(c.junction.clone(), c.to.clone(), c.from.clone());
        if !f13.cusps.contains(&same) && !f23.cusps.contains(&rev) {
            special_cusps.push((c.clone(), CurveId::X1X2));
        }
    }
    for c in &p13.cusps {
        let same = CuspKey(c.junction.clone(), c.from.clone(), c.to.clone());
        if !f12.cusps.contains(&same) && !f23.cusps.contains(&same) {
            special_cusps.push((c.clone(), CurveId::X1X3));
        }
    }
    for c in &p23.cusps {
        let same = CuspKey(c.junction.clone(), c.from.clone(), c.to.clone());
        let rev = CuspKey(c.junction.clone(), c.to.clone(), c.from.clone());
        if !f13.cusps.contains(&same) && !f12.cusps.contains(&rev) {
            special_cusps.push((c.clone(), CurveId::X2X3));
        }
    }

    let outer: Vec<&Cusp> = special_cusps
        .iter()
        .filter(|(_, o)| *o == CurveId::X1X3)
        .map(|(c, _)| c)
        .collect();

    let (case, turn) = if outer.is_empty() {
        // The witness point, if any, is the point of a side special cusp
        // that lies on a(x1,x3).
        let mut side = None;
        for (c, owner) in &special_cusps {
            match owner {
                CurveId::X1X2 => {
                    for v in [&c.from, &c.to] {
                        if f13.vertices.contains(v) {
                            side = Some(TurnSide::Beta1);
                        }
                    }
                }
                CurveId::X2X3 => {
                    for v in [&c.from, &c.to] {
                        if f13.vertices.contains(v) {
                            side = Some(match side {
                                Some(TurnSide::Beta1) | Some(TurnSide::Both) => TurnSide::Both,
                                _ => TurnSide::Beta3,
                            });
                        }
                    }
                }
                CurveId::X1X3 => {}
            }
        }
        (TripleCase::Case1, side)
    } else {
        let special_of = |owner: CurveId, v: &VertexId| -> bool {
            special_cusps
                .iter()
                .any(|(c, o)| *o == owner && (&c.from == v || &c.to == v))
        };
        let mut in_beta1 = false;
        let mut in_beta3 = false;
        for c in &outer {
            // c.from sits on the x1 side of a(x1,x3), c.to on the x3 side.
            if special_of(CurveId::X1X2, &c.from) {
                in_beta1 = true;
            }
            if special_of(CurveId::X2X3, &c.to) {
                in_beta3 = true;
            }
        }
        match (in_beta1, in_beta3) {
            (false, false) => (TripleCase::Case2, None),
            (true, false) => (TripleCase::Case3, Some(TurnSide::Beta1)),
            (false, true) => (TripleCase::Case3, Some(TurnSide::Beta3)),
            (true, true) => (TripleCase::Case3, Some(TurnSide::Both)),
        }
    };

    Ok(TripleDecomposition {
        beta1,
        beta2,
        beta3,
        special_cusps,
        case,
        turn,
    })
}

/// The lexicographically least pair of positive ends whose broken curve has
/// exactly one cusp, together with that cusp.
pub fn find_unicusp_pair(ls: &LeafSpace) -> Result<(EndRef, EndRef, Cusp), EndOrderError> {
    let ends = ls.positive_ends();
    for i in 0..ends.len() {
        for j in (i + 1)..ends.len() {
            let path = broken_path_ends(ls, &ends[i], &ends[j])?;
            if path.cusps.len() == 1 {
                return Ok((ends[i].clone(), ends[j].clone(), path.cusps[0].clone()));
            }
        }
    }
    Err(EndOrderError::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::model::LeafSpace;

    fn ends3(ls: &LeafSpace, a: &str, b: &str, c: &str) -> (EndRef, EndRef, EndRef) {
        (
            ls.end_by_name(a).unwrap().clone(),
            ls.end_by_name(b).unwrap().clone(),
            ls.end_by_name(c).unwrap().clone(),
        )
    }

    #[test]
    fn n_on_y_neg_is_antisymmetric_unit() {
        let ls = corpus::builtin("y-neg").unwrap();
        let x1 = ls.end_by_name("X1").unwrap().clone();
        let x2 = ls.end_by_name("X2").unwrap().clone();
        assert_eq!(n(&ls, &x1, &x2), Ok(1));
        assert_eq!(n(&ls, &x2, &x1), Ok(-1));
        assert_eq!(n(&ls, &x1, &x1), Err(EndOrderError::SameEnd));
        let n0 = ls.end_by_name("n0").unwrap().clone();
        assert_eq!(
            n(&ls, &x1, &n0),
            Err(EndOrderError::NotPositiveEnd("n0".into()))
        );
    }

    #[test]
    fn n_on_y3() {
        let ls = corpus::builtin("y3").unwrap();
        let (x1, _, x3) = ends3(&ls, "X1", "X2", "X3");
        assert_eq!(n(&ls, &x1, &x3), Ok(1));
    }

    #[test]
    fn end_order_examples() {
        let ls = corpus::builtin("y-neg").unwrap();
        let order = end_order(&ls).unwrap();
        let names: Vec<String> = order.iter().map(|e| e.name.as_str().into()).collect();
        assert_eq!(names, ["X2", "X1"]);
        let ls = corpus::builtin("y3").unwrap();
        let order = end_order(&ls).unwrap();
        let names: Vec<String> = order.iter().map(|e| e.name.as_str().into()).collect();
        assert_eq!(names, ["X3", "X2", "X1"]);
        let ls = corpus::builtin("line").unwrap();
        assert_eq!(end_order(&ls).unwrap().len(), 1);
    }

    #[test]
    fn triangle_on_y3() {
        let ls = corpus::builtin("y3").unwrap();
        let (x1, x2, x3) = ends3(&ls, "X1", "X2", "X3");
        let t = triangle_check(&ls, &x1, &x2, &x3).unwrap();
        assert_eq!((t.n12, t.n23, t.n13, t.delta), (1, 1, 1, -1));
        assert!(t.holds());
        let t = triangle_check(&ls, &x3, &x2, &x1).unwrap();
        assert_eq!((t.n12, t.n23, t.n13, t.delta), (-1, -1, -1, 1));
        assert!(t.holds());
        assert_eq!(
            triangle_check(&ls, &x1, &x1, &x3),
            Err(EndOrderError::DuplicateEnd("X1".into()))
        );
    }

    #[test]
    fn triple_y3_is_case3_with_three_specials() {
        let ls = corpus::builtin("y3").unwrap();
        let (x1, x2, x3) = ends3(&ls, "X1", "X2", "X3");
        let d = triple_decompose(&ls, &x1, &x2, &x3).unwrap();
        assert_eq!(d.case, TripleCase::Case3);
        assert_eq!(d.turn, Some(TurnSide::Both));
        assert_eq!(d.special_cusps.len(), 3);
        let owners: Vec<CurveId> = d.special_cusps.iter().map(|(_, o)| *o).collect();
        assert!(owners.contains(&CurveId::X1X2));
        assert!(owners.contains(&CurveId::X1X3));
        assert!(owners.contains(&CurveId::X2X3));
        assert_eq!(d.beta2.cusps().count(), 0);
    }

    // Median junction approached through its stem from the x1 side: the only
    // special cusp lies on a(x2,x3).
    const CASE1: &str = "\
vertex b
vertex c
vertex f
vertex d
edge sK j:K free:X1
edge s2 free:n2 j:J2
edge s3 free:n3 j:J3
edge ef v:f free:X2
edge ed v:d free:X3
junction K members=b,c
junction J2 members=b,f
junction J3 members=c,d
";

    #[test]
    fn triple_case1_witness() {
        let ls = corpus::parse(CASE1).unwrap();
        let (x1, x2, x3) = ends3(&ls, "X1", "X2", "X3");
        let d = triple_decompose(&ls, &x1, &x2, &x3).unwrap();
        assert_eq!(d.case, TripleCase::Case1);
        assert_eq!(d.turn, Some(TurnSide::Beta3));
        assert_eq!(d.special_cusps.len(), 1);
        assert_eq!(d.special_cusps[0].1, CurveId::X2X3);
        let t = triangle_check(&ls, &x1, &x2, &x3).unwrap();
        assert!(t.holds());
    }

    // Median junction approached through its stem from the x2 side: the only
    // special cusp lies on a(x1,x3), and its points meet no side special.
    const CASE2: &str = "\
vertex a
vertex a2
vertex c
vertex c2
edge sK j:K free:X2
edge s1 free:n1 j:J1
edge s3 free:n3 j:J3
edge ea v:a2 free:X1
edge ec v:c2 free:X3
junction K members=a,c
junction J1 members=a2,a
junction J3 members=c,c2
";

    #[test]
    fn triple_case2_witness() {
        let ls = corpus::parse(CASE2).unwrap();
        let (x1, x2, x3) = ends3(&ls, "X1", "X2", "X3");
        let d = triple_decompose(&ls, &x1, &x2, &x3).unwrap();
        assert_eq!(d.case, TripleCase::Case2);
        assert_eq!(d.turn, None);
        assert_eq!(d.special_cusps.len(), 1);
        assert_eq!(d.special_cusps[0].1, CurveId::X1X3);
        // The shared prefix and suffix each carry one cusp.
        assert_eq!(d.beta1.cusps().count(), 1);
        assert_eq!(d.beta3.cusps().count(), 1);
        let t = triangle_check(&ls, &x1, &x2, &x3).unwrap();
        assert!(t.holds());
    }

    #[test]
    fn beta2_cusps_cancel() {
        // In the Case1 witness, (b, f) is shared between a(x1,x2) and
        // a(x2,x3) with opposite directions.
        let ls = corpus::parse(CASE1).unwrap();
        let (x1, x2, x3) = ends3(&ls, "X1", "X2", "X3");
        let d = triple_decompose(&ls, &x1, &x2, &x3).unwrap();
        assert_eq!(d.beta2.cusps().count(), 1);
        let c = d.beta2.cusps().next().unwrap();
        assert_eq!((c.from.as_str(), c.to.as_str()), ("b", "f"));
    }

    #[test]
    fn unicusp_pair_examples() {
        let ls = corpus::builtin("y-neg").unwrap();
        let (x1, x2, cusp) = find_unicusp_pair(&ls).unwrap();
        assert_eq!((x1.name.as_str(), x2.name.as_str()), ("X1", "X2"));
        assert_eq!((cusp.from.as_str(), cusp.to.as_str()), ("u", "v"));
        let ls = corpus::builtin("line").unwrap();
        assert_eq!(find_unicusp_pair(&ls), Err(EndOrderError::NotFound));
        let ls = corpus::builtin("two-sided").unwrap();
        let (x1, x2, cusp) = find_unicusp_pair(&ls).unwrap();
        assert_eq!((x1.name.as_str(), x2.name.as_str()), ("X1", "X2"));
        assert_eq!((cusp.from.as_str(), cusp.to.as_str()), ("a", "b"));
    }

    #[test]
    fn cusp_count_parity_identity() {
        let ls = corpus::builtin("figure-ends").unwrap();
        let e1 = ls.end_by_name("E1").unwrap().clone();
        let e2 = ls.end_by_name("E2").unwrap().clone();
        let path = crate::paths::broken_path_ends(&ls, &e1, &e2).unwrap();
        let count = cusp_count(&path);
        assert_eq!(count.total(), 3);
        assert_eq!(count.n(), 1);
        assert_eq!(count.n().rem_euclid(2), (count.total() as i64).rem_euclid(2));
    }
}
