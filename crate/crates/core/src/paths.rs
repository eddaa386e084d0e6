//! Broken paths: the unique alternating concatenation of monotone embedded
//! segments and cusps joining two points (or two ends) of a leaf space.
//!
//! Maximal junction-jump-free runs of the incidence path become segments;
//! member-to-member junction traversals become cusps. Stem traversals are
//! continuous and never produce cusps. Trivial segments carry the unique
//! orientation dictated by the adjacent junction signs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    EndName, EndRef, JunctionId, LeafSpace, Loc, Move, NodeKind, PointRef, Position, QueryError,
    Sign, VertexId,
};

/// Direction of a segment relative to the orientation of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Negative,
    Positive,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Negative => Orientation::Positive,
            Orientation::Positive => Orientation::Negative,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Negative => '-',
            Orientation::Positive => '+',
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Endpoint of a broken path or of one of its segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathPoint {
    Point(PointRef),
    End(EndRef),
}

impl fmt::Display for PathPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathPoint::Point(p) => write!(f, "{p}"),
            PathPoint::End(e) => write!(f, "{e}"),
        }
    }
}

/// Interior itinerary element of a segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentElement {
    Vertex(VertexId),
    /// Traversal of (part of) an edge, positions measured lower -> upper.
    EdgeRun {
        edge: crate::model::EdgeId,
        from: Position,
        to: Position,
    },
}

/// A maximal junction-jump-free run of a broken path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// 1-based index within the path.
    pub index: usize,
    pub start: PathPoint,
    pub end: PathPoint,
    pub orientation: Orientation,
    pub trivial: bool,
    /// Interior itinerary (endpoints excluded).
    pub via: Vec<SegmentElement>,
}

/// A jump between two members of one junction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    /// 1-based index within the path.
    pub index: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub junction: JunctionId,
    /// Positive iff `from` precedes `to` in the junction's member list.
    pub sign: Sign,
}

/// The broken path between two points or ends, as alternating segments and
/// cusps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenPath {
    pub source: PathPoint,
    pub target: PathPoint,
    pub segments: Vec<Segment>,
    pub cusps: Vec<Cusp>,
}

impl BrokenPath {
    /// Orientations of the first and last segment.
    pub fn first_last_orientation(&self) -> (Orientation, Orientation) {
        (
            self.segments.first().expect("nonempty").orientation,
            self.segments.last().expect("nonempty").orientation,
        )
    }

    pub fn cusp_signs(&self) -> (usize, usize) {
        let pos = self.cusps.iter().filter(|c| c.sign == Sign::Positive).count();
        (pos, self.cusps.len() - pos)
    }

    /// Whether `p` lies on the path strictly between source and target.
    pub fn interior_contains(&self, p: &PointRef) -> bool {
        match p {
            PointRef::AtVertex(v) => {
                for seg in &self.segments {
                    if seg.via.iter().any(|e| matches!(e, SegmentElement::Vertex(w) if w == v)) {
                        return true;
                    }
                }
                for c in &self.cusps {
                    for w in [&c.from, &c.to] {
                        if w == v {
                            let as_point = PathPoint::Point(PointRef::AtVertex(w.clone()));
                            if as_point != self.source && as_point != self.target {
                                return true;
                            }
                        }
                    }
                }
                false
            }
            PointRef::OnEdge(e, q) => self.segments.iter().any(|seg| {
                seg.via.iter().any(|el| match el {
                    SegmentElement::EdgeRun { edge, from, to } if edge == e => {
                        let (lo, hi) = if from < to { (*from, *to) } else { (*to, *from) };
                        *q > lo && *q < hi
                    }
                    _ => false,
                })
            }),
        }
    }

    /// Line-oriented rendering: one `seg` line per segment and one `cusp`
    /// line per cusp, interleaved in path order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, seg) in self.segments.iter().enumerate() {
            out.push_str(&format!(
                "seg {} {} {} orient={} trivial={}\n",
                seg.index,
                seg.start,
                seg.end,
                seg.orientation,
                if seg.trivial { 1 } else { 0 }
            ));
            if i < self.cusps.len() {
                let c = &self.cusps[i];
                out.push_str(&format!(
                    "cusp {} {} {} at={} sign={}\n",
                    c.index, c.from, c.to, c.junction, c.sign
                ));
            }
        }
        out
    }

    /// Re-check the structural conventions of a computed path against the
    /// model: interleaving, orientation alternation, junction-sign
    /// alternation, the pairing of segment orientations with cusp signs, the
    /// trivial-segment convention, and cusp signs against member order.
    pub fn verify_conventions(&self, ls: &LeafSpace) -> Result<(), String> {
        if self.segments.len() != self.cusps.len() + 1 {
            return Err(format!(
                "interleaving broken: {} segments, {} cusps",
                self.segments.len(),
                self.cusps.len()
            ));
        }
        for (k, c) in self.cusps.iter().enumerate() {
            let jsign = ls
                .junction_sign(&c.junction)
                .map_err(|e| format!("{e}"))?;
            let before = &self.segments[k];
            let after = &self.segments[k + 1];
            let want_before = match jsign {
                Sign::Negative => Orientation::Negative,
                Sign::Positive => Orientation::Positive,
            };
            if before.orientation != want_before || after.orientation != want_before.flip() {
                return Err(format!(
                    "orientation pairing broken at cusp {} (junction {} sign {})",
                    c.index, c.junction, jsign
                ));
            }
            if k + 1 < self.cusps.len() {
                let next = ls
                    .junction_sign(&self.cusps[k + 1].junction)
                    .map_err(|e| format!("{e}"))?;
                if next == jsign {
                    return Err(format!(
                        "junction signs fail to alternate at cusps {} and {}",
                        c.index,
                        c.index + 1
                    ));
                }
            }
            let rank_from = ls
                .member_rank(&c.junction, &c.from)
                .ok_or_else(|| format!("cusp {} from-vertex not a member", c.index))?;
            let rank_to = ls
                .member_rank(&c.junction, &c.to)
                .ok_or_else(|| format!("cusp {} to-vertex not a member", c.index))?;
            let want_sign = if rank_from < rank_to {
                Sign::Positive
            } else {
                Sign::Negative
            };
            if c.sign != want_sign {
                return Err(format!("cusp {} sign does not match member order", c.index));
            }
        }
        for w in self.segments.windows(2) {
            if w[0].orientation == w[1].orientation {
                return Err(format!(
                    "segment orientations fail to alternate at segments {} and {}",
                    w[0].index, w[1].index
                ));
            }
        }
        Ok(())
    }
}

fn loc_to_path_point(ls: &LeafSpace, loc: &Loc) -> PathPoint {
    match loc {
        Loc::Interior(e, q) => PathPoint::Point(PointRef::OnEdge(e.clone(), *q)),
        Loc::Node(n) => match ls.node_kind(*n) {
            NodeKind::Vertex(v) => PathPoint::Point(PointRef::AtVertex(v.clone())),
            NodeKind::End(name) => PathPoint::End(end_ref_by_name(ls, name)),
            NodeKind::Junction(j) => {
                unreachable!("segment boundary at junction node {j}")
            }
        },
    }
}

fn end_ref_by_name(ls: &LeafSpace, name: &EndName) -> EndRef {
    ls.end_by_name(name.as_str())
        .expect("end marker present in sealed model")
        .clone()
}

/// Decompose the walk between two locations into a broken path.
fn decompose(ls: &LeafSpace, walk: &crate::model::Walk) -> BrokenPath {
    let stations = &walk.stations;
    let moves = &walk.moves;

    // Cusp positions: MemberIn immediately followed by MemberOut through the
    // same junction node.
    let mut cusp_moves: Vec<usize> = Vec::new();
    let mut i = 0;
    while i + 1 < moves.len() {
        if let (Move::MemberIn { junction: j1, vertex: v1 }, Move::MemberOut { junction: j2, vertex: v2 }) =
            (&moves[i], &moves[i + 1])
        {
            if j1 == j2 && v1 != v2 {
                cusp_moves.push(i);
                i += 2;
                continue;
            }
        }
        i += 1;
    }

    let mut cusps: Vec<Cusp> = Vec::new();
    for (k, &mi) in cusp_moves.iter().enumerate() {
        let (junction, from) = match &moves[mi] {
            Move::MemberIn { junction, vertex } => (junction.clone(), vertex.clone()),
            _ => unreachable!(),
        };
        let to = match &moves[mi + 1] {
            Move::MemberOut { vertex, .. } => vertex.clone(),
            _ => unreachable!(),
        };
        let sign = if ls.member_rank(&junction, &from) < ls.member_rank(&junction, &to) {
            Sign::Positive
        } else {
            Sign::Negative
        };
        cusps.push(Cusp {
            index: k + 1,
            from,
            to,
            junction,
            sign,
        });
    }

    // Segment station ranges: [0 ..= c1], [c1+2 ..= c2], ..., [c_m+2 ..= S-1]
    // where c_k is the station index of the k-th cusp's from-vertex (equal to
    // its MemberIn move index).
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    let mut lo = 0usize;
    for &mi in &cusp_moves {
        bounds.push((lo, mi));
        lo = mi + 2;
    }
    bounds.push((lo, stations.len() - 1));

    let mut segments: Vec<Segment> = Vec::new();
    for (k, &(lo, hi)) in bounds.iter().enumerate() {
        let trivial = lo == hi;
        let mut via: Vec<SegmentElement> = Vec::new();
        let mut dir: Option<bool> = None;
        for s in (lo + 1)..hi {
            if let Loc::Node(n) = &stations[s] {
                if let NodeKind::Vertex(v) = ls.node_kind(*n) {
                    via.push(SegmentElement::Vertex(v.clone()));
                }
            }
        }
        for m in lo..hi {
            let mv = &moves[m];
            let ascends = ls.move_ascends(mv);
            debug_assert!(dir.is_none() || dir == Some(ascends), "segment not monotone");
            dir = Some(ascends);
            if let Move::Edge { id, from_pos, to_pos } = mv {
                via.push(SegmentElement::EdgeRun {
                    edge: id.clone(),
                    from: *from_pos,
                    to: *to_pos,
                });
            }
        }
        let orientation = match dir {
            Some(true) => Orientation::Positive,
            Some(false) => Orientation::Negative,
            None => {
                // Trivial segment: the unique orientation is positive after a
                // negative cusp or before a positive one, and dually.
                let prev = k.checked_sub(1).map(|p| &cusps[p].junction);
                let next = cusps.get(k).map(|c| &c.junction);
                let from_prev = prev.map(|j| match ls.junction_sign(j).expect("sealed") {
                    Sign::Negative => Orientation::Positive,
                    Sign::Positive => Orientation::Negative,
                });
                let from_next = next.map(|j| match ls.junction_sign(j).expect("sealed") {
                    Sign::Negative => Orientation::Negative,
                    Sign::Positive => Orientation::Positive,
                });
                debug_assert!(
                    from_prev.is_none() || from_next.is_none() || from_prev == from_next,
                    "trivial orientation convention inconsistent"
                );
                from_prev
                    .or(from_next)
                    .expect("trivial segment adjacent to a cusp")
            }
        };
        segments.push(Segment {
            index: k + 1,
            start: loc_to_path_point(ls, &stations[lo]),
            end: loc_to_path_point(ls, &stations[hi]),
            orientation,
            trivial,
            via,
        });
    }

    BrokenPath {
        source: segments.first().expect("nonempty").start.clone(),
        target: segments.last().expect("nonempty").end.clone(),
        segments,
        cusps,
    }
}

/// The broken path between two distinct points.
pub fn broken_path(ls: &LeafSpace, u: &PointRef, v: &PointRef) -> Result<BrokenPath, QueryError> {
    if u == v {
        return Err(QueryError::SamePoint);
    }
    let a = ls.point_loc(u)?;
    let b = ls.point_loc(v)?;
    let walk = ls.walk(&a, &b)?;
    Ok(decompose(ls, &walk))
}

/// The broken curve between two distinct ends: the unique simple incidence
/// path between the two free extremities.
pub fn broken_path_ends(ls: &LeafSpace, x1: &EndRef, x2: &EndRef) -> Result<BrokenPath, QueryError> {
    if x1.name == x2.name {
        return Err(QueryError::SameEnd);
    }
    let a = ls.end_loc(x1)?;
    let b = ls.end_loc(x2)?;
    let walk = ls.walk(&a, &b)?;
    Ok(decompose(ls, &walk))
}

/// Orientations of the first and last segment of a broken path.
pub fn first_last_orientation(p: &BrokenPath) -> (Orientation, Orientation) {
    p.first_last_orientation()
}
