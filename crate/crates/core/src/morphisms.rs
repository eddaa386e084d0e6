//! Structure-preserving maps between leaf spaces.
//!
//! A map is admissible when it preserves incidence with orientation (edge
//! attachments map to the image edge's attachments, lower to lower and upper
//! to upper) and preserves the member order of every junction. Only the
//! vertex correspondence (plus optional end hints) is supplied; edge,
//! junction, and end correspondences are inferred from incidence and then
//! checked.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::endorder::{self, EndOrderError};
use crate::model::{
    Attachment, EdgeId, EndName, JunctionId, LeafSpace, QueryError, VertexId,
};
use crate::paths::broken_path_ends;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapError {
    NotBijective(String),
    DanglingImage(String),
    NotAdmissible(AdmissibilityViolation),
    TooLarge { nodes: usize, bound: usize },
    CompositionMismatch,
    Query(QueryError),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::NotBijective(msg) => write!(f, "NotBijective: {msg}"),
            MapError::DanglingImage(msg) => write!(f, "DanglingImage: {msg}"),
            MapError::NotAdmissible(v) => write!(f, "NotAdmissible: {v}"),
            MapError::TooLarge { nodes, bound } => {
                write!(f, "TooLarge: {nodes} incidence nodes exceed the bound {bound}")
            }
            MapError::CompositionMismatch => {
                write!(f, "CompositionMismatch: target of the first map is not the source of the second")
            }
            MapError::Query(q) => write!(f, "{q}"),
        }
    }
}

impl From<QueryError> for MapError {
    fn from(q: QueryError) -> Self {
        MapError::Query(q)
    }
}

impl From<EndOrderError> for MapError {
    fn from(e: EndOrderError) -> Self {
        match e {
            EndOrderError::Query(q) => MapError::Query(q),
            other => MapError::NotBijective(format!("{other}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Incidence,
    MemberOrder,
}

/// First admissibility failure, by least element identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityViolation {
    pub element: String,
    pub kind: ViolationKind,
}

impl fmt::Display for AdmissibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Incidence => {
                write!(f, "incidence not preserved at edge {}", self.element)
            }
            ViolationKind::MemberOrder => {
                write!(f, "member order not preserved at junction {}", self.element)
            }
        }
    }
}

/// Outcome of an equivariance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivariance {
    Ok,
    CounterExample(CounterExample),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MismatchKind {
    Count,
    CuspSequence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterExample {
    pub x1: EndName,
    pub x2: EndName,
    pub n_source: i64,
    pub n_target: i64,
    pub kind: MismatchKind,
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MismatchKind::Count => write!(
                f,
                "counterexample ({}, {}): n = {} in the source but {} in the target",
                self.x1, self.x2, self.n_source, self.n_target
            ),
            MismatchKind::CuspSequence => write!(
                f,
                "counterexample ({}, {}): mapped cusp sequence differs from the image path",
                self.x1, self.x2
            ),
        }
    }
}

/// A structure map between two leaf spaces, with all correspondences
/// materialized.
#[derive(Clone, Debug)]
pub struct LeafSpaceMap<'a> {
    pub source: &'a LeafSpace,
    pub target: &'a LeafSpace,
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    pub junctions: BTreeMap<JunctionId, JunctionId>,
    pub ends: BTreeMap<EndName, EndName>,
}

impl<'a> LeafSpaceMap<'a> {
    /// Infer the edge, junction, and end correspondences from a vertex
    /// bijection (and optional end hints), checking totality and bijectivity.
    pub fn infer(
        source: &'a LeafSpace,
        target: &'a LeafSpace,
        vertices: BTreeMap<VertexId, VertexId>,
        end_hints: Option<BTreeMap<EndName, EndName>>,
    ) -> Result<Self, MapError> {
        if source.vertex_count() != target.vertex_count() {
            return Err(MapError::NotBijective(format!(
                "source has {} vertices, target has {}",
                source.vertex_count(),
                target.vertex_count()
            )));
        }
        let mut images = BTreeSet::new();
        for v in source.vertex_ids() {
            let img = vertices
                .get(v)
                .ok_or_else(|| MapError::NotBijective(format!("vertex {v} is unmapped")))?;
            if !target.has_vertex(img) {
                return Err(MapError::DanglingImage(format!(
                    "vertex {v} maps to unknown vertex {img}"
                )));
            }
            if !images.insert(img.clone()) {
                return Err(MapError::NotBijective(format!(
                    "two vertices map to {img}"
                )));
            }
        }
        for v in vertices.keys() {
            if !source.has_vertex(v) {
                return Err(MapError::DanglingImage(format!(
                    "map mentions unknown source vertex {v}"
                )));
            }
        }

        // Junctions: images are determined by member sets.
        if source.junction_count() != target.junction_count() {
            return Err(MapError::NotBijective(format!(
                "source has {} junctions, target has {}",
                source.junction_count(),
                target.junction_count()
            )));
        }
        let mut by_member_set: BTreeMap<Vec<VertexId>, JunctionId> = BTreeMap::new();
        for j in target.junction_ids() {
            let mut key: Vec<VertexId> = target.junction_members(j).unwrap().to_vec();
            key.sort();
            by_member_set.insert(key, j.clone());
        }
        let mut junctions = BTreeMap::new();
        let mut junction_images = BTreeSet::new();
        for j in source.junction_ids() {
            let mut key: Vec<VertexId> = source
                .junction_members(j)
                .unwrap()
                .iter()
                .map(|m| vertices[m].clone())
                .collect();
            key.sort();
            let img = by_member_set.get(&key).ok_or_else(|| {
                MapError::DanglingImage(format!(
                    "no target junction has the image member set of junction {j}"
                ))
            })?;
            if !junction_images.insert(img.clone()) {
                return Err(MapError::NotBijective(format!(
                    "two junctions map to {img}"
                )));
            }
            junctions.insert(j.clone(), img.clone());
        }

        // Edges: pinned by the images of their attachments; free extremities
        // use hints when supplied.
        if source.edge_count() != target.edge_count() {
            return Err(MapError::NotBijective(format!(
                "source has {} edges, target has {}",
                source.edge_count(),
                target.edge_count()
            )));
        }
        let hint = |name: &EndName| -> Option<EndName> {
            end_hints.as_ref().and_then(|h| h.get(name).cloned())
        };
        let att_matches = |src: &Attachment, tgt: &Attachment| -> bool {
            match (src, tgt) {
                (Attachment::Vertex(v), Attachment::Vertex(w)) => &vertices[v] == w,
                (Attachment::Stem(j), Attachment::Stem(k)) => &junctions[j] == k,
                (Attachment::Free(name), Attachment::Free(other)) => match hint(name) {
                    Some(h) => &h == other,
                    None => true,
                },
                _ => false,
            }
        };
        let mut edges = BTreeMap::new();
        let mut edge_images = BTreeSet::new();
        let mut ends: BTreeMap<EndName, EndName> = end_hints.clone().unwrap_or_default();
        let target_edges: Vec<&crate::model::Edge> =
            target.edge_ids().map(|id| target.edge(id).unwrap()).collect();
        for id in source.edge_ids() {
            let e = source.edge(id).unwrap();
            let candidates: Vec<&&crate::model::Edge> = target_edges
                .iter()
                .filter(|t| att_matches(&e.lower, &t.lower) && att_matches(&e.upper, &t.upper))
                .collect();
            let img = match candidates.len() {
                0 => {
                    return Err(MapError::DanglingImage(format!(
                        "no target edge matches the image attachments of edge {id}"
                    )))
                }
                1 => candidates[0],
                _ => {
                    return Err(MapError::NotBijective(format!(
                        "ambiguous image for edge {id}; supply end mappings"
                    )))
                }
            };
            if !edge_images.insert(img.id.clone()) {
                return Err(MapError::NotBijective(format!(
                    "two edges map to {}",
                    img.id
                )));
            }
            for (s, t) in [(&e.lower, &img.lower), (&e.upper, &img.upper)] {
                if let (Attachment::Free(a), Attachment::Free(b)) = (s, t) {
                    if let Some(prev) = ends.insert(a.clone(), b.clone()) {
                        if &prev != b {
                            return Err(MapError::NotBijective(format!(
                                "end {a} maps to both {prev} and {b}"
                            )));
                        }
                    }
                }
            }
            edges.insert(id.clone(), img.id.clone());
        }
        let end_images: BTreeSet<&EndName> = ends.values().collect();
        if end_images.len() != ends.len() {
            return Err(MapError::NotBijective("two ends share an image".to_string()));
        }

        Ok(LeafSpaceMap {
            source,
            target,
            vertices,
            edges,
            junctions,
            ends,
        })
    }

    pub fn identity(ls: &'a LeafSpace) -> Self {
        let vertices = ls.vertex_ids().map(|v| (v.clone(), v.clone())).collect();
        let ends = ls
            .positive_ends()
            .iter()
            .chain(ls.negative_ends().iter())
            .map(|e| (e.name.clone(), e.name.clone()))
            .collect();
        LeafSpaceMap::infer(ls, ls, vertices, Some(ends)).expect("identity is a valid map")
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().all(|(a, b)| a == b)
            && self.ends.iter().all(|(a, b)| a == b)
    }

    pub fn apply_vertex(&self, v: &VertexId) -> Option<&VertexId> {
        self.vertices.get(v)
    }

    pub fn apply_end_name(&self, e: &EndName) -> Option<&EndName> {
        self.ends.get(e)
    }

    /// Composition `other . self` (this map first), when the spaces line up.
    pub fn compose<'b>(&self, other: &LeafSpaceMap<'b>) -> Result<LeafSpaceMap<'b>, MapError>
    where
        'a: 'b,
    {
        if self.target != other.source {
            return Err(MapError::CompositionMismatch);
        }
        let vertices = self
            .vertices
            .iter()
            .map(|(a, b)| (a.clone(), other.vertices[b].clone()))
            .collect();
        let ends = self
            .ends
            .iter()
            .map(|(a, b)| (a.clone(), other.ends[b].clone()))
            .collect();
        LeafSpaceMap::infer(self.source, other.target, vertices, Some(ends))
    }

    pub fn inverse(&self) -> LeafSpaceMap<'a> {
        let vertices = self
            .vertices
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let ends = self.ends.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        LeafSpaceMap::infer(self.target, self.source, vertices, Some(ends))
            .expect("inverse of a bijective structure map")
    }

    /// Admissibility: incidence preservation (with orientation) and member
    /// order preservation. The first failing element, by least identifier, is
    /// reported.
    pub fn check_admissible(&self) -> Result<(), AdmissibilityViolation> {
        let mut violations: Vec<AdmissibilityViolation> = Vec::new();
        for id in self.source.edge_ids() {
            let e = self.source.edge(id).unwrap();
            let img = self.target.edge(&self.edges[id]).unwrap();
            let ok = self.att_image_matches(&e.lower, &img.lower)
                && self.att_image_matches(&e.upper, &img.upper);
            if !ok {
                violations.push(AdmissibilityViolation {
                    element: id.as_str().to_string(),
                    kind: ViolationKind::Incidence,
                });
            }
        }
        for j in self.source.junction_ids() {
            let mapped: Vec<VertexId> = self
                .source
                .junction_members(j)
                .unwrap()
                .iter()
                .map(|m| self.vertices[m].clone())
                .collect();
            let image_members = self.target.junction_members(&self.junctions[j]).unwrap();
            if mapped != image_members {
                violations.push(AdmissibilityViolation {
                    element: j.as_str().to_string(),
                    kind: ViolationKind::MemberOrder,
                });
            }
        }
        match violations.into_iter().min_by(|a, b| a.element.cmp(&b.element)) {
            None => Ok(()),
            Some(v) => Err(v),
        }
    }

    fn att_image_matches(&self, src: &Attachment, tgt: &Attachment) -> bool {
        match (src, tgt) {
            (Attachment::Vertex(v), Attachment::Vertex(w)) => &self.vertices[v] == w,
            (Attachment::Stem(j), Attachment::Stem(k)) => &self.junctions[j] == k,
            (Attachment::Free(a), Attachment::Free(b)) => &self.ends[a] == b,
            _ => false,
        }
    }

    /// Equivariance of the cusp-counting construction under this map:
    /// `n` transports exactly on every positive end pair, and image broken
    /// paths equal mapped broken paths cusp by cusp with signs.
    pub fn check_equivariance(&self) -> Result<Equivariance, MapError> {
        if let Err(v) = self.check_admissible() {
            return Err(MapError::NotAdmissible(v));
        }
        self.check_equivariance_forced()
    }

    /// Equivariance check without the admissibility precondition, used to
    /// surface the counterexample produced by an order-breaking map.
    pub fn check_equivariance_forced(&self) -> Result<Equivariance, MapError> {
        let ends = self.source.positive_ends();
        for i in 0..ends.len() {
            for j in 0..ends.len() {
                if i == j {
                    continue;
                }
                let x1 = &ends[i];
                let x2 = &ends[j];
                let y1 = self
                    .target
                    .end_by_name(self.ends[&x1.name].as_str())
                    .ok_or_else(|| {
                        MapError::DanglingImage(format!("end {} has no image", x1.name))
                    })?
                    .clone();
                let y2 = self
                    .target
                    .end_by_name(self.ends[&x2.name].as_str())
                    .ok_or_else(|| {
                        MapError::DanglingImage(format!("end {} has no image", x2.name))
                    })?
                    .clone();
                let src_path = broken_path_ends(self.source, x1, x2)?;
                let tgt_path = broken_path_ends(self.target, &y1, &y2)?;
                let n_source = endorder::cusp_count(&src_path).n();
                let n_target = endorder::cusp_count(&tgt_path).n();
                if n_source != n_target {
                    return Ok(Equivariance::CounterExample(CounterExample {
                        x1: x1.name.clone(),
                        x2: x2.name.clone(),
                        n_source,
                        n_target,
                        kind: MismatchKind::Count,
                    }));
                }
                let mapped: Vec<(JunctionId, VertexId, VertexId, crate::model::Sign)> = src_path
                    .cusps
                    .iter()
                    .map(|c| {
                        (
                            self.junctions[&c.junction].clone(),
                            self.vertices[&c.from].clone(),
                            self.vertices[&c.to].clone(),
                            c.sign,
                        )
                    })
                    .collect();
                let image: Vec<(JunctionId, VertexId, VertexId, crate::model::Sign)> = tgt_path
                    .cusps
                    .iter()
                    .map(|c| (c.junction.clone(), c.from.clone(), c.to.clone(), c.sign))
                    .collect();
                if mapped != image {
                    return Ok(Equivariance::CounterExample(CounterExample {
                        x1: x1.name.clone(),
                        x2: x2.name.clone(),
                        n_source,
                        n_target,
                        kind: MismatchKind::CuspSequence,
                    }));
                }
            }
        }
        Ok(Equivariance::Ok)
    }
}

/// Default bound on incidence nodes for automorphism enumeration.
pub const DEFAULT_NODE_BOUND: usize = 64;

/// All admissible self-maps, by backtracking over incidence-preserving node
/// bijections and then filtering by member order.
pub fn enumerate_automorphisms(ls: &LeafSpace) -> Result<Vec<LeafSpaceMap<'_>>, MapError> {
    enumerate_automorphisms_bounded(ls, DEFAULT_NODE_BOUND)
}

pub fn enumerate_automorphisms_bounded(
    ls: &LeafSpace,
    bound: usize,
) -> Result<Vec<LeafSpaceMap<'_>>, MapError> {
    let n = ls.node_count();
    if n > bound {
        return Err(MapError::TooLarge { nodes: n, bound });
    }

    let sig = node_signatures(ls);
    // BFS order with parent arcs; new roots start fresh components.
    let mut order: Vec<(usize, Option<usize>)> = Vec::new(); // (node, parent)
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = vec![root];
        order.push((root, None));
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for arc in ls.adjacency(u) {
                if !seen[arc.to] {
                    seen[arc.to] = true;
                    order.push((arc.to, Some(u)));
                    queue.push(arc.to);
                }
            }
        }
    }

    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let mut found: Vec<Vec<usize>> = Vec::new();
    backtrack(ls, &sig, &order, 0, &mut assignment, &mut used, &mut found);

    let mut maps = Vec::new();
    for assign in found {
        let mut vertices = BTreeMap::new();
        let mut ends = BTreeMap::new();
        for (i, &img) in assign.iter().enumerate() {
            match (ls.node_kind(i), ls.node_kind(img)) {
                (crate::model::NodeKind::Vertex(a), crate::model::NodeKind::Vertex(b)) => {
                    vertices.insert(a.clone(), b.clone());
                }
                (crate::model::NodeKind::End(a), crate::model::NodeKind::End(b)) => {
                    ends.insert(a.clone(), b.clone());
                }
                _ => {}
            }
        }
        if let Ok(map) = LeafSpaceMap::infer(ls, ls, vertices, Some(ends)) {
            if map.check_admissible().is_ok() {
                maps.push(map);
            }
        }
    }
    Ok(maps)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NodeSig {
    Vertex,
    Junction(crate::model::Sign, usize),
    End(bool),
}

fn node_signatures(ls: &LeafSpace) -> Vec<NodeSig> {
    (0..ls.node_count())
        .map(|i| match ls.node_kind(i) {
            crate::model::NodeKind::Vertex(_) => NodeSig::Vertex,
            crate::model::NodeKind::Junction(j) => NodeSig::Junction(
                ls.junction_sign(j).expect("sealed"),
                ls.junction_members(j).expect("sealed").len(),
            ),
            crate::model::NodeKind::End(name) => NodeSig::End(
                ls.end_by_name(name.as_str()).expect("sealed").is_positive(),
            ),
        })
        .collect()
}

fn backtrack(
    ls: &LeafSpace,
    sig: &[NodeSig],
    order: &[(usize, Option<usize>)],
    depth: usize,
    assignment: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    found: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        found.push(assignment.iter().map(|a| a.unwrap()).collect());
        return;
    }
    let (node, parent) = order[depth];
    let candidates: Vec<usize> = match parent {
        None => (0..ls.node_count())
            .filter(|&c| !used[c] && sig[c] == sig[node])
            .collect(),
        Some(p) => {
            let img_p = assignment[p].unwrap();
            // The arc p -> node must map to an arc of the same kind and the
            // same vertical direction out of img(p).
            let arc = ls
                .adjacency(p)
                .iter()
                .find(|a| a.to == node)
                .expect("tree arc");
            let arc_kind_edge = matches!(arc.link, crate::model::Link::Edge(_));
            let ascends = ls.arc_ascends(p, arc);
            ls.adjacency(img_p)
                .iter()
                .filter(|a| {
                    matches!(a.link, crate::model::Link::Edge(_)) == arc_kind_edge
                        && ls.arc_ascends(img_p, a) == ascends
                        && !used[a.to]
                        && sig[a.to] == sig[node]
                })
                .map(|a| a.to)
                .collect()
        }
    };
    for c in candidates {
        assignment[node] = Some(c);
        used[c] = true;
        backtrack(ls, sig, order, depth + 1, assignment, used, found);
        used[c] = false;
        assignment[node] = None;
    }
}

/// Outcome of a nontriviality check for a family of self-maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionTriviality {
    Trivial,
    NontrivialWitness {
        map_index: usize,
        end: EndName,
        image: EndName,
    },
}

/// Whether any of the supplied admissible self-maps moves a positive end.
pub fn check_nontrivial_action(
    ls: &LeafSpace,
    maps: &[LeafSpaceMap<'_>],
) -> Result<ActionTriviality, MapError> {
    for (idx, map) in maps.iter().enumerate() {
        if let Err(v) = map.check_admissible() {
            return Err(MapError::NotAdmissible(v));
        }
        for end in ls.positive_ends() {
            let image = map
                .apply_end_name(&end.name)
                .ok_or_else(|| MapError::DanglingImage(format!("end {} has no image", end.name)))?;
            if image != &end.name {
                return Ok(ActionTriviality::NontrivialWitness {
                    map_index: idx,
                    end: end.name.clone(),
                    image: image.clone(),
                });
            }
        }
    }
    Ok(ActionTriviality::Trivial)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for MapParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Parse the map text format: `v <src> <dst>` vertex pairs and optional
/// `end <src> <dst>` pairs, with `#` comments.
pub fn parse_map(
    text: &str,
) -> Result<(BTreeMap<VertexId, VertexId>, Option<BTreeMap<EndName, EndName>>), MapParseError> {
    let mut vertices = BTreeMap::new();
    let mut ends: BTreeMap<EndName, EndName> = BTreeMap::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let err = |message: String| MapParseError {
            line: lineno + 1,
            message,
        };
        match tokens[0] {
            "v" => {
                if tokens.len() != 3 {
                    return Err(err(format!("expected `v <src> <dst>`, got {:?}", raw_line)));
                }
                vertices.insert(VertexId::new(tokens[1]), VertexId::new(tokens[2]));
            }
            "end" => {
                if tokens.len() != 3 {
                    return Err(err(format!("expected `end <src> <dst>`, got {:?}", raw_line)));
                }
                ends.insert(EndName::new(tokens[1]), EndName::new(tokens[2]));
            }
            other => return Err(err(format!("unknown record {other:?}"))),
        }
    }
    let ends = if ends.is_empty() { None } else { Some(ends) };
    Ok((vertices, ends))
}
