//! The combinatorial leaf-space data model: identifiers, attachments, edges,
//! junctions, validation, and point-set queries (sides, separation,
//! cataclysms, ends, branching type).
//!
//! A model is first described as a [`RawLeafSpace`] and then sealed by
//! [`LeafSpace::validate`], which checks every structural axiom:
//!
//! * every vertex has exactly two ports (lower and upper), each consumed by
//!   exactly one edge extremity or junction membership;
//! * every junction has one stem edge whose direction determines the
//!   junction sign (stem rises into a negative junction, descends out of a
//!   positive one), and all members attach on the side matching that sign;
//! * the incidence graph of vertices, junctions, and free-end markers is a
//!   tree.
//!
//! Junction nodes are not points of the model: passing from one member to
//! another is a jump (a cusp), while passing between a member and the stem is
//! continuous. Points are vertices or rational positions in the interior of
//! edges, so every separation query is exact.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_rational::Ratio;

/// Exact position in the interior of an edge, measured lower -> upper.
pub type Position = Ratio<i64>;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident, $kind:literal) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }

            pub const KIND: &'static str = $kind;
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }
    };
}

id_type!(
    /// Identifier of a vertex (a marked point of the model).
    VertexId,
    "vertex"
);
id_type!(
    /// Identifier of an oriented edge.
    EdgeId,
    "edge"
);
id_type!(
    /// Identifier of a junction (a cataclysm of the model).
    JunctionId,
    "junction"
);
id_type!(
    /// Name of a free edge extremity (an end of the model).
    EndName,
    "end"
);

/// Sign of a junction, a cusp, or a side of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Positive => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which extremity of an edge is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extremity {
    Lower,
    Upper,
}

/// What an edge extremity attaches to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attachment {
    /// A vertex port. The lower extremity of an edge uses the vertex's upper
    /// port, the upper extremity uses the lower port.
    Vertex(VertexId),
    /// The stem port of a junction.
    Stem(JunctionId),
    /// A free extremity carrying an end name.
    Free(EndName),
}

impl Attachment {
    pub fn vertex(id: impl Into<String>) -> Self {
        Attachment::Vertex(VertexId::new(id))
    }

    pub fn stem(id: impl Into<String>) -> Self {
        Attachment::Stem(JunctionId::new(id))
    }

    pub fn free(name: impl Into<String>) -> Self {
        Attachment::Free(EndName::new(name))
    }
}

impl fmt::Display for Attachment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attachment::Vertex(v) => write!(f, "v:{v}"),
            Attachment::Stem(j) => write!(f, "j:{j}"),
            Attachment::Free(e) => write!(f, "free:{e}"),
        }
    }
}

/// An oriented edge, running from its lower to its upper attachment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub lower: Attachment,
    pub upper: Attachment,
}

/// A junction: an ordered, non-repeating list of member vertices. The list
/// order realizes the fixed linear order of the cataclysm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Junction {
    pub id: JunctionId,
    pub members: Vec<VertexId>,
}

/// An unvalidated model description.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawLeafSpace {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub junctions: Vec<Junction>,
}

impl RawLeafSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str) {
        self.vertices.push(VertexId::new(id));
    }

    pub fn add_edge(&mut self, id: &str, lower: Attachment, upper: Attachment) {
        self.edges.push(Edge {
            id: EdgeId::new(id),
            lower,
            upper,
        });
    }

    pub fn add_junction(&mut self, id: &str, members: &[&str]) {
        self.junctions.push(Junction {
            id: JunctionId::new(id),
            members: members.iter().map(|m| VertexId::new(*m)).collect(),
        });
    }
}

/// A single structural violation found during validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationError {
    BadIdentifier { kind: &'static str, id: String },
    DuplicateId { kind: &'static str, id: String },
    DanglingReference { referrer: String, missing: String },
    JunctionArity { junction: JunctionId, arity: usize },
    DuplicateMember { junction: JunctionId, vertex: VertexId },
    MissingStem { junction: JunctionId },
    MultipleStems { junction: JunctionId },
    MixedMemberSides { junction: JunctionId },
    StemDirectionMismatch { junction: JunctionId },
    PortConflict { vertex: VertexId, port: Extremity },
    UnusedPort { vertex: VertexId, port: Extremity },
    NoEdges,
    NotATree,
    Disconnected,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::BadIdentifier { kind, id } => {
                write!(f, "BadIdentifier: {kind} id {id:?} is not a valid identifier")
            }
            ValidationError::DuplicateId { kind, id } => {
                write!(f, "DuplicateId: {kind} id {id:?} declared more than once")
            }
            ValidationError::DanglingReference { referrer, missing } => {
                write!(f, "DanglingReference: {referrer} refers to unknown {missing}")
            }
            ValidationError::JunctionArity { junction, arity } => {
                write!(f, "JunctionArity: junction {junction} has {arity} members, need at least 2")
            }
            ValidationError::DuplicateMember { junction, vertex } => {
                write!(f, "DuplicateMember: junction {junction} lists vertex {vertex} twice")
            }
            ValidationError::MissingStem { junction } => {
                write!(f, "MissingStem: junction {junction} has no stem edge")
            }
            ValidationError::MultipleStems { junction } => {
                write!(f, "MultipleStems: junction {junction} has more than one stem attachment")
            }
            ValidationError::MixedMemberSides { junction } => {
                write!(f, "MixedMemberSides: members of junction {junction} attach on different sides")
            }
            ValidationError::StemDirectionMismatch { junction } => {
                write!(f, "StemDirectionMismatch: stem direction of junction {junction} contradicts its member side")
            }
            ValidationError::PortConflict { vertex, port } => {
                write!(f, "PortConflict: {:?} port of vertex {vertex} used more than once", port)
            }
            ValidationError::UnusedPort { vertex, port } => {
                write!(f, "UnusedPort: {:?} port of vertex {vertex} is not consumed", port)
            }
            ValidationError::NoEdges => write!(f, "NoEdges: a leaf space needs at least one edge"),
            ValidationError::NotATree => write!(f, "NotATree: the incidence graph contains a cycle"),
            ValidationError::Disconnected => {
                write!(f, "Disconnected: the incidence graph is not connected")
            }
        }
    }
}

/// All violations found in one validation pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A point of the model: a vertex or an exact rational position in the
/// interior of an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointRef {
    AtVertex(VertexId),
    OnEdge(EdgeId, Position),
}

impl PointRef {
    pub fn at_vertex(id: &str) -> Self {
        PointRef::AtVertex(VertexId::new(id))
    }

    pub fn on_edge(id: &str, numer: i64, denom: i64) -> Self {
        PointRef::OnEdge(EdgeId::new(id), Ratio::new(numer, denom))
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::AtVertex(v) => write!(f, "v:{v}"),
            PointRef::OnEdge(e, p) => write!(f, "e:{e}:{p}"),
        }
    }
}

/// A free edge extremity, standing for an end. Upper extremities are
/// positive ends, lower extremities negative ends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EndRef {
    pub edge: EdgeId,
    pub extremity: Extremity,
    pub name: EndName,
}

impl EndRef {
    pub fn is_positive(&self) -> bool {
        self.extremity == Extremity::Upper
    }
}

impl fmt::Display for EndRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "end:{}", self.name)
    }
}

/// Finite proxy of the branching trichotomy, by end counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    /// One positive and one negative end.
    RCoveredProxy,
    /// Exactly one end on one side; the payload names the branching side.
    OneSidedProxy(Sign),
    /// At least two ends on both sides.
    TwoSidedProxy,
}

impl fmt::Display for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branching::RCoveredProxy => write!(f, "r-covered"),
            Branching::OneSidedProxy(Sign::Positive) => write!(f, "one-sided (positive-branching)"),
            Branching::OneSidedProxy(Sign::Negative) => write!(f, "one-sided (negative-branching)"),
            Branching::TwoSidedProxy => write!(f, "two-sided"),
        }
    }
}

/// A cataclysm as reported by [`LeafSpace::cataclysms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cataclysm {
    pub junction: JunctionId,
    pub sign: Sign,
    pub members: Vec<VertexId>,
}

/// Errors raised by queries on a sealed model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryError {
    SamePoint,
    SameEnd,
    UnknownVertex(String),
    UnknownEdge(String),
    UnknownJunction(String),
    UnknownEnd(String),
    PositionOutOfRange(String),
    DifferentComponents,
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::SamePoint => write!(f, "SamePoint: the two points coincide"),
            QueryError::SameEnd => write!(f, "SameEnd: the two ends coincide"),
            QueryError::UnknownVertex(v) => write!(f, "UnknownVertex: {v}"),
            QueryError::UnknownEdge(e) => write!(f, "UnknownEdge: {e}"),
            QueryError::UnknownJunction(j) => write!(f, "UnknownJunction: {j}"),
            QueryError::UnknownEnd(e) => write!(f, "UnknownEnd: {e}"),
            QueryError::PositionOutOfRange(p) => {
                write!(f, "PositionOutOfRange: {p} is not strictly between 0 and 1")
            }
            QueryError::DifferentComponents => {
                write!(f, "DifferentComponents: the locations lie in different components")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct JunctionData {
    members: Vec<VertexId>,
    sign: Sign,
    stem: EdgeId,
    member_rank: BTreeMap<VertexId, usize>,
}

/// Node of the incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum NodeKind {
    Vertex(VertexId),
    Junction(JunctionId),
    End(EndName),
}

/// One adjacency entry of the incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Arc {
    pub to: usize,
    pub link: Link,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Link {
    Edge(EdgeId),
    Member { junction: JunctionId, vertex: VertexId },
}

/// Location used by the walk engine: a node of the incidence graph or an
/// interior point of an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Loc {
    Node(usize),
    Interior(EdgeId, Position),
}

/// A primitive movement of a walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Move {
    /// Along (part of) an edge; positions are 0 at the lower extremity and 1
    /// at the upper extremity.
    Edge {
        id: EdgeId,
        from_pos: Position,
        to_pos: Position,
    },
    /// From a member vertex into its junction node.
    MemberIn { junction: JunctionId, vertex: VertexId },
    /// From a junction node out to a member vertex.
    MemberOut { junction: JunctionId, vertex: VertexId },
}

/// The unique walk between two locations of the incidence tree.
#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub stations: Vec<Loc>,
    pub moves: Vec<Move>,
}

/// A sealed, immutable leaf-space model. All queries are pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSpace {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    junctions: BTreeMap<JunctionId, JunctionData>,
    nodes: Vec<NodeKind>,
    adj: Vec<Vec<Arc>>,
    vertex_node: BTreeMap<VertexId, usize>,
    junction_node: BTreeMap<JunctionId, usize>,
    end_node: BTreeMap<EndName, usize>,
    ends_positive: Vec<EndRef>,
    ends_negative: Vec<EndRef>,
}

fn is_valid_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_whitespace() && c != ',' && !c.is_control())
}

fn side_for_sign(sign: Sign) -> Extremity {
    // A negative junction sits below its members and consumes their lower
    // ports; a positive junction consumes the upper ports.
    match sign {
        Sign::Negative => Extremity::Lower,
        Sign::Positive => Extremity::Upper,
    }
}

impl LeafSpace {
    /// Validate a raw description and seal it. Returns a report listing every
    /// violation if any structural axiom fails.
    pub fn validate(raw: RawLeafSpace) -> Result<LeafSpace, ValidationReport> {
        Self::validate_inner(raw, true)
    }

    /// Like [`LeafSpace::validate`] but allowing several connected
    /// components. Proper leaf spaces are connected; multi-component unions
    /// are used as fixtures for symmetry and action experiments, where a
    /// disjoint union of isomorphic copies carries the component-swapping
    /// maps that no connected model admits.
    pub fn validate_forest(raw: RawLeafSpace) -> Result<LeafSpace, ValidationReport> {
        Self::validate_inner(raw, false)
    }

    fn validate_inner(raw: RawLeafSpace, require_connected: bool) -> Result<LeafSpace, ValidationReport> {
        let mut errors: Vec<ValidationError> = Vec::new();

        // Identifier format and uniqueness per kind.
        let mut vertex_set: BTreeSet<VertexId> = BTreeSet::new();
        for v in &raw.vertices {
            if !is_valid_id(v.as_str()) {
                errors.push(ValidationError::BadIdentifier {
                    kind: VertexId::KIND,
                    id: v.as_str().to_string(),
                });
            }
            if !vertex_set.insert(v.clone()) {
                errors.push(ValidationError::DuplicateId {
                    kind: VertexId::KIND,
                    id: v.as_str().to_string(),
                });
            }
        }
        let mut edge_map: BTreeMap<EdgeId, Edge> = BTreeMap::new();
        for e in &raw.edges {
            if !is_valid_id(e.id.as_str()) {
                errors.push(ValidationError::BadIdentifier {
                    kind: EdgeId::KIND,
                    id: e.id.as_str().to_string(),
                });
            }
            if edge_map.insert(e.id.clone(), e.clone()).is_some() {
                errors.push(ValidationError::DuplicateId {
                    kind: EdgeId::KIND,
                    id: e.id.as_str().to_string(),
                });
            }
        }
        let mut junction_ids: BTreeSet<JunctionId> = BTreeSet::new();
        for j in &raw.junctions {
            if !is_valid_id(j.id.as_str()) {
                errors.push(ValidationError::BadIdentifier {
                    kind: JunctionId::KIND,
                    id: j.id.as_str().to_string(),
                });
            }
            if !junction_ids.insert(j.id.clone()) {
                errors.push(ValidationError::DuplicateId {
                    kind: JunctionId::KIND,
                    id: j.id.as_str().to_string(),
                });
            }
        }
        let mut end_names: BTreeSet<EndName> = BTreeSet::new();
        for e in &raw.edges {
            for att in [&e.lower, &e.upper] {
                if let Attachment::Free(name) = att {
                    if !is_valid_id(name.as_str()) {
                        errors.push(ValidationError::BadIdentifier {
                            kind: EndName::KIND,
                            id: name.as_str().to_string(),
                        });
                    }
                    if !end_names.insert(name.clone()) {
                        errors.push(ValidationError::DuplicateId {
                            kind: EndName::KIND,
                            id: name.as_str().to_string(),
                        });
                    }
                }
            }
        }

        // Dangling references.
        for e in &raw.edges {
            for att in [&e.lower, &e.upper] {
                match att {
                    Attachment::Vertex(v) if !vertex_set.contains(v) => {
                        errors.push(ValidationError::DanglingReference {
                            referrer: format!("edge {}", e.id),
                            missing: format!("vertex {v}"),
                        });
                    }
                    Attachment::Stem(j) if !junction_ids.contains(j) => {
                        errors.push(ValidationError::DanglingReference {
                            referrer: format!("edge {}", e.id),
                            missing: format!("junction {j}"),
                        });
                    }
                    _ => {}
                }
            }
        }
        for j in &raw.junctions {
            for m in &j.members {
                if !vertex_set.contains(m) {
                    errors.push(ValidationError::DanglingReference {
                        referrer: format!("junction {}", j.id),
                        missing: format!("vertex {m}"),
                    });
                }
            }
        }

        if raw.edges.is_empty() {
            errors.push(ValidationError::NoEdges);
        }

        // Per-vertex port consumption by edges.
        #[derive(Default, Clone)]
        struct Ports {
            lower: usize,
            upper: usize,
        }
        let mut edge_ports: BTreeMap<VertexId, Ports> = BTreeMap::new();
        for e in edge_map.values() {
            if let Attachment::Vertex(v) = &e.lower {
                edge_ports.entry(v.clone()).or_default().upper += 1;
            }
            if let Attachment::Vertex(v) = &e.upper {
                edge_ports.entry(v.clone()).or_default().lower += 1;
            }
        }

        // Junction arity, duplicate members, stems, signs, member sides.
        let mut junction_data: BTreeMap<JunctionId, JunctionData> = BTreeMap::new();
        let mut membership_ports: BTreeMap<VertexId, Ports> = BTreeMap::new();
        for j in &raw.junctions {
            let mut seen = BTreeSet::new();
            let mut dup = false;
            for m in &j.members {
                if !seen.insert(m.clone()) {
                    errors.push(ValidationError::DuplicateMember {
                        junction: j.id.clone(),
                        vertex: m.clone(),
                    });
                    dup = true;
                }
            }
            if j.members.len() < 2 {
                errors.push(ValidationError::JunctionArity {
                    junction: j.id.clone(),
                    arity: j.members.len(),
                });
                continue;
            }
            if dup || j.members.iter().any(|m| !vertex_set.contains(m)) {
                continue;
            }

            // Stem: the unique edge extremity attached to this junction.
            let mut stem: Option<(EdgeId, Sign)> = None;
            let mut stem_count = 0usize;
            for e in edge_map.values() {
                if e.lower == Attachment::Stem(j.id.clone()) {
                    stem_count += 1;
                    stem = Some((e.id.clone(), Sign::Positive));
                }
                if e.upper == Attachment::Stem(j.id.clone()) {
                    stem_count += 1;
                    stem = Some((e.id.clone(), Sign::Negative));
                }
            }
            let (stem_edge, sign) = match stem_count {
                0 => {
                    errors.push(ValidationError::MissingStem { junction: j.id.clone() });
                    continue;
                }
                1 => stem.unwrap(),
                _ => {
                    errors.push(ValidationError::MultipleStems { junction: j.id.clone() });
                    continue;
                }
            };

            // Member side forced by edge consumption: a port already used by
            // an edge cannot also carry the membership.
            let mut forced: Option<Extremity> = None;
            let mut mixed = false;
            for m in &j.members {
                let ports = edge_ports.get(m).cloned().unwrap_or(Ports { lower: 0, upper: 0 });
                let must = match (ports.lower > 0, ports.upper > 0) {
                    (true, false) => Some(Extremity::Upper),
                    (false, true) => Some(Extremity::Lower),
                    _ => None,
                };
                if let Some(side) = must {
                    match forced {
                        None => forced = Some(side),
                        Some(prev) if prev != side => mixed = true,
                        _ => {}
                    }
                }
            }
            if mixed {
                errors.push(ValidationError::MixedMemberSides { junction: j.id.clone() });
                continue;
            }
            let side = side_for_sign(sign);
            if let Some(forced_side) = forced {
                if forced_side != side {
                    errors.push(ValidationError::StemDirectionMismatch { junction: j.id.clone() });
                    continue;
                }
            }
            for m in &j.members {
                let entry = membership_ports.entry(m.clone()).or_default();
                match side {
                    Extremity::Lower => entry.lower += 1,
                    Extremity::Upper => entry.upper += 1,
                }
            }
            let member_rank = j
                .members
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i))
                .collect();
            junction_data.insert(
                j.id.clone(),
                JunctionData {
                    members: j.members.clone(),
                    sign,
                    stem: stem_edge,
                    member_rank,
                },
            );
        }

        // Final port tally: each port consumed exactly once.
        for v in &vertex_set {
            let e = edge_ports.get(v).cloned().unwrap_or(Ports { lower: 0, upper: 0 });
            let m = membership_ports.get(v).cloned().unwrap_or(Ports { lower: 0, upper: 0 });
            for (port, total) in [
                (Extremity::Lower, e.lower + m.lower),
                (Extremity::Upper, e.upper + m.upper),
            ] {
                match total {
                    0 => errors.push(ValidationError::UnusedPort {
                        vertex: v.clone(),
                        port,
                    }),
                    1 => {}
                    _ => errors.push(ValidationError::PortConflict {
                        vertex: v.clone(),
                        port,
                    }),
                }
            }
        }

        if !errors.is_empty() {
            return Err(ValidationReport { errors });
        }

        // Build the incidence graph: vertices, junctions, then end markers,
        // each block sorted by identifier.
        let mut nodes: Vec<NodeKind> = Vec::new();
        let mut vertex_node = BTreeMap::new();
        let mut junction_node = BTreeMap::new();
        let mut end_node = BTreeMap::new();
        for v in &vertex_set {
            vertex_node.insert(v.clone(), nodes.len());
            nodes.push(NodeKind::Vertex(v.clone()));
        }
        for j in junction_data.keys() {
            junction_node.insert(j.clone(), nodes.len());
            nodes.push(NodeKind::Junction(j.clone()));
        }
        let mut ends_positive = Vec::new();
        let mut ends_negative = Vec::new();
        for name in &end_names {
            end_node.insert(name.clone(), nodes.len());
            nodes.push(NodeKind::End(name.clone()));
        }
        let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); nodes.len()];
        let node_of = |att: &Attachment| -> usize {
            match att {
                Attachment::Vertex(v) => vertex_node[v],
                Attachment::Stem(j) => junction_node[j],
                Attachment::Free(e) => end_node[e],
            }
        };
        for e in edge_map.values() {
            let a = node_of(&e.lower);
            let b = node_of(&e.upper);
            adj[a].push(Arc {
                to: b,
                link: Link::Edge(e.id.clone()),
            });
            adj[b].push(Arc {
                to: a,
                link: Link::Edge(e.id.clone()),
            });
            if let Attachment::Free(name) = &e.lower {
                ends_negative.push(EndRef {
                    edge: e.id.clone(),
                    extremity: Extremity::Lower,
                    name: name.clone(),
                });
            }
            if let Attachment::Free(name) = &e.upper {
                ends_positive.push(EndRef {
                    edge: e.id.clone(),
                    extremity: Extremity::Upper,
                    name: name.clone(),
                });
            }
        }
        let mut arc_count = edge_map.len();
        for (jid, data) in &junction_data {
            let jn = junction_node[jid];
            for m in &data.members {
                let vn = vertex_node[m];
                let link = Link::Member {
                    junction: jid.clone(),
                    vertex: m.clone(),
                };
                adj[jn].push(Arc {
                    to: vn,
                    link: link.clone(),
                });
                adj[vn].push(Arc { to: jn, link });
                arc_count += 1;
            }
        }
        ends_positive.sort_by(|a, b| a.name.cmp(&b.name));
        ends_negative.sort_by(|a, b| a.name.cmp(&b.name));

        // Tree check: connected (unless a forest is allowed) and acyclic.
        let mut seen = vec![false; nodes.len()];
        let mut components = 0usize;
        for start in 0..nodes.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(n) = stack.pop() {
                for arc in &adj[n] {
                    if !seen[arc.to] {
                        seen[arc.to] = true;
                        stack.push(arc.to);
                    }
                }
            }
        }
        // A forest with `components` components has nodes - components arcs.
        if arc_count > nodes.len() - components {
            errors.push(ValidationError::NotATree);
        }
        if require_connected && components > 1 {
            errors.push(ValidationError::Disconnected);
        }
        if !errors.is_empty() {
            return Err(ValidationReport { errors });
        }

        Ok(LeafSpace {
            vertices: vertex_set,
            edges: edge_map,
            junctions: junction_data,
            nodes,
            adj,
            vertex_node,
            junction_node,
            end_node,
            ends_positive,
            ends_negative,
        })
    }

    /// The raw description of this model (used by serialization and maps).
    pub fn to_raw(&self) -> RawLeafSpace {
        RawLeafSpace {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self.edges.values().cloned().collect(),
            junctions: self
                .junctions
                .iter()
                .map(|(id, d)| Junction {
                    id: id.clone(),
                    members: d.members.clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn junction_ids(&self) -> impl Iterator<Item = &JunctionId> {
        self.junctions.keys()
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn junction_members(&self, id: &JunctionId) -> Option<&[VertexId]> {
        self.junctions.get(id).map(|d| d.members.as_slice())
    }

    pub fn junction_stem(&self, id: &JunctionId) -> Option<&EdgeId> {
        self.junctions.get(id).map(|d| &d.stem)
    }

    pub fn has_vertex(&self, id: &VertexId) -> bool {
        self.vertices.contains(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn junction_count(&self) -> usize {
        self.junctions.len()
    }

    /// Number of nodes of the incidence graph (vertices, junctions, ends).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn node_kind(&self, idx: usize) -> &NodeKind {
        &self.nodes[idx]
    }

    pub(crate) fn adjacency(&self, idx: usize) -> &[Arc] {
        &self.adj[idx]
    }

    pub(crate) fn member_rank(&self, junction: &JunctionId, vertex: &VertexId) -> Option<usize> {
        self.junctions
            .get(junction)
            .and_then(|d| d.member_rank.get(vertex).copied())
    }

    /// Sign of a junction, derived from its stem direction.
    pub fn junction_sign(&self, j: &JunctionId) -> Result<Sign, QueryError> {
        self.junctions
            .get(j)
            .map(|d| d.sign)
            .ok_or_else(|| QueryError::UnknownJunction(j.as_str().to_string()))
    }

    /// All cataclysms with their signs and stored member orders.
    pub fn cataclysms(&self) -> Vec<Cataclysm> {
        self.junctions
            .iter()
            .map(|(id, d)| Cataclysm {
                junction: id.clone(),
                sign: d.sign,
                members: d.members.clone(),
            })
            .collect()
    }

    /// Positive and negative ends, each sorted by name.
    pub fn ends(&self) -> (&[EndRef], &[EndRef]) {
        (&self.ends_positive, &self.ends_negative)
    }

    pub fn positive_ends(&self) -> &[EndRef] {
        &self.ends_positive
    }

    pub fn negative_ends(&self) -> &[EndRef] {
        &self.ends_negative
    }

    pub fn end_by_name(&self, name: &str) -> Option<&EndRef> {
        let key = EndName::new(name);
        self.ends_positive
            .iter()
            .chain(self.ends_negative.iter())
            .find(|e| e.name == key)
    }

    /// Branching type by end counts.
    pub fn classify_branching(&self) -> Branching {
        let p = self.ends_positive.len();
        let n = self.ends_negative.len();
        match (p, n) {
            (1, 1) => Branching::RCoveredProxy,
            (1, _) => Branching::OneSidedProxy(Sign::Negative),
            (_, 1) => Branching::OneSidedProxy(Sign::Positive),
            _ => Branching::TwoSidedProxy,
        }
    }

    fn check_point(&self, p: &PointRef) -> Result<(), QueryError> {
        match p {
            PointRef::AtVertex(v) => {
                if self.vertices.contains(v) {
                    Ok(())
                } else {
                    Err(QueryError::UnknownVertex(v.as_str().to_string()))
                }
            }
            PointRef::OnEdge(e, pos) => {
                if !self.edges.contains_key(e) {
                    return Err(QueryError::UnknownEdge(e.as_str().to_string()));
                }
                let zero = Ratio::new(0, 1);
                let one = Ratio::new(1, 1);
                if *pos <= zero || *pos >= one {
                    return Err(QueryError::PositionOutOfRange(format!("{pos}")));
                }
                Ok(())
            }
        }
    }

    pub(crate) fn point_loc(&self, p: &PointRef) -> Result<Loc, QueryError> {
        self.check_point(p)?;
        Ok(match p {
            PointRef::AtVertex(v) => Loc::Node(self.vertex_node[v]),
            PointRef::OnEdge(e, pos) => Loc::Interior(e.clone(), *pos),
        })
    }

    pub(crate) fn end_loc(&self, e: &EndRef) -> Result<Loc, QueryError> {
        match self.end_node.get(&e.name) {
            Some(&n) => Ok(Loc::Node(n)),
            None => Err(QueryError::UnknownEnd(e.name.as_str().to_string())),
        }
    }

    fn edge_extremity_node(&self, id: &EdgeId, ext: Extremity) -> usize {
        let edge = &self.edges[id];
        let att = match ext {
            Extremity::Lower => &edge.lower,
            Extremity::Upper => &edge.upper,
        };
        match att {
            Attachment::Vertex(v) => self.vertex_node[v],
            Attachment::Stem(j) => self.junction_node[j],
            Attachment::Free(e) => self.end_node[e],
        }
    }

    /// Whether a move from `from` along `arc` goes upward.
    pub(crate) fn arc_ascends(&self, from: usize, arc: &Arc) -> bool {
        match &arc.link {
            Link::Edge(id) => self.edge_extremity_node(id, Extremity::Lower) == from,
            Link::Member { junction, .. } => {
                let sign = self.junctions[junction].sign;
                match &self.nodes[from] {
                    // Positive junctions sit above their members.
                    NodeKind::Vertex(_) => sign == Sign::Positive,
                    _ => sign == Sign::Negative,
                }
            }
        }
    }

    /// Unique walk between two distinct locations of the incidence tree.
    pub(crate) fn walk(&self, a: &Loc, b: &Loc) -> Result<Walk, QueryError> {
        if a == b {
            return Err(QueryError::SamePoint);
        }
        // Both interior to the same edge: a single partial move.
        if let (Loc::Interior(ea, pa), Loc::Interior(eb, pb)) = (a, b) {
            if ea == eb {
                return Ok(Walk {
                    stations: vec![a.clone(), b.clone()],
                    moves: vec![Move::Edge {
                        id: ea.clone(),
                        from_pos: *pa,
                        to_pos: *pb,
                    }],
                });
            }
        }

        let mut blocked: Vec<EdgeId> = Vec::new();
        if let Loc::Interior(e, _) = a {
            blocked.push(e.clone());
        }
        if let Loc::Interior(e, _) = b {
            blocked.push(e.clone());
        }

        // BFS from b's entry nodes toward a, with the endpoint edges cut so
        // the reached extremity of each cut edge is the one facing the other
        // endpoint.
        let mut parent: Vec<Option<(usize, Link)>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut queue: Vec<usize> = Vec::new();
        match b {
            Loc::Node(n) => {
                seen[*n] = true;
                queue.push(*n);
            }
            Loc::Interior(e, _) => {
                for ext in [Extremity::Lower, Extremity::Upper] {
                    let n = self.edge_extremity_node(e, ext);
                    if !seen[n] {
                        seen[n] = true;
                        queue.push(n);
                    }
                }
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let n = queue[head];
            head += 1;
            for arc in &self.adj[n] {
                if let Link::Edge(id) = &arc.link {
                    if blocked.contains(id) {
                        continue;
                    }
                }
                if !seen[arc.to] {
                    seen[arc.to] = true;
                    parent[arc.to] = Some((n, arc.link.clone()));
                    queue.push(arc.to);
                }
            }
        }

        // Find a's exit node.
        let exit = match a {
            Loc::Node(n) => {
                if !seen[*n] {
                    return Err(QueryError::DifferentComponents);
                }
                *n
            }
            Loc::Interior(e, _) => {
                let lo = self.edge_extremity_node(e, Extremity::Lower);
                let hi = self.edge_extremity_node(e, Extremity::Upper);
                match (seen[lo], seen[hi]) {
                    (true, false) => lo,
                    (false, true) => hi,
                    // Both reached only when b seeded both sides of a's own
                    // edge, which the same-edge case already handled.
                    (true, true) => {
                        debug_assert!(false, "ambiguous exit");
                        lo
                    }
                    (false, false) => return Err(QueryError::DifferentComponents),
                }
            }
        };

        // Node chain from exit toward b's seed.
        let mut chain: Vec<usize> = vec![exit];
        let mut links: Vec<Link> = Vec::new();
        let mut cur = exit;
        while let Some((p, link)) = parent[cur].clone() {
            links.push(link);
            chain.push(p);
            cur = p;
        }

        let mut stations: Vec<Loc> = Vec::new();
        let mut moves: Vec<Move> = Vec::new();
        // Partial move out of a.
        if let Loc::Interior(e, pos) = a {
            stations.push(a.clone());
            let lo = self.edge_extremity_node(e, Extremity::Lower);
            let to_pos = if exit == lo { Ratio::new(0, 1) } else { Ratio::new(1, 1) };
            moves.push(Move::Edge {
                id: e.clone(),
                from_pos: *pos,
                to_pos,
            });
        }
        for (i, &n) in chain.iter().enumerate() {
            stations.push(Loc::Node(n));
            if i < links.len() {
                let next = chain[i + 1];
                moves.push(self.link_move(n, next, &links[i]));
            }
        }
        // Partial move into b.
        if let Loc::Interior(e, pos) = b {
            let last = *chain.last().unwrap();
            let lo = self.edge_extremity_node(e, Extremity::Lower);
            let from_pos = if last == lo { Ratio::new(0, 1) } else { Ratio::new(1, 1) };
            moves.push(Move::Edge {
                id: e.clone(),
                from_pos,
                to_pos: *pos,
            });
            stations.push(b.clone());
        }
        Ok(Walk { stations, moves })
    }

    fn link_move(&self, from: usize, _to: usize, link: &Link) -> Move {
        match link {
            Link::Edge(id) => {
                let lo = self.edge_extremity_node(id, Extremity::Lower);
                let (from_pos, to_pos) = if from == lo {
                    (Ratio::new(0, 1), Ratio::new(1, 1))
                } else {
                    (Ratio::new(1, 1), Ratio::new(0, 1))
                };
                Move::Edge {
                    id: id.clone(),
                    from_pos,
                    to_pos,
                }
            }
            Link::Member { junction, vertex } => match &self.nodes[from] {
                NodeKind::Vertex(_) => Move::MemberIn {
                    junction: junction.clone(),
                    vertex: vertex.clone(),
                },
                _ => Move::MemberOut {
                    junction: junction.clone(),
                    vertex: vertex.clone(),
                },
            },
        }
    }

    pub(crate) fn move_ascends(&self, m: &Move) -> bool {
        match m {
            Move::Edge { from_pos, to_pos, .. } => to_pos > from_pos,
            Move::MemberIn { junction, .. } => self.junctions[junction].sign == Sign::Positive,
            Move::MemberOut { junction, .. } => self.junctions[junction].sign == Sign::Negative,
        }
    }

    /// Which side of `t` the point `p` lies on: `Positive` iff the unique
    /// incidence path from `t` to `p` departs through `t`'s upper direction.
    pub fn side_of(&self, t: &PointRef, p: &PointRef) -> Result<Sign, QueryError> {
        if t == p {
            return Err(QueryError::SamePoint);
        }
        let a = self.point_loc(t)?;
        let b = self.point_loc(p)?;
        let walk = self.walk(&a, &b)?;
        let first = walk.moves.first().expect("non-empty walk");
        Ok(if self.move_ascends(first) {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }

    /// Whether `t` lies in the interior of the unique incidence path between
    /// `u` and `v`.
    pub fn separates(&self, t: &PointRef, u: &PointRef, v: &PointRef) -> Result<bool, QueryError> {
        if t == u || t == v || u == v {
            return Err(QueryError::SamePoint);
        }
        self.check_point(t)?;
        let a = self.point_loc(u)?;
        let b = self.point_loc(v)?;
        let walk = self.walk(&a, &b)?;
        match t {
            PointRef::AtVertex(w) => {
                let wn = self.vertex_node[w];
                // Interior stations only; the endpoints are u and v.
                Ok(walk.stations[1..walk.stations.len() - 1]
                    .iter()
                    .any(|s| matches!(s, Loc::Node(n) if *n == wn)))
            }
            PointRef::OnEdge(e, q) => {
                for m in &walk.moves {
                    if let Move::Edge { id, from_pos, to_pos } = m {
                        if id == e {
                            let (lo, hi) = if from_pos < to_pos {
                                (*from_pos, *to_pos)
                            } else {
                                (*to_pos, *from_pos)
                            };
                            if *q > lo && *q < hi {
                                return Ok(true);
                            }
                        }
                    }
                }
                Ok(false)
            }
        }
    }

    /// Independent route to the cataclysms: maximal cliques (of size >= 2)
    /// of the non-separation relation on vertices, computed purely from
    /// [`LeafSpace::separates`] with all vertices and all edge midpoints as
    /// separator candidates. Junction tables are not consulted.
    pub fn cataclysm_cliques_by_separation(&self) -> Vec<Vec<VertexId>> {
        let verts: Vec<VertexId> = self.vertices.iter().cloned().collect();
        let mut candidates: Vec<PointRef> = verts.iter().cloned().map(PointRef::AtVertex).collect();
        for e in self.edges.keys() {
            candidates.push(PointRef::OnEdge(e.clone(), Ratio::new(1, 2)));
        }
        let n = verts.len();
        let mut non_sep = vec![BTreeSet::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let u = PointRef::AtVertex(verts[i].clone());
                let v = PointRef::AtVertex(verts[j].clone());
                let separated = candidates.iter().any(|t| {
                    if *t == u || *t == v {
                        return false;
                    }
                    self.separates(t, &u, &v).unwrap_or(false)
                });
                if !separated {
                    non_sep[i].insert(j);
                    non_sep[j].insert(i);
                }
            }
        }
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        let all: BTreeSet<usize> = (0..n).collect();
        bron_kerbosch(&non_sep, Vec::new(), all, BTreeSet::new(), &mut cliques);
        let mut out: Vec<Vec<VertexId>> = cliques
            .into_iter()
            .filter(|c| c.len() >= 2)
            .map(|c| {
                let mut ids: Vec<VertexId> = c.into_iter().map(|i| verts[i].clone()).collect();
                ids.sort();
                ids
            })
            .collect();
        out.sort();
        out
    }
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    while let Some(&v) = p.iter().next() {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.intersection(&adj[v]).copied().collect();
        let x2 = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y_neg_raw() -> RawLeafSpace {
        let mut raw = RawLeafSpace::new();
        raw.add_vertex("w");
        raw.add_vertex("u");
        raw.add_vertex("v");
        raw.add_edge("e0", Attachment::free("n0"), Attachment::vertex("w"));
        raw.add_edge("e1", Attachment::vertex("w"), Attachment::stem("J"));
        raw.add_edge("e2", Attachment::vertex("u"), Attachment::free("X1"));
        raw.add_edge("e3", Attachment::vertex("v"), Attachment::free("X2"));
        raw.add_junction("J", &["u", "v"]);
        raw
    }

    fn y_neg() -> LeafSpace {
        LeafSpace::validate(y_neg_raw()).expect("y-neg is valid")
    }

    fn line() -> LeafSpace {
        let mut raw = RawLeafSpace::new();
        raw.add_edge("e0", Attachment::free("n0"), Attachment::free("p0"));
        LeafSpace::validate(raw).expect("line is valid")
    }

    #[test]
    fn y_neg_validates_with_negative_junction() {
        let ls = y_neg();
        assert_eq!(ls.junction_sign(&JunctionId::new("J")), Ok(Sign::Negative));
        assert_eq!(ls.vertex_count(), 3);
        assert_eq!(ls.edge_count(), 4);
    }

    #[test]
    fn junction_arity_below_two_rejected() {
        let mut raw = y_neg_raw();
        raw.junctions[0].members.pop();
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::JunctionArity { arity: 1, .. })));
    }

    #[test]
    fn port_conflict_on_extra_edge() {
        let mut raw = y_neg_raw();
        raw.add_edge("e4", Attachment::vertex("u"), Attachment::free("X3"));
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report.errors.iter().any(|e| matches!(
            e,
            ValidationError::PortConflict { vertex, port: Extremity::Upper } if vertex.as_str() == "u"
        )));
    }

    #[test]
    fn unused_port_reported() {
        let mut raw = RawLeafSpace::new();
        raw.add_vertex("w");
        raw.add_edge("e0", Attachment::free("n0"), Attachment::vertex("w"));
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report.errors.iter().any(|e| matches!(
            e,
            ValidationError::UnusedPort { port: Extremity::Upper, .. }
        )));
    }

    #[test]
    fn missing_stem_and_dangling_reference() {
        let mut raw = RawLeafSpace::new();
        raw.add_vertex("u");
        raw.add_vertex("v");
        raw.add_edge("e0", Attachment::vertex("u"), Attachment::free("X1"));
        raw.add_edge("e1", Attachment::vertex("v"), Attachment::free("X2"));
        raw.add_junction("J", &["u", "v", "zz"]);
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::DanglingReference { .. })));
        let mut raw = y_neg_raw();
        raw.edges[1].upper = Attachment::free("q0");
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::MissingStem { .. })));
    }

    #[test]
    fn stem_direction_mismatch_detected() {
        // Members are forced to their lower ports by the ray edges, but the
        // stem descends from the junction as if it were positive.
        let mut raw = RawLeafSpace::new();
        raw.add_vertex("u");
        raw.add_vertex("v");
        raw.add_vertex("w");
        raw.add_edge("e0", Attachment::stem("J"), Attachment::vertex("w"));
        raw.add_edge("e1", Attachment::vertex("w"), Attachment::free("p0"));
        raw.add_edge("e2", Attachment::vertex("u"), Attachment::free("X1"));
        raw.add_edge("e3", Attachment::vertex("v"), Attachment::free("X2"));
        raw.add_junction("J", &["u", "v"]);
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::StemDirectionMismatch { .. })));
    }

    #[test]
    fn cycle_rejected() {
        let mut raw = RawLeafSpace::new();
        raw.add_vertex("m");
        raw.add_vertex("x");
        raw.add_edge("e1", Attachment::vertex("m"), Attachment::stem("K"));
        raw.add_edge("e2", Attachment::vertex("x"), Attachment::free("X1"));
        raw.add_junction("K", &["m", "x"]);
        let report = LeafSpace::validate(raw).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::NotATree)));
    }

    #[test]
    fn disconnected_rejected_but_forest_sealable() {
        let mut raw = RawLeafSpace::new();
        raw.add_edge("e0", Attachment::free("n0"), Attachment::free("p0"));
        raw.add_edge("e1", Attachment::free("n1"), Attachment::free("p1"));
        let report = LeafSpace::validate(raw.clone()).unwrap_err();
        assert!(report
            .errors
            .iter()
            .any(|e| matches!(e, ValidationError::Disconnected)));
        let forest = LeafSpace::validate_forest(raw).expect("forest seals");
        assert_eq!(forest.edge_count(), 2);
    }

    #[test]
    fn side_of_examples() {
        let ls = y_neg();
        let w = PointRef::at_vertex("w");
        let u = PointRef::at_vertex("u");
        let v = PointRef::at_vertex("v");
        assert_eq!(ls.side_of(&w, &u), Ok(Sign::Positive));
        assert_eq!(ls.side_of(&u, &w), Ok(Sign::Negative));
        assert_eq!(ls.side_of(&u, &v), Ok(Sign::Negative));
        assert_eq!(ls.side_of(&v, &u), Ok(Sign::Negative));
        assert_eq!(ls.side_of(&u, &u), Err(QueryError::SamePoint));
    }

    #[test]
    fn separates_examples() {
        let ls = y_neg();
        let w = PointRef::at_vertex("w");
        let u = PointRef::at_vertex("u");
        let v = PointRef::at_vertex("v");
        // Cataclysm members are never separated.
        assert_eq!(ls.separates(&w, &u, &v), Ok(false));
        // A waypoint between u and its end is cut off by u.
        let p = PointRef::on_edge("e2", 1, 2);
        assert_eq!(ls.separates(&u, &w, &p), Ok(true));
        assert_eq!(ls.separates(&u, &p, &w), Ok(true));
        // w lies between anything below it and the members above.
        let p0 = PointRef::on_edge("e0", 1, 3);
        assert_eq!(ls.separates(&w, &p0, &u), Ok(true));
        assert_eq!(ls.separates(&p0, &w, &u), Ok(false));
    }

    #[test]
    fn edge_point_side_and_position_range() {
        let ls = line();
        let a = PointRef::on_edge("e0", 1, 4);
        let b = PointRef::on_edge("e0", 3, 4);
        assert_eq!(ls.side_of(&a, &b), Ok(Sign::Positive));
        assert_eq!(ls.side_of(&b, &a), Ok(Sign::Negative));
        let bad = PointRef::on_edge("e0", 5, 4);
        assert!(matches!(
            ls.side_of(&bad, &a),
            Err(QueryError::PositionOutOfRange(_))
        ));
    }

    #[test]
    fn cataclysms_reported_with_order() {
        let ls = y_neg();
        let cats = ls.cataclysms();
        assert_eq!(cats.len(), 1);
        assert_eq!(cats[0].junction.as_str(), "J");
        assert_eq!(cats[0].sign, Sign::Negative);
        assert_eq!(
            cats[0].members,
            alloc::vec![VertexId::new("u"), VertexId::new("v")]
        );
        assert!(line().cataclysms().is_empty());
    }

    #[test]
    fn separation_clique_oracle_matches_y_neg() {
        let ls = y_neg();
        let cliques = ls.cataclysm_cliques_by_separation();
        assert_eq!(cliques, alloc::vec![alloc::vec![VertexId::new("u"), VertexId::new("v")]]);
        assert!(line().cataclysm_cliques_by_separation().is_empty());
    }

    #[test]
    fn ends_and_branching() {
        let ls = y_neg();
        let (pos, neg) = ls.ends();
        let pos_names: Vec<&str> = pos.iter().map(|e| e.name.as_str()).collect();
        let neg_names: Vec<&str> = neg.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(pos_names, alloc::vec!["X1", "X2"]);
        assert_eq!(neg_names, alloc::vec!["n0"]);
        assert_eq!(ls.classify_branching(), Branching::OneSidedProxy(Sign::Positive));
        assert_eq!(line().classify_branching(), Branching::RCoveredProxy);
    }

    #[test]
    fn queries_are_pure() {
        let ls = y_neg();
        let u = PointRef::at_vertex("u");
        let v = PointRef::at_vertex("v");
        let first = ls.side_of(&u, &v);
        for _ in 0..3 {
            assert_eq!(ls.side_of(&u, &v), first);
        }
    }
}
