//! Named example models, a seeded random generator, the `.lsp` text format,
//! and a DOT export.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endorder;
use crate::model::{
    Attachment, Edge, EdgeId, Junction, JunctionId, LeafSpace, Position, RawLeafSpace,
    ValidationReport, VertexId,
};

/// Canonical builtin model names.
pub const BUILTIN_NAMES: &[&str] = &[
    "line",
    "y-neg",
    "y-pos",
    "y3",
    "two-sided",
    "figure-alpha",
    "figure-ends",
];

const LINE: &str = "\
# line: a single edge with two free extremities; the Hausdorff case.
edge e0 free:n0 free:p0
";

const Y_NEG: &str = "\
# y-neg: one negative junction J with members [u, v]. The stem rises from
# the negative end n0 through the waypoint w into J; the members continue
# to the positive ends X1 and X2.
vertex w
vertex u
vertex v
edge e0 free:n0 v:w
edge e1 v:w j:J
edge e2 v:u free:X1
edge e3 v:v free:X2
junction J members=u,v
";

const Y_POS: &str = "\
# y-pos: mirror image of y-neg. One positive junction J with members
# [u, v], stem descending through w to the positive end p0; the members
# are fed by the negative ends X1 and X2.
vertex w
vertex u
vertex v
edge e0 v:w free:p0
edge e1 j:J v:w
edge e2 free:X1 v:u
edge e3 free:X2 v:v
junction J members=u,v
";

const Y3: &str = "\
# y3: one negative junction of arity three, members [u1, u2, u3], with a
# direct stem from the negative end n0 and rays to X1, X2, X3.
vertex u1
vertex u2
vertex u3
edge e0 free:n0 j:J
edge e1 v:u1 free:X1
edge e2 v:u2 free:X2
edge e3 v:u3 free:X3
junction J members=u1,u2,u3
";

const TWO_SIDED: &str = "\
# two-sided: one junction of each sign. J1 (negative, members [a, b]) and
# J2 (positive, members [c, d]) are linked by the arc b -> c, so the model
# has two positive ends (X1, X2) and two negative ends (Y1, Y2).
vertex a
vertex b
vertex c
vertex d
edge s1 free:Y1 j:J1
edge eA v:a free:X1
edge eB v:b v:c
edge s2 j:J2 free:X2
edge eD free:Y2 v:d
junction J1 members=a,b
junction J2 members=c,d
";

const FIGURE_ALPHA: &str = "\
# figure-alpha: the broken path from t1 to t16 has 8 segments and 7 cusps
# at junctions of alternating signs J1(-), J2(+), ..., J7(-). The fifth
# segment is the trivial path at t9, a vertex lying in both J4 and J5
# (a zero-length branch), realizing t9 = t10.
vertex t1
vertex t2
vertex t3
vertex t4
vertex t5
vertex t6
vertex t7
vertex t8
vertex t9
vertex t11
vertex t12
vertex t13
vertex t14
vertex t15
vertex t16
edge e0 v:t1 free:p1
edge e1 v:t2 v:t1
edge e2 v:t3 v:t4
edge e3 v:t6 v:t5
edge e4 v:t7 v:t8
edge e5 v:t11 v:t12
edge e6 v:t14 v:t13
edge e7 v:t15 v:t16
edge e8 v:t16 free:p16
edge s1 free:n1 j:J1
edge s2 j:J2 free:p2
edge s3 free:n3 j:J3
edge s4 j:J4 free:p4
edge s5 free:n5 j:J5
edge s6 j:J6 free:p6
edge s7 free:n7 j:J7
junction J1 members=t2,t3
junction J2 members=t5,t4
junction J3 members=t6,t7
junction J4 members=t9,t8
junction J5 members=t9,t11
junction J6 members=t13,t12
junction J7 members=t14,t15
";

const FIGURE_ENDS: &str = "\
# figure-ends: the broken curve between the positive ends E1 and E2 has
# 4 segments and 3 cusps, at J1(-), J2(+), J3(-): down from E1 to a, jump
# to b, up to c, jump to d, down to e, jump to f, up into E2.
vertex a
vertex b
vertex c
vertex d
vertex e
vertex f
edge r1 v:a free:E1
edge m1 free:n1 j:J1
edge g1 v:b v:c
edge s2 j:J2 free:p2
edge g2 v:e v:d
edge m3 free:n3 j:J3
edge r2 v:f free:E2
junction J1 members=a,b
junction J2 members=d,c
junction J3 members=e,f
";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

impl core::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "SyntaxError(line {}): {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusError {
    UnknownName(String),
    ConfigBound(String),
    Syntax(Vec<SyntaxError>),
    Invalid(ValidationReport),
}

impl core::fmt::Display for CorpusError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CorpusError::UnknownName(n) => write!(f, "UnknownName: no builtin model {n:?}"),
            CorpusError::ConfigBound(msg) => write!(f, "ConfigBound: {msg}"),
            CorpusError::Syntax(errors) => {
                for (i, e) in errors.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            CorpusError::Invalid(report) => write!(f, "{report}"),
        }
    }
}

/// A named builtin model. `figure-α` is accepted as an alias of
/// `figure-alpha`.
pub fn builtin(name: &str) -> Result<LeafSpace, CorpusError> {
    let text = match name {
        "line" => LINE,
        "y-neg" => Y_NEG,
        "y-pos" => Y_POS,
        "y3" => Y3,
        "two-sided" => TWO_SIDED,
        "figure-alpha" | "figure-\u{3b1}" => FIGURE_ALPHA,
        "figure-ends" => FIGURE_ENDS,
        other => return Err(CorpusError::UnknownName(other.to_string())),
    };
    parse(text)
}

/// Configuration of the seeded generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub junction_count: u32,
    pub max_arity: u32,
    /// Probability that an inserted junction is positive.
    pub sign_bias: Position,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            junction_count: 0,
            max_arity: 3,
            sign_bias: Ratio::new(1, 2),
        }
    }
}

impl GeneratorConfig {
    fn check(&self) -> Result<(), CorpusError> {
        if self.junction_count > 64 {
            return Err(CorpusError::ConfigBound(format!(
                "junction_count {} exceeds 64",
                self.junction_count
            )));
        }
        if self.max_arity < 2 {
            return Err(CorpusError::ConfigBound(format!(
                "max_arity {} is below 2",
                self.max_arity
            )));
        }
        let zero = Ratio::new(0, 1);
        let one = Ratio::new(1, 1);
        if self.sign_bias < zero || self.sign_bias > one {
            return Err(CorpusError::ConfigBound(format!(
                "sign_bias {} is outside [0, 1]",
                self.sign_bias
            )));
        }
        Ok(())
    }
}

/// Deterministically generate a model: starting from the line model, insert
/// `junction_count` junctions of random sign on uniformly chosen edges. The
/// cut point becomes a fresh member vertex carrying the old upper
/// continuation (for negative junctions; dually for positive ones), and each
/// of the remaining `arity - 1` fresh members gets a fresh ray edge.
pub fn generate(cfg: &GeneratorConfig) -> Result<LeafSpace, CorpusError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut junctions: Vec<Junction> = Vec::new();
    let mut edges: Vec<Edge> = vec![Edge {
        id: EdgeId::new("e0"),
        lower: Attachment::free("neg0"),
        upper: Attachment::free("pos0"),
    }];
    let mut next_vertex = 0u32;
    let mut next_edge = 1u32;
    let mut next_pos = 1u32;
    let mut next_neg = 1u32;
    let bias_num = *cfg.sign_bias.numer() as u64;
    let bias_den = *cfg.sign_bias.denom() as u64;

    for round in 0..cfg.junction_count {
        let idx = rng.gen_range(0..edges.len());
        let positive = rng.gen_range(0..bias_den) < bias_num;
        let arity = rng.gen_range(2..=cfg.max_arity);

        let jid = JunctionId::new(format!("j{round}"));
        let cut = VertexId::new(format!("v{next_vertex}"));
        next_vertex += 1;
        vertices.push(cut.clone());

        let old_lower = edges[idx].lower.clone();
        let old_upper = edges[idx].upper.clone();
        if positive {
            // Lower half keeps the id and now ends at the cut member; the
            // stem continues from the junction to the old upper attachment.
            edges[idx].upper = Attachment::Vertex(cut.clone());
            let _ = old_lower;
            edges.push(Edge {
                id: EdgeId::new(format!("e{next_edge}")),
                lower: Attachment::Stem(jid.clone()),
                upper: old_upper,
            });
            next_edge += 1;
        } else {
            // Lower half keeps the id and becomes the stem; the cut member
            // carries the old upper continuation.
            edges[idx].upper = Attachment::Stem(jid.clone());
            edges.push(Edge {
                id: EdgeId::new(format!("e{next_edge}")),
                lower: Attachment::Vertex(cut.clone()),
                upper: old_upper,
            });
            next_edge += 1;
        }

        let mut members: Vec<VertexId> = vec![cut];
        for _ in 1..arity {
            let m = VertexId::new(format!("v{next_vertex}"));
            next_vertex += 1;
            vertices.push(m.clone());
            if positive {
                edges.push(Edge {
                    id: EdgeId::new(format!("e{next_edge}")),
                    lower: Attachment::free(format!("neg{next_neg}")),
                    upper: Attachment::Vertex(m.clone()),
                });
                next_neg += 1;
            } else {
                edges.push(Edge {
                    id: EdgeId::new(format!("e{next_edge}")),
                    lower: Attachment::Vertex(m.clone()),
                    upper: Attachment::free(format!("pos{next_pos}")),
                });
                next_pos += 1;
            }
            next_edge += 1;
            members.push(m);
        }
        members.shuffle(&mut rng);
        junctions.push(Junction {
            id: jid,
            members,
        });
    }

    let raw = RawLeafSpace {
        vertices,
        edges,
        junctions,
    };
    LeafSpace::validate(raw).map_err(CorpusError::Invalid)
}

fn parse_attachment(token: &str) -> Result<Attachment, String> {
    match token.split_once(':') {
        Some(("v", rest)) if !rest.is_empty() => Ok(Attachment::vertex(rest)),
        Some(("j", rest)) if !rest.is_empty() => Ok(Attachment::stem(rest)),
        Some(("free", rest)) if !rest.is_empty() => Ok(Attachment::free(rest)),
        _ => Err(format!("unknown attachment token {token:?}")),
    }
}

/// Parse a raw description from the text format. Records may appear in any
/// order; `#` starts a comment.
pub fn parse_raw(text: &str) -> Result<RawLeafSpace, CorpusError> {
    let mut raw = RawLeafSpace::new();
    let mut errors: Vec<SyntaxError> = Vec::new();
    for (lineno, full_line) in text.lines().enumerate() {
        let line = match full_line.find('#') {
            Some(i) => &full_line[..i],
            None => full_line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let mut fail = |message: String| {
            errors.push(SyntaxError {
                line: lineno + 1,
                message,
            })
        };
        match tokens[0] {
            "vertex" => {
                if tokens.len() != 2 {
                    fail(format!("expected `vertex <id>`, got {full_line:?}"));
                } else {
                    raw.add_vertex(tokens[1]);
                }
            }
            "edge" => {
                if tokens.len() != 4 {
                    fail(format!(
                        "expected `edge <id> <lower-attach> <upper-attach>`, got {full_line:?}"
                    ));
                } else {
                    match (parse_attachment(tokens[2]), parse_attachment(tokens[3])) {
                        (Ok(lower), Ok(upper)) => raw.edges.push(Edge {
                            id: EdgeId::new(tokens[1]),
                            lower,
                            upper,
                        }),
                        (Err(e), _) | (_, Err(e)) => fail(e),
                    }
                }
            }
            "junction" => {
                if tokens.len() != 3 || !tokens[2].starts_with("members=") {
                    fail(format!(
                        "expected `junction <id> members=<v>,<v>[,...]`, got {full_line:?}"
                    ));
                } else {
                    let list = &tokens[2]["members=".len()..];
                    let members: Vec<&str> = list.split(',').collect();
                    if members.iter().any(|m| m.is_empty()) {
                        fail(format!("empty member name in {full_line:?}"));
                    } else {
                        raw.add_junction(tokens[1], &members);
                    }
                }
            }
            other => fail(format!("unknown record {other:?}")),
        }
    }
    if errors.is_empty() {
        Ok(raw)
    } else {
        Err(CorpusError::Syntax(errors))
    }
}

/// Parse and validate a model from the text format.
pub fn parse(text: &str) -> Result<LeafSpace, CorpusError> {
    let raw = parse_raw(text)?;
    LeafSpace::validate(raw).map_err(CorpusError::Invalid)
}

/// Canonical serialization: vertices, then edges, then junctions, each
/// sorted by identifier. `parse(serialize(ls))` is structurally equal to
/// `ls` and re-serializes byte-identically.
pub fn serialize(ls: &LeafSpace) -> String {
    let raw = ls.to_raw();
    let mut out = String::new();
    for v in &raw.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in &raw.edges {
        out.push_str(&format!("edge {} {} {}\n", e.id, e.lower, e.upper));
    }
    for j in &raw.junctions {
        let members: Vec<&str> = j.members.iter().map(|m| m.as_str()).collect();
        out.push_str(&format!("junction {} members={}\n", j.id, members.join(",")));
    }
    out
}

fn quote(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// Export as a Graphviz DOT digraph: vertices as circles, junctions as
/// diamonds labeled with sign and member order, free ends as plain labels,
/// model edges directed lower to upper, and memberships as dashed lines.
/// With `annotate`, positive ends carry their rank in the end order.
pub fn export_graph(ls: &LeafSpace, annotate: bool) -> String {
    let ranks: alloc::collections::BTreeMap<String, usize> = if annotate {
        match endorder::end_order(ls) {
            Ok(order) => order
                .iter()
                .enumerate()
                .map(|(i, e)| (e.name.as_str().to_string(), i + 1))
                .collect(),
            Err(_) => Default::default(),
        }
    } else {
        Default::default()
    };
    let mut out = String::new();
    out.push_str("digraph leafspace {\n");
    out.push_str("  rankdir=BT;\n");
    for v in ls.vertex_ids() {
        out.push_str(&format!(
            "  \"v:{}\" [shape=circle, label=\"{}\"];\n",
            quote(v.as_str()),
            quote(v.as_str())
        ));
    }
    for c in ls.cataclysms() {
        let members: Vec<&str> = c.members.iter().map(|m| m.as_str()).collect();
        out.push_str(&format!(
            "  \"j:{}\" [shape=diamond, label=\"{} [{}]\"];\n",
            quote(c.junction.as_str()),
            c.sign,
            quote(&members.join("<"))
        ));
    }
    let (pos, neg) = ls.ends();
    for e in pos.iter().chain(neg.iter()) {
        let label = match ranks.get(e.name.as_str()) {
            Some(r) => format!("{} [rank {}]", e.name, r),
            None => e.name.as_str().to_string(),
        };
        out.push_str(&format!(
            "  \"end:{}\" [shape=none, label=\"{}\"];\n",
            quote(e.name.as_str()),
            quote(&label)
        ));
    }
    let att_node = |a: &Attachment| -> String {
        match a {
            Attachment::Vertex(v) => format!("\"v:{}\"", quote(v.as_str())),
            Attachment::Stem(j) => format!("\"j:{}\"", quote(j.as_str())),
            Attachment::Free(e) => format!("\"end:{}\"", quote(e.as_str())),
        }
    };
    for id in ls.edge_ids() {
        let e = ls.edge(id).unwrap();
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            att_node(&e.lower),
            att_node(&e.upper),
            quote(id.as_str())
        ));
    }
    for c in ls.cataclysms() {
        for m in &c.members {
            out.push_str(&format!(
                "  \"j:{}\" -> \"v:{}\" [style=dashed, arrowhead=none];\n",
                quote(c.junction.as_str()),
                quote(m.as_str())
            ));
        }
    }
    out.push_str("}\n");
    out
}
