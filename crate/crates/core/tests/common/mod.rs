//! Test-local oracle: an independent path tracer over the raw description.
//!
//! Nodes are plain strings, arcs come straight from the edge and membership
//! records, and cusps are member-to-member transitions through one junction
//! node. None of the crate's walk or decomposition machinery is used.

use std::collections::{HashMap, VecDeque};

use leafspace_core::model::{Attachment, RawLeafSpace};

pub struct Oracle {
    adj: HashMap<String, Vec<String>>,
    members: HashMap<String, Vec<String>>,
}

fn att_name(a: &Attachment) -> String {
    match a {
        Attachment::Vertex(v) => format!("v:{v}"),
        Attachment::Stem(j) => format!("j:{j}"),
        Attachment::Free(e) => format!("end:{e}"),
    }
}

impl Oracle {
    pub fn from_raw(raw: &RawLeafSpace) -> Self {
        let mut adj: HashMap<String, Vec<String>> = HashMap::new();
        let mut add = |a: String, b: String| {
            adj.entry(a.clone()).or_default().push(b.clone());
            adj.entry(b).or_default().push(a);
        };
        for e in &raw.edges {
            add(att_name(&e.lower), att_name(&e.upper));
        }
        let mut members: HashMap<String, Vec<String>> = HashMap::new();
        for j in &raw.junctions {
            let jn = format!("j:{}", j.id);
            for m in &j.members {
                add(jn.clone(), format!("v:{m}"));
            }
            members.insert(jn, j.members.iter().map(|m| format!("v:{m}")).collect());
        }
        Self { adj, members }
    }

    pub fn node_path(&self, a: &str, b: &str) -> Vec<String> {
        let mut parent: HashMap<String, String> = HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(a.to_string());
        parent.insert(a.to_string(), a.to_string());
        while let Some(n) = queue.pop_front() {
            if n == b {
                break;
            }
            for next in self.adj.get(&n).into_iter().flatten() {
                if !parent.contains_key(next) {
                    parent.insert(next.clone(), n.clone());
                    queue.push_back(next.clone());
                }
            }
        }
        let mut path = vec![b.to_string()];
        let mut cur = b.to_string();
        while cur != a {
            cur = parent
                .get(&cur)
                .unwrap_or_else(|| panic!("no path {a} -> {b}"))
                .clone();
            path.push(cur.clone());
        }
        path.reverse();
        path
    }

    /// Signed cusp tally along the node path between two end names:
    /// +1 per member-to-member hop whose source precedes its target in the
    /// stored member order, -1 otherwise.
    pub fn n_between_ends(&self, a: &str, b: &str) -> i64 {
        self.signed_cusps(&self.node_path(&format!("end:{a}"), &format!("end:{b}")))
    }

    pub fn cusps_between_ends(&self, a: &str, b: &str) -> usize {
        self.node_path(&format!("end:{a}"), &format!("end:{b}"))
            .windows(3)
            .filter(|w| self.cusp_sign(w).is_some())
            .count()
    }

    fn signed_cusps(&self, path: &[String]) -> i64 {
        path.windows(3)
            .filter_map(|w| self.cusp_sign(w))
            .sum()
    }

    fn cusp_sign(&self, w: &[String]) -> Option<i64> {
        let ms = self.members.get(&w[1])?;
        let i = ms.iter().position(|m| *m == w[0])?;
        let j = ms.iter().position(|m| *m == w[2])?;
        Some(if i < j { 1 } else { -1 })
    }
}
