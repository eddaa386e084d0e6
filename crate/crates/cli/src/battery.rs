//! The invariant battery behind `leafspace check`: every structural theorem
//! the construction relies on, re-verified on one model, with a minimal
//! witness line when something fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leafspace_core::endorder;
use leafspace_core::model::{LeafSpace, PointRef, Position};
use leafspace_core::morphisms;
use leafspace_core::paths::{broken_path, broken_path_ends, Orientation};

/// One battery entry. `detail` carries the failure witness (a rerunnable
/// query) or the reason an entry was skipped.
#[derive(Clone, Debug)]
pub struct BatteryItem {
    pub name: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub checks: u64,
    pub detail: Option<String>,
}

impl BatteryItem {
    fn pass(name: &'static str, checks: u64) -> Self {
        Self {
            name,
            passed: true,
            skipped: false,
            checks,
            detail: None,
        }
    }

    fn fail(name: &'static str, checks: u64, witness: String) -> Self {
        Self {
            name,
            passed: false,
            skipped: false,
            checks,
            detail: Some(witness),
        }
    }

    fn skip(name: &'static str, reason: String) -> Self {
        Self {
            name,
            passed: true,
            skipped: true,
            checks: 0,
            detail: Some(reason),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatteryReport {
    pub items: Vec<BatteryItem>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            if item.skipped {
                out.push_str(&format!(
                    "SKIP {} ({})\n",
                    item.name,
                    item.detail.as_deref().unwrap_or("")
                ));
            } else if item.passed {
                out.push_str(&format!("PASS {} checks={}\n", item.name, item.checks));
            } else {
                out.push_str(&format!(
                    "FAIL {} checks={} witness: {}\n",
                    item.name,
                    item.checks,
                    item.detail.as_deref().unwrap_or("")
                ));
            }
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Run the full battery on one model.
pub fn run_battery(ls: &LeafSpace) -> BatteryReport {
    let mut report = BatteryReport::default();
    report.items.push(sign_well_definedness(ls));
    report.items.push(oracle_equivalence(ls));
    report.items.push(separation_symmetry(ls));
    report.items.push(path_conventions(ls));
    report.items.push(antisymmetry_and_parity(ls));
    report.items.push(triangles(ls));
    report.items.push(order_axioms(ls));
    report.items.push(separating_sets(ls));
    report.items.push(rigidity(ls));
    report
}

fn sign_well_definedness(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "sign-well-definedness";
    let mut checks = 0;
    for cat in ls.cataclysms() {
        for a in &cat.members {
            for b in &cat.members {
                if a == b {
                    continue;
                }
                checks += 1;
                let side = ls
                    .side_of(&PointRef::AtVertex(a.clone()), &PointRef::AtVertex(b.clone()))
                    .unwrap();
                if side != cat.sign {
                    return BatteryItem::fail(NAME, checks, format!("side v:{a} v:{b}"));
                }
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn oracle_equivalence(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "oracle-equivalence";
    if ls.junction_count() > 8 {
        return BatteryItem::skip(NAME, format!("{} junctions exceed 8", ls.junction_count()));
    }
    let mut from_tables: Vec<Vec<String>> = ls
        .cataclysms()
        .into_iter()
        .map(|c| {
            let mut ms: Vec<String> = c.members.iter().map(|m| m.as_str().into()).collect();
            ms.sort();
            ms
        })
        .collect();
    from_tables.sort();
    let from_separation: Vec<Vec<String>> = ls
        .cataclysm_cliques_by_separation()
        .into_iter()
        .map(|c| c.iter().map(|m| m.as_str().into()).collect())
        .collect();
    let checks = (ls.vertex_count() * ls.vertex_count()) as u64;
    if from_tables == from_separation {
        BatteryItem::pass(NAME, checks)
    } else {
        BatteryItem::fail(NAME, checks, "cataclysms".into())
    }
}

fn separation_symmetry(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "separation-symmetry";
    let verts: Vec<PointRef> = ls
        .vertex_ids()
        .map(|v| PointRef::AtVertex(v.clone()))
        .collect();
    let mut checks = 0;
    for t in verts.iter().take(6) {
        for u in verts.iter().take(8) {
            for v in verts.iter().take(8) {
                if t == u || t == v || u == v {
                    continue;
                }
                checks += 1;
                if ls.separates(t, u, v) != ls.separates(t, v, u) {
                    return BatteryItem::fail(NAME, checks, format!("separates {t} {u} {v}"));
                }
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn path_conventions(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "path-conventions";
    let (pos, neg) = ls.ends();
    let mut checks = 0;
    for x1 in pos {
        for x2 in pos {
            if x1.name == x2.name {
                continue;
            }
            checks += 1;
            let path = broken_path_ends(ls, x1, x2).unwrap();
            if let Err(e) = path.verify_conventions(ls) {
                return BatteryItem::fail(
                    NAME,
                    checks,
                    format!("path end:{} end:{} ({e})", x1.name, x2.name),
                );
            }
            if path.first_last_orientation() != (Orientation::Negative, Orientation::Positive) {
                return BatteryItem::fail(
                    NAME,
                    checks,
                    format!("path end:{} end:{} (first/last orientation)", x1.name, x2.name),
                );
            }
        }
        for x2 in neg {
            checks += 1;
            let path = broken_path_ends(ls, x1, x2).unwrap();
            if path.first_last_orientation() != (Orientation::Negative, Orientation::Negative) {
                return BatteryItem::fail(
                    NAME,
                    checks,
                    format!("path end:{} end:{} (first/last orientation)", x1.name, x2.name),
                );
            }
            if let Err(e) = path.verify_conventions(ls) {
                return BatteryItem::fail(
                    NAME,
                    checks,
                    format!("path end:{} end:{} ({e})", x1.name, x2.name),
                );
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn antisymmetry_and_parity(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "antisymmetry-and-parity";
    let pos = ls.positive_ends();
    let mut checks = 0;
    for x1 in pos {
        for x2 in pos {
            if x1.name == x2.name {
                continue;
            }
            checks += 1;
            let fwd = endorder::n(ls, x1, x2).unwrap();
            let back = endorder::n(ls, x2, x1).unwrap();
            if fwd != -back || fwd % 2 == 0 {
                return BatteryItem::fail(NAME, checks, format!("n {} {}", x1.name, x2.name));
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn triangles(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "triangle-and-transitivity";
    let pos = ls.positive_ends();
    let m = pos.len();
    let mut nmat = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                nmat[i][j] = endorder::n(ls, &pos[i], &pos[j]).unwrap();
            }
        }
    }
    let mut checks = 0;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                checks += 1;
                let delta = nmat[i][k] - (nmat[i][j] + nmat[j][k]);
                let transitive = !(nmat[i][j] > 0 && nmat[j][k] > 0 && nmat[i][k] <= 0)
                    && !(nmat[i][j] < 0 && nmat[j][k] < 0 && nmat[i][k] >= 0);
                if !(delta == 1 || delta == -1) || !transitive {
                    return BatteryItem::fail(
                        NAME,
                        checks,
                        format!("triangle {} {} {}", pos[i].name, pos[j].name, pos[k].name),
                    );
                }
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn order_axioms(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "order-axioms";
    let order = match endorder::end_order(ls) {
        Ok(o) => o,
        Err(e) => return BatteryItem::fail(NAME, 0, format!("end-order ({e})")),
    };
    let pos = ls.positive_ends();
    if order.len() != pos.len() {
        return BatteryItem::fail(NAME, 1, "end-order (length)".into());
    }
    let rank = |name: &str| order.iter().position(|e| e.name.as_str() == name).unwrap();
    let mut checks = 0;
    for x1 in pos {
        for x2 in pos {
            if x1.name == x2.name {
                continue;
            }
            checks += 1;
            let lt = rank(x1.name.as_str()) < rank(x2.name.as_str());
            let n = endorder::n(ls, x1, x2).unwrap();
            if lt != (n < 0) {
                return BatteryItem::fail(NAME, checks, format!("n {} {}", x1.name, x2.name));
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn separating_sets(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "separating-sets";
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eedu64);
    let mut points: Vec<PointRef> = ls
        .vertex_ids()
        .map(|v| PointRef::AtVertex(v.clone()))
        .collect();
    for e in ls.edge_ids() {
        for d in [3i64, 5, 8] {
            points.push(PointRef::OnEdge(e.clone(), Position::new(1, d)));
        }
    }
    let mut candidates: Vec<PointRef> = ls
        .vertex_ids()
        .map(|v| PointRef::AtVertex(v.clone()))
        .collect();
    for e in ls.edge_ids() {
        for (n, d) in [(1i64, 4i64), (1, 2), (3, 4)] {
            candidates.push(PointRef::OnEdge(e.clone(), Position::new(n, d)));
        }
    }
    let mut checks = 0;
    for _ in 0..100 {
        let u = &points[rng.gen_range(0..points.len())];
        let v = &points[rng.gen_range(0..points.len())];
        if u == v {
            continue;
        }
        let path = broken_path(ls, u, v).unwrap();
        for t in &candidates {
            if t == u || t == v {
                continue;
            }
            checks += 1;
            if path.interior_contains(t) != ls.separates(t, u, v).unwrap() {
                return BatteryItem::fail(NAME, checks, format!("separates {t} {u} {v}"));
            }
        }
    }
    BatteryItem::pass(NAME, checks)
}

fn rigidity(ls: &LeafSpace) -> BatteryItem {
    const NAME: &str = "automorphism-rigidity";
    match morphisms::enumerate_automorphisms(ls) {
        Err(morphisms::MapError::TooLarge { nodes, bound }) => {
            BatteryItem::skip(NAME, format!("{nodes} nodes exceed the bound {bound}"))
        }
        Err(e) => BatteryItem::fail(NAME, 0, format!("auto ({e})")),
        Ok(maps) => {
            let checks = maps.len() as u64;
            if maps.len() == 1 && maps[0].is_identity() {
                BatteryItem::pass(NAME, checks)
            } else {
                let witness = maps
                    .iter()
                    .find(|m| !m.is_identity())
                    .and_then(|m| {
                        m.vertices
                            .iter()
                            .find(|(a, b)| a != b)
                            .map(|(a, b)| format!("auto (v {a} {b})"))
                    })
                    .unwrap_or_else(|| "auto (count)".into());
                BatteryItem::fail(NAME, checks, witness)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use leafspace_core::corpus;

    #[test]
    fn battery_passes_on_every_builtin() {
        for name in corpus::BUILTIN_NAMES {
            let ls = corpus::builtin(name).unwrap();
            let report = run_battery(&ls);
            assert!(report.passed(), "battery on {name}:\n{}", report.render());
        }
    }

    #[test]
    fn render_formats_failures_with_witness() {
        let report = BatteryReport {
            items: vec![
                BatteryItem::pass("alpha", 3),
                BatteryItem::fail("beta", 7, "n X1 X2".into()),
                BatteryItem::skip("gamma", "too large".into()),
            ],
        };
        assert!(!report.passed());
        let text = report.render();
        assert!(text.contains("PASS alpha checks=3"));
        assert!(text.contains("FAIL beta checks=7 witness: n X1 X2"));
        assert!(text.contains("SKIP gamma (too large)"));
        assert!(text.ends_with("FAIL\n"));
    }
}
