//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! The corpus is the seven builtin models plus 1000 seeded generated models
//! (seed 0..1000, up to 12 junctions, arity up to 4, sign bias seed-varied).

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leafspace_core::corpus::{self, GeneratorConfig, BUILTIN_NAMES};
use leafspace_core::endorder;
use leafspace_core::grouporder::{
    extend_order, order_from_action, ActingElement, IntegerCarrier, LeftOrder, OrderSign,
};
use leafspace_core::model::{
    Attachment, EdgeId, EndName, JunctionId, LeafSpace, PointRef, Position, RawLeafSpace, Sign,
    VertexId,
};
use leafspace_core::morphisms::{self, Equivariance, LeafSpaceMap};
use leafspace_core::paths::broken_path;

fn seeded_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        junction_count: (seed % 13) as u32,
        max_arity: 2 + (seed % 3) as u32,
        sign_bias: Position::new((seed % 5) as i64, 4),
    }
}

fn seeded_model(seed: u64) -> LeafSpace {
    corpus::generate(&seeded_config(seed)).expect("generator soundness")
}

fn builtins() -> Vec<(String, LeafSpace)> {
    BUILTIN_NAMES
        .iter()
        .map(|n| (n.to_string(), corpus::builtin(n).unwrap()))
        .collect()
}

#[test]
fn criterion_1_figure_fidelity() {
    let start = Instant::now();
    let ls = corpus::builtin("figure-alpha").unwrap();
    let path = broken_path(&ls, &PointRef::at_vertex("t1"), &PointRef::at_vertex("t16")).unwrap();
    assert_eq!(path.segments.len(), 8, "figure-alpha must have 8 segments");
    assert_eq!(path.cusps.len(), 7, "figure-alpha must have 7 cusps");
    let trivial: Vec<usize> = path
        .segments
        .iter()
        .filter(|s| s.trivial)
        .map(|s| s.index)
        .collect();
    assert_eq!(trivial, vec![5], "exactly the fifth segment is trivial");
    for w in path.segments.windows(2) {
        assert_ne!(
            w[0].orientation, w[1].orientation,
            "segment orientations must alternate"
        );
    }
    let signs: Vec<Sign> = path
        .cusps
        .iter()
        .map(|c| ls.junction_sign(&c.junction).unwrap())
        .collect();
    for w in signs.windows(2) {
        assert_ne!(w[0], w[1], "cusp junction signs must alternate");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} exceeds 1 s");
    println!(
        "criterion 1 (figure fidelity: 8 segments, 7 cusps, trivial 5th, alternation): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_2_lemma_battery_on_corpus() {
    let start = Instant::now();
    let mut pair_checks = 0u64;
    let mut triple_checks = 0u64;
    for seed in 0..1000u64 {
        let ls = seeded_model(seed);
        let pos = ls.positive_ends();
        let m = pos.len();
        let mut nmat = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    nmat[i][j] = endorder::n(&ls, &pos[i], &pos[j]).unwrap();
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                pair_checks += 1;
                assert_eq!(
                    nmat[i][j],
                    -nmat[j][i],
                    "antisymmetry fails on seed {seed} pair ({}, {})",
                    pos[i].name,
                    pos[j].name
                );
                assert!(
                    nmat[i][j] % 2 != 0,
                    "parity fails on seed {seed} pair ({}, {})",
                    pos[i].name,
                    pos[j].name
                );
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    triple_checks += 1;
                    let delta = nmat[i][k] - (nmat[i][j] + nmat[j][k]);
                    assert!(
                        delta == 1 || delta == -1,
                        "triangle fails on seed {seed} triple ({}, {}, {})",
                        pos[i].name,
                        pos[j].name,
                        pos[k].name
                    );
                    if nmat[i][j] > 0 && nmat[j][k] > 0 {
                        assert!(nmat[i][k] > 0, "transitivity fails on seed {seed}");
                    }
                    if nmat[i][j] < 0 && nmat[j][k] < 0 {
                        assert!(nmat[i][k] < 0, "transitivity fails on seed {seed}");
                    }
                }
            }
        }
        let order = endorder::end_order(&ls).unwrap();
        assert_eq!(order.len(), m, "end order total on seed {seed}");
        let rank = |name: &EndName| order.iter().position(|e| &e.name == name).unwrap();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                assert_eq!(
                    rank(&pos[i].name) < rank(&pos[j].name),
                    nmat[i][j] < 0,
                    "end order inconsistent with n on seed {seed}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "runtime {elapsed:?} exceeds 60 s"
    );
    println!(
        "criterion 2 (lemma battery: 1000 models, {pair_checks} pair checks, {triple_checks} triple checks, zero failures): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let mut models = 0u64;
    let mut run = |label: &str, ls: &LeafSpace| {
        if ls.junction_count() > 8 {
            return;
        }
        models += 1;
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
        assert_eq!(from_tables, from_separation, "oracle discrepancy on {label}");
    };
    for (name, ls) in builtins() {
        run(&name, &ls);
    }
    for seed in 0..1000u64 {
        run(&format!("seed {seed}"), &seeded_model(seed));
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 3 (oracle equivalence on {models} corpus models with <= 8 junctions, zero discrepancies): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_4_separating_set_characterization() {
    let start = Instant::now();
    let mut checks = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut models: Vec<(String, LeafSpace)> = builtins();
    for seed in 0..20u64 {
        models.push((format!("seed {seed}"), seeded_model(seed)));
    }
    for (label, ls) in &models {
        let mut points: Vec<PointRef> = ls
            .vertex_ids()
            .map(|v| PointRef::AtVertex(v.clone()))
            .collect();
        for e in ls.edge_ids() {
            for (n, d) in [(1i64, 7i64), (2, 5), (5, 6)] {
                points.push(PointRef::OnEdge(e.clone(), Position::new(n, d)));
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
        for _ in 0..100 {
            let u = points[rng.gen_range(0..points.len())].clone();
            let v = points[rng.gen_range(0..points.len())].clone();
            if u == v {
                continue;
            }
            let path = broken_path(ls, &u, &v).unwrap();
            for t in &candidates {
                if *t == u || *t == v {
                    continue;
                }
                checks += 1;
                assert_eq!(
                    path.interior_contains(t),
                    ls.separates(t, &u, &v).unwrap(),
                    "separating-set mismatch on {label} at {t} between {u} and {v}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 4 (separating-set characterization, {} models x 100 pairs, {checks} exact checks): PASS in {:?}",
        models.len(),
        elapsed
    );
}

fn relabeled(ls: &LeafSpace, rng: &mut ChaCha8Rng) -> (RawLeafSpace, Vec<(VertexId, VertexId)>) {
    let raw = ls.to_raw();
    let mut fresh: Vec<usize> = (0..raw.vertices.len().max(raw.edges.len()).max(64)).collect();
    fresh.shuffle(rng);
    let vmap: Vec<(VertexId, VertexId)> = raw
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), VertexId::new(format!("rv{}", fresh[i]))))
        .collect();
    let vfind = |v: &VertexId| vmap.iter().find(|(a, _)| a == v).unwrap().1.clone();
    let mut out = RawLeafSpace::new();
    out.vertices = vmap.iter().map(|(_, b)| b.clone()).collect();
    for (i, e) in raw.edges.iter().enumerate() {
        let ren = |a: &Attachment| match a {
            Attachment::Vertex(v) => Attachment::Vertex(vfind(v)),
            Attachment::Stem(j) => Attachment::stem(format!("rj_{j}")),
            Attachment::Free(n) => Attachment::free(format!("rx_{n}")),
        };
        out.edges.push(leafspace_core::model::Edge {
            id: EdgeId::new(format!("re{i}")),
            lower: ren(&e.lower),
            upper: ren(&e.upper),
        });
    }
    for j in &raw.junctions {
        out.junctions.push(leafspace_core::model::Junction {
            id: JunctionId::new(format!("rj_{}", j.id)),
            members: j.members.iter().map(|m| vfind(m)).collect(),
        });
    }
    (out, vmap)
}

#[test]
fn criterion_5_invariance_under_relabeling() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..100u64 {
        let source = seeded_model(round * 7 % 1000);
        let (raw, vmap) = relabeled(&source, &mut rng);
        let target = LeafSpace::validate(raw).expect("relabeling preserves validity");
        let map = LeafSpaceMap::infer(&source, &target, vmap.into_iter().collect(), None)
            .expect("relabeling is a bijection");
        map.check_admissible().expect("relabeling is admissible");
        assert_eq!(
            map.check_equivariance().unwrap(),
            Equivariance::Ok,
            "n values must transport exactly on round {round}"
        );
    }

    // The forced inadmissible swap on y-neg yields the counterexample pair.
    let y_neg = corpus::builtin("y-neg").unwrap();
    let vertices = [("w", "w"), ("u", "v"), ("v", "u")]
        .into_iter()
        .map(|(a, b)| (VertexId::new(a), VertexId::new(b)))
        .collect();
    let ends = [("X1", "X2"), ("X2", "X1"), ("n0", "n0")]
        .into_iter()
        .map(|(a, b)| (EndName::new(a), EndName::new(b)))
        .collect();
    let swap = LeafSpaceMap::infer(&y_neg, &y_neg, vertices, Some(ends)).unwrap();
    assert!(swap.check_admissible().is_err());
    match swap.check_equivariance_forced().unwrap() {
        Equivariance::CounterExample(ce) => {
            assert_eq!(
                (ce.x1.as_str(), ce.x2.as_str(), ce.n_source, ce.n_target),
                ("X1", "X2", 1, -1)
            );
        }
        Equivariance::Ok => panic!("swap must yield a counterexample"),
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 5 (invariance: 100 relabelings equivariant, forced swap counterexample (+1, -1)): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_6_rigidity() {
    let start = Instant::now();
    let mut models: Vec<(String, LeafSpace)> = builtins();
    for seed in 0..1000u64 {
        models.push((format!("seed {seed}"), seeded_model(seed)));
    }
    let mut enumerated = 0u64;
    for (label, ls) in &models {
        let (pos, neg) = ls.ends();
        if pos.len() + neg.len() > 10 {
            continue;
        }
        enumerated += 1;
        let autos = morphisms::enumerate_automorphisms(ls)
            .unwrap_or_else(|e| panic!("enumeration failed on {label}: {e}"));
        if autos.len() != 1 || !autos[0].is_identity() {
            // Surface the witness map rather than failing silently.
            for map in &autos {
                if !map.is_identity() {
                    let moved: Vec<String> = map
                        .vertices
                        .iter()
                        .filter(|(a, b)| a != b)
                        .map(|(a, b)| format!("v {a} {b}"))
                        .collect();
                    panic!("nontrivial automorphism on {label}: {}", moved.join(", "));
                }
            }
            panic!("unexpected automorphism count {} on {label}", autos.len());
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 6 (rigidity: exactly [identity] on {enumerated} corpus models with <= 10 ends): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_7_group_orders() {
    let start = Instant::now();
    // Integer translations: the induced order is the standard one.
    let translations: Vec<ActingElement<'_, i64>> = (-50..=50)
        .map(|a| ActingElement::new(format!("t{a}"), move |x: &i64| x + a))
        .collect();
    let order = order_from_action(IntegerCarrier, &translations, 8).unwrap();
    let mut translation_checks = 0u64;
    for (i, g) in translations.iter().enumerate() {
        for (j, h) in translations.iter().enumerate() {
            translation_checks += 1;
            let a = i as i64 - 50;
            let b = j as i64 - 50;
            assert_eq!(order.compare(g, h).unwrap(), a.cmp(&b));
        }
    }

    // Integer pairs: lexicographic extension, left-invariant on sampled
    // triples. The group operation is componentwise addition and the order
    // is g < h iff h - g is positive.
    let h_order = LeftOrder::new(|g: &(i64, i64)| {
        Ok(match g.0.cmp(&0) {
            std::cmp::Ordering::Less => OrderSign::Negative,
            std::cmp::Ordering::Equal => OrderSign::Zero,
            std::cmp::Ordering::Greater => OrderSign::Positive,
        })
    });
    let q_order = LeftOrder::new(|q: &i64| {
        Ok(match q.cmp(&0) {
            std::cmp::Ordering::Less => OrderSign::Negative,
            std::cmp::Ordering::Equal => OrderSign::Zero,
            std::cmp::Ordering::Greater => OrderSign::Positive,
        })
    });
    let pair_order = extend_order(
        h_order,
        q_order,
        |g: &(i64, i64)| g.1,
        |g: &(i64, i64)| g.1 == 0,
        |g: &(i64, i64)| format!("({}, {})", g.0, g.1),
    );
    let less = |a: (i64, i64), b: (i64, i64)| -> bool {
        let diff = (b.0 - a.0, b.1 - a.1);
        pair_order.sign_of(&diff).unwrap() == OrderSign::Positive
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut invariance_checks = 0u64;
    for _ in 0..10_000 {
        let g = (rng.gen_range(-100..=100i64), rng.gen_range(-100..=100i64));
        let h = (rng.gen_range(-100..=100i64), rng.gen_range(-100..=100i64));
        let k = (rng.gen_range(-100..=100i64), rng.gen_range(-100..=100i64));
        if g == h {
            continue;
        }
        invariance_checks += 1;
        let kg = (k.0 + g.0, k.1 + g.1);
        let kh = (k.0 + h.0, k.1 + h.1);
        assert_eq!(less(g, h), less(kg, kh), "left invariance on {g:?} {h:?} {k:?}");
    }

    // On the kernel the extension restricts to the kernel order.
    let mut kernel_checks = 0u64;
    for _ in 0..1000 {
        let a = rng.gen_range(-500..=500i64);
        let g = (a, 0i64);
        kernel_checks += 1;
        let expect = match a.cmp(&0) {
            std::cmp::Ordering::Less => OrderSign::Negative,
            std::cmp::Ordering::Equal => OrderSign::Zero,
            std::cmp::Ordering::Greater => OrderSign::Positive,
        };
        assert_eq!(pair_order.sign_of(&g).unwrap(), expect);
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 7 (group orders: {translation_checks} translation comparisons, {invariance_checks} invariance triples, {kernel_checks} kernel samples, zero failures): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_8_round_trip() {
    let start = Instant::now();
    let mut count = 0u64;
    let mut run = |label: &str, ls: &LeafSpace| {
        count += 1;
        let text = corpus::serialize(ls);
        let back = corpus::parse(&text).unwrap_or_else(|e| panic!("reparse {label}: {e}"));
        assert_eq!(&back, ls, "round trip is not the identity on {label}");
        assert_eq!(
            corpus::serialize(&back),
            text,
            "serialization is not canonical on {label}"
        );
    };
    for (name, ls) in builtins() {
        run(&name, &ls);
    }
    for seed in 0..1000u64 {
        let ls = seeded_model(seed);
        run(&format!("seed {seed}"), &ls);
        // Byte stability across regeneration.
        assert_eq!(
            corpus::serialize(&seeded_model(seed)),
            corpus::serialize(&ls),
            "generation not byte-stable on seed {seed}"
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 8 (round-trip identity and canonical serialization on {count} corpus models): PASS in {:?}",
        elapsed
    );
}
