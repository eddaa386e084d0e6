use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use leafspace_cli::battery::run_battery;
use leafspace_cli::{parse_point, parse_ratio};
use leafspace_core::corpus::{self, GeneratorConfig};
use leafspace_core::endorder;
use leafspace_core::grouporder::{
    extend_order, order_from_action, ActingElement, IntegerCarrier, LeftOrder, OrderSign,
};
use leafspace_core::model::LeafSpace;
use leafspace_core::morphisms::{self, Equivariance, LeafSpaceMap};
use leafspace_core::paths;

/// Batch computations on combinatorial leaf-space models: validation,
/// broken paths, end orders, symmetry checks, generation, and export.
#[derive(Parser)]
#[command(name = "leafspace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model file and report every violation.
    Validate { file: String },
    /// List junctions with signs and ordered members.
    Cataclysms { file: String },
    /// Print the broken path between two points (or two ends).
    Path {
        file: String,
        /// `v:<vertex>`, `e:<edge>:<p>/<q>`, or `end:<name>`.
        from: String,
        to: String,
    },
    /// Print the positive ends sorted by the cusp-count order.
    EndOrder { file: String },
    /// Print n(x1, x2) for two positive ends.
    N { file: String, x1: String, x2: String },
    /// Print the three pairwise counts, the defect, and the proof case of a
    /// positive end triple.
    Triangle {
        file: String,
        x1: String,
        x2: String,
        x3: String,
    },
    /// Find the least positive-end pair whose broken curve has one cusp.
    Unicusp { file: String },
    /// Enumerate admissible automorphisms.
    Auto { file: String },
    /// Check a map between two models for equivariance of the cusp counts.
    Equiv {
        file1: String,
        file2: String,
        mapfile: String,
        /// Run the check even if the map is inadmissible.
        #[arg(long)]
        force: bool,
    },
    /// Generate a seeded random model and print it.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        junctions: u32,
        #[arg(long, default_value_t = 3)]
        arity: u32,
        /// Probability that an inserted junction is positive, as `p/q`.
        #[arg(long, default_value = "1/2")]
        bias: String,
    },
    /// Run the full invariant battery on a model.
    Check { file: String },
    /// Export a model as a Graphviz digraph.
    Export {
        file: String,
        /// Label positive ends with their rank in the end order.
        #[arg(long)]
        annotate: bool,
    },
    /// Smoke-test the group-order machinery on integer translations and
    /// integer pairs.
    DemoOrder {
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

fn load_model(file: &str) -> Result<LeafSpace, Vec<String>> {
    let text = read_input(file).map_err(|e| vec![e])?;
    corpus::parse(&text).map_err(|e| match e {
        corpus::CorpusError::Syntax(errors) => errors.iter().map(|s| s.to_string()).collect(),
        corpus::CorpusError::Invalid(report) => {
            report.errors.iter().map(|v| v.to_string()).collect()
        }
        other => vec![other.to_string()],
    })
}

fn end_ref(ls: &LeafSpace, name: &str) -> Result<leafspace_core::model::EndRef, Vec<String>> {
    ls.end_by_name(name)
        .cloned()
        .ok_or_else(|| vec![format!("UnknownEnd: {name}")])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(errors) => {
            if cli.json {
                let report = json!({
                    "format": 1,
                    "ok": false,
                    "errors": errors,
                });
                println!("{report}");
            } else {
                for e in &errors {
                    eprintln!("{e}");
                }
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Vec<String>> {
    match &cli.command {
        Command::Validate { file } => {
            let text = read_input(file).map_err(|e| vec![e])?;
            let outcome = corpus::parse(&text);
            match outcome {
                Ok(_) => {
                    if cli.json {
                        println!("{}", json!({"format": 1, "command": "validate", "ok": true}));
                    } else {
                        println!("ok");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(corpus::CorpusError::Syntax(errors)) => {
                    Err(errors.iter().map(|s| s.to_string()).collect())
                }
                Err(corpus::CorpusError::Invalid(report)) => {
                    Err(report.errors.iter().map(|v| v.to_string()).collect())
                }
                Err(other) => Err(vec![other.to_string()]),
            }
        }
        Command::Cataclysms { file } => {
            let ls = load_model(file)?;
            let cats = ls.cataclysms();
            if cli.json {
                let list: Vec<_> = cats
                    .iter()
                    .map(|c| {
                        json!({
                            "junction": c.junction.as_str(),
                            "sign": c.sign.to_string(),
                            "members": c.members.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({"format": 1, "command": "cataclysms", "cataclysms": list})
                );
            } else {
                for c in cats {
                    let members: Vec<&str> = c.members.iter().map(|m| m.as_str()).collect();
                    println!("{} {} {}", c.junction, c.sign, members.join(","));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Path { file, from, to } => {
            let ls = load_model(file)?;
            let path = if from.starts_with("end:") && to.starts_with("end:") {
                let x1 = end_ref(&ls, &from["end:".len()..])?;
                let x2 = end_ref(&ls, &to["end:".len()..])?;
                paths::broken_path_ends(&ls, &x1, &x2).map_err(|e| vec![e.to_string()])?
            } else if !from.starts_with("end:") && !to.starts_with("end:") {
                let u = parse_point(from).map_err(|e| vec![e])?;
                let v = parse_point(to).map_err(|e| vec![e])?;
                paths::broken_path(&ls, &u, &v).map_err(|e| vec![e.to_string()])?
            } else {
                return Err(vec![
                    "mixed arguments: give two points or two ends".to_string()
                ]);
            };
            if cli.json {
                let segs: Vec<_> = path
                    .segments
                    .iter()
                    .map(|s| {
                        json!({
                            "index": s.index,
                            "from": s.start.to_string(),
                            "to": s.end.to_string(),
                            "orientation": s.orientation.to_string(),
                            "trivial": s.trivial,
                        })
                    })
                    .collect();
                let cusps: Vec<_> = path
                    .cusps
                    .iter()
                    .map(|c| {
                        json!({
                            "index": c.index,
                            "from": c.from.as_str(),
                            "to": c.to.as_str(),
                            "junction": c.junction.as_str(),
                            "sign": c.sign.to_string(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({"format": 1, "command": "path", "segments": segs, "cusps": cusps})
                );
            } else {
                print!("{}", path.render());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EndOrder { file } => {
            let ls = load_model(file)?;
            let order = endorder::end_order(&ls).map_err(|e| vec![e.to_string()])?;
            if cli.json {
                let names: Vec<&str> = order.iter().map(|e| e.name.as_str()).collect();
                println!(
                    "{}",
                    json!({"format": 1, "command": "end-order", "ends": names})
                );
            } else {
                for e in order {
                    println!("{}", e.name);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::N { file, x1, x2 } => {
            let ls = load_model(file)?;
            let a = end_ref(&ls, x1)?;
            let b = end_ref(&ls, x2)?;
            let value = endorder::n(&ls, &a, &b).map_err(|e| vec![e.to_string()])?;
            if cli.json {
                println!("{}", json!({"format": 1, "command": "n", "n": value}));
            } else {
                println!("{value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Triangle { file, x1, x2, x3 } => {
            let ls = load_model(file)?;
            let a = end_ref(&ls, x1)?;
            let b = end_ref(&ls, x2)?;
            let c = end_ref(&ls, x3)?;
            let t = endorder::triangle_check(&ls, &a, &b, &c).map_err(|e| vec![e.to_string()])?;
            let d = endorder::triple_decompose(&ls, &a, &b, &c).map_err(|e| vec![e.to_string()])?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "format": 1,
                        "command": "triangle",
                        "n12": t.n12,
                        "n23": t.n23,
                        "n13": t.n13,
                        "delta": t.delta,
                        "case": d.case.to_string(),
                        "turn": d.turn.map(|s| s.to_string()),
                        "special_cusps": d
                            .special_cusps
                            .iter()
                            .map(|(c, o)| json!({
                                "from": c.from.as_str(),
                                "to": c.to.as_str(),
                                "junction": c.junction.as_str(),
                                "sign": c.sign.to_string(),
                                "owner": o.to_string(),
                            }))
                            .collect::<Vec<_>>(),
                    })
                );
            } else {
                let turn = d
                    .turn
                    .map(|s| format!(" turn={s}"))
                    .unwrap_or_default();
                println!(
                    "n12={} n23={} n13={} delta={} case={}{}",
                    t.n12, t.n23, t.n13, t.delta, d.case, turn
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Unicusp { file } => {
            let ls = load_model(file)?;
            let (x1, x2, cusp) =
                endorder::find_unicusp_pair(&ls).map_err(|e| vec![e.to_string()])?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "format": 1,
                        "command": "unicusp",
                        "x1": x1.name.as_str(),
                        "x2": x2.name.as_str(),
                        "cusp": {
                            "from": cusp.from.as_str(),
                            "to": cusp.to.as_str(),
                            "junction": cusp.junction.as_str(),
                            "sign": cusp.sign.to_string(),
                        },
                    })
                );
            } else {
                println!(
                    "{} {} cusp={},{} at={} sign={}",
                    x1.name, x2.name, cusp.from, cusp.to, cusp.junction, cusp.sign
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Auto { file } => {
            let ls = load_model(file)?;
            let autos =
                morphisms::enumerate_automorphisms(&ls).map_err(|e| vec![e.to_string()])?;
            if cli.json {
                let list: Vec<_> = autos
                    .iter()
                    .map(|m| {
                        json!({
                            "vertices": m
                                .vertices
                                .iter()
                                .map(|(a, b)| (a.as_str(), b.as_str()))
                                .collect::<BTreeMap<_, _>>(),
                            "ends": m
                                .ends
                                .iter()
                                .map(|(a, b)| (a.as_str(), b.as_str()))
                                .collect::<BTreeMap<_, _>>(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({"format": 1, "command": "auto", "automorphisms": list})
                );
            } else {
                for (i, m) in autos.iter().enumerate() {
                    println!("# automorphism {i}");
                    for (a, b) in &m.vertices {
                        println!("v {a} {b}");
                    }
                    for (a, b) in &m.ends {
                        println!("end {a} {b}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv {
            file1,
            file2,
            mapfile,
            force,
        } => {
            let source = load_model(file1)?;
            let target = load_model(file2)?;
            let map_text = read_input(mapfile).map_err(|e| vec![e])?;
            let (vertices, ends) =
                morphisms::parse_map(&map_text).map_err(|e| vec![e.to_string()])?;
            let map = LeafSpaceMap::infer(&source, &target, vertices, ends)
                .map_err(|e| vec![e.to_string()])?;
            let outcome = if *force {
                map.check_equivariance_forced()
            } else {
                map.check_equivariance()
            }
            .map_err(|e| vec![e.to_string()])?;
            match outcome {
                Equivariance::Ok => {
                    if cli.json {
                        println!("{}", json!({"format": 1, "command": "equiv", "ok": true}));
                    } else {
                        println!("ok");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Equivariance::CounterExample(ce) => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "format": 1,
                                "command": "equiv",
                                "ok": false,
                                "x1": ce.x1.as_str(),
                                "x2": ce.x2.as_str(),
                                "n_source": ce.n_source,
                                "n_target": ce.n_target,
                            })
                        );
                    } else {
                        println!(
                            "counterexample x1={} x2={} n_source={} n_target={}",
                            ce.x1, ce.x2, ce.n_source, ce.n_target
                        );
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Gen {
            seed,
            junctions,
            arity,
            bias,
        } => {
            let cfg = GeneratorConfig {
                seed: *seed,
                junction_count: *junctions,
                max_arity: *arity,
                sign_bias: parse_ratio(bias).map_err(|e| vec![e])?,
            };
            let ls = corpus::generate(&cfg).map_err(|e| vec![e.to_string()])?;
            print!("{}", corpus::serialize(&ls));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { file } => {
            let ls = load_model(file)?;
            let report = run_battery(&ls);
            if cli.json {
                let items: Vec<_> = report
                    .items
                    .iter()
                    .map(|i| {
                        json!({
                            "name": i.name,
                            "passed": i.passed,
                            "skipped": i.skipped,
                            "checks": i.checks,
                            "detail": i.detail,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({
                        "format": 1,
                        "command": "check",
                        "ok": report.passed(),
                        "items": items,
                    })
                );
            } else {
                print!("{}", report.render());
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Export { file, annotate } => {
            let ls = load_model(file)?;
            print!("{}", corpus::export_graph(&ls, *annotate));
            Ok(ExitCode::SUCCESS)
        }
        Command::DemoOrder { depth } => {
            demo_order(*depth, cli.json).map_err(|e| vec![e.to_string()])?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn demo_order(depth: usize, as_json: bool) -> Result<(), leafspace_core::grouporder::GroupOrderError> {
    let elements: Vec<ActingElement<'_, i64>> = (-2..=2)
        .map(|a| ActingElement::new(format!("t{a}"), move |x: &i64| x + a))
        .collect();
    let order = order_from_action(IntegerCarrier, &elements, depth)?;
    let mut translation_lines = Vec::new();
    for g in &elements {
        let sign = match order.sign_of(g) {
            OrderSign::Negative => "negative",
            OrderSign::Zero => "zero",
            OrderSign::Positive => "positive",
        };
        translation_lines.push(format!("{} {}", g.name, sign));
    }

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
    let samples = [(0i64, 1i64), (-5, 1), (-5, 0), (3, 0), (0, -1)];
    let mut pair_lines = Vec::new();
    for g in samples {
        let sign = match pair_order.sign_of(&g)? {
            OrderSign::Negative => "negative",
            OrderSign::Zero => "zero",
            OrderSign::Positive => "positive",
        };
        pair_lines.push(format!("({},{}) {}", g.0, g.1, sign));
    }

    if as_json {
        println!(
            "{}",
            json!({
                "format": 1,
                "command": "demo-order",
                "translations": translation_lines,
                "pairs": pair_lines,
            })
        );
    } else {
        println!("# integer translations under the first-difference order");
        for line in translation_lines {
            println!("{line}");
        }
        println!("# integer pairs under the lexicographic extension");
        for line in pair_lines {
            println!("{line}");
        }
    }
    Ok(())
}
