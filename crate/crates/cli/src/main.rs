//! Command-line surface: fixture verification, twist-operator export,
//! relation and equivalence suites, invariant dimensions and example
//! construction. All output scalars are exact strings; repeated runs on
//! identical inputs produce byte-identical output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use graphalg::coend::{coend_invariants, verify_coend, verify_equivalence};
use graphalg::fixture::{self, FixtureDoc};
use graphalg::graph::{invariant_subspace, SpaceSpec};
use graphalg::heisenberg::{heisenberg_surjectivity_check, verify_heisenberg};
use graphalg::linalg::SparseMat;
use graphalg::mcg::{evaluate_word, relation_suite, McgWord, OpSpace};
use graphalg::report::Report;
use graphalg::ribbon::RibbonHopf;
use graphalg::Result;

#[derive(Parser)]
#[command(name = "graphalg", version, about = "Exact graph-algebra toolkit for factorizable ribbon Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FixtureArg {
    /// Path to a fixture JSON file.
    #[arg(long, conflicts_with = "example")]
    fixture: Option<PathBuf>,
    /// Name of a built-in example (trivial|dz2|dz3|dz4|ds3|gz2|gz3).
    #[arg(long)]
    example: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full axiom battery on a fixture.
    Verify {
        #[command(flatten)]
        fixture: FixtureArg,
        /// Also run the Heisenberg-double suite on the regular module.
        #[arg(long)]
        heisenberg: bool,
    },
    /// Evaluate a twist word and export the exact matrix.
    Twist {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long)]
        genus: usize,
        /// Comma-separated tokens, e.g. "a1,b2^-1,e2^3"; empty for identity.
        #[arg(long, default_value = "")]
        word: String,
        /// v (full space) or inv (invariant subspace).
        #[arg(long, default_value = "v")]
        space: String,
        /// Output file for the matrix document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the mapping class group relation suite.
    Relations {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value = "v")]
        space: String,
    },
    /// Check the equivalence with the coend representation.
    Equivalence {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long)]
        genus: usize,
    },
    /// Compute the dimension (and optionally a basis) of Inv(V).
    Invariants {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long)]
        genus: usize,
        /// Comma-separated puncture decorations (trivial|regular).
        #[arg(long, default_value = "")]
        punctures: String,
        /// Export the basis columns to a file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Write a built-in example fixture as JSON.
    BuildExample {
        /// Example name (trivial|dz2|dz3|dz4|ds3|gz2|gz3).
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ReportDoc {
    command: String,
    fixture: String,
    fixture_hash: String,
    params: serde_json::Value,
    checks: Vec<graphalg::report::Check>,
}

#[derive(Serialize)]
struct MatrixDoc {
    command: String,
    fixture: String,
    fixture_hash: String,
    genus: usize,
    word: String,
    space: String,
    dim: usize,
    entries: Vec<(usize, usize, String)>,
}

fn load_fixture(arg: &FixtureArg) -> Result<(String, FixtureDoc, RibbonHopf)> {
    match (&arg.fixture, &arg.example) {
        (Some(path), None) => {
            let (doc, rh) = fixture::load_from_path(path)?;
            Ok((doc.name.clone(), doc, rh))
        }
        (None, Some(name)) => {
            let rh = fixture::builtin(name)?;
            let doc = fixture::serialize(&rh, name);
            Ok((name.clone(), doc, rh))
        }
        _ => Err(graphalg::Error::Parse(
            "exactly one of --fixture or --example is required".into(),
        )),
    }
}

fn parse_space(text: &str) -> Result<OpSpace> {
    match text {
        "v" | "V" | "full" => Ok(OpSpace::Full),
        "inv" | "Inv" => Ok(OpSpace::Inv),
        other => Err(graphalg::Error::Parse(format!("unknown space '{other}' (use v or inv)"))),
    }
}

fn worker_count() -> usize {
    std::env::var("GRAPHALG_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|w| *w >= 1)
        .unwrap_or(1)
}

/// Runs independent report-producing jobs, preserving their order in the
/// output; with more than one worker the jobs run on scoped threads.
fn run_jobs(jobs: Vec<Box<dyn FnOnce() -> Report + Send + '_>>, workers: usize) -> Vec<Report> {
    if workers <= 1 || jobs.len() <= 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let n = jobs.len();
    let mut slots: Vec<Option<Report>> = (0..n).map(|_| None).collect();
    let queue: Vec<(usize, Box<dyn FnOnce() -> Report + Send + '_>)> =
        jobs.into_iter().enumerate().collect();
    let queue = std::sync::Mutex::new(queue);
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers.min(n) {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                match job {
                    Some((i, f)) => {
                        let r = f();
                        results.lock().unwrap().push((i, r));
                    }
                    None => break,
                }
            });
        }
    });
    for (i, r) in results.into_inner().unwrap() {
        slots[i] = Some(r);
    }
    slots.into_iter().map(|s| s.unwrap()).collect()
}

fn emit_report(doc: &ReportDoc) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(doc).expect("report serializes"));
    let all = doc.checks.iter().all(|c| c.passed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn sparse_entries(m: &SparseMat) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for (r, row) in m.rows().iter().enumerate() {
        for (c, v) in row {
            out.push((r, *c, v.to_string()));
        }
    }
    out
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { fixture, heisenberg } => {
            let (name, doc, rh) = load_fixture(&fixture)?;
            let workers = worker_count();
            let mut jobs: Vec<Box<dyn FnOnce() -> Report + Send>> = vec![
                Box::new(|| rh.hopf.verify_hopf_axioms()),
                Box::new(|| rh.verify_quasitriangular()),
                Box::new(|| rh.verify_l_matrix_relations_universal()),
                Box::new(|| rh.verify_r_coproduct_expansions()),
                Box::new(|| rh.verify_ribbon()),
                Box::new(|| rh.verify_integrals()),
            ];
            if heisenberg {
                jobs.push(Box::new(|| {
                    let reg = rh.hopf.regular_rep();
                    let mut rep = verify_heisenberg(&rh, &reg);
                    let (full, rank) = heisenberg_surjectivity_check(&rh);
                    rep.record(
                        "heisenberg.surjectivity",
                        full,
                        Some(format!("rank {rank}")),
                    );
                    rep
                }));
            }
            let mut report = Report::new();
            for part in run_jobs(jobs, workers) {
                report.merge(part);
            }
            let (fact, rank) = rh.factorizability_check();
            report.record(
                "factorizability.full_rank",
                fact,
                Some(format!("rank {rank} of dimension {}", rh.dim())),
            );
            let doc = ReportDoc {
                command: "verify".into(),
                fixture: name,
                fixture_hash: doc.hash(),
                params: serde_json::json!({ "heisenberg": heisenberg }),
                checks: report.checks,
            };
            Ok(emit_report(&doc))
        }
        Command::Twist { fixture, genus, word, space, out } => {
            let (name, doc, rh) = load_fixture(&fixture)?;
            let w = McgWord::parse(&word)?;
            let sp = parse_space(&space)?;
            let op = evaluate_word(&rh, genus, &w, sp, None)?;
            let mdoc = MatrixDoc {
                command: "twist".into(),
                fixture: name,
                fixture_hash: doc.hash(),
                genus,
                word: w.to_string(),
                space: space.clone(),
                dim: op.op.nrows(),
                entries: sparse_entries(&op.op),
            };
            let text = serde_json::to_string_pretty(&mdoc).expect("matrix serializes");
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "command": "twist",
                            "written": path.display().to_string(),
                            "dim": mdoc.dim,
                            "nnz": mdoc.entries.len(),
                            "fixture_hash": mdoc.fixture_hash,
                        })
                    );
                }
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Relations { fixture, genus, space } => {
            let (name, doc, rh) = load_fixture(&fixture)?;
            let sp = parse_space(&space)?;
            let report = relation_suite(&rh, genus, sp)?;
            let doc = ReportDoc {
                command: "relations".into(),
                fixture: name,
                fixture_hash: doc.hash(),
                params: serde_json::json!({ "genus": genus, "space": space }),
                checks: report.checks,
            };
            Ok(emit_report(&doc))
        }
        Command::Equivalence { fixture, genus } => {
            let (name, doc, rh) = load_fixture(&fixture)?;
            let mut report = verify_coend(&rh);
            report.merge(verify_equivalence(&rh, genus)?);
            let doc = ReportDoc {
                command: "equivalence".into(),
                fixture: name,
                fixture_hash: doc.hash(),
                params: serde_json::json!({ "genus": genus }),
                checks: report.checks,
            };
            Ok(emit_report(&doc))
        }
        Command::Invariants { fixture, genus, punctures, export } => {
            let (name, doc, rh) = load_fixture(&fixture)?;
            let mut reps = Vec::new();
            if !punctures.trim().is_empty() {
                for token in punctures.split(',') {
                    match token.trim() {
                        "trivial" => reps.push(rh.hopf.trivial_rep()),
                        "regular" => reps.push(rh.hopf.regular_rep()),
                        other => {
                            return Err(graphalg::Error::Parse(format!(
                                "unknown puncture decoration '{other}'"
                            )))
                        }
                    }
                }
            }
            let spec = SpaceSpec { genus, punctures: reps };
            let basis = invariant_subspace(&rh, &spec);
            let coend_dim = if spec.punctures.is_empty() {
                Some(coend_invariants(&rh, genus).ncols())
            } else {
                None
            };
            if let Some(path) = &export {
                let mdoc = MatrixDoc {
                    command: "invariants".into(),
                    fixture: name.clone(),
                    fixture_hash: doc.hash(),
                    genus,
                    word: String::new(),
                    space: "inv-basis".into(),
                    dim: basis.nrows(),
                    entries: sparse_entries(&basis),
                };
                std::fs::write(path, serde_json::to_string_pretty(&mdoc).expect("serializes"))?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "command": "invariants",
                    "fixture": name,
                    "fixture_hash": doc.hash(),
                    "genus": genus,
                    "punctures": punctures,
                    "space_dim": basis.nrows(),
                    "invariant_dim": basis.ncols(),
                    "coend_invariant_dim": coend_dim,
                }))
                .expect("serializes")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::BuildExample { name, out } => {
            let rh = fixture::builtin(&name)?;
            let doc = fixture::serialize(&rh, &name);
            let text = doc.to_json();
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "command": "build-example",
                            "written": path.display().to_string(),
                            "dim": doc.dim,
                            "fixture_hash": doc.hash(),
                        })
                    );
                }
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
