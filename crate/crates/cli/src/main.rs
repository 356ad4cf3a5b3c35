mod engines;
mod report;
mod suites;
mod table;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cardlab_core::atoms::{Atom, AtomStructure, StructureKind};
use cardlab_core::cardtable::Model;
use cardlab_core::symsets::{count_least_supported, count_supported, type_count};

use engines::{ExtractProblem, Problem, RefuteArgs};
use report::{Check, Report};
use suites::{Suite, SuiteConfig};

const MAX_ATOMS: usize = 12;
const MAX_SUPPORT: usize = 8;
const MAX_STREAM: usize = 10_000;
const MAX_BUDGET: usize = 4096;

/// Checks and refutations for cardinal arithmetic in permutation models.
///
/// Exit status: 0 when every check passes, 1 when some check fails, 2 on a
/// usage or configuration error.
#[derive(Debug, Parser)]
#[command(name = "cardlab", version)]
struct Cli {
    /// Seed for every randomized probe.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Size of the atom pool (at most 12).
    #[arg(long, global = true, default_value_t = 8)]
    max_atoms: usize,
    /// Fresh-atom budget of the Ramsey engine (at most 4096).
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Largest support size used by the counting suites (at most 8).
        #[arg(long, default_value_t = 5)]
        max_support: usize,
        /// Equivariance probes per map.
        #[arg(long, default_value_t = 100)]
        probes: usize,
    },
    /// Run a refutation engine against a built-in or scripted oracle.
    Refute {
        #[arg(value_enum)]
        problem: Problem,
        /// Structure to run in; each problem has exactly one.
        #[arg(long)]
        model: Option<StructureKind>,
        /// Built-in oracle name.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        oracle: Option<String>,
        /// Scripted oracle table (JSON).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Declared support, as atom indices.
        #[arg(long, value_delimiter = ',')]
        support: Vec<u64>,
        /// Write the certificate to this file.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Run an extractor against a built-in oracle.
    Extract {
        #[arg(value_enum)]
        problem: ExtractProblem,
        #[arg(long)]
        oracle: String,
        /// Number of values to extract.
        #[arg(short = 'T', long = "length", default_value_t = 100)]
        length: usize,
        /// Surplus of the `surplus` problem: (n+1) x P(N) -> n x P(N).
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// Write a collapse certificate to this file.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Close a model's axioms, plus any given facts, and list the relations.
    Table {
        #[arg(long)]
        model: Option<Model>,
        /// Extra fact such as "Pow(m) <= Seq(m)"; repeatable.
        #[arg(long = "fact")]
        facts: Vec<String>,
    },
    /// Re-check a certificate written by --emit-witness.
    VerifyWitness { path: PathBuf },
    /// Count subsets of the atoms with a given support.
    CountSupports {
        /// pure, dense or categorical.
        #[arg(long, default_value = "dense")]
        structure: StructureKind,
        /// Number of support atoms.
        #[arg(long)]
        size: usize,
    },
}

fn params(cli: &Cli) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("seed".into(), json!(cli.seed));
    p.insert("max_atoms".into(), json!(cli.max_atoms));
    p.insert("budget".into(), json!(cli.budget));
    match &cli.command {
        Command::Verify { suite, max_support, probes } => {
            p.insert("suite".into(), json!(format!("{suite:?}")));
            p.insert("max_support".into(), json!(max_support));
            p.insert("probes".into(), json!(probes));
        }
        Command::Refute { problem, oracle, table, support, .. } => {
            p.insert("problem".into(), json!(format!("{problem:?}")));
            p.insert("oracle".into(), json!(oracle));
            p.insert("table".into(), json!(table));
            p.insert("support".into(), json!(support));
        }
        Command::Extract { problem, oracle, length, n, .. } => {
            p.insert("problem".into(), json!(format!("{problem:?}")));
            p.insert("oracle".into(), json!(oracle));
            p.insert("length".into(), json!(length));
            p.insert("n".into(), json!(n));
        }
        Command::Table { model, facts } => {
            p.insert("model".into(), json!(model.map(|m| m.to_string())));
            p.insert("facts".into(), json!(facts));
        }
        Command::VerifyWitness { path } => {
            p.insert("path".into(), json!(path));
        }
        Command::CountSupports { structure, size } => {
            p.insert("structure".into(), json!(format!("{structure:?}")));
            p.insert("size".into(), json!(size));
        }
    }
    p
}

fn count_supports(kind: StructureKind, size: usize) -> Result<Vec<Check>> {
    let (s, e) = match kind {
        StructureKind::PureSet => (AtomStructure::pure(size as u64), (0..size as u64).map(Atom::Pure).collect()),
        StructureKind::DenseOrder => {
            let n = size as i64;
            (AtomStructure::dense_integers(0..n), (0..n).map(Atom::rational).collect())
        }
        StructureKind::Categorical => {
            let mut s = AtomStructure::categorical();
            let e: Vec<Atom> = (0..size).map(|_| s.fresh_atom()).collect();
            (s, e)
        }
        StructureKind::PairModel => bail!("supports in the pair model have no least form; count types with a level bound instead"),
    };
    let types = type_count(&s, &e)?;
    let all = count_supported(&s, &e)?;
    let least = count_least_supported(&s, &e)?;
    let id = format!("count-supports/{kind:?}/{size}");
    Ok(vec![Check::new(id, true, format!("{types} types, {all} supported subsets, {least} with this least support"))
        .with_data(json!({ "types": types.to_string(), "supported": all.to_string(), "least": least.to_string() }))])
}

fn run(cli: &Cli) -> Result<Vec<Check>> {
    if cli.max_atoms == 0 || cli.max_atoms > MAX_ATOMS {
        bail!("--max-atoms must lie in 1..={MAX_ATOMS}");
    }
    if cli.budget > MAX_BUDGET {
        bail!("--budget must be at most {MAX_BUDGET}");
    }
    match &cli.command {
        Command::Verify { suite, max_support, probes } => {
            if *max_support > MAX_SUPPORT {
                bail!("--max-support must be at most {MAX_SUPPORT}");
            }
            let cfg = SuiteConfig {
                max_atoms: cli.max_atoms,
                max_support: *max_support,
                probes: *probes,
                seed: cli.seed,
            };
            Ok(suites::run(*suite, &cfg))
        }
        Command::Refute { problem, model, oracle, table, support, emit_witness } => {
            if let Some(name) = oracle {
                let known = engines::oracle_names(*problem);
                if !known.contains(&name.as_str()) {
                    bail!("unknown oracle {name:?}; expected one of {}", known.join(", "));
                }
            }
            engines::refute(&RefuteArgs {
                problem: *problem,
                model: *model,
                oracle: oracle.clone(),
                table: table.clone(),
                support: support.clone(),
                max_atoms: cli.max_atoms,
                budget: cli.budget,
                emit_witness: emit_witness.clone(),
            })
        }
        Command::Extract { problem, oracle, length, n, emit_witness } => {
            let known = engines::extractor_names(*problem);
            if !known.contains(&oracle.as_str()) {
                bail!("unknown oracle {oracle:?}; expected one of {}", known.join(", "));
            }
            if *length == 0 || *length > MAX_STREAM {
                bail!("--length must lie in 1..={MAX_STREAM}");
            }
            if *n == 0 {
                bail!("--n must be positive");
            }
            engines::extract(*problem, oracle, *length, *n, emit_witness.as_ref())
        }
        Command::Table { model, facts } => {
            if model.is_none() && facts.is_empty() {
                bail!("give --model, --fact, or both");
            }
            table::table(*model, facts)
        }
        Command::VerifyWitness { path } => engines::verify_witness(path),
        Command::CountSupports { structure, size } => {
            let limit = if *structure == StructureKind::Categorical { 2 } else { MAX_SUPPORT };
            if *size > limit {
                bail!("--size must be at most {limit} for this structure");
            }
            count_supports(*structure, *size)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let checks = match run(&cli) {
        Ok(checks) => checks,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let name = match &cli.command {
        Command::Verify { .. } => "verify",
        Command::Refute { .. } => "refute",
        Command::Extract { .. } => "extract",
        Command::Table { .. } => "table",
        Command::VerifyWitness { .. } => "verify-witness",
        Command::CountSupports { .. } => "count-supports",
    };
    let report = Report::new(name, params(&cli), checks);
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    print!("{}", if cli.json { report.to_json() } else { report.to_text() });
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
