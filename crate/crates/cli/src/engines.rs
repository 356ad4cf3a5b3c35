//! `refute`, `extract` and `verify-witness`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::json;

use cardlab_core::atoms::{Atom, AtomStructure, StructureKind};
use cardlab_core::constructions::DomainExpr;
use cardlab_core::refute::builtin::{self, ValueOracle};
use cardlab_core::refute::{
    extract_fin_to_atom_mostowski, extract_from_partition_injection, extract_from_surplus, extract_seqstar_to_seq,
    refute_fin_to_seq_fraenkel, refute_fin_to_seqstar_fraenkel, refute_nat_to_power_fraenkel, refute_seq_to_power_fraenkel,
    refute_unordered_to_ordered_pairmodel, Certificate, Extraction, InjectionOracle, NatPartition, NatSet, RamseyOutcome,
    Sort, Value,
};

use crate::report::Check;

pub const WITNESS_SCHEMA: &str = "cardlab-witness/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    FinToSeq,
    FinToSeqstar,
    SeqToPower,
    NatToPower,
    UnorderedToOrdered,
}

impl Problem {
    fn name(self) -> &'static str {
        match self {
            Problem::FinToSeq => "fin-to-seq",
            Problem::FinToSeqstar => "fin-to-seqstar",
            Problem::SeqToPower => "seq-to-power",
            Problem::NatToPower => "nat-to-power",
            Problem::UnorderedToOrdered => "unordered-to-ordered",
        }
    }

    fn model(self) -> StructureKind {
        match self {
            Problem::UnorderedToOrdered => StructureKind::PairModel,
            _ => StructureKind::PureSet,
        }
    }

    fn sorts(self) -> (Sort, Sort) {
        let d = Sort::Domain;
        match self {
            Problem::FinToSeq => (d(DomainExpr::fin(DomainExpr::A)), d(DomainExpr::Seq)),
            Problem::FinToSeqstar => (d(DomainExpr::fin(DomainExpr::A)), d(DomainExpr::SeqStar)),
            Problem::SeqToPower => (d(DomainExpr::Seq), d(DomainExpr::PowA)),
            Problem::NatToPower => (Sort::Nat, d(DomainExpr::PowA)),
            Problem::UnorderedToOrdered => (
                d(DomainExpr::UnordPairs(Box::new(DomainExpr::A))),
                d(DomainExpr::Pair(Box::new(DomainExpr::A), Box::new(DomainExpr::A))),
            ),
        }
    }
}

/// A scripted oracle: listed answers, and `default` for everything else.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScriptedTable {
    #[serde(default)]
    pub support: Vec<Atom>,
    #[serde(default)]
    pub entries: Vec<(Value, Value)>,
    pub default: Value,
}

/// A certificate as written by `--emit-witness`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessFile {
    Value { schema: String, certificate: Certificate<Value, Value> },
    Surplus { schema: String, certificate: Certificate<(u64, NatSet), (u64, NatSet)> },
    Partition { schema: String, certificate: Certificate<NatPartition, NatSet> },
}

pub struct RefuteArgs {
    pub problem: Problem,
    pub model: Option<StructureKind>,
    pub oracle: Option<String>,
    pub table: Option<PathBuf>,
    pub support: Vec<u64>,
    pub max_atoms: usize,
    pub budget: usize,
    pub emit_witness: Option<PathBuf>,
}

fn structure(kind: StructureKind, max_atoms: usize) -> AtomStructure {
    match kind {
        StructureKind::PairModel => AtomStructure::pair_model(max_atoms as u64),
        _ => AtomStructure::pure(max_atoms as u64),
    }
}

fn atom(kind: StructureKind, i: u64) -> Atom {
    match kind {
        StructureKind::PairModel => Atom::Base(i),
        _ => Atom::Pure(i),
    }
}

fn scripted(problem: Problem, path: &Path) -> Result<ValueOracle> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let table: ScriptedTable = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let (domain, codomain) = problem.sorts();
    let entries: BTreeMap<Value, Value> = table.entries.into_iter().collect();
    let default = table.default;
    Ok(InjectionOracle::new(domain, codomain, table.support, move |x| {
        entries.get(x).cloned().unwrap_or_else(|| default.clone())
    }))
}

fn named(problem: Problem, name: &str, s: &AtomStructure, support: Vec<Atom>) -> Result<ValueOracle> {
    Ok(match problem {
        Problem::FinToSeq => builtin::fin_to_seq(name, support, false)?,
        Problem::FinToSeqstar => builtin::fin_to_seq(name, support, true)?,
        Problem::SeqToPower => builtin::seq_to_power(name, s, support)?,
        Problem::NatToPower => builtin::nat_to_power(name, s, support)?,
        Problem::UnorderedToOrdered => builtin::unordered_to_ordered(name, support)?,
    })
}

pub fn oracle_names(problem: Problem) -> &'static [&'static str] {
    match problem {
        Problem::FinToSeq | Problem::FinToSeqstar => &builtin::FIN_TO_SEQ,
        Problem::SeqToPower => &builtin::SEQ_TO_POWER,
        Problem::NatToPower => &builtin::NAT_TO_POWER,
        Problem::UnorderedToOrdered => &builtin::UNORDERED_TO_ORDERED,
    }
}

fn write_witness(path: &Path, file: &WitnessFile) -> Result<()> {
    let text = serde_json::to_string_pretty(file)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Runs the engine for `problem`. Configuration problems are errors; an
/// engine that fails to produce a verified witness is a failed check.
pub fn refute(args: &RefuteArgs) -> Result<Vec<Check>> {
    let kind = problem_model(args.problem, args.model)?;
    let mut s = structure(kind, args.max_atoms);
    let support: Vec<Atom> = args.support.iter().map(|&i| atom(kind, i)).collect();
    s.check_atoms(&support).context("support atoms")?;
    let mut oracle = match (&args.oracle, &args.table) {
        (Some(name), None) => named(args.problem, name, &s, support)?,
        (None, Some(path)) => scripted(args.problem, path)?,
        _ => bail!("give exactly one of --oracle and --table"),
    };
    let id = format!("refute/{}", args.problem.name());
    let mut data = BTreeMap::new();
    let witness = match args.problem {
        Problem::FinToSeq => refute_fin_to_seq_fraenkel(&mut s, &mut oracle),
        Problem::FinToSeqstar => refute_fin_to_seqstar_fraenkel(&mut s, &mut oracle),
        Problem::NatToPower => refute_nat_to_power_fraenkel(&mut s, &mut oracle),
        Problem::SeqToPower => refute_seq_to_power_fraenkel(&mut s, &mut oracle).map(|out| {
            data.insert("seq_count", json!(out.seq_count.to_string()));
            data.insert("supported_count", json!(out.supported_count.to_string()));
            out.witness
        }),
        Problem::UnorderedToOrdered => match refute_unordered_to_ordered_pairmodel(&mut s, &mut oracle, args.budget) {
            Ok(RamseyOutcome::Witness { case, witness, .. }) => {
                data.insert("case", json!(case));
                Ok(witness)
            }
            Ok(RamseyOutcome::BudgetExhausted { .. }) => {
                let detail = format!("budget of {} atoms exhausted after {} probes", args.budget, oracle.probes());
                return Ok(vec![Check::new(id, false, detail)]);
            }
            Err(e) => Err(e),
        },
    };
    let witness = match witness {
        Ok(w) => w,
        Err(e) => return Ok(vec![Check::error(id, e)]),
    };
    let kind_name = if witness.is_collapse() { "injectivity collapse" } else { "equivariance break" };
    let certificate = oracle.certificate(&s, witness);
    let verified = certificate.verify();
    data.insert("witness", json!(kind_name));
    data.insert("probes", json!(oracle.probes()));
    let mut detail = format!("{kind_name} after {} probes", oracle.probes());
    if let Err(e) = &verified {
        detail.push_str(&format!(", rejected on re-check: {e}"));
    }
    if let Some(path) = &args.emit_witness {
        write_witness(path, &WitnessFile::Value { schema: WITNESS_SCHEMA.into(), certificate })?;
    }
    Ok(vec![Check::new(id, verified.is_ok(), detail).with_data(data)])
}

fn problem_model(problem: Problem, model: Option<StructureKind>) -> Result<StructureKind> {
    let want = problem.model();
    match model {
        Some(m) if m != want => bail!("{} runs in the {want:?} structure, not {m:?}", problem.name()),
        _ => Ok(want),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtractProblem {
    FinToAtom,
    SeqstarToSeq,
    Surplus,
    Partition,
}

impl ExtractProblem {
    fn name(self) -> &'static str {
        match self {
            ExtractProblem::FinToAtom => "fin-to-atom",
            ExtractProblem::SeqstarToSeq => "seqstar-to-seq",
            ExtractProblem::Surplus => "surplus",
            ExtractProblem::Partition => "partition",
        }
    }
}

pub fn extractor_names(problem: ExtractProblem) -> &'static [&'static str] {
    match problem {
        ExtractProblem::FinToAtom => &builtin::FIN_TO_ATOM,
        ExtractProblem::SeqstarToSeq => &builtin::SEQSTAR_TO_SEQ,
        ExtractProblem::Surplus => &builtin::SURPLUS,
        ExtractProblem::Partition => &builtin::PARTITION,
    }
}

/// Reports a stream or a re-checked collapse; both are sound outcomes.
fn extraction_check<T: PartialEq, X, Y>(
    id: String,
    out: cardlab_core::Result<Extraction<T, X, Y>>,
    certify: impl FnOnce(cardlab_core::refute::ContradictionWitness<X, Y>) -> (cardlab_core::Result<()>, Option<WitnessFile>),
    emit: Option<&PathBuf>,
) -> Result<Check> {
    let out = match out {
        Ok(out) => out,
        Err(e) => return Ok(Check::error(id, e)),
    };
    Ok(match out {
        Extraction::Stream(v) => {
            let t = v.len();
            let distinct = Extraction::<T, X, Y>::Stream(v).distinct();
            Check::new(id, distinct, format!("stream of {t} values, pairwise distinct: {distinct}"))
                .with_data(json!({ "outcome": "stream", "length": t }))
        }
        Extraction::Collapse(w) => {
            let (verified, file) = certify(w);
            if let (Some(path), Some(file)) = (emit, file) {
                write_witness(path, &file)?;
            }
            let detail = match &verified {
                Ok(()) => "collapse exposed and re-checked".to_string(),
                Err(e) => format!("collapse rejected on re-check: {e}"),
            };
            Check::new(id, verified.is_ok(), detail).with_data(json!({ "outcome": "collapse" }))
        }
    })
}

pub fn extract(problem: ExtractProblem, name: &str, t: usize, n: u64, emit: Option<&PathBuf>) -> Result<Vec<Check>> {
    let id = format!("extract/{}/{name}", problem.name());
    let check = match problem {
        ExtractProblem::FinToAtom | ExtractProblem::SeqstarToSeq => {
            let mut s = AtomStructure::dense_integers(0..4);
            let mut g = if problem == ExtractProblem::FinToAtom {
                builtin::fin_to_atom(name)?
            } else {
                builtin::seqstar_to_seq(name)?
            };
            let out = if problem == ExtractProblem::FinToAtom {
                extract_fin_to_atom_mostowski(&mut s, &mut g, t)
            } else {
                extract_seqstar_to_seq(&mut s, &mut g, &Atom::rational(0), t)
            };
            extraction_check(
                id,
                out,
                |w| {
                    let c = g.certificate(&s, w);
                    (c.verify(), Some(WitnessFile::Value { schema: WITNESS_SCHEMA.into(), certificate: c }))
                },
                emit,
            )?
        }
        ExtractProblem::Surplus => {
            let mut f = builtin::surplus(name, n)?;
            let out = extract_from_surplus(n, &mut f, t);
            let s = AtomStructure::pure(0);
            extraction_check(
                id,
                out,
                |w| {
                    let c = f.certificate(&s, w);
                    (c.verify(), Some(WitnessFile::Surplus { schema: WITNESS_SCHEMA.into(), certificate: c }))
                },
                emit,
            )?
        }
        ExtractProblem::Partition => {
            let mut f = builtin::partition(name)?;
            let out = extract_from_partition_injection(&mut f, t);
            let s = AtomStructure::pure(0);
            extraction_check(
                id,
                out,
                |w| {
                    let c = f.certificate(&s, w);
                    (c.verify(), Some(WitnessFile::Partition { schema: WITNESS_SCHEMA.into(), certificate: c }))
                },
                emit,
            )?
        }
    };
    Ok(vec![check])
}

pub fn verify_witness(path: &Path) -> Result<Vec<Check>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: WitnessFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let (schema, verified, domain, codomain) = match &file {
        WitnessFile::Value { schema, certificate } => (schema, certificate.verify(), &certificate.domain, &certificate.codomain),
        WitnessFile::Surplus { schema, certificate } => (schema, certificate.verify(), &certificate.domain, &certificate.codomain),
        WitnessFile::Partition { schema, certificate } => (schema, certificate.verify(), &certificate.domain, &certificate.codomain),
    };
    if schema != WITNESS_SCHEMA {
        bail!("unsupported witness schema {schema:?}");
    }
    let id = format!("verify-witness/{domain}->{codomain}");
    Ok(vec![match verified {
        Ok(()) => Check::new(id, true, "witness re-checked against its transcript"),
        Err(e) => Check::error(id, e),
    }])
}
