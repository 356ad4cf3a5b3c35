//! Oracle-driven refutations. Each engine takes a purported supported
//! injection as a lazy, adversarial oracle and either returns a finite
//! contradiction certificate that can be re-checked independently, or
//! extracts a sequence of provably distinct values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atoms::{extend_to, extendable, Atom, AtomStructure, PartialAutomorphism};
use crate::constructions::{DomainExpr, Hf};
use crate::error::{Error, Result};
use crate::symsets::SupportedSubset;

pub mod builtin;
mod extract;
mod finite;
mod fraenkel;
mod natsets;
mod pairmodel;

pub use extract::{
    extract_fin_to_atom_mostowski, extract_from_partition_injection, extract_from_surplus,
    extract_seqstar_to_seq,
};
pub use finite::{disjointify_finite, partition_to_edges, surjection_to_power_injection, Disjointified};
pub use fraenkel::{
    refute_fin_to_seq_fraenkel, refute_fin_to_seqstar_fraenkel, refute_nat_to_power_fraenkel,
    refute_seq_to_power_fraenkel, SeqPowerRefutation,
};
pub use natsets::{NatPartition, NatSet};
pub use pairmodel::{refute_unordered_to_ordered_pairmodel, RamseyOutcome};

/// What oracle inputs and answers must support for witnesses to be checked.
pub trait OracleValue: Clone + Ord + fmt::Debug {
    /// Equality of the denoted objects.
    fn same(&self, _s: &AtomStructure, other: &Self) -> Result<bool> {
        Ok(self == other)
    }

    /// Image under the automorphism an extendable map stands for.
    fn act(&self, _s: &mut AtomStructure, _pi: &PartialAutomorphism) -> Result<Self> {
        Ok(self.clone())
    }

    /// Atoms the value mentions.
    fn atoms(&self) -> BTreeSet<Atom> {
        BTreeSet::new()
    }
}

impl OracleValue for u64 {}

/// Values exchanged with oracles over the atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Nat(u64),
    Hf(Hf),
    Subset(SupportedSubset),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Hf(h) => write!(f, "{h}"),
            Value::Subset(x) => write!(f, "{}", serde_json::to_string(x).map_err(|_| fmt::Error)?),
        }
    }
}

impl Value {
    pub fn as_hf(&self) -> Option<&Hf> {
        match self {
            Value::Hf(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_subset(&self) -> Option<&SupportedSubset> {
        match self {
            Value::Subset(x) => Some(x),
            _ => None,
        }
    }
}

impl OracleValue for Value {
    fn same(&self, s: &AtomStructure, other: &Self) -> Result<bool> {
        match (self, other) {
            (Value::Subset(a), Value::Subset(b)) => a.same_set(s, b),
            _ => Ok(self == other),
        }
    }

    fn act(&self, s: &mut AtomStructure, pi: &PartialAutomorphism) -> Result<Self> {
        Ok(match self {
            Value::Nat(n) => Value::Nat(*n),
            Value::Hf(h) => {
                let atoms: Vec<Atom> = h.support().into_iter().collect();
                Value::Hf(h.act(&extend_to(s, pi, &atoms)?)?)
            }
            Value::Subset(x) => Value::Subset(x.act(s, pi)?),
        })
    }

    fn atoms(&self) -> BTreeSet<Atom> {
        match self {
            Value::Nat(_) => BTreeSet::new(),
            Value::Hf(h) => h.support(),
            Value::Subset(x) => {
                let mut out = BTreeSet::new();
                for a in x.support() {
                    a.close_into(&mut out);
                }
                out
            }
        }
    }
}

/// Declared domain or codomain of an oracle over the atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    Nat,
    Domain(DomainExpr),
}

impl Sort {
    pub fn member(&self, v: &Value) -> bool {
        match (self, v) {
            (Sort::Nat, Value::Nat(_)) => true,
            (Sort::Domain(DomainExpr::PowA), Value::Subset(_)) => true,
            (Sort::Domain(d), Value::Hf(h)) => d.member_hf(h),
            _ => false,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Nat => write!(f, "N"),
            Sort::Domain(d) => write!(f, "{d}"),
        }
    }
}

type Answer<'f, X, Y> = Box<dyn FnMut(&X) -> Y + 'f>;
type Check<'f, Y> = Box<dyn Fn(&Y) -> bool + 'f>;

/// A memoized oracle for a purported injection with a declared support.
/// Every answer is checked against the codomain and recorded.
pub struct InjectionOracle<'f, X, Y> {
    domain: String,
    codomain: String,
    support: Vec<Atom>,
    answer: Answer<'f, X, Y>,
    accepts: Check<'f, Y>,
    cache: BTreeMap<X, Y>,
    transcript: Vec<(X, Y)>,
}

impl<'f> InjectionOracle<'f, Value, Value> {
    pub fn new<F>(domain: Sort, codomain: Sort, support: Vec<Atom>, f: F) -> Self
    where
        F: FnMut(&Value) -> Value + 'f,
    {
        let label = (domain.to_string(), codomain.to_string());
        Self::with_check(label.0, label.1, support, move |y: &Value| codomain.member(y), f)
    }

    /// Oracle on hereditarily finite objects.
    pub fn hf<F>(domain: DomainExpr, codomain: DomainExpr, support: Vec<Atom>, mut f: F) -> Self
    where
        F: FnMut(&Hf) -> Hf + 'f,
    {
        Self::new(Sort::Domain(domain), Sort::Domain(codomain), support, move |x: &Value| match x {
            Value::Hf(h) => Value::Hf(f(h)),
            other => other.clone(),
        })
    }
}

impl<'f, X: Clone + Ord, Y: Clone> InjectionOracle<'f, X, Y> {
    pub fn with_check<C, F>(
        domain: impl Into<String>,
        codomain: impl Into<String>,
        support: Vec<Atom>,
        accepts: C,
        f: F,
    ) -> Self
    where
        C: Fn(&Y) -> bool + 'f,
        F: FnMut(&X) -> Y + 'f,
    {
        Self {
            domain: domain.into(),
            codomain: codomain.into(),
            support,
            answer: Box::new(f),
            accepts: Box::new(accepts),
            cache: BTreeMap::new(),
            transcript: Vec::new(),
        }
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn codomain(&self) -> &str {
        &self.codomain
    }

    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    pub fn transcript(&self) -> &[(X, Y)] {
        &self.transcript
    }

    /// Number of distinct inputs asked so far.
    pub fn probes(&self) -> usize {
        self.transcript.len()
    }

    pub fn query(&mut self, x: &X) -> Result<Y>
    where
        X: fmt::Debug,
        Y: fmt::Debug,
    {
        if let Some(y) = self.cache.get(x) {
            return Ok(y.clone());
        }
        let y = (self.answer)(x);
        if !(self.accepts)(&y) {
            return Err(Error::OracleAnswer(format!("{y:?} is not in {}", self.codomain)));
        }
        self.cache.insert(x.clone(), y.clone());
        self.transcript.push((x.clone(), y.clone()));
        Ok(y)
    }

    /// Packages a witness with everything needed to re-check it.
    pub fn certificate(&self, s: &AtomStructure, witness: ContradictionWitness<X, Y>) -> Certificate<X, Y> {
        Certificate {
            structure: s.clone(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            support: self.support.clone(),
            transcript: self.transcript.clone(),
            witness,
        }
    }
}

/// A finite reason why an oracle cannot be a supported injection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContradictionWitness<X, Y> {
    /// Two distinct inputs with the same answer.
    InjectivityCollapse { left: X, right: X, answer: Y },
    /// An automorphism fixing the support with `pi(f(input)) != f(pi(input))`.
    EquivarianceBreak {
        pi: PartialAutomorphism,
        fixed: Vec<Atom>,
        input: X,
        answer: Y,
        moved_input: X,
        moved_answer: Y,
    },
}

impl<X: OracleValue, Y: OracleValue> ContradictionWitness<X, Y> {
    pub fn is_collapse(&self) -> bool {
        matches!(self, ContradictionWitness::InjectivityCollapse { .. })
    }

    /// Re-checks the witness against a transcript using only the structure,
    /// the declared support and the recorded answers.
    pub fn verify(&self, s: &mut AtomStructure, support: &[Atom], transcript: &[(X, Y)]) -> Result<()> {
        let reject = |why: &str| Err(Error::WitnessRejected(why.to_string()));
        let recorded = |x: &X, y: &Y| transcript.iter().any(|(a, b)| a == x && b == y);
        match self {
            ContradictionWitness::InjectivityCollapse { left, right, answer } => {
                for x in [left, right] {
                    let Some((_, y)) = transcript.iter().find(|(a, _)| a == x) else {
                        return reject("collapse input is not in the transcript");
                    };
                    if !y.same(s, answer)? {
                        return reject("collapse answers differ");
                    }
                }
                if left.same(s, right)? {
                    return reject("collapse inputs are equal");
                }
                Ok(())
            }
            ContradictionWitness::EquivarianceBreak {
                pi,
                fixed,
                input,
                answer,
                moved_input,
                moved_answer,
            } => {
                if !recorded(input, answer) || !recorded(moved_input, moved_answer) {
                    return reject("queries are not in the transcript");
                }
                if !support.iter().all(|e| fixed.contains(e)) {
                    return reject("fixed atoms do not cover the declared support");
                }
                if !pi.fixes(fixed) {
                    return reject("map moves a fixed atom");
                }
                if !extendable(s, pi)? {
                    return reject("map does not extend to an automorphism");
                }
                let pi = extend_to(s, pi, fixed)?;
                if !input.act(s, &pi)?.same(s, moved_input)? {
                    return reject("moved input is not the image of the input");
                }
                if answer.act(s, &pi)?.same(s, moved_answer)? {
                    return reject("answers commute with the map");
                }
                Ok(())
            }
        }
    }
}

/// A witness together with the data it is checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate<X, Y> {
    pub structure: AtomStructure,
    pub domain: String,
    pub codomain: String,
    pub support: Vec<Atom>,
    pub transcript: Vec<(X, Y)>,
    pub witness: ContradictionWitness<X, Y>,
}

impl<X: OracleValue, Y: OracleValue> Certificate<X, Y> {
    pub fn verify(&self) -> Result<()> {
        let mut s = self.structure.clone();
        self.witness.verify(&mut s, &self.support, &self.transcript)
    }
}

/// Result of an extraction: either the requested distinct values or a
/// collapse of the oracle, never both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extraction<T, X, Y> {
    Stream(Vec<T>),
    Collapse(ContradictionWitness<X, Y>),
}

impl<T: PartialEq, X, Y> Extraction<T, X, Y> {
    pub fn stream(&self) -> Option<&[T]> {
        match self {
            Extraction::Stream(v) => Some(v),
            Extraction::Collapse(_) => None,
        }
    }

    /// Whether a stream is pairwise distinct (vacuously true for a collapse).
    pub fn distinct(&self) -> bool {
        match self {
            Extraction::Stream(v) => v.iter().enumerate().all(|(i, x)| v[..i].iter().all(|y| y != x)),
            Extraction::Collapse(_) => true,
        }
    }
}

/// Queries `input` and its image under the completion of `seed` fixing
/// `fixed`; returns the break if the answers do not commute with the map.
pub(crate) fn probe_move(
    s: &mut AtomStructure,
    oracle: &mut InjectionOracle<'_, Value, Value>,
    fixed: &[Atom],
    seed: &PartialAutomorphism,
    input: &Value,
) -> Result<Option<ContradictionWitness<Value, Value>>> {
    let pi = PartialAutomorphism::identity_on(fixed)
        .merged(seed)
        .ok_or_else(|| Error::InvalidInput("seed moves a fixed atom".into()))?;
    let answer = oracle.query(input)?;
    let mut atoms: BTreeSet<Atom> = fixed.iter().cloned().collect();
    atoms.extend(input.atoms());
    atoms.extend(answer.atoms());
    atoms.extend(pi.domain().cloned());
    let pi = extend_to(s, &pi, &atoms.into_iter().collect::<Vec<_>>())?;
    let moved_input = input.act(s, &pi)?;
    let moved_answer = oracle.query(&moved_input)?;
    if answer.act(s, &pi)?.same(s, &moved_answer)? {
        return Ok(None);
    }
    Ok(Some(ContradictionWitness::EquivarianceBreak {
        pi,
        fixed: fixed.to_vec(),
        input: input.clone(),
        answer,
        moved_input,
        moved_answer,
    }))
}

/// `n` atoms of the universe outside `avoid`, materializing fresh ones when
/// the universe runs short.
pub(crate) fn atoms_outside(s: &mut AtomStructure, avoid: &BTreeSet<Atom>, n: usize) -> Vec<Atom> {
    let mut out: Vec<Atom> = s
        .universe()
        .iter()
        .filter(|a| !avoid.contains(*a) && a.level() == 0)
        .take(n)
        .cloned()
        .collect();
    while out.len() < n {
        let a = s.fresh_atom();
        if !avoid.contains(&a) {
            out.push(a);
        }
    }
    out
}
