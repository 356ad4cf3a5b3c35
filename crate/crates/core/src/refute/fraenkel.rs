//! Refutations in the basic Fraenkel model (pure set of atoms).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{atoms_outside, probe_move, ContradictionWitness, InjectionOracle, OracleValue, Value};
use crate::atoms::{Atom, AtomStructure, PartialAutomorphism, StructureKind};
use crate::constructions::Hf;
use crate::error::{Error, Result};
use crate::symsets::{count_supported, SupportedSubset};

type Oracle<'a, 'f> = &'a mut InjectionOracle<'f, Value, Value>;
type Witness = ContradictionWitness<Value, Value>;

fn require_pure(s: &AtomStructure) -> Result<()> {
    if s.kind() != StructureKind::PureSet {
        return Err(Error::WrongStructure {
            expected: StructureKind::PureSet,
            found: s.kind(),
        });
    }
    Ok(())
}

fn declared_support(s: &AtomStructure, oracle: &InjectionOracle<'_, Value, Value>) -> Result<Vec<Atom>> {
    require_pure(s)?;
    s.check_atoms(oracle.support())?;
    let e: BTreeSet<Atom> = oracle.support().iter().cloned().collect();
    Ok(e.into_iter().collect())
}

fn swap(pairs: &[(&Atom, &Atom)]) -> PartialAutomorphism {
    let mut p = PartialAutomorphism::new();
    for (a, b) in pairs {
        p.insert((*a).clone(), (*b).clone());
        p.insert((*b).clone(), (*a).clone());
    }
    p
}

fn answer_atoms(v: &Value) -> Result<Vec<Atom>> {
    v.as_hf()
        .and_then(Hf::as_atom_tuple)
        .ok_or_else(|| Error::OracleAnswer(format!("{v} is not a sequence of atoms")))
}

/// Probes `{a0, a1}`. An answer mentioning an atom outside `e` yields a
/// break; otherwise the answer is returned for the collapse step.
fn probe_pair(s: &mut AtomStructure, oracle: Oracle<'_, '_>, e: &[Atom], a0: &Atom, a1: &Atom) -> Result<std::result::Result<Witness, Value>> {
    let input = Value::Hf(Hf::atom_set([a0.clone(), a1.clone()]));
    let answer = oracle.query(&input)?;
    let seq = answer_atoms(&answer)?;
    let fixed: BTreeSet<&Atom> = e.iter().collect();
    let Some(y) = seq.iter().find(|y| !fixed.contains(y)) else {
        return Ok(Err(answer));
    };
    let seed = if y == a0 || y == a1 {
        swap(&[(a0, a1)])
    } else {
        let mut avoid: BTreeSet<Atom> = e.iter().cloned().collect();
        avoid.extend(seq.iter().cloned());
        avoid.extend([a0.clone(), a1.clone()]);
        let z = atoms_outside(s, &avoid, 1).remove(0);
        swap(&[(a0, a1), (y, &z)])
    };
    match probe_move(s, oracle, e, &seed, &input)? {
        Some(w) => Ok(Ok(w)),
        None => Err(Error::ProbeBound { bound: 2 }),
    }
}

fn refute_fin_pairs(s: &mut AtomStructure, oracle: Oracle<'_, '_>) -> Result<Witness> {
    let e = declared_support(s, oracle)?;
    let fresh = atoms_outside(s, &e.iter().cloned().collect(), 4);
    let (a0, a1, b0, b1) = (&fresh[0], &fresh[1], &fresh[2], &fresh[3]);
    let u = match probe_pair(s, oracle, &e, a0, a1)? {
        Ok(w) => return Ok(w),
        Err(u) => u,
    };
    let v = match probe_pair(s, oracle, &e, b0, b1)? {
        Ok(w) => return Ok(w),
        Err(v) => v,
    };
    let x = Value::Hf(Hf::atom_set([a0.clone(), a1.clone()]));
    let y = Value::Hf(Hf::atom_set([b0.clone(), b1.clone()]));
    if u == v {
        return Ok(ContradictionWitness::InjectivityCollapse {
            left: x,
            right: y,
            answer: u,
        });
    }
    // u only mentions atoms of e, so exchanging the pairs must fix it
    probe_move(s, oracle, &e, &swap(&[(a0, b0), (a1, b1)]), &x)?.ok_or(Error::ProbeBound { bound: 2 })
}

/// Refutes a supported injection `Fin(A) -> Seq(A)`. At most two pairs of
/// atoms outside the support are probed: an answer mentioning a probed atom
/// or any atom outside the support breaks equivariance, and two answers
/// inside the support either coincide or break equivariance under the map
/// exchanging the pairs.
pub fn refute_fin_to_seq_fraenkel(s: &mut AtomStructure, f: Oracle<'_, '_>) -> Result<Witness> {
    refute_fin_pairs(s, f)
}

/// Refutes a supported injection `Fin(A) -> seq(A)` with the same two-pair
/// probe; repeated entries do not change the argument.
pub fn refute_fin_to_seqstar_fraenkel(s: &mut AtomStructure, g: Oracle<'_, '_>) -> Result<Witness> {
    refute_fin_pairs(s, g)
}

fn as_subset(v: &Value) -> Result<&SupportedSubset> {
    v.as_subset()
        .ok_or_else(|| Error::OracleAnswer(format!("{v} is not a subset of the atoms")))
}

/// Breaks equivariance at `input` if its answer is not supported by `e`.
fn escape(s: &mut AtomStructure, oracle: Oracle<'_, '_>, e: &[Atom], input: &Value, set: &SupportedSubset) -> Result<Option<Witness>> {
    set.validate(s)?;
    if set.supported_by(s, e)? {
        return Ok(None);
    }
    let least = set.least_support(s)?;
    let y = least.iter().find(|y| !e.contains(y)).expect("least support escapes e").clone();
    let mut avoid: BTreeSet<Atom> = e.iter().cloned().collect();
    avoid.extend(set.support().iter().cloned());
    avoid.extend(input.atoms());
    let z = atoms_outside(s, &avoid, 1).remove(0);
    let w = probe_move(s, oracle, e, &swap(&[(&y, &z)]), input)?;
    w.map(Some).ok_or(Error::ProbeBound { bound: 1 })
}

/// Outcome of the `Seq(A) -> P(A)` refutation with the counts it relied on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqPowerRefutation {
    /// The support actually used (the declared one, padded to four atoms).
    pub support: Vec<Atom>,
    /// `|Seq(E)|`, the number of probed inputs available.
    pub seq_count: BigUint,
    /// Number of subsets of the atoms supported by `E`.
    pub supported_count: BigUint,
    pub witness: ContradictionWitness<Value, Value>,
}

/// All duplicate-free sequences over `e`, shortest first.
pub(crate) fn injective_sequences(e: &[Atom]) -> Vec<Vec<Atom>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..e.len() {
        let mut next = Vec::new();
        for v in &layer {
            for a in e {
                if !v.contains(a) {
                    let mut w: Vec<Atom> = v.clone();
                    w.push(a.clone());
                    next.push(w);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Refutes a supported injection `Seq(A) -> P(A)`. The support is padded to
/// at least four atoms; all of `Seq(E)` is probed, and since it outnumbers
/// the subsets supported by `E`, some answer either repeats or needs an atom
/// outside `E`.
pub fn refute_seq_to_power_fraenkel(s: &mut AtomStructure, h: Oracle<'_, '_>) -> Result<SeqPowerRefutation> {
    let mut e = declared_support(s, h)?;
    if e.len() < 4 {
        let pad = atoms_outside(s, &e.iter().cloned().collect(), 4 - e.len());
        e.extend(pad);
        e.sort();
    }
    let seqs = injective_sequences(&e);
    let seq_count = BigUint::from(seqs.len());
    let supported_count = count_supported(s, &e)?;
    if seq_count <= supported_count {
        return Err(Error::InvalidInput("support too small for the counting step".into()));
    }
    let mut seen: BTreeMap<SupportedSubset, Value> = BTreeMap::new();
    for v in seqs {
        let input = Value::Hf(Hf::atoms(v));
        let answer = h.query(&input)?;
        let set = as_subset(&answer)?.clone();
        if let Some(witness) = escape(s, h, &e, &input, &set)? {
            return Ok(SeqPowerRefutation {
                support: e,
                seq_count,
                supported_count,
                witness,
            });
        }
        let key = set.descend(s, &e)?.expect("supported by e");
        if let Some(left) = seen.get(&key) {
            return Ok(SeqPowerRefutation {
                support: e,
                seq_count,
                supported_count,
                witness: ContradictionWitness::InjectivityCollapse {
                    left: left.clone(),
                    right: input,
                    answer,
                },
            });
        }
        seen.insert(key, input);
    }
    Err(Error::ProbeBound {
        bound: seq_count.try_into().unwrap_or(u64::MAX),
    })
}

/// Refutes a supported injection `N -> P(A)`: among the first
/// `2^(|E|+1) + 1` values one either repeats or needs an atom outside `E`.
pub fn refute_nat_to_power_fraenkel(s: &mut AtomStructure, f: Oracle<'_, '_>) -> Result<Witness> {
    let e = declared_support(s, f)?;
    let bound = 1u64
        .checked_shl(e.len() as u32 + 1)
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::OutOfBudget(format!("support of {} atoms", e.len())))?;
    let mut seen: BTreeMap<SupportedSubset, u64> = BTreeMap::new();
    for n in 0..bound {
        let input = Value::Nat(n);
        let answer = f.query(&input)?;
        let set = as_subset(&answer)?.clone();
        if let Some(w) = escape(s, f, &e, &input, &set)? {
            return Ok(w);
        }
        let key = set.descend(s, &e)?.expect("supported by e");
        if let Some(&m) = seen.get(&key) {
            return Ok(ContradictionWitness::InjectivityCollapse {
                left: Value::Nat(m),
                right: input,
                answer,
            });
        }
        seen.insert(key, n);
    }
    Err(Error::ProbeBound { bound })
}
