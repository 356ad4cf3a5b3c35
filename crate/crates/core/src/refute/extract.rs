//! Engines that turn a purported injection into a sequence of distinct
//! values, or catch the oracle repeating an answer.

use std::collections::BTreeSet;

use super::{ContradictionWitness, Extraction, InjectionOracle, NatPartition, NatSet, Value};
use crate::atoms::{Atom, AtomStructure, StructureKind};
use crate::constructions::Hf;
use crate::error::{Error, Result};

/// Two recorded inputs with equal answers, compared structurally.
fn collapse_in<X: Clone + PartialEq, Y: Clone + PartialEq>(transcript: &[(X, Y)]) -> Option<ContradictionWitness<X, Y>> {
    for (i, (x, y)) in transcript.iter().enumerate() {
        if let Some((a, _)) = transcript[..i].iter().find(|(a, b)| b == y && a != x) {
            return Some(ContradictionWitness::InjectivityCollapse {
                left: a.clone(),
                right: x.clone(),
                answer: y.clone(),
            });
        }
    }
    None
}

fn atom_answer(v: &Value) -> Result<Atom> {
    v.as_hf()
        .and_then(Hf::as_atom)
        .cloned()
        .ok_or_else(|| Error::OracleAnswer(format!("{v} is not an atom")))
}

/// `a0 = g({})`, `a_{n+1} = g({a0, ..., an})` for an oracle `Fin(A) -> A`
/// in the dense order. Returns the first `t` values, or the collapse if an
/// answer repeats.
pub fn extract_fin_to_atom_mostowski(
    s: &mut AtomStructure,
    g: &mut InjectionOracle<'_, Value, Value>,
    t: usize,
) -> Result<Extraction<Atom, Value, Value>> {
    if s.kind() != StructureKind::DenseOrder {
        return Err(Error::WrongStructure {
            expected: StructureKind::DenseOrder,
            found: s.kind(),
        });
    }
    let mut out: Vec<Atom> = Vec::new();
    while out.len() < t {
        let input = Value::Hf(Hf::atom_set(out.iter().cloned()));
        let answer = g.query(&input)?;
        let a = atom_answer(&answer)?;
        s.materialize(&a)?;
        if let Some(i) = out.iter().position(|b| *b == a) {
            return Ok(Extraction::Collapse(ContradictionWitness::InjectivityCollapse {
                left: Value::Hf(Hf::atom_set(out[..i].iter().cloned())),
                right: input,
                answer,
            }));
        }
        out.push(a);
    }
    Ok(Extraction::Stream(out))
}

/// `|Seq(F)|` for `|F| = f`, saturating.
fn seq_count(f: usize) -> u128 {
    let mut total: u128 = 1;
    let mut term: u128 = 1;
    for k in 0..f {
        term = term.saturating_mul((f - k) as u128);
        total = total.saturating_add(term);
    }
    total
}

/// Probes `g(<a>_n)` for `n = 0, 1, ...` on an oracle `seq(A) -> Seq(A)` and
/// streams atoms in order of first occurrence. While no new atom appears
/// every answer lies in `Seq` of the atoms seen so far, so a repeat must
/// come within that many probes.
pub fn extract_seqstar_to_seq(
    s: &mut AtomStructure,
    g: &mut InjectionOracle<'_, Value, Value>,
    a: &Atom,
    t: usize,
) -> Result<Extraction<Atom, Value, Value>> {
    s.check_atom(a)?;
    let mut out: Vec<Atom> = Vec::new();
    let mut seen: BTreeSet<Atom> = BTreeSet::new();
    let mut answers: Vec<(usize, Value)> = Vec::new();
    let mut stale: u128 = 0;
    let mut n = 0usize;
    while out.len() < t {
        let input = Value::Hf(Hf::atoms(std::iter::repeat_n(a.clone(), n)));
        let answer = g.query(&input)?;
        let seq = answer
            .as_hf()
            .and_then(Hf::as_atom_tuple)
            .ok_or_else(|| Error::OracleAnswer(format!("{answer} is not a sequence")))?;
        if seq.iter().collect::<BTreeSet<_>>().len() != seq.len() {
            return Err(Error::NotASeq);
        }
        if let Some((m, _)) = answers.iter().find(|(_, v)| *v == answer) {
            return Ok(Extraction::Collapse(ContradictionWitness::InjectivityCollapse {
                left: Value::Hf(Hf::atoms(std::iter::repeat_n(a.clone(), *m))),
                right: input,
                answer,
            }));
        }
        let before = out.len();
        for b in seq {
            if out.len() < t && seen.insert(b.clone()) {
                out.push(b);
            }
        }
        stale = if out.len() > before { 0 } else { stale + 1 };
        if stale > seq_count(seen.len()) {
            return Err(Error::ProbeBound {
                bound: u64::try_from(seq_count(seen.len()) + 1).unwrap_or(u64::MAX),
            });
        }
        answers.push((n, answer));
        n += 1;
    }
    Ok(Extraction::Stream(out))
}

type SurplusOracle<'a, 'f> = &'a mut InjectionOracle<'f, (u64, NatSet), (u64, NatSet)>;

/// From an oracle `(n+1) x P(N) -> n x P(N)`, builds distinct sets
/// `s0 = {}, s1, ...`: step `k` walks `(n+1) x {s0..s_{k-1}}` ordered by
/// index then tag and takes the first answer whose set component is new.
/// Since `(n+1) k > n k`, a step without one exposes a collapse.
pub fn extract_from_surplus(n: u64, f: SurplusOracle<'_, '_>, t: usize) -> Result<Extraction<NatSet, (u64, NatSet), (u64, NatSet)>> {
    let mut out = vec![NatSet::empty()];
    while out.len() < t {
        let mut next = None;
        'probe: for i in 0..out.len() {
            for l in 0..=n {
                let (tag, set) = f.query(&(l, out[i].clone()))?;
                if tag >= n {
                    return Err(Error::OracleAnswer(format!("tag {tag} is not below {n}")));
                }
                if !out.contains(&set) {
                    next = Some(set);
                    break 'probe;
                }
            }
        }
        match next {
            Some(set) => out.push(set),
            None => {
                return match collapse_in(f.transcript()) {
                    Some(w) => Ok(Extraction::Collapse(w)),
                    None => Err(Error::ProbeBound {
                        bound: (n + 1) * out.len() as u64,
                    }),
                }
            }
        }
    }
    out.truncate(t);
    Ok(Extraction::Stream(out))
}

/// Next restricted growth string in lexicographic order.
fn next_rgs(v: &mut [usize]) -> bool {
    for i in (1..v.len()).rev() {
        let cap = v[..i].iter().max().copied().unwrap_or(0) + 1;
        if v[i] < cap {
            v[i] += 1;
            v[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

fn is_union_of(blocks: &[(Vec<u8>, NatSet)], x: &NatSet) -> bool {
    blocks.iter().all(|(_, b)| b.is_subset(x) || b.is_disjoint(x))
}

/// From an oracle `Part(N) -> P(N)`, builds distinct sets `X5, X6, ...`.
///
/// Blocks start as `{0}, {1}, {2}, {3}` and the rest of `N`, ordered by seed
/// then by membership pattern (members first). Each step walks the
/// partitions of the `l` blocks in restricted-growth order and takes the
/// first answer that is not a union of blocks, then refines the blocks by
/// it. Only `2^l` unions exist, so `2^l + 1` probes without one expose a
/// collapse; a repeated answer is reported as soon as it is seen.
pub fn extract_from_partition_injection(
    f: &mut InjectionOracle<'_, NatPartition, NatSet>,
    t: usize,
) -> Result<Extraction<NatSet, NatPartition, NatSet>> {
    let mut blocks: Vec<(Vec<u8>, NatSet)> = (0..4u8).map(|i| (vec![i], NatSet::finite([u64::from(i)]))).collect();
    blocks.push((vec![4], NatSet::cofinite(0..4)));
    let mut out: Vec<NatSet> = Vec::new();
    while out.len() < t {
        let l = blocks.len();
        let limit = 1u64
            .checked_shl(l as u32)
            .map_or(u64::MAX, |p| p.saturating_add(1));
        let mut rgs = vec![0usize; l];
        let mut found = None;
        for _ in 0..limit {
            let parts = rgs.iter().max().map_or(0, |m| m + 1);
            let merged = (0..parts).map(|label| {
                blocks
                    .iter()
                    .zip(&rgs)
                    .filter(|(_, r)| **r == label)
                    .fold(NatSet::empty(), |acc, ((_, b), _)| acc.union(b))
            });
            let x = f.query(&NatPartition::new(merged)?)?;
            if let Some(w) = collapse_in(f.transcript()) {
                return Ok(Extraction::Collapse(w));
            }
            if !is_union_of(&blocks, &x) {
                found = Some(x);
                break;
            }
            if !next_rgs(&mut rgs) {
                break;
            }
        }
        let Some(x) = found else {
            return Err(Error::ProbeBound { bound: limit });
        };
        let mut refined = Vec::with_capacity(2 * l);
        for (key, b) in blocks {
            for (bit, part) in [(0u8, b.intersection(&x)), (1, b.difference(&x))] {
                if !part.is_empty() {
                    let mut k = key.clone();
                    k.push(bit);
                    refined.push((k, part));
                }
            }
        }
        refined.sort();
        blocks = refined;
        out.push(x);
    }
    Ok(Extraction::Stream(out))
}
