//! Named oracles: honest ones an engine should stream from or refute, and
//! cheating ones it should catch.

use std::collections::BTreeMap;

use super::{InjectionOracle, NatPartition, NatSet, Sort, Value};
use crate::atoms::{Atom, AtomStructure};
use crate::constructions::{DomainExpr, Hf};
use crate::error::{Error, Result};
use crate::symsets::SupportedSubset;

pub type ValueOracle = InjectionOracle<'static, Value, Value>;
pub type SurplusOracle = InjectionOracle<'static, (u64, NatSet), (u64, NatSet)>;
pub type PartitionOracle = InjectionOracle<'static, NatPartition, NatSet>;

pub const FIN_TO_SEQ: [&str; 3] = ["sort", "reverse", "constant"];
pub const SEQ_TO_POWER: [&str; 3] = ["constant", "atoms", "escape"];
pub const NAT_TO_POWER: [&str; 2] = ["initial", "constant"];
pub const UNORDERED_TO_ORDERED: [&str; 3] = ["order", "reverse", "constant"];
pub const FIN_TO_ATOM: [&str; 2] = ["fresh", "max"];
pub const SEQSTAR_TO_SEQ: [&str; 2] = ["fresh", "constant"];
pub const SURPLUS: [&str; 2] = ["shift", "drop"];
pub const PARTITION: [&str; 3] = ["fresh", "code", "constant"];

fn unknown(name: &str, known: &[&str]) -> Error {
    Error::InvalidInput(format!("unknown oracle `{name}`; expected one of {}", known.join(", ")))
}

fn members(h: &Hf) -> Vec<Hf> {
    match h {
        Hf::Set(v) => v.iter().cloned().collect(),
        Hf::Tuple(v) => v.clone(),
        Hf::Atom(_) => vec![],
    }
}

/// `Fin(A) -> Seq(A)` when `star` is false, `[A]^2 -> seq(A)` otherwise.
pub fn fin_to_seq(name: &str, support: Vec<Atom>, star: bool) -> Result<ValueOracle> {
    let codomain = if star { DomainExpr::SeqStar } else { DomainExpr::Seq };
    let f: Box<dyn FnMut(&Hf) -> Hf> = match name {
        "sort" => Box::new(|h| Hf::Tuple(members(h))),
        "reverse" => Box::new(|h| Hf::Tuple(members(h).into_iter().rev().collect())),
        "constant" => Box::new(|_| Hf::Tuple(vec![])),
        _ => return Err(unknown(name, &FIN_TO_SEQ)),
    };
    Ok(InjectionOracle::hf(DomainExpr::fin(DomainExpr::A), codomain, support, f))
}

/// `Seq(A) -> P(A)`.
pub fn seq_to_power(name: &str, s: &AtomStructure, support: Vec<Atom>) -> Result<ValueOracle> {
    let base = s.clone();
    let outside: Vec<Atom> = s.universe().iter().filter(|a| !support.contains(a)).take(6).cloned().collect();
    let mut f: Box<dyn FnMut(&Hf) -> SupportedSubset> = match name {
        "constant" => {
            let none = SupportedSubset::nothing(s)?;
            Box::new(move |_| none.clone())
        }
        "atoms" => Box::new(move |h| SupportedSubset::finite(&base, &h.support().into_iter().collect::<Vec<_>>()).unwrap()),
        "escape" => Box::new(move |h| {
            let mut atoms: Vec<Atom> = h.support().into_iter().collect();
            atoms.extend(outside.last().cloned());
            SupportedSubset::finite(&base, &atoms).unwrap()
        }),
        _ => return Err(unknown(name, &SEQ_TO_POWER)),
    };
    Ok(InjectionOracle::new(
        Sort::Domain(DomainExpr::Seq),
        Sort::Domain(DomainExpr::PowA),
        support,
        move |x| Value::Subset(f(x.as_hf().expect("domain checked"))),
    ))
}

/// `N -> P(A)`.
pub fn nat_to_power(name: &str, s: &AtomStructure, support: Vec<Atom>) -> Result<ValueOracle> {
    let base = s.clone();
    let pool: Vec<Atom> = s.universe().iter().cloned().collect();
    let f: Box<dyn Fn(u64) -> SupportedSubset> = match name {
        "initial" => Box::new(move |n| {
            let take = usize::try_from(n).unwrap_or(usize::MAX).min(pool.len());
            SupportedSubset::finite(&base, &pool[..take]).unwrap()
        }),
        "constant" => {
            let all = SupportedSubset::everything(s)?;
            Box::new(move |_| all.clone())
        }
        _ => return Err(unknown(name, &NAT_TO_POWER)),
    };
    Ok(InjectionOracle::new(Sort::Nat, Sort::Domain(DomainExpr::PowA), support, move |x| match x {
        Value::Nat(n) => Value::Subset(f(*n)),
        _ => unreachable!("domain checked"),
    }))
}

/// `[A]^2 -> A x A` in the pair model.
pub fn unordered_to_ordered(name: &str, support: Vec<Atom>) -> Result<ValueOracle> {
    let constant = support.first().cloned();
    let f: Box<dyn FnMut(&Hf) -> Hf> = match name {
        "order" => Box::new(|h| Hf::Tuple(members(h))),
        "reverse" => Box::new(|h| Hf::Tuple(members(h).into_iter().rev().collect())),
        "constant" => {
            let c = constant.unwrap_or(Atom::Base(0));
            Box::new(move |_| Hf::atoms([c.clone(), c.clone()]))
        }
        _ => return Err(unknown(name, &UNORDERED_TO_ORDERED)),
    };
    Ok(InjectionOracle::hf(
        DomainExpr::UnordPairs(Box::new(DomainExpr::A)),
        DomainExpr::Pair(Box::new(DomainExpr::A), Box::new(DomainExpr::A)),
        support,
        f,
    ))
}

/// Numbers inputs in order of first appearance, starting at `start`.
fn numbering<X: Ord + Clone>(start: u64) -> impl FnMut(&X) -> u64 {
    let mut seen: BTreeMap<X, u64> = BTreeMap::new();
    move |x| {
        let next = start + seen.len() as u64;
        *seen.entry(x.clone()).or_insert(next)
    }
}

/// `Fin(A) -> A` in the dense order. `fresh` answers each new set with a
/// new rational; `max` returns the largest member, or 0.
pub fn fin_to_atom(name: &str) -> Result<ValueOracle> {
    let f: Box<dyn FnMut(&Hf) -> Hf> = match name {
        "fresh" => {
            let mut number = numbering::<Hf>(1000);
            Box::new(move |h| Hf::Atom(Atom::rational(number(h) as i64)))
        }
        "max" => Box::new(|h| members(h).into_iter().next_back().unwrap_or(Hf::Atom(Atom::rational(0)))),
        _ => return Err(unknown(name, &FIN_TO_ATOM)),
    };
    Ok(InjectionOracle::hf(DomainExpr::fin(DomainExpr::A), DomainExpr::A, vec![], f))
}

/// `seq(A) -> Seq(A)` in the dense order, probed on constant sequences.
pub fn seqstar_to_seq(name: &str) -> Result<ValueOracle> {
    let f: Box<dyn FnMut(&Hf) -> Hf> = match name {
        "fresh" => Box::new(|h| {
            let n = members(h).len() as i64;
            Hf::atoms((0..n).map(|i| Atom::rational(1000 + n * n + i)))
        }),
        "constant" => Box::new(|_| Hf::atoms([Atom::rational(7)])),
        _ => return Err(unknown(name, &SEQSTAR_TO_SEQ)),
    };
    Ok(InjectionOracle::hf(DomainExpr::SeqStar, DomainExpr::Seq, vec![], f))
}

/// `(n+1) x P(N) -> n x P(N)`. `shift` moves a set up by `n + 1` and marks
/// the tag in the freed low block, which is injective; `drop` forgets the
/// tag.
pub fn surplus(name: &str, n: u64) -> Result<SurplusOracle> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let f: Box<dyn FnMut(&(u64, NatSet)) -> (u64, NatSet)> = match name {
        "shift" => Box::new(move |(l, set)| {
            let moved = set.elems.iter().map(|x| x + n + 1);
            let out = if set.cofinite {
                NatSet::cofinite(moved.chain((0..=n).filter(|i| i != l)))
            } else {
                NatSet::finite(moved.chain([*l]))
            };
            (0, out)
        }),
        "drop" => Box::new(|(_, set)| (0, set.clone())),
        _ => return Err(unknown(name, &SURPLUS)),
    };
    Ok(InjectionOracle::with_check(
        format!("{}xP(N)", n + 1),
        format!("{n}xP(N)"),
        vec![],
        move |(tag, _): &(u64, NatSet)| *tag < n,
        f,
    ))
}

/// `Part(N) -> P(N)`. `fresh` maps each new partition to a new singleton;
/// `code` is [`NatPartition::code`]; `constant` is the empty set.
pub fn partition(name: &str) -> Result<PartitionOracle> {
    let f: Box<dyn FnMut(&NatPartition) -> NatSet> = match name {
        "fresh" => {
            let mut number = numbering::<NatPartition>(1 << 20);
            Box::new(move |p| NatSet::finite([number(p)]))
        }
        "code" => Box::new(NatPartition::code),
        "constant" => Box::new(|_| NatSet::empty()),
        _ => return Err(unknown(name, &PARTITION)),
    };
    Ok(InjectionOracle::with_check("Part(N)", "P(N)", vec![], |_: &NatSet| true, f))
}
