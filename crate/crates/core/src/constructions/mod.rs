//! Hereditarily finite objects over atoms, the derived domains built from
//! the atoms, and the explicit injections between them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atoms::{Atom, PartialAutomorphism};
use crate::error::{Error, Result};
use crate::symsets::SupportedSubset;

mod maps;

pub use maps::{
    categorical_power_to_seq, categorical_seq_to_power, kuratowski, mostowski_power_to_seq,
    nth_permutation, pairmodel_pair_to_unordered, permutation_rank, seq_to_chain, size_class_map,
    Anchors, PsiSequence, PAIR_LEVEL_BUDGET,
};

/// A hereditarily finite object over atoms. Sets are extensional.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hf {
    Atom(Atom),
    Tuple(Vec<Hf>),
    Set(BTreeSet<Hf>),
}

impl Hf {
    pub fn set<I: IntoIterator<Item = Hf>>(items: I) -> Hf {
        Hf::Set(items.into_iter().collect())
    }

    pub fn atoms<I: IntoIterator<Item = Atom>>(items: I) -> Hf {
        Hf::Tuple(items.into_iter().map(Hf::Atom).collect())
    }

    pub fn atom_set<I: IntoIterator<Item = Atom>>(items: I) -> Hf {
        Hf::Set(items.into_iter().map(Hf::Atom).collect())
    }

    pub fn empty() -> Hf {
        Hf::Set(BTreeSet::new())
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Hf::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// The entries of a tuple of atoms.
    pub fn as_atom_tuple(&self) -> Option<Vec<Atom>> {
        match self {
            Hf::Tuple(v) => v.iter().map(|x| x.as_atom().cloned()).collect(),
            _ => None,
        }
    }

    /// Every atom occurring anywhere inside; this is a support.
    pub fn support(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Hf::Atom(a) => {
                out.insert(a.clone());
            }
            Hf::Tuple(v) => v.iter().for_each(|x| x.collect_atoms(out)),
            Hf::Set(v) => v.iter().for_each(|x| x.collect_atoms(out)),
        }
    }

    /// Image under a map defined on every atom of the object.
    pub fn act(&self, pi: &PartialAutomorphism) -> Result<Hf> {
        Ok(match self {
            Hf::Atom(a) => Hf::Atom(
                pi.get(a)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("{a} outside the map's domain")))?,
            ),
            Hf::Tuple(v) => Hf::Tuple(v.iter().map(|x| x.act(pi)).collect::<Result<_>>()?),
            Hf::Set(v) => Hf::Set(v.iter().map(|x| x.act(pi)).collect::<Result<_>>()?),
        })
    }

    pub fn len(&self) -> usize {
        match self {
            Hf::Atom(_) => 1,
            Hf::Tuple(v) => v.len(),
            Hf::Set(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Hf::Tuple(v) if v.is_empty()) || matches!(self, Hf::Set(v) if v.is_empty())
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hf::Atom(a) => write!(f, "{a}"),
            Hf::Tuple(v) => {
                write!(f, "<")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ">")
            }
            Hf::Set(v) => {
                write!(f, "{{")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Derived domains over the atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainExpr {
    A,
    Fin(Box<DomainExpr>),
    /// Injective finite sequences of atoms.
    Seq,
    /// All finite sequences of atoms.
    SeqStar,
    Pair(Box<DomainExpr>, Box<DomainExpr>),
    UnordPairs(Box<DomainExpr>),
    PowA,
}

/// A value a domain membership test can be asked about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Hf(Hf),
    Subset(SupportedSubset),
}

impl DomainExpr {
    pub fn fin(d: DomainExpr) -> Self {
        DomainExpr::Fin(Box::new(d))
    }

    /// `Fin` applied `n` times to the atoms.
    pub fn fin_n(n: usize) -> Self {
        (0..n).fold(DomainExpr::A, |d, _| DomainExpr::fin(d))
    }

    pub fn member(&self, x: &Element) -> bool {
        match (self, x) {
            (DomainExpr::PowA, Element::Subset(_)) => true,
            (_, Element::Hf(h)) => self.member_hf(h),
            _ => false,
        }
    }

    pub fn member_hf(&self, x: &Hf) -> bool {
        match self {
            DomainExpr::A => matches!(x, Hf::Atom(_)),
            DomainExpr::Fin(d) => matches!(x, Hf::Set(v) if v.iter().all(|y| d.member_hf(y))),
            DomainExpr::Seq => match x.as_atom_tuple() {
                Some(v) => v.iter().collect::<BTreeSet<_>>().len() == v.len(),
                None => false,
            },
            DomainExpr::SeqStar => x.as_atom_tuple().is_some(),
            DomainExpr::Pair(d, e) => {
                matches!(x, Hf::Tuple(v) if v.len() == 2 && d.member_hf(&v[0]) && e.member_hf(&v[1]))
            }
            DomainExpr::UnordPairs(d) => {
                matches!(x, Hf::Set(v) if v.len() == 2 && v.iter().all(|y| d.member_hf(y)))
            }
            DomainExpr::PowA => false,
        }
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainExpr::A => write!(f, "A"),
            DomainExpr::Fin(d) => write!(f, "Fin({d})"),
            DomainExpr::Seq => write!(f, "Seq(A)"),
            DomainExpr::SeqStar => write!(f, "seq(A)"),
            DomainExpr::Pair(d, e) => write!(f, "Pair({d},{e})"),
            DomainExpr::UnordPairs(d) => write!(f, "[{d}]2"),
            DomainExpr::PowA => write!(f, "P(A)"),
        }
    }
}

impl FromStr for DomainExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (d, rest) = parse_domain(&compact)?;
        if !rest.is_empty() {
            return Err(Error::InvalidInput(format!("trailing input {rest:?} in domain")));
        }
        Ok(d)
    }
}

fn parse_domain(s: &str) -> Result<(DomainExpr, &str)> {
    let bad = || Error::InvalidInput(format!("cannot parse domain at {s:?}"));
    for (lit, d) in [
        ("Seq(A)", DomainExpr::Seq),
        ("seq(A)", DomainExpr::SeqStar),
        ("P(A)", DomainExpr::PowA),
    ] {
        if let Some(rest) = s.strip_prefix(lit) {
            return Ok((d, rest));
        }
    }
    if let Some(rest) = s.strip_prefix("Fin(") {
        let (d, rest) = parse_domain(rest)?;
        return Ok((DomainExpr::fin(d), rest.strip_prefix(')').ok_or_else(bad)?));
    }
    if let Some(rest) = s.strip_prefix("Pair(") {
        let (d, rest) = parse_domain(rest)?;
        let (e, rest) = parse_domain(rest.strip_prefix(',').ok_or_else(bad)?)?;
        let rest = rest.strip_prefix(')').ok_or_else(bad)?;
        return Ok((DomainExpr::Pair(Box::new(d), Box::new(e)), rest));
    }
    if let Some(rest) = s.strip_prefix('[') {
        let (d, rest) = parse_domain(rest)?;
        let rest = rest.strip_prefix("]2").ok_or_else(bad)?;
        return Ok((DomainExpr::UnordPairs(Box::new(d)), rest));
    }
    if let Some(rest) = s.strip_prefix('A') {
        return Ok((DomainExpr::A, rest));
    }
    Err(bad())
}

#[cfg(test)]
mod tests;
