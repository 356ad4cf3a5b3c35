use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::OracleValue;
use crate::error::{Error, Result};

/// A finite or cofinite set of naturals. `elems` lists the members of a
/// finite set and the non-members of a cofinite one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NatSet {
    pub cofinite: bool,
    pub elems: BTreeSet<u64>,
}

impl NatSet {
    pub fn finite<I: IntoIterator<Item = u64>>(items: I) -> Self {
        Self {
            cofinite: false,
            elems: items.into_iter().collect(),
        }
    }

    /// Everything except `items`.
    pub fn cofinite<I: IntoIterator<Item = u64>>(items: I) -> Self {
        Self {
            cofinite: true,
            elems: items.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    pub fn all() -> Self {
        Self::cofinite([])
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elems.contains(&n) != self.cofinite
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.elems.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self {
            cofinite: !self.cofinite,
            elems: self.elems.clone(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        match (self.cofinite, other.cofinite) {
            (false, false) => Self::finite(self.elems.intersection(&other.elems).copied()),
            (false, true) => Self::finite(self.elems.difference(&other.elems).copied()),
            (true, false) => Self::finite(other.elems.difference(&self.elems).copied()),
            (true, true) => Self::cofinite(self.elems.union(&other.elems).copied()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.complement().intersection(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.elems.iter().map(u64::to_string).collect();
        if self.cofinite {
            write!(f, "N\\{{{}}}", body.join(","))
        } else {
            write!(f, "{{{}}}", body.join(","))
        }
    }
}

impl OracleValue for NatSet {}

impl OracleValue for (u64, NatSet) {}

/// A partition of the naturals into finitely many finite or cofinite
/// blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NatPartition {
    blocks: BTreeSet<NatSet>,
}

impl NatPartition {
    pub fn new<I: IntoIterator<Item = NatSet>>(blocks: I) -> Result<Self> {
        let blocks: Vec<NatSet> = blocks.into_iter().collect();
        let mut covered = NatSet::empty();
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidInput("partition has an empty block".into()));
            }
            if blocks[..i].iter().any(|c| !c.is_disjoint(b)) {
                return Err(Error::InvalidInput("partition blocks overlap".into()));
            }
            covered = covered.union(b);
        }
        if covered != NatSet::all() {
            return Err(Error::InvalidInput("partition blocks do not cover N".into()));
        }
        Ok(Self {
            blocks: blocks.into_iter().collect(),
        })
    }

    pub fn blocks(&self) -> &BTreeSet<NatSet> {
        &self.blocks
    }

    /// The finite blocks; the remaining cofinite block is determined by them.
    pub fn finite_blocks(&self) -> impl Iterator<Item = &NatSet> {
        self.blocks.iter().filter(|b| !b.cofinite)
    }

    /// An injective code as a finite set. With `p_0 < p_1 < ...` the points
    /// of the finite blocks and `r_i` the rank of the block of `p_i` among
    /// the finite blocks ordered by least element (so `r_i <= i`), the code
    /// is `{2 p_i} ∪ {2 (i(i+1)/2 + r_i) + 1}`. Linear in the number of
    /// points, with values quadratic in it.
    pub fn code(&self) -> NatSet {
        let mut finite: Vec<&NatSet> = self.finite_blocks().collect();
        finite.sort_by_key(|b| b.elems.first().copied());
        let mut points: Vec<(u64, u64)> = finite
            .iter()
            .enumerate()
            .flat_map(|(r, b)| b.elems.iter().map(move |&x| (x, r as u64)))
            .collect();
        points.sort();
        let mut out = BTreeSet::new();
        for (i, (x, r)) in points.into_iter().enumerate() {
            let i = i as u64;
            out.insert(2 * x);
            out.insert(2 * (i * (i + 1) / 2 + r) + 1);
        }
        NatSet::finite(out)
    }
}

impl OracleValue for NatPartition {}
