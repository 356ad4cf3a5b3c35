//! Finite instances of the power-set and partition arguments.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The classes of `m` under "same membership in every `p_n`".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disjointified {
    /// Classes in increasing `<_g` order.
    pub classes: Vec<BTreeSet<u64>>,
    /// For each class, `g[x](n)`: `false` when the class lies in `p_n`.
    pub signatures: Vec<Vec<bool>>,
}

/// Splits `m` by the membership pattern of each element across `ps`.
/// Patterns are compared lexicographically with "member" before
/// "non-member", which orders the classes. Only the finite case is
/// handled: on a finite set every such order is a well-order.
pub fn disjointify_finite(m: &BTreeSet<u64>, ps: &[BTreeSet<u64>]) -> Result<Disjointified> {
    for (i, p) in ps.iter().enumerate() {
        if !p.is_subset(m) {
            return Err(Error::InvalidInput(format!("set {i} is not a subset of m")));
        }
        if ps[..i].contains(p) {
            return Err(Error::InvalidInput(format!("set {i} repeats an earlier one")));
        }
    }
    let mut by_signature: BTreeMap<Vec<bool>, BTreeSet<u64>> = BTreeMap::new();
    for &x in m {
        let g: Vec<bool> = ps.iter().map(|p| !p.contains(&x)).collect();
        by_signature.entry(g).or_default().insert(x);
    }
    let (signatures, classes) = by_signature.into_iter().unzip();
    Ok(Disjointified { classes, signatures })
}

/// `X -> g^-1[X]` on all subsets of `x`, for `g` a map from `y` onto `x`.
pub fn surjection_to_power_injection(
    y: &BTreeSet<u64>,
    x: &BTreeSet<u64>,
    g: &BTreeMap<u64, u64>,
) -> Result<Vec<(BTreeSet<u64>, BTreeSet<u64>)>> {
    if g.keys().ne(y.iter()) {
        return Err(Error::InvalidInput("map is not defined exactly on y".into()));
    }
    let image: BTreeSet<u64> = g.values().copied().collect();
    if !image.is_subset(x) {
        return Err(Error::InvalidInput("map leaves x".into()));
    }
    if image != *x {
        return Err(Error::InvalidInput("map is not onto x".into()));
    }
    if x.len() > 20 {
        return Err(Error::OutOfBudget(format!("power set of {} points", x.len())));
    }
    let points: Vec<u64> = x.iter().copied().collect();
    let table: Vec<(BTreeSet<u64>, BTreeSet<u64>)> = (0u32..1 << points.len())
        .map(|mask| {
            let sub: BTreeSet<u64> = (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
            let pre = g.iter().filter(|(_, v)| sub.contains(v)).map(|(k, _)| *k).collect();
            (sub, pre)
        })
        .collect();
    let distinct: BTreeSet<&BTreeSet<u64>> = table.iter().map(|(_, pre)| pre).collect();
    if distinct.len() != table.len() {
        return Err(Error::InvalidInput("preimage map is not injective".into()));
    }
    Ok(table)
}

/// Pairs `{i, j}` (as `i < j`) lying in a common block of a partition of `m`.
pub fn partition_to_edges(m: &BTreeSet<u64>, p: &[BTreeSet<u64>]) -> Result<BTreeSet<(u64, u64)>> {
    let mut covered = BTreeSet::new();
    for b in p {
        if b.is_empty() {
            return Err(Error::InvalidInput("partition has an empty block".into()));
        }
        for &x in b {
            if !covered.insert(x) {
                return Err(Error::InvalidInput(format!("{x} lies in two blocks")));
            }
        }
    }
    if covered != *m {
        return Err(Error::InvalidInput("blocks do not cover m exactly".into()));
    }
    let mut edges = BTreeSet::new();
    for b in p {
        for &i in b {
            edges.extend(b.range(i + 1..).map(|&j| (i, j)));
        }
    }
    Ok(edges)
}
