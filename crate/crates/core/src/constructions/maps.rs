use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Hf;
use crate::atoms::{Atom, AtomStructure, PartialAutomorphism, RelFormula, StructureKind};
use crate::error::{Error, Result};
use crate::symsets::{rank_among_least_supported, OneType, SupportedSubset};

/// Highest level the pair-to-unordered-pair map will build.
pub const PAIR_LEVEL_BUDGET: u32 = 64;

fn atom_of(x: &Hf) -> Result<&Atom> {
    x.as_atom()
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not an atom")))
}

/// `(x, y) -> {{x}, {x, y}}`.
pub fn kuratowski(x: &Hf, y: &Hf) -> Result<Hf> {
    let (x, y) = (atom_of(x)?, atom_of(y)?);
    Ok(Hf::set([
        Hf::atom_set([x.clone()]),
        Hf::atom_set([x.clone(), y.clone()]),
    ]))
}

/// `<a0, ..., a_{n-1}> -> {{a0}, {a0, a1}, ..., {a0, ..., a_{n-1}}}`.
pub fn seq_to_chain(seq: &Hf) -> Result<Hf> {
    let v = seq.as_atom_tuple().ok_or(Error::NotASeq)?;
    if v.iter().collect::<BTreeSet<_>>().len() != v.len() {
        return Err(Error::NotASeq);
    }
    Ok(Hf::set((1..=v.len()).map(|i| Hf::atom_set(v[..i].iter().cloned()))))
}

/// All subsets of `pool` whose size lies in `sizes`.
pub fn size_class_map(sizes: &BTreeSet<u64>, pool: &[Atom]) -> Result<Hf> {
    let distinct: BTreeSet<&Atom> = pool.iter().collect();
    if distinct.len() != pool.len() {
        return Err(Error::InvalidInput("pool has repeated atoms".into()));
    }
    if let Some(&top) = sizes.iter().next_back() {
        if top > pool.len() as u64 {
            return Err(Error::InvalidInput(format!(
                "pool of {} atoms is too small for size {top}",
                pool.len()
            )));
        }
    }
    if pool.len() > 20 {
        return Err(Error::OutOfBudget(format!("pool of {} atoms", pool.len())));
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << pool.len() {
        if sizes.contains(&u64::from(mask.count_ones())) {
            let members = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone());
            out.insert(Hf::atom_set(members));
        }
    }
    Ok(Hf::Set(out))
}

/// `<x, y> -> {(n+m+1, <x,y>, 0), (n+m+1, <x,y>, 1)}` where `n`, `m` are the
/// levels of `x` and `y`. Both atoms are materialized.
pub fn pairmodel_pair_to_unordered(s: &mut AtomStructure, x: &Atom, y: &Atom) -> Result<Hf> {
    if s.kind() != StructureKind::PairModel {
        return Err(Error::WrongStructure {
            expected: StructureKind::PairModel,
            found: s.kind(),
        });
    }
    s.check_atom(x)?;
    s.check_atom(y)?;
    let level = x.level() + y.level() + 1;
    if level > PAIR_LEVEL_BUDGET {
        return Err(Error::OutOfBudget(format!("level {level} above {PAIR_LEVEL_BUDGET}")));
    }
    let a0 = Atom::lift(level, x.clone(), y.clone(), 0)?;
    let a1 = Atom::lift(level, x.clone(), y.clone(), 1)?;
    s.materialize(&a0)?;
    s.materialize(&a1)?;
    Ok(Hf::atom_set([a0, a1]))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// The permutation of `items` at position `idx` (0-based) in the
/// lexicographic order induced by the order of `items`.
pub fn nth_permutation<T: Clone>(items: &[T], idx: &BigUint) -> Result<Vec<T>> {
    let n = items.len();
    if *idx >= factorial(n) {
        return Err(Error::InvalidInput(format!("permutation index {idx} out of range for {n} items")));
    }
    let mut pool: Vec<T> = items.to_vec();
    let mut idx = idx.clone();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let block = factorial(k);
        let q = (&idx / &block).to_usize().expect("digit below n");
        idx %= &block;
        out.push(pool.remove(q));
    }
    Ok(out)
}

/// Inverse of [`nth_permutation`].
pub fn permutation_rank<T: PartialEq>(items: &[T], perm: &[T]) -> Option<BigUint> {
    if items.len() != perm.len() {
        return None;
    }
    let mut pool: Vec<&T> = items.iter().collect();
    let mut rank = BigUint::zero();
    for (k, x) in perm.iter().enumerate() {
        let q = pool.iter().position(|y| *y == x)?;
        pool.remove(q);
        rank += factorial(items.len() - 1 - k) * BigUint::from(q);
    }
    Some(rank)
}

/// The twenty fixed atoms `c0 < ... < c19` used by the power-set map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchors {
    atoms: Vec<Atom>,
}

impl Default for Anchors {
    fn default() -> Self {
        Self {
            atoms: (0..20).map(Atom::rational).collect(),
        }
    }
}

impl Anchors {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.iter().any(|a| a.as_rational().is_none()) {
            return Err(Error::InvalidInput("anchors must be rational atoms".into()));
        }
        atoms.sort();
        atoms.dedup();
        if atoms.len() != 20 {
            return Err(Error::InvalidInput("exactly 20 distinct anchors are needed".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

/// The injection of the power set into injective sequences in the dense
/// order. With `k` the 1-based rank of `S` among sets of the same least
/// support `E`: for `|E| >= 11` the `k`-th permutation of `E`; otherwise `E`
/// in increasing order followed by the `(10! - k)`-th permutation of the
/// first ten anchors outside `E`.
pub fn mostowski_power_to_seq(s: &AtomStructure, set: &SupportedSubset, anchors: &Anchors) -> Result<Hf> {
    if s.kind() != StructureKind::DenseOrder {
        return Err(Error::WrongStructure {
            expected: StructureKind::DenseOrder,
            found: s.kind(),
        });
    }
    set.validate(s)?;
    let canon = set.canonical(s)?;
    let supp = canon.support().to_vec();
    let rank = rank_among_least_supported(s, &canon)?;
    if supp.len() >= 11 {
        return Ok(Hf::atoms(nth_permutation(&supp, &rank)?));
    }
    let d: Vec<Atom> = anchors
        .atoms()
        .iter()
        .filter(|c| !supp.contains(c))
        .take(10)
        .cloned()
        .collect();
    let skip = rank + BigUint::from(2u32);
    let total = factorial(10);
    if skip > total {
        return Err(Error::OutOfBudget("rank exceeds 10! - 1".into()));
    }
    let tail = nth_permutation(&d, &(total - skip))?;
    Ok(Hf::atoms(supp.into_iter().chain(tail)))
}

/// `y -> {x : R_n(x, y)}` for an injective sequence `y` of length `n`.
pub fn categorical_seq_to_power(s: &AtomStructure, y: &[Atom]) -> Result<SupportedSubset> {
    if s.kind() != StructureKind::Categorical {
        return Err(Error::WrongStructure {
            expected: StructureKind::Categorical,
            found: s.kind(),
        });
    }
    if y.iter().collect::<BTreeSet<_>>().len() != y.len() {
        return Err(Error::NotASeq);
    }
    s.check_atoms(y)?;
    let target = RelFormula {
        slot: 0,
        params: y.to_vec(),
    };
    SupportedSubset::from_types(s, y, |t| match t {
        OneType::Diagram { relations, .. } => relations.contains(&target),
        _ => false,
    })
}

/// `<e0, ..., e_{n-1}, a, b, ..., b>` with `l` copies of `b`; `l` can be
/// astronomically large, so the tail is kept as a count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PsiSequence {
    pub prefix: Vec<Atom>,
    pub a: Atom,
    pub b: Atom,
    pub tail_len: BigUint,
}

impl PsiSequence {
    pub fn len(&self) -> BigUint {
        BigUint::from(self.prefix.len() + 1) + &self.tail_len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The explicit sequence, when its tail has at most `limit` entries.
    pub fn to_hf(&self, limit: usize) -> Result<Hf> {
        let l = self
            .tail_len
            .to_usize()
            .filter(|l| *l <= limit)
            .ok_or_else(|| Error::OutOfBudget(format!("sequence tail of length {}", self.tail_len)))?;
        let mut v: Vec<Atom> = self.prefix.clone();
        v.push(self.a.clone());
        v.extend(std::iter::repeat_n(self.b.clone(), l));
        Ok(Hf::atoms(v))
    }

    pub fn act(&self, pi: &PartialAutomorphism) -> Result<PsiSequence> {
        let img = |x: &Atom| {
            pi.get(x)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("{x} outside the map's domain")))
        };
        Ok(PsiSequence {
            prefix: self.prefix.iter().map(img).collect::<Result<_>>()?,
            a: img(&self.a)?,
            b: img(&self.b)?,
            tail_len: self.tail_len.clone(),
        })
    }
}

/// `S -> <e0, ..., e_{n-1}, a, b^l>` where `e0 < ... < e_{n-1}` is the least
/// support of `S` and `l` its rank among sets with that least support.
pub fn categorical_power_to_seq(
    s: &AtomStructure,
    set: &SupportedSubset,
    a: &Atom,
    b: &Atom,
) -> Result<PsiSequence> {
    if s.kind() != StructureKind::Categorical {
        return Err(Error::WrongStructure {
            expected: StructureKind::Categorical,
            found: s.kind(),
        });
    }
    if a == b {
        return Err(Error::InvalidInput("the two marker atoms must differ".into()));
    }
    s.check_atom(a)?;
    s.check_atom(b)?;
    set.validate(s)?;
    let canon = set.canonical(s)?;
    let tail_len = rank_among_least_supported(s, &canon)?;
    Ok(PsiSequence {
        prefix: canon.support().to_vec(),
        a: a.clone(),
        b: b.clone(),
        tail_len,
    })
}
