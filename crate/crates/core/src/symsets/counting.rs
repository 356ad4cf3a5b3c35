use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{categorical_formula_count, SupportedSubset, TypeSpace};
use crate::atoms::{Atom, AtomStructure, StructureKind};
use crate::error::{Error, Result};

/// Exponents above this are not expanded into explicit counts.
const MAX_COUNT_BITS: u64 = 1 << 20;

/// `n` equality types plus every relation pattern in each of the `n + 1`
/// order intervals; `None` when the count is too large to expand.
pub(crate) fn categorical_type_count(n: usize) -> Option<BigUint> {
    let f = categorical_formula_count(n).to_u64().filter(|f| *f <= MAX_COUNT_BITS)?;
    Some(BigUint::from(n) + BigUint::from(n + 1) * (BigUint::one() << f))
}

/// Number of 1-types over the support.
pub fn type_count(s: &AtomStructure, support: &[Atom]) -> Result<BigUint> {
    s.check_atoms(support)?;
    let n = s.sorted(support.iter().cloned()).len();
    Ok(match s.kind() {
        StructureKind::PureSet => BigUint::from(n + 1),
        StructureKind::DenseOrder => BigUint::from(2 * n + 1),
        StructureKind::Categorical => categorical_type_count(n)
            .ok_or_else(|| Error::OutOfBudget(format!("type count over {n} parameters")))?,
        StructureKind::PairModel => BigUint::from(TypeSpace::new(s, support)?.len()),
    })
}

fn pow2(exp: &BigUint) -> Result<BigUint> {
    match exp.to_u64() {
        Some(e) if e <= MAX_COUNT_BITS => Ok(BigUint::one() << e),
        _ => Err(Error::OutOfBudget(format!("2^{exp} is too large to expand"))),
    }
}

/// Number of subsets of the atoms that have `support` as a support.
pub fn count_supported(s: &AtomStructure, support: &[Atom]) -> Result<BigUint> {
    pow2(&type_count(s, support)?)
}

/// Number of subsets whose least support is exactly `support`, by
/// inclusion and exclusion over its subsets.
pub fn count_least_supported(s: &AtomStructure, support: &[Atom]) -> Result<BigUint> {
    if s.kind() == StructureKind::PairModel {
        return Err(Error::InvalidInput("pair-model sets have no least supports".into()));
    }
    let sorted = s.sorted(support.iter().cloned());
    let n = sorted.len();
    let mut total = BigInt::zero();
    let mut binom = BigUint::one();
    for k in 0..=n {
        let term = BigInt::from(&binom * pow2(&type_count(s, &sorted[..k])?)?);
        if (n - k) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    Ok(total.to_biguint().expect("inclusion-exclusion count is non-negative"))
}

/// Bit-vectors over the support that are constant on the fibers of the
/// restriction to a sub-support, tracked along a fixed prefix.
struct FiberState {
    fibers: Vec<usize>,
    assigned: Vec<Option<bool>>,
    free: usize,
    negative: bool,
    consistent: bool,
}

impl FiberState {
    /// Vectors consistent with the prefix so far extended by `v` at `i`.
    fn count_with(&self, i: usize, v: bool) -> BigInt {
        if !self.consistent {
            return BigInt::zero();
        }
        let n = match self.assigned[self.fibers[i]] {
            Some(x) if x == v => BigInt::one() << self.free,
            Some(_) => return BigInt::zero(),
            None => BigInt::one() << (self.free - 1),
        };
        if self.negative {
            -n
        } else {
            n
        }
    }

    fn advance(&mut self, i: usize, v: bool) {
        if !self.consistent {
            return;
        }
        let slot = &mut self.assigned[self.fibers[i]];
        match *slot {
            Some(x) if x != v => self.consistent = false,
            Some(_) => {}
            None => {
                *slot = Some(v);
                self.free -= 1;
            }
        }
    }
}

fn fiber_states(s: &AtomStructure, space: &TypeSpace) -> Result<Vec<FiberState>> {
    if s.kind() == StructureKind::PairModel {
        return Err(Error::InvalidInput("pair-model sets have no least supports".into()));
    }
    let e = space.support();
    let n = e.len();
    if n > 16 {
        return Err(Error::OutOfBudget(format!("{n}-element support")));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let f: Vec<Atom> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| e[i].clone()).collect();
        let coarse = TypeSpace::new(s, &f)?;
        let fibers = space.fibers(s, &coarse)?;
        out.push(FiberState {
            fibers,
            assigned: vec![None; coarse.len()],
            free: coarse.len(),
            negative: (n - f.len()) % 2 == 1,
            consistent: true,
        });
    }
    Ok(out)
}

/// Position of the set among all sets with the same least support, in the
/// order of bit-vectors read with the first type most significant.
pub fn rank_among_least_supported(s: &AtomStructure, set: &SupportedSubset) -> Result<BigUint> {
    let least = set.least_support(s)?;
    if least.as_slice() != set.support() {
        return Err(Error::InvalidInput(
            "rank is taken over the least support; canonicalize first".into(),
        ));
    }
    let space = set.space(s)?;
    let mut states = fiber_states(s, &space)?;
    let mut rank = BigInt::zero();
    for (i, &b) in set.bits().iter().enumerate() {
        if b {
            for st in &states {
                rank += st.count_with(i, false);
            }
        }
        for st in &mut states {
            st.advance(i, b);
        }
    }
    Ok(rank.to_biguint().expect("rank is non-negative"))
}

/// The set with least support `support` at position `k`.
pub fn unrank_least_supported(
    s: &AtomStructure,
    support: &[Atom],
    k: &BigUint,
) -> Result<SupportedSubset> {
    let space = TypeSpace::new(s, support)?;
    let total = count_least_supported(s, support)?;
    if *k >= total {
        return Err(Error::InvalidInput(format!("index {k} out of range 0..{total}")));
    }
    let mut states = fiber_states(s, &space)?;
    let mut k = BigInt::from(k.clone());
    let mut bits = Vec::with_capacity(space.len());
    for i in 0..space.len() {
        let zeros: BigInt = states.iter().map(|st| st.count_with(i, false)).sum();
        let b = k >= zeros;
        if b {
            k -= zeros;
        }
        debug_assert!(!k.is_negative());
        for st in &mut states {
            st.advance(i, b);
        }
        bits.push(b);
    }
    Ok(SupportedSubset::from_space(&space, bits))
}
