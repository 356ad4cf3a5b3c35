//! Finitely supported subsets of the atoms: 1-types over a finite support,
//! subsets as selections of types, least supports and support counting.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::atoms::{diagram, Atom, AtomStructure, RelFormula, StructureKind};
use crate::error::{Error, Result};

mod counting;
mod pair;
mod subset;

pub use counting::{
    count_least_supported, count_supported, rank_among_least_supported, type_count,
    unrank_least_supported,
};
pub use pair::{PairShape, DEFAULT_PAIR_LEVEL_BOUND};
pub use subset::{classify_fraenkel, FraenkelClass, SupportedSubset};

/// Type lists longer than this are never materialized.
pub const MAX_LISTED_TYPES: usize = 1 << 16;

/// A complete 1-type over a finite support.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneType {
    Equal(Atom),
    /// Pure set: not in the support.
    Outside,
    /// Dense order: strictly between two consecutive support points.
    Interval {
        lower: Option<Atom>,
        upper: Option<Atom>,
    },
    /// Categorical: an order interval plus the positive `R_n` facts with
    /// support parameters.
    Diagram {
        lower: Option<Atom>,
        upper: Option<Atom>,
        relations: BTreeSet<RelFormula>,
    },
    /// Pair model: the orbit shape of the atom.
    Orbit(PairShape),
}

/// The canonically ordered list of 1-types over a support.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    kind: StructureKind,
    support: Vec<Atom>,
    types: Vec<OneType>,
    index: BTreeMap<OneType, usize>,
    level_bound: u32,
}

impl TypeSpace {
    pub fn new(s: &AtomStructure, support: &[Atom]) -> Result<Self> {
        Self::with_level_bound(s, support, DEFAULT_PAIR_LEVEL_BOUND)
    }

    pub fn with_level_bound(s: &AtomStructure, support: &[Atom], level_bound: u32) -> Result<Self> {
        s.check_atoms(support)?;
        let support = s.sorted(support.iter().cloned());
        let types = match s.kind() {
            StructureKind::PureSet => support
                .iter()
                .cloned()
                .map(OneType::Equal)
                .chain([OneType::Outside])
                .collect(),
            StructureKind::DenseOrder => {
                let mut v = Vec::with_capacity(2 * support.len() + 1);
                for (i, e) in support.iter().enumerate() {
                    v.push(OneType::Interval {
                        lower: i.checked_sub(1).map(|j| support[j].clone()),
                        upper: Some(e.clone()),
                    });
                    v.push(OneType::Equal(e.clone()));
                }
                v.push(OneType::Interval {
                    lower: support.last().cloned(),
                    upper: None,
                });
                v
            }
            StructureKind::Categorical => categorical_types(&support)?,
            StructureKind::PairModel => pair::enumerate(&support, level_bound)?,
        };
        let index = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(Self {
            kind: s.kind(),
            support,
            types,
            index,
            level_bound,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// The support, sorted in the structure's order.
    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    pub fn types(&self) -> &[OneType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, t: &OneType) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn level_bound(&self) -> u32 {
        self.level_bound
    }

    /// Index of the type an atom realizes.
    pub fn locate(&self, s: &AtomStructure, x: &Atom) -> Result<usize> {
        let t = type_of_bounded(s, &self.support, x, self.level_bound)?;
        self.index_of(&t)
            .ok_or_else(|| Error::InvalidInput(format!("type of {x} missing from type list")))
    }

    /// For each type here, the index of its restriction in `coarser`, whose
    /// support must be a subset of this one.
    pub fn fibers(&self, s: &AtomStructure, coarser: &TypeSpace) -> Result<Vec<usize>> {
        self.types
            .iter()
            .map(|t| {
                let r = restrict(s, &self.support, t, coarser.support(), self.level_bound)?;
                coarser
                    .index_of(&r)
                    .ok_or_else(|| Error::InvalidInput("restricted type missing".into()))
            })
            .collect()
    }
}

/// The canonical list of 1-types over `support`.
pub fn types_over(s: &AtomStructure, support: &[Atom]) -> Result<Vec<OneType>> {
    Ok(TypeSpace::new(s, support)?.types)
}

/// The 1-type of `x` over `support`.
pub fn type_of(s: &AtomStructure, support: &[Atom], x: &Atom) -> Result<OneType> {
    type_of_bounded(s, support, x, DEFAULT_PAIR_LEVEL_BOUND)
}

fn type_of_bounded(s: &AtomStructure, support: &[Atom], x: &Atom, level_bound: u32) -> Result<OneType> {
    s.check_atom(x)?;
    s.check_atoms(support)?;
    if s.kind() != StructureKind::PairModel && support.contains(x) {
        return Ok(OneType::Equal(x.clone()));
    }
    Ok(match s.kind() {
        StructureKind::PureSet => OneType::Outside,
        StructureKind::DenseOrder => {
            let (lower, upper) = neighbours(s, support, x);
            OneType::Interval { lower, upper }
        }
        StructureKind::Categorical => {
            let (lower, upper) = neighbours(s, support, x);
            OneType::Diagram {
                lower,
                upper,
                relations: diagram(s, x, support).relations,
            }
        }
        StructureKind::PairModel => OneType::Orbit(pair::shape_of(x, support, level_bound)?),
    })
}

/// Closest support points strictly below and above `x`.
fn neighbours(s: &AtomStructure, support: &[Atom], x: &Atom) -> (Option<Atom>, Option<Atom>) {
    use std::cmp::Ordering::*;
    let lower = support
        .iter()
        .filter(|e| s.compare(e, x) == Less)
        .max_by(|a, b| s.compare(a, b))
        .cloned();
    let upper = support
        .iter()
        .filter(|e| s.compare(e, x) == Greater)
        .min_by(|a, b| s.compare(a, b))
        .cloned();
    (lower, upper)
}

/// The type over `to` (a subset of `from`) implied by a type over `from`.
pub fn restrict(
    s: &AtomStructure,
    from: &[Atom],
    t: &OneType,
    to: &[Atom],
    level_bound: u32,
) -> Result<OneType> {
    use std::cmp::Ordering::*;
    let in_to = |a: &Atom| to.contains(a);
    let shrink = |lower: &Option<Atom>, upper: &Option<Atom>| {
        let lo = lower.as_ref().and_then(|l| {
            to.iter()
                .filter(|f| s.compare(f, l) != Greater)
                .max_by(|a, b| s.compare(a, b))
                .cloned()
        });
        let hi = upper.as_ref().and_then(|u| {
            to.iter()
                .filter(|f| s.compare(f, u) != Less)
                .min_by(|a, b| s.compare(a, b))
                .cloned()
        });
        (lo, hi)
    };
    Ok(match t {
        OneType::Equal(e) if in_to(e) => OneType::Equal(e.clone()),
        OneType::Equal(e) => type_of_bounded(s, to, e, level_bound)?,
        OneType::Outside => OneType::Outside,
        OneType::Interval { lower, upper } => {
            let (lower, upper) = shrink(lower, upper);
            OneType::Interval { lower, upper }
        }
        OneType::Diagram {
            lower,
            upper,
            relations,
        } => {
            let (lower, upper) = shrink(lower, upper);
            OneType::Diagram {
                lower,
                upper,
                relations: relations
                    .iter()
                    .filter(|r| r.params.iter().all(in_to))
                    .cloned()
                    .collect(),
            }
        }
        OneType::Orbit(shape) => {
            let x = pair::instantiate(shape, pair::fresh_start(from));
            OneType::Orbit(pair::shape_of(&x, to, level_bound)?)
        }
    })
}

/// Number of relational formulas `R_{i,k}(x, e)` over an `n`-element
/// support: one per injective parameter sequence and insertion slot.
pub(crate) fn categorical_formula_count(n: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut falling = BigUint::one();
    for k in 0..=n {
        total += &falling * BigUint::from(k + 1);
        falling *= BigUint::from(n - k);
    }
    total
}

/// Relational formulas over a sorted support: parameter sequences by
/// length, then lexicographically by support index, then by slot.
pub fn categorical_formulas(support: &[Atom]) -> Vec<RelFormula> {
    fn seqs(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                seqs(n, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for len in 0..=support.len() {
        let mut all = Vec::new();
        seqs(support.len(), len, &mut Vec::new(), &mut all);
        for idx in all {
            let params: Vec<Atom> = idx.iter().map(|&i| support[i].clone()).collect();
            for slot in 0..=len {
                out.push(RelFormula {
                    slot,
                    params: params.clone(),
                });
            }
        }
    }
    out
}

fn categorical_types(support: &[Atom]) -> Result<Vec<OneType>> {
    let small = counting::categorical_type_count(support.len())
        .filter(|total| *total <= BigUint::from(MAX_LISTED_TYPES));
    if small.is_none() {
        return Err(Error::OutOfBudget(format!(
            "too many categorical types over a {}-element support",
            support.len()
        )));
    }
    let formulas = categorical_formulas(support);
    let mut v: Vec<OneType> = support.iter().cloned().map(OneType::Equal).collect();
    for j in 0..=support.len() {
        let lower = j.checked_sub(1).map(|i| support[i].clone());
        let upper = support.get(j).cloned();
        for mask in 0u64..(1u64 << formulas.len()) {
            let relations = formulas
                .iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, f)| f.clone())
                .collect();
            v.push(OneType::Diagram {
                lower: lower.clone(),
                upper: upper.clone(),
                relations,
            });
        }
    }
    Ok(v)
}

/// An atom realizing `t` over `support`, materialized in `s`.
pub fn representative(s: &mut AtomStructure, support: &[Atom], t: &OneType) -> Result<Atom> {
    use crate::atoms::{fresh_realizer, AtomicFormula};
    use num_rational::BigRational;
    match t {
        OneType::Equal(e) => Ok(e.clone()),
        OneType::Outside => {
            let free = s.universe().iter().find(|a| !support.contains(a)).cloned();
            Ok(free.unwrap_or_else(|| s.fresh_atom()))
        }
        OneType::Interval { lower, upper } => {
            let pos = |a: &Option<Atom>| a.as_ref().and_then(|a| a.as_rational().cloned());
            let q = match (pos(lower), pos(upper)) {
                (Some(l), Some(u)) => (l + u) / BigRational::from_integer(2.into()),
                (Some(l), None) => l + BigRational::one(),
                (None, Some(u)) => u - BigRational::one(),
                (None, None) => BigRational::from_integer(0.into()),
            };
            let a = Atom::Rational(q);
            s.materialize(&a)?;
            Ok(a)
        }
        OneType::Diagram {
            upper, relations, ..
        } => {
            let mut theta: Vec<AtomicFormula> = Vec::new();
            if let Some(u) = upper {
                theta.extend(
                    support
                        .iter()
                        .filter(|e| s.compare(e, u) != std::cmp::Ordering::Less)
                        .cloned()
                        .map(AtomicFormula::Below),
                );
            }
            theta.extend(relations.iter().cloned().map(AtomicFormula::Rel));
            fresh_realizer(s, support, &theta)
        }
        OneType::Orbit(shape) => {
            let start = s
                .universe()
                .iter()
                .chain(support)
                .filter_map(|a| {
                    let mut leaves = BTreeSet::new();
                    a.base_leaves(&mut leaves);
                    leaves
                        .into_iter()
                        .filter_map(|l| if let Atom::Base(i) = l { Some(i) } else { None })
                        .max()
                })
                .max()
                .map_or(0, |m| m + 1);
            let a = pair::instantiate(shape, start);
            s.materialize(&a)?;
            Ok(a)
        }
    }
}
