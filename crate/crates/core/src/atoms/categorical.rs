use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Atom, AtomStructure, PartialAutomorphism, StructureKind};
use crate::error::{Error, Result};

/// `R_n(x, e)` with `x` inserted at position `slot` of the parameter list,
/// `n = params.len()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelFormula {
    pub slot: usize,
    pub params: Vec<Atom>,
}

impl RelFormula {
    pub fn arity_index(&self) -> usize {
        self.params.len()
    }

    pub fn tuple_with(&self, x: &Atom) -> Vec<Atom> {
        let mut t = self.params.clone();
        t.insert(self.slot.min(t.len()), x.clone());
        t
    }

    fn mapped(&self, p: &PartialAutomorphism) -> RelFormula {
        RelFormula {
            slot: self.slot,
            params: self.params.iter().map(|a| p.get(a).unwrap().clone()).collect(),
        }
    }
}

/// An atomic formula in one free variable `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomicFormula {
    Equals(Atom),
    /// `x < e`
    Below(Atom),
    Rel(RelFormula),
}

impl AtomicFormula {
    fn atoms(&self) -> Vec<&Atom> {
        match self {
            AtomicFormula::Equals(e) | AtomicFormula::Below(e) => vec![e],
            AtomicFormula::Rel(r) => r.params.iter().collect(),
        }
    }

    pub fn holds_of(&self, s: &AtomStructure, x: &Atom) -> bool {
        match self {
            AtomicFormula::Equals(e) => e == x,
            AtomicFormula::Below(e) => s.compare(x, e) == Ordering::Less,
            AtomicFormula::Rel(r) => s.holds(&r.tuple_with(x)),
        }
    }
}

/// The positive atomic diagram of an atom over a parameter set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub equal: Option<Atom>,
    /// Parameters strictly above the atom.
    pub below: BTreeSet<Atom>,
    pub relations: BTreeSet<RelFormula>,
}

pub fn diagram(s: &AtomStructure, x: &Atom, params: &[Atom]) -> Diagram {
    let pset: BTreeSet<&Atom> = params.iter().collect();
    let equal = pset.contains(x).then(|| x.clone());
    let below = params
        .iter()
        .filter(|e| s.compare(x, e) == Ordering::Less)
        .cloned()
        .collect();
    let mut relations = BTreeSet::new();
    if let Atom::Node(xid) = x {
        for t in s.relations() {
            let Some(slot) = t.iter().position(|id| id == xid) else {
                continue;
            };
            let others: Vec<Atom> = t
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != slot)
                .map(|(_, id)| Atom::Node(*id))
                .collect();
            if others.iter().all(|a| pset.contains(a)) {
                relations.insert(RelFormula { slot, params: others });
            }
        }
    }
    Diagram {
        equal,
        below,
        relations,
    }
}

pub(super) fn preserves_relations(s: &AtomStructure, p: &PartialAutomorphism) -> bool {
    let inv = p.inverse();
    let image = |m: &PartialAutomorphism, t: &Vec<u64>| -> Option<Vec<Atom>> {
        t.iter().map(|id| m.get(&Atom::Node(*id)).cloned()).collect()
    };
    s.relations().all(|t| {
        image(p, t).is_none_or(|img| s.holds(&img)) && image(&inv, t).is_none_or(|pre| s.holds(&pre))
    })
}

/// Parameters and formulas the image of `x` must satisfy over `range(p)`.
pub(super) fn required_image_type(
    s: &AtomStructure,
    p: &PartialAutomorphism,
    x: &Atom,
) -> (Vec<Atom>, Vec<AtomicFormula>) {
    let dom: Vec<Atom> = p.domain().cloned().collect();
    let d = diagram(s, x, &dom);
    let mut theta: Vec<AtomicFormula> = d
        .below
        .iter()
        .map(|e| AtomicFormula::Below(p.get(e).unwrap().clone()))
        .collect();
    theta.extend(d.relations.iter().map(|r| AtomicFormula::Rel(r.mapped(p))));
    (p.range().cloned().collect(), theta)
}

/// Realizes the type over `params` whose positive part is `theta`: the
/// order position is read off the `Below` formulas (a parameter not listed
/// lies below the new atom) and only the listed relation facts are added.
/// An `Equals` formula returns that parameter instead of a new atom.
pub fn fresh_realizer(
    s: &mut AtomStructure,
    params: &[Atom],
    theta: &[AtomicFormula],
) -> Result<Atom> {
    if s.kind() != StructureKind::Categorical {
        return Err(Error::WrongStructure {
            expected: StructureKind::Categorical,
            found: s.kind(),
        });
    }
    s.check_atoms(params)?;
    let pset: BTreeSet<&Atom> = params.iter().collect();
    for f in theta {
        if let Some(a) = f.atoms().into_iter().find(|a| !pset.contains(a)) {
            return Err(Error::InvalidInput(format!("{a} is not a parameter")));
        }
    }

    let equals: BTreeSet<&Atom> = theta
        .iter()
        .filter_map(|f| match f {
            AtomicFormula::Equals(e) => Some(e),
            _ => None,
        })
        .collect();
    if equals.len() > 1 {
        return Err(Error::UnsatisfiableType("x equals two distinct parameters".into()));
    }
    if let Some(e) = equals.first() {
        if let Some(f) = theta.iter().find(|f| !f.holds_of(s, e)) {
            return Err(Error::UnsatisfiableType(format!("{e} does not satisfy {f:?}")));
        }
        return Ok((*e).clone());
    }

    let above: BTreeSet<&Atom> = theta
        .iter()
        .filter_map(|f| match f {
            AtomicFormula::Below(e) => Some(e),
            _ => None,
        })
        .collect();
    let lower = params
        .iter()
        .filter(|e| !above.contains(e))
        .filter_map(|e| s.position(e))
        .max()
        .cloned();
    let upper = above.iter().filter_map(|e| s.position(e)).min().cloned();
    if let (Some(l), Some(u)) = (&lower, &upper) {
        if l >= u {
            return Err(Error::UnsatisfiableType("order constraints are inconsistent".into()));
        }
    }

    let mut tuples = Vec::new();
    for f in theta {
        if let AtomicFormula::Rel(r) = f {
            if r.slot > r.params.len() {
                return Err(Error::InvalidInput(format!(
                    "slot {} out of range for R_{}",
                    r.slot,
                    r.params.len()
                )));
            }
            let distinct: BTreeSet<&Atom> = r.params.iter().collect();
            if distinct.len() != r.params.len() {
                return Err(Error::UnsatisfiableType(format!(
                    "R_{} with repeated parameters",
                    r.params.len()
                )));
            }
            tuples.push(r);
        }
    }

    let all_positions: Vec<BigRational> = s
        .universe()
        .iter()
        .filter_map(|a| s.position(a).cloned())
        .collect();
    let next_above = all_positions
        .iter()
        .filter(|q| lower.as_ref().is_none_or(|l| *q > l))
        .min()
        .cloned();
    let two = BigRational::one() + BigRational::one();
    let pos = match (lower, next_above) {
        (Some(l), Some(h)) => (l + h) / two,
        (Some(l), None) => l + BigRational::one(),
        (None, Some(h)) => h - BigRational::one(),
        (None, None) => BigRational::from_integer(0.into()),
    };
    let atom = s.add_node(pos)?;
    for r in tuples {
        s.declare(&r.tuple_with(&atom))?;
    }
    Ok(atom)
}
