use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::OneType;
use crate::atoms::{Atom, Lifted, PairPresentation};
use crate::error::{Error, Result};

/// Highest pair-model level whose types are enumerated.
pub const DEFAULT_PAIR_LEVEL_BOUND: u32 = 2;

/// Orbit of a pair-model atom under the automorphisms fixing a support.
///
/// Base leaves from the support stay named; other leaves become variables
/// numbered by first occurrence. A node's bit is absolute when its level
/// occurs in the support (that level cannot be flipped), and otherwise
/// relative to the first node of the same level in preorder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairShape {
    Named(u64),
    Var(u32),
    Node {
        level: u32,
        bit: u8,
        absolute: bool,
        left: Box<PairShape>,
        right: Box<PairShape>,
    },
}

impl PairShape {
    pub fn level(&self) -> u32 {
        match self {
            PairShape::Node { level, .. } => *level,
            _ => 0,
        }
    }

    /// The shape of `pi x` over `pi E`, given the shape of `x` over `E`.
    pub fn mapped(&self, pi: &PairPresentation) -> PairShape {
        match self {
            PairShape::Named(a) => match pi.apply(&Atom::Base(*a)) {
                Atom::Base(b) => PairShape::Named(b),
                _ => unreachable!(),
            },
            PairShape::Var(v) => PairShape::Var(*v),
            PairShape::Node {
                level,
                bit,
                absolute,
                left,
                right,
            } => PairShape::Node {
                level: *level,
                bit: if *absolute { bit ^ pi.bit(*level) } else { *bit },
                absolute: *absolute,
                left: Box::new(left.mapped(pi)),
                right: Box::new(right.mapped(pi)),
            },
        }
    }
}

pub(crate) fn support_data(support: &[Atom]) -> (BTreeSet<u64>, BTreeSet<u32>) {
    let mut leaves = BTreeSet::new();
    let mut levels = BTreeSet::new();
    for e in support {
        e.base_leaves(&mut leaves);
        e.node_levels(&mut levels);
    }
    let ids = leaves
        .into_iter()
        .filter_map(|a| if let Atom::Base(i) = a { Some(i) } else { None })
        .collect();
    (ids, levels)
}

struct Ctx<'a> {
    named: &'a BTreeSet<u64>,
    levels: &'a BTreeSet<u32>,
    vars: BTreeMap<u64, u32>,
    first: BTreeMap<u32, u8>,
}

impl Ctx<'_> {
    fn build(&mut self, x: &Atom) -> PairShape {
        match x {
            Atom::Base(a) if self.named.contains(a) => PairShape::Named(*a),
            Atom::Base(a) => {
                let next = self.vars.len() as u32;
                PairShape::Var(*self.vars.entry(*a).or_insert(next))
            }
            Atom::Lift(l) => {
                let absolute = self.levels.contains(&l.level);
                let bit = if absolute {
                    l.bit
                } else {
                    l.bit ^ *self.first.entry(l.level).or_insert(l.bit)
                };
                let left = Box::new(self.build(&l.left));
                let right = Box::new(self.build(&l.right));
                PairShape::Node {
                    level: l.level,
                    bit,
                    absolute,
                    left,
                    right,
                }
            }
            _ => unreachable!("pair-model atom expected"),
        }
    }
}

pub(crate) fn shape_of(x: &Atom, support: &[Atom], level_bound: u32) -> Result<PairShape> {
    if x.level() > level_bound {
        return Err(Error::OutOfBudget(format!(
            "level {} exceeds the pair-model level bound {level_bound}",
            x.level()
        )));
    }
    let (named, levels) = support_data(support);
    let mut ctx = Ctx {
        named: &named,
        levels: &levels,
        vars: BTreeMap::new(),
        first: BTreeMap::new(),
    };
    Ok(ctx.build(x))
}

/// A concrete atom of the given shape, variables taken from base ids
/// `start, start + 1, ...`.
pub(crate) fn instantiate(shape: &PairShape, start: u64) -> Atom {
    match shape {
        PairShape::Named(a) => Atom::Base(*a),
        PairShape::Var(v) => Atom::Base(start + u64::from(*v)),
        PairShape::Node {
            level,
            bit,
            left,
            right,
            ..
        } => Atom::Lift(Box::new(Lifted {
            level: *level,
            left: instantiate(left, start),
            right: instantiate(right, start),
            bit: *bit,
        })),
    }
}

pub(crate) fn fresh_start(support: &[Atom]) -> u64 {
    support_data(support).0.iter().next_back().map_or(0, |m| m + 1)
}

pub(crate) fn enumerate(support: &[Atom], level_bound: u32) -> Result<Vec<OneType>> {
    if let Some(e) = support.iter().find(|e| e.level() > level_bound) {
        return Err(Error::OutOfBudget(format!(
            "support atom {e} exceeds the pair-model level bound {level_bound}"
        )));
    }
    let (named, _) = support_data(support);
    let start = fresh_start(support);
    let mut cumulative: Vec<Atom> = named
        .iter()
        .copied()
        .chain(start..start + (1u64 << level_bound))
        .map(Atom::Base)
        .collect();
    for level in 1..=level_bound {
        let mut next = Vec::with_capacity(2 * cumulative.len() * cumulative.len());
        for x in &cumulative {
            for y in &cumulative {
                for bit in 0..2 {
                    next.push(Atom::lift(level, x.clone(), y.clone(), bit)?);
                }
            }
        }
        cumulative.extend(next);
    }
    let mut shapes = BTreeSet::new();
    for x in &cumulative {
        let sh = shape_of(x, support, level_bound)?;
        shapes.insert((sh.level(), sh));
    }
    Ok(shapes.into_iter().map(|(_, sh)| OneType::Orbit(sh)).collect())
}
