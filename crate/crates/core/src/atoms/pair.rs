use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{complete_injection, Atom, Lifted, PartialAutomorphism};

/// A pair-model automorphism: a permutation of the base atoms plus one
/// flip bit per level. It acts by
/// `(n, <x, y>, e) -> (n, <pi x, pi y>, e xor bits[n])`.
///
/// `base` may be a partial injection; it is closed into a permutation on
/// demand by following inverse chains.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPresentation {
    pub base: BTreeMap<u64, u64>,
    pub bits: BTreeMap<u32, u8>,
}

impl PairPresentation {
    /// The constraints `p` imposes on a presentation, or `None` when they
    /// are inconsistent (so `p` does not extend).
    pub fn solve(p: &PartialAutomorphism) -> Option<Self> {
        let mut pres = Self::default();
        for (x, y) in p.iter() {
            if !pres.unify(x, y) {
                return None;
            }
        }
        let image: BTreeSet<&u64> = pres.base.values().collect();
        (image.len() == pres.base.len()).then_some(pres)
    }

    fn unify(&mut self, x: &Atom, y: &Atom) -> bool {
        match (x, y) {
            (Atom::Base(a), Atom::Base(b)) => match self.base.get(a) {
                Some(c) => c == b,
                None => {
                    self.base.insert(*a, *b);
                    true
                }
            },
            (Atom::Lift(l), Atom::Lift(m)) => {
                l.level == m.level
                    && self.set_bit(l.level, l.bit ^ m.bit)
                    && self.unify(&l.left, &m.left)
                    && self.unify(&l.right, &m.right)
            }
            _ => false,
        }
    }

    /// Records the flip bit of a level; false if it conflicts.
    pub fn set_bit(&mut self, level: u32, bit: u8) -> bool {
        match self.bits.get(&level) {
            Some(b) => *b == bit,
            None => {
                self.bits.insert(level, bit);
                true
            }
        }
    }

    pub fn bit(&self, level: u32) -> u8 {
        self.bits.get(&level).copied().unwrap_or(0)
    }

    /// Closes `base` into a permutation of its domain and range.
    pub fn complete(&mut self) {
        let open: Vec<u64> = self
            .base
            .values()
            .filter(|v| !self.base.contains_key(v))
            .copied()
            .collect();
        for r in open {
            let img = complete_injection(&self.base, &r);
            self.base.insert(r, img);
        }
    }

    pub fn apply(&self, x: &Atom) -> Atom {
        match x {
            Atom::Base(a) => Atom::Base(complete_injection(&self.base, a)),
            Atom::Lift(l) => Atom::Lift(Box::new(Lifted {
                level: l.level,
                left: self.apply(&l.left),
                right: self.apply(&l.right),
                bit: l.bit ^ self.bit(l.level),
            })),
            other => other.clone(),
        }
    }

    pub fn to_partial<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> PartialAutomorphism {
        atoms.into_iter().map(|a| (a.clone(), self.apply(a))).collect()
    }
}
