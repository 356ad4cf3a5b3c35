use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{restrict, OneType, TypeSpace};
use crate::atoms::{extend_to, Atom, AtomStructure, PairPresentation, PartialAutomorphism, StructureKind};
use crate::error::{Error, Result};

/// A subset of the atoms given by a finite support and the selection of
/// 1-types over it; `bits[i]` selects the `i`-th type of the canonical list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportedSubset {
    structure: StructureKind,
    support: Vec<Atom>,
    #[serde(with = "bitstring")]
    bits: Vec<bool>,
}

mod bitstring {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&bits.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        String::deserialize(d)?
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(D::Error::custom(format!("bad bit {other:?}"))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FraenkelClass {
    Finite(BTreeSet<Atom>),
    /// Carries the complement.
    Cofinite(BTreeSet<Atom>),
}

impl SupportedSubset {
    pub fn new(s: &AtomStructure, support: &[Atom], bits: Vec<bool>) -> Result<Self> {
        let space = TypeSpace::new(s, support)?;
        if bits.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} bits for {} types",
                bits.len(),
                space.len()
            )));
        }
        Ok(Self {
            structure: s.kind(),
            support: space.support().to_vec(),
            bits,
        })
    }

    pub fn from_types<F: FnMut(&OneType) -> bool>(
        s: &AtomStructure,
        support: &[Atom],
        mut select: F,
    ) -> Result<Self> {
        let space = TypeSpace::new(s, support)?;
        Ok(Self::from_space(&space, space.types().iter().map(&mut select).collect()))
    }

    pub(crate) fn from_space(space: &TypeSpace, bits: Vec<bool>) -> Self {
        Self {
            structure: space.kind(),
            support: space.support().to_vec(),
            bits,
        }
    }

    pub fn everything(s: &AtomStructure) -> Result<Self> {
        Self::from_types(s, &[], |_| true)
    }

    pub fn nothing(s: &AtomStructure) -> Result<Self> {
        Self::from_types(s, &[], |_| false)
    }

    /// A finite set of pure-set or dense-order atoms, supported by itself.
    pub fn finite(s: &AtomStructure, atoms: &[Atom]) -> Result<Self> {
        Self::from_types(s, atoms, |t| matches!(t, OneType::Equal(_)))
    }

    pub fn structure(&self) -> StructureKind {
        self.structure
    }

    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Checks that the subset is well formed for `s` (e.g. after
    /// deserialization).
    pub fn validate(&self, s: &AtomStructure) -> Result<()> {
        if self.structure != s.kind() {
            return Err(Error::WrongStructure {
                expected: s.kind(),
                found: self.structure,
            });
        }
        let space = self.space(s)?;
        if space.support() != self.support.as_slice() {
            return Err(Error::InvalidInput("support is not in canonical order".into()));
        }
        if space.len() != self.bits.len() {
            return Err(Error::InvalidInput(format!(
                "{} bits for {} types",
                self.bits.len(),
                space.len()
            )));
        }
        Ok(())
    }

    pub fn space(&self, s: &AtomStructure) -> Result<TypeSpace> {
        if self.structure != s.kind() {
            return Err(Error::WrongStructure {
                expected: self.structure,
                found: s.kind(),
            });
        }
        TypeSpace::new(s, &self.support)
    }

    pub fn selected_types(&self, s: &AtomStructure) -> Result<Vec<OneType>> {
        let space = self.space(s)?;
        Ok(space
            .types()
            .iter()
            .zip(&self.bits)
            .filter(|(_, b)| **b)
            .map(|(t, _)| t.clone())
            .collect())
    }

    pub fn contains(&self, s: &AtomStructure, x: &Atom) -> Result<bool> {
        let space = self.space(s)?;
        Ok(self.bits[space.locate(s, x)?])
    }

    /// Membership of several atoms, sharing one type list.
    pub fn contains_each(&self, s: &AtomStructure, xs: &[Atom]) -> Result<Vec<bool>> {
        let space = self.space(s)?;
        xs.iter().map(|x| Ok(self.bits[space.locate(s, x)?])).collect()
    }

    /// The materialized atoms of `s` that belong to the set.
    pub fn members(&self, s: &AtomStructure) -> Result<BTreeSet<Atom>> {
        let space = self.space(s)?;
        let mut out = BTreeSet::new();
        for x in s.universe() {
            if self.bits[space.locate(s, x)?] {
                out.insert(x.clone());
            }
        }
        Ok(out)
    }

    /// The same set over a larger support.
    pub fn reencode(&self, s: &AtomStructure, extra: &[Atom]) -> Result<Self> {
        let own = self.space(s)?;
        let all: Vec<Atom> = self.support.iter().chain(extra).cloned().collect();
        let big = TypeSpace::with_level_bound(s, &all, own.level_bound())?;
        let fibers = big.fibers(s, &own)?;
        Ok(Self::from_space(&big, fibers.into_iter().map(|i| self.bits[i]).collect()))
    }

    /// Whether `f` is a support of the denoted set.
    pub fn supported_by(&self, s: &AtomStructure, f: &[Atom]) -> Result<bool> {
        Ok(self.descend(s, f)?.is_some())
    }

    /// The same set presented over the support `f`, if `f` supports it.
    pub fn descend(&self, s: &AtomStructure, f: &[Atom]) -> Result<Option<Self>> {
        let own = self.space(s)?;
        let f_set: BTreeSet<&Atom> = f.iter().collect();
        let extra: Vec<Atom> = f.iter().filter(|a| !self.support.contains(a)).cloned().collect();
        let wide = if extra.is_empty() {
            self.clone()
        } else {
            self.reencode(s, &extra)?
        };
        let wide_space = if extra.is_empty() {
            own
        } else {
            wide.space(s)?
        };
        let target: Vec<Atom> = wide.support.iter().filter(|a| f_set.contains(a)).cloned().collect();
        let coarse = TypeSpace::with_level_bound(s, &target, wide_space.level_bound())?;
        let fibers = wide_space.fibers(s, &coarse)?;
        let mut bits: Vec<Option<bool>> = vec![None; coarse.len()];
        for (i, j) in fibers.into_iter().enumerate() {
            match bits[j] {
                Some(b) if b != wide.bits[i] => return Ok(None),
                _ => bits[j] = Some(wide.bits[i]),
            }
        }
        let bits = bits
            .into_iter()
            .map(|b| b.ok_or_else(|| Error::InvalidInput("type with empty fiber".into())))
            .collect::<Result<Vec<bool>>>()?;
        Ok(Some(Self::from_space(&coarse, bits)))
    }

    /// The least support. In the pair model least supports need not exist;
    /// there this is a minimal support found by greedy removal.
    pub fn least_support(&self, s: &AtomStructure) -> Result<Vec<Atom>> {
        if s.kind() == StructureKind::PairModel {
            let mut cur = self.support.clone();
            for e in self.support.iter() {
                let smaller: Vec<Atom> = cur.iter().filter(|a| *a != e).cloned().collect();
                if self.supported_by(s, &smaller)? {
                    cur = smaller;
                }
            }
            return Ok(cur);
        }
        let mut keep = Vec::new();
        for e in &self.support {
            let without: Vec<Atom> = self.support.iter().filter(|a| *a != e).cloned().collect();
            if !self.supported_by(s, &without)? {
                keep.push(e.clone());
            }
        }
        Ok(keep)
    }

    /// The presentation over the least support.
    pub fn canonical(&self, s: &AtomStructure) -> Result<Self> {
        let least = self.least_support(s)?;
        Ok(self.descend(s, &least)?.expect("least support is a support"))
    }

    /// Extensional equality.
    pub fn same_set(&self, s: &AtomStructure, other: &Self) -> Result<bool> {
        let (a, b) = self.aligned(s, other)?;
        Ok(a.bits == b.bits)
    }

    fn aligned(&self, s: &AtomStructure, other: &Self) -> Result<(Self, Self)> {
        if self.support == other.support {
            return Ok((self.clone(), other.clone()));
        }
        let a = self.reencode(s, &other.support)?;
        let b = other.reencode(s, &self.support)?;
        Ok((a, b))
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
            ..self.clone()
        }
    }

    pub fn union(&self, s: &AtomStructure, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(s, other)?;
        Ok(Self {
            bits: a.bits.iter().zip(&b.bits).map(|(x, y)| *x || *y).collect(),
            ..a
        })
    }

    pub fn intersection(&self, s: &AtomStructure, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(s, other)?;
        Ok(Self {
            bits: a.bits.iter().zip(&b.bits).map(|(x, y)| *x && *y).collect(),
            ..a
        })
    }

    /// The image `pi[S]` under an automorphism given by an extendable map.
    pub fn act(&self, s: &mut AtomStructure, p: &PartialAutomorphism) -> Result<Self> {
        let space = self.space(s)?;
        let q = match s.kind() {
            StructureKind::PairModel => {
                let mut closure = BTreeSet::new();
                for e in &self.support {
                    e.close_into(&mut closure);
                }
                extend_to(s, p, &closure.into_iter().collect::<Vec<_>>())?
            }
            _ => extend_to(s, p, &self.support)?,
        };
        let image: Vec<Atom> = self.support.iter().map(|e| q.get(e).unwrap().clone()).collect();
        let target = TypeSpace::with_level_bound(s, &image, space.level_bound())?;
        let pres = match s.kind() {
            StructureKind::PairModel => Some(PairPresentation::solve(&q).expect("extendable")),
            _ => None,
        };
        let img = |a: &Atom| q.get(a).unwrap().clone();
        let mut bits = vec![false; target.len()];
        for (t, b) in space.types().iter().zip(&self.bits) {
            let moved = match t {
                OneType::Equal(e) => OneType::Equal(img(e)),
                OneType::Outside => OneType::Outside,
                OneType::Interval { lower, upper } => OneType::Interval {
                    lower: lower.as_ref().map(img),
                    upper: upper.as_ref().map(img),
                },
                OneType::Diagram {
                    lower,
                    upper,
                    relations,
                } => OneType::Diagram {
                    lower: lower.as_ref().map(img),
                    upper: upper.as_ref().map(img),
                    relations: relations
                        .iter()
                        .map(|r| crate::atoms::RelFormula {
                            slot: r.slot,
                            params: r.params.iter().map(img).collect(),
                        })
                        .collect(),
                },
                OneType::Orbit(shape) => OneType::Orbit(shape.mapped(pres.as_ref().unwrap())),
            };
            let j = target
                .index_of(&moved)
                .ok_or_else(|| Error::InvalidInput("image type missing".into()))?;
            bits[j] = *b;
        }
        Ok(Self::from_space(&target, bits))
    }

    /// The type over a subset `f` of the support that a selected type
    /// restricts to (helper for callers reasoning about fibers).
    pub fn restrict_type(&self, s: &AtomStructure, t: &OneType, f: &[Atom]) -> Result<OneType> {
        let space = self.space(s)?;
        restrict(s, &self.support, t, f, space.level_bound())
    }
}

/// Lemma-style dichotomy for the pure-set structure: finite inside the
/// support, or cofinite with complement inside the support.
pub fn classify_fraenkel(s: &AtomStructure, set: &SupportedSubset) -> Result<FraenkelClass> {
    if set.structure != StructureKind::PureSet || s.kind() != StructureKind::PureSet {
        return Err(Error::WrongStructure {
            expected: StructureKind::PureSet,
            found: set.structure,
        });
    }
    let space = set.space(s)?;
    let outside = set.bits[space.index_of(&OneType::Outside).unwrap()];
    let equal_with = |want: bool| -> BTreeSet<Atom> {
        space
            .types()
            .iter()
            .zip(&set.bits)
            .filter_map(|(t, b)| match t {
                OneType::Equal(e) if *b == want => Some(e.clone()),
                _ => None,
            })
            .collect()
    };
    Ok(if outside {
        FraenkelClass::Cofinite(equal_with(false))
    } else {
        FraenkelClass::Finite(equal_with(true))
    })
}
