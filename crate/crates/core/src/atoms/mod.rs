//! The four homogeneous atom universes and their automorphism groups,
//! presented locally through partial automorphisms and an extension test.
//!
//! * `PureSet`: countably many atoms, every permutation is allowed.
//! * `DenseOrder`: atoms are rationals, the group is all order-preserving
//!   bijections of a dense order without endpoints.
//! * `PairModel`: level-0 base atoms plus lifted atoms `(n+1, <x, y>, bit)`;
//!   a group element is a base permutation plus one bit per level.
//! * `Categorical`: a lazily grown finite piece of the countable homogeneous
//!   structure with a linear order `<` and relations `R_n` of arity `n + 1`
//!   whose tuples never repeat an entry.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod categorical;
mod pair;
mod random;

pub use categorical::{diagram, fresh_realizer, AtomicFormula, Diagram, RelFormula};
pub use pair::PairPresentation;
pub use random::random_extension;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    PureSet,
    DenseOrder,
    PairModel,
    Categorical,
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" | "pure_set" | "fraenkel" => Ok(Self::PureSet),
            "dense" | "dense_order" | "mostowski" => Ok(Self::DenseOrder),
            "pair" | "pair_model" | "vp" => Ok(Self::PairModel),
            "categorical" | "vc" => Ok(Self::Categorical),
            other => Err(Error::InvalidInput(format!("unknown structure kind {other:?}"))),
        }
    }
}

/// An atom. Identity is structural: two atoms are the same atom iff their
/// payloads are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    Pure(u64),
    Rational(#[serde(with = "rational_str")] BigRational),
    /// Level-0 atom of the pair model.
    Base(u64),
    /// Level `n + 1` atom of the pair model.
    Lift(Box<Lifted>),
    Node(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lifted {
    pub level: u32,
    pub left: Atom,
    pub right: Atom,
    pub bit: u8,
}

impl Atom {
    pub fn rational(n: i64) -> Atom {
        Atom::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Atom {
        Atom::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds the pair-model atom `(level, <left, right>, bit)`.
    pub fn lift(level: u32, left: Atom, right: Atom, bit: u8) -> Result<Atom> {
        if level == 0 || bit > 1 {
            return Err(Error::InvalidInput(format!(
                "lifted atom needs level >= 1 and bit in {{0,1}}, got level {level}, bit {bit}"
            )));
        }
        for c in [&left, &right] {
            if c.kind() != StructureKind::PairModel {
                return Err(Error::StructureMismatch {
                    atom: c.clone(),
                    expected: StructureKind::PairModel,
                });
            }
            if c.level() >= level {
                return Err(Error::InvalidInput(format!(
                    "component of level {} inside a level-{level} atom",
                    c.level()
                )));
            }
        }
        Ok(Atom::Lift(Box::new(Lifted {
            level,
            left,
            right,
            bit,
        })))
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            Atom::Pure(_) => StructureKind::PureSet,
            Atom::Rational(_) => StructureKind::DenseOrder,
            Atom::Base(_) | Atom::Lift(_) => StructureKind::PairModel,
            Atom::Node(_) => StructureKind::Categorical,
        }
    }

    /// Pair-model level; every other atom sits at level 0.
    pub fn level(&self) -> u32 {
        match self {
            Atom::Lift(l) => l.level,
            _ => 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Atom::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_lifted(&self) -> Option<&Lifted> {
        match self {
            Atom::Lift(l) => Some(l),
            _ => None,
        }
    }

    /// Adds this atom and every atom it is built from.
    pub fn close_into(&self, out: &mut BTreeSet<Atom>) {
        if out.insert(self.clone()) {
            if let Atom::Lift(l) = self {
                l.left.close_into(out);
                l.right.close_into(out);
            }
        }
    }

    /// Level-0 atoms occurring anywhere inside a pair-model atom.
    pub fn base_leaves(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Atom::Lift(l) => {
                l.left.base_leaves(out);
                l.right.base_leaves(out);
            }
            other => {
                out.insert(other.clone());
            }
        }
    }

    /// Levels of all lifted nodes inside a pair-model atom.
    pub fn node_levels(&self, out: &mut BTreeSet<u32>) {
        if let Atom::Lift(l) = self {
            out.insert(l.level);
            l.left.node_levels(out);
            l.right.node_levels(out);
        }
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Atom::Pure(i) => write!(f, "a{i}"),
            Atom::Rational(q) => write!(f, "{q}"),
            Atom::Base(i) => write!(f, "b{i}"),
            Atom::Lift(l) => write!(f, "({},<{},{}>,{})", l.level, l.left, l.right, l.bit),
            Atom::Node(i) => write!(f, "n{i}"),
        }
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (BigInt::from_str(n.trim()).ok()?, BigInt::from_str(d.trim()).ok()?),
        None => (BigInt::from_str(s.trim()).ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Rationals serialize as `"num/den"` strings.
pub(crate) mod rational_str {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_rational(&raw).ok_or_else(|| D::Error::custom(format!("bad rational {raw:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct Position(#[serde(with = "rational_str")] BigRational);

/// A finite materialized piece of one of the four atom universes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomStructure {
    kind: StructureKind,
    universe: BTreeSet<Atom>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    positions: BTreeMap<u64, Position>,
    /// Categorical `R_n` facts; a tuple of length `n + 1` is an `R_n` fact.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    relations: BTreeSet<Vec<u64>>,
}

impl AtomStructure {
    pub fn new(kind: StructureKind) -> Self {
        Self {
            kind,
            universe: BTreeSet::new(),
            positions: BTreeMap::new(),
            relations: BTreeSet::new(),
        }
    }

    pub fn pure(n: u64) -> Self {
        let mut s = Self::new(StructureKind::PureSet);
        s.universe.extend((0..n).map(Atom::Pure));
        s
    }

    pub fn dense<I: IntoIterator<Item = BigRational>>(points: I) -> Self {
        let mut s = Self::new(StructureKind::DenseOrder);
        s.universe.extend(points.into_iter().map(Atom::Rational));
        s
    }

    pub fn dense_integers(range: std::ops::Range<i64>) -> Self {
        let mut s = Self::new(StructureKind::DenseOrder);
        s.universe.extend(range.map(Atom::rational));
        s
    }

    pub fn pair_model(base: u64) -> Self {
        let mut s = Self::new(StructureKind::PairModel);
        s.universe.extend((0..base).map(Atom::Base));
        s
    }

    pub fn categorical() -> Self {
        Self::new(StructureKind::Categorical)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn universe(&self) -> &BTreeSet<Atom> {
        &self.universe
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.universe.contains(a)
    }

    pub fn relations(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.relations.iter()
    }

    /// Kind check, plus existence for categorical nodes.
    pub fn check_atom(&self, a: &Atom) -> Result<()> {
        if a.kind() != self.kind {
            return Err(Error::StructureMismatch {
                atom: a.clone(),
                expected: self.kind,
            });
        }
        if let Atom::Node(id) = a {
            if !self.positions.contains_key(id) {
                return Err(Error::NotMaterialized(a.clone()));
            }
        }
        Ok(())
    }

    pub fn check_atoms<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> Result<()> {
        atoms.into_iter().try_for_each(|a| self.check_atom(a))
    }

    /// Adds an atom to the universe. Pair-model atoms are added together
    /// with everything they are built from; categorical nodes can only be
    /// created through [`AtomStructure::add_node`] or [`fresh_realizer`].
    pub fn materialize(&mut self, a: &Atom) -> Result<()> {
        self.check_atom(a)?;
        match a {
            Atom::Lift(_) => {
                let mut closure = BTreeSet::new();
                a.close_into(&mut closure);
                self.universe.extend(closure);
            }
            _ => {
                self.universe.insert(a.clone());
            }
        }
        Ok(())
    }

    /// A new atom not yet in the universe, now materialized. For the
    /// categorical structure it sits above every node and has no relations.
    pub fn fresh_atom(&mut self) -> Atom {
        let atom = match self.kind {
            StructureKind::PureSet => {
                let next = self.universe.iter().filter_map(|a| match a {
                    Atom::Pure(i) => Some(i + 1),
                    _ => None,
                });
                Atom::Pure(next.max().unwrap_or(0))
            }
            StructureKind::PairModel => {
                let next = self.universe.iter().filter_map(|a| match a {
                    Atom::Base(i) => Some(i + 1),
                    _ => None,
                });
                Atom::Base(next.max().unwrap_or(0))
            }
            StructureKind::DenseOrder => {
                let top = self.universe.iter().filter_map(Atom::as_rational).max();
                match top {
                    Some(q) => Atom::Rational(q.floor() + BigRational::one()),
                    None => Atom::rational(0),
                }
            }
            StructureKind::Categorical => {
                let top = self.positions.values().map(|p| &p.0).max();
                let pos = match top {
                    Some(q) => q.floor() + BigRational::one(),
                    None => BigRational::zero(),
                };
                return self.add_node(pos).expect("position above every node is free");
            }
        };
        self.universe.insert(atom.clone());
        atom
    }

    /// Adds a categorical node at a position of the order.
    pub fn add_node(&mut self, pos: BigRational) -> Result<Atom> {
        if self.kind != StructureKind::Categorical {
            return Err(Error::WrongStructure {
                expected: StructureKind::Categorical,
                found: self.kind,
            });
        }
        if self.positions.values().any(|p| p.0 == pos) {
            return Err(Error::InvalidInput(format!("position {pos} already taken")));
        }
        let id = self.positions.keys().next_back().map_or(0, |k| k + 1);
        self.positions.insert(id, Position(pos));
        let atom = Atom::Node(id);
        self.universe.insert(atom.clone());
        Ok(atom)
    }

    /// Declares `R_n(tuple)` with `n = tuple.len() - 1`.
    pub fn declare(&mut self, tuple: &[Atom]) -> Result<()> {
        if tuple.is_empty() {
            return Err(Error::InvalidInput("R_n needs at least one argument".into()));
        }
        self.check_atoms(tuple)?;
        let ids = node_ids(tuple)?;
        let distinct: BTreeSet<_> = ids.iter().collect();
        if distinct.len() != ids.len() {
            return Err(Error::UnsatisfiableType(format!(
                "R_{} tuple with repeated entries",
                ids.len() - 1
            )));
        }
        self.relations.insert(ids);
        Ok(())
    }

    pub fn holds(&self, tuple: &[Atom]) -> bool {
        match node_ids(tuple) {
            Ok(ids) => self.relations.contains(&ids),
            Err(_) => false,
        }
    }

    /// Position in the linear order (dense and categorical structures).
    pub fn position<'a>(&'a self, a: &'a Atom) -> Option<&'a BigRational> {
        match a {
            Atom::Rational(q) => Some(q),
            Atom::Node(id) => self.positions.get(id).map(|p| &p.0),
            _ => None,
        }
    }

    /// The structure's order on atoms; falls back to structural order for
    /// the unordered universes.
    pub fn compare(&self, a: &Atom, b: &Atom) -> Ordering {
        match (self.position(a), self.position(b)) {
            (Some(p), Some(q)) => p.cmp(q),
            _ => a.cmp(b),
        }
    }

    pub fn sort_atoms(&self, atoms: &mut Vec<Atom>) {
        atoms.sort_by(|a, b| self.compare(a, b));
        atoms.dedup();
    }

    pub fn sorted(&self, atoms: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
        let mut v: Vec<Atom> = atoms.into_iter().collect();
        self.sort_atoms(&mut v);
        v
    }
}

pub(crate) fn node_ids(tuple: &[Atom]) -> Result<Vec<u64>> {
    tuple
        .iter()
        .map(|a| match a {
            Atom::Node(id) => Ok(*id),
            other => Err(Error::StructureMismatch {
                atom: other.clone(),
                expected: StructureKind::Categorical,
            }),
        })
        .collect()
}

/// A finite injective map between atoms of one structure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(Atom, Atom)>", into = "Vec<(Atom, Atom)>")]
pub struct PartialAutomorphism {
    map: BTreeMap<Atom, Atom>,
}

impl From<Vec<(Atom, Atom)>> for PartialAutomorphism {
    fn from(pairs: Vec<(Atom, Atom)>) -> Self {
        Self {
            map: pairs.into_iter().collect(),
        }
    }
}

impl From<PartialAutomorphism> for Vec<(Atom, Atom)> {
    fn from(p: PartialAutomorphism) -> Self {
        p.map.into_iter().collect()
    }
}

impl FromIterator<(Atom, Atom)> for PartialAutomorphism {
    fn from_iter<I: IntoIterator<Item = (Atom, Atom)>>(iter: I) -> Self {
        Self {
            map: iter.into_iter().collect(),
        }
    }
}

impl PartialAutomorphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity_on<'a, I: IntoIterator<Item = &'a Atom>>(atoms: I) -> Self {
        atoms.into_iter().map(|a| (a.clone(), a.clone())).collect()
    }

    /// Adds `x -> y`; returns false (and changes nothing) if `x` is already
    /// sent elsewhere.
    pub fn insert(&mut self, x: Atom, y: Atom) -> bool {
        match self.map.get(&x) {
            Some(old) => *old == y,
            None => {
                self.map.insert(x, y);
                true
            }
        }
    }

    /// Union of two maps, `None` if they disagree somewhere.
    pub fn merged(&self, other: &PartialAutomorphism) -> Option<PartialAutomorphism> {
        let mut out = self.clone();
        for (x, y) in other.iter() {
            if !out.insert(x.clone(), y.clone()) {
                return None;
            }
        }
        Some(out)
    }

    pub fn get(&self, x: &Atom) -> Option<&Atom> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Atom)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Atom> {
        self.map.keys()
    }

    pub fn range(&self) -> impl Iterator<Item = &Atom> {
        self.map.values()
    }

    pub fn is_injective(&self) -> bool {
        let image: BTreeSet<&Atom> = self.map.values().collect();
        image.len() == self.map.len()
    }

    pub fn fixes<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> bool {
        atoms.into_iter().all(|a| self.map.get(a) == Some(a))
    }

    pub fn restricted<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> Self {
        atoms
            .into_iter()
            .filter_map(|a| self.map.get(a).map(|b| (a.clone(), b.clone())))
            .collect()
    }

    pub fn inverse(&self) -> Self {
        self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
    }

    pub(crate) fn as_map(&self) -> &BTreeMap<Atom, Atom> {
        &self.map
    }
}

/// Whether `p` extends to an automorphism of the (countable, idealized)
/// structure.
pub fn extendable(s: &AtomStructure, p: &PartialAutomorphism) -> Result<bool> {
    for (x, y) in p.iter() {
        s.check_atom(x)?;
        s.check_atom(y)?;
    }
    if !p.is_injective() {
        return Ok(false);
    }
    Ok(match s.kind() {
        StructureKind::PureSet => true,
        StructureKind::DenseOrder => strictly_monotone(s, p),
        StructureKind::Categorical => {
            strictly_monotone(s, p) && categorical::preserves_relations(s, p)
        }
        StructureKind::PairModel => PairPresentation::solve(p).is_some(),
    })
}

fn strictly_monotone(s: &AtomStructure, p: &PartialAutomorphism) -> bool {
    let mut pairs: Vec<(&Atom, &Atom)> = p.iter().collect();
    pairs.sort_by(|a, b| s.compare(a.0, b.0));
    pairs
        .windows(2)
        .all(|w| s.compare(w[0].1, w[1].1) == Ordering::Less)
}

/// Identity on `fixed` together with `constraints`, or `None` when no
/// automorphism fixing `fixed` pointwise satisfies the constraints.
pub fn extend_fixing(
    s: &AtomStructure,
    fixed: &[Atom],
    constraints: &PartialAutomorphism,
) -> Result<Option<PartialAutomorphism>> {
    s.check_atoms(fixed)?;
    let Some(p) = PartialAutomorphism::identity_on(fixed).merged(constraints) else {
        return Ok(None);
    };
    Ok(extendable(s, &p)?.then_some(p))
}

/// Extends an extendable map so that its domain covers `atoms`. Images are
/// materialized; the categorical structure may grow fresh atoms.
pub fn extend_to(
    s: &mut AtomStructure,
    p: &PartialAutomorphism,
    atoms: &[Atom],
) -> Result<PartialAutomorphism> {
    if !extendable(s, p)? {
        return Err(Error::InvalidInput("map does not extend to an automorphism".into()));
    }
    let mut out = p.clone();
    match s.kind() {
        StructureKind::PureSet => {
            for x in atoms {
                s.check_atom(x)?;
                if out.get(x).is_none() {
                    let y = complete_injection(out.as_map(), x);
                    out.insert(x.clone(), y);
                }
            }
        }
        StructureKind::DenseOrder => {
            for x in atoms {
                s.check_atom(x)?;
                if out.get(x).is_none() {
                    let y = Atom::Rational(dense_image(&out, x));
                    s.materialize(&y)?;
                    out.insert(x.clone(), y);
                }
            }
        }
        StructureKind::PairModel => {
            let mut pres = PairPresentation::solve(p).expect("extendable");
            let mut leaves = BTreeSet::new();
            for x in atoms {
                s.check_atom(x)?;
                x.base_leaves(&mut leaves);
            }
            pres.complete();
            for x in atoms {
                let y = pres.apply(x);
                s.materialize(&y)?;
                out.insert(x.clone(), y);
            }
        }
        StructureKind::Categorical => {
            for x in atoms {
                s.check_atom(x)?;
                if out.get(x).is_none() {
                    let (params, theta) = categorical::required_image_type(s, &out, x);
                    let y = fresh_realizer(s, &params, &theta)?;
                    out.insert(x.clone(), y);
                }
            }
        }
    }
    Ok(out)
}

/// Image of `x` under the permutation obtained by closing the partial
/// injection `map` into cycles on its domain and range.
pub(crate) fn complete_injection<T: Ord + Clone>(map: &BTreeMap<T, T>, x: &T) -> T {
    if let Some(y) = map.get(x) {
        return y.clone();
    }
    let inverse: BTreeMap<&T, &T> = map.iter().map(|(a, b)| (b, a)).collect();
    let mut cur = x;
    while let Some(pre) = inverse.get(cur) {
        cur = pre;
    }
    cur.clone()
}

/// Piecewise-linear interpolation between the nearest constrained points.
fn dense_image(p: &PartialAutomorphism, x: &Atom) -> BigRational {
    let q = x.as_rational().expect("dense atom");
    let mut lower: Option<(&BigRational, &BigRational)> = None;
    let mut upper: Option<(&BigRational, &BigRational)> = None;
    for (a, b) in p.iter() {
        let (a, b) = (a.as_rational().unwrap(), b.as_rational().unwrap());
        if a < q && lower.is_none_or(|(l, _)| a > l) {
            lower = Some((a, b));
        }
        if a > q && upper.is_none_or(|(u, _)| a < u) {
            upper = Some((a, b));
        }
    }
    match (lower, upper) {
        (None, None) => q.clone(),
        (Some((l, pl)), None) => pl + (q - l),
        (None, Some((u, pu))) => pu - (u - q),
        (Some((l, pl)), Some((u, pu))) => pl + (q - l) * (pu - pl) / (u - l),
    }
}

#[cfg(test)]
mod tests;
