use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::categorical::required_image_type;
use super::{
    diagram, extendable, fresh_realizer, Atom, AtomStructure, AtomicFormula, PairPresentation,
    PartialAutomorphism, StructureKind,
};
use crate::error::{Error, Result};

/// Extends `p` to cover `atoms`, choosing images at random among already
/// materialized atoms of the right type, or a fresh atom. Used for
/// equivariance probes.
pub fn random_extension<R: Rng + ?Sized>(
    s: &mut AtomStructure,
    p: &PartialAutomorphism,
    atoms: &[Atom],
    rng: &mut R,
) -> Result<PartialAutomorphism> {
    if !extendable(s, p)? {
        return Err(Error::InvalidInput("map does not extend to an automorphism".into()));
    }
    s.check_atoms(atoms)?;
    let mut out = p.clone();
    match s.kind() {
        StructureKind::PureSet => {
            for x in atoms {
                if out.get(x).is_some() {
                    continue;
                }
                let used: BTreeSet<&Atom> = out.range().collect();
                let free: Vec<Atom> = s.universe().iter().filter(|a| !used.contains(a)).cloned().collect();
                let y = pick_or_fresh(s, free, rng);
                out.insert(x.clone(), y);
            }
        }
        StructureKind::DenseOrder => {
            for x in atoms {
                if out.get(x).is_some() {
                    continue;
                }
                let y = Atom::Rational(random_dense_image(&out, x, rng));
                s.materialize(&y)?;
                out.insert(x.clone(), y);
            }
        }
        StructureKind::PairModel => {
            let mut pres = PairPresentation::solve(p).expect("extendable");
            let mut leaves = BTreeSet::new();
            let mut levels = BTreeSet::new();
            for x in atoms {
                x.base_leaves(&mut leaves);
                x.node_levels(&mut levels);
            }
            for leaf in leaves {
                let Atom::Base(a) = leaf else { continue };
                if pres.base.contains_key(&a) {
                    continue;
                }
                let used: BTreeSet<u64> = pres.base.values().copied().collect();
                let mut free: Vec<u64> = s
                    .universe()
                    .iter()
                    .filter_map(|x| match x {
                        Atom::Base(i) if !used.contains(i) => Some(*i),
                        _ => None,
                    })
                    .collect();
                let top = s
                    .universe()
                    .iter()
                    .filter_map(|x| match x {
                        Atom::Base(i) => Some(*i),
                        _ => None,
                    })
                    .chain(used.iter().copied())
                    .max()
                    .map_or(0, |m| m + 1);
                free.push(top);
                let y = free[rng.gen_range(0..free.len())];
                pres.base.insert(a, y);
            }
            for level in levels {
                if !pres.bits.contains_key(&level) {
                    pres.set_bit(level, rng.gen_range(0..2));
                }
            }
            for x in atoms {
                let y = pres.apply(x);
                s.materialize(&y)?;
                out.insert(x.clone(), y);
            }
        }
        StructureKind::Categorical => {
            for x in atoms {
                if out.get(x).is_some() {
                    continue;
                }
                let (params, theta) = required_image_type(s, &out, x);
                let want_below: BTreeSet<Atom> = theta
                    .iter()
                    .filter_map(|f| match f {
                        AtomicFormula::Below(e) => Some(e.clone()),
                        _ => None,
                    })
                    .collect();
                let want_rel: BTreeSet<_> = theta
                    .iter()
                    .filter_map(|f| match f {
                        AtomicFormula::Rel(r) => Some(r.clone()),
                        _ => None,
                    })
                    .collect();
                let used: BTreeSet<&Atom> = out.range().collect();
                let candidates: Vec<Atom> = s
                    .universe()
                    .iter()
                    .filter(|y| !used.contains(y))
                    .filter(|y| {
                        let d = diagram(s, y, &params);
                        d.equal.is_none() && d.below == want_below && d.relations == want_rel
                    })
                    .cloned()
                    .collect();
                let k = rng.gen_range(0..=candidates.len());
                let y = match candidates.get(k) {
                    Some(y) => y.clone(),
                    None => fresh_realizer(s, &params, &theta)?,
                };
                out.insert(x.clone(), y);
            }
        }
    }
    Ok(out)
}

fn pick_or_fresh<R: Rng + ?Sized>(s: &mut AtomStructure, free: Vec<Atom>, rng: &mut R) -> Atom {
    let k = rng.gen_range(0..=free.len());
    match free.into_iter().nth(k) {
        Some(a) => a,
        None => s.fresh_atom(),
    }
}

fn random_dense_image<R: Rng + ?Sized>(p: &PartialAutomorphism, x: &Atom, rng: &mut R) -> BigRational {
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
    let frac = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    match (lower, upper) {
        (None, None) => frac(rng.gen_range(-40..40), rng.gen_range(1..4)),
        (Some((_, pl)), None) => pl + frac(rng.gen_range(1..40), rng.gen_range(1..4)),
        (None, Some((_, pu))) => pu - frac(rng.gen_range(1..40), rng.gen_range(1..4)),
        (Some((_, pl)), Some((_, pu))) => pl + (pu - pl) * frac(rng.gen_range(1..64), 64),
    }
}
