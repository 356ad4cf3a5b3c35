//! Refutation of `[A]^2 <= A^2` in the pair model by a Ramsey argument.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{atoms_outside, probe_move, ContradictionWitness, InjectionOracle, Value};
use crate::atoms::{Atom, AtomStructure, PairPresentation, PartialAutomorphism, StructureKind};
use crate::cardtable::ramsey_upper;
use crate::constructions::Hf;
use crate::error::{Error, Result};

type Witness = ContradictionWitness<Value, Value>;

/// Outcome of the Ramsey engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamseyOutcome {
    /// `case` is 1 to 6 following the classification of the monochromatic
    /// triple; 7 means both answer components are invariant under every
    /// map fixing the support, so the answer transfers along the triple.
    Witness {
        case: u8,
        triple: [Atom; 3],
        witness: Witness,
    },
    /// No monochromatic triple among the sampled atoms, and the sample was
    /// smaller than the guarantee threshold.
    BudgetExhausted { sampled: usize, threshold: BigUint },
}

/// Color of one answer component relative to the pair `{x_i, x_j}`, `i < j`.
fn component_class(e: &[Atom], t: &Atom, xi: &Atom, xj: &Atom) -> usize {
    let k = e.len();
    if let Some(h) = e.iter().position(|c| c == t) {
        h
    } else if t == xi {
        k
    } else if t == xj {
        k + 1
    } else if t.level() == 0 {
        k + 2
    } else {
        k + 3
    }
}

fn answer_pair(v: &Value) -> Result<(Atom, Atom)> {
    match v.as_hf().and_then(Hf::as_atom_tuple).as_deref() {
        Some([a, b]) => Ok((a.clone(), b.clone())),
        _ => Err(Error::OracleAnswer(format!("{v} is not an ordered pair of atoms"))),
    }
}

fn pair_input(a: &Atom, b: &Atom) -> Value {
    Value::Hf(Hf::atom_set([a.clone(), b.clone()]))
}

fn swap(a: &Atom, b: &Atom) -> PartialAutomorphism {
    [(a.clone(), b.clone()), (b.clone(), a.clone())].into_iter().collect()
}

/// A map fixing `fixed` (a closed set) that moves `t`, if one exists among
/// moving an outside base leaf or flipping a level no fixed atom uses.
fn mover(s: &mut AtomStructure, fixed: &BTreeSet<Atom>, t: &Atom, avoid: &BTreeSet<Atom>) -> Result<Option<PartialAutomorphism>> {
    let mut leaves = BTreeSet::new();
    t.base_leaves(&mut leaves);
    if let Some(b) = leaves.iter().find(|b| !fixed.contains(*b)) {
        let mut skip = avoid.clone();
        skip.extend(fixed.iter().cloned());
        skip.extend(leaves.iter().cloned());
        let fresh = atoms_outside(s, &skip, 1).remove(0);
        return Ok(Some(swap(b, &fresh)));
    }
    let mut used = BTreeSet::new();
    for c in fixed {
        c.node_levels(&mut used);
    }
    let mut levels = BTreeSet::new();
    t.node_levels(&mut levels);
    if let Some(&level) = levels.iter().find(|l| !used.contains(*l)) {
        let mut pres = PairPresentation::default();
        pres.set_bit(level, 1);
        let image = pres.apply(t);
        s.materialize(&image)?;
        return Ok(Some([(t.clone(), image)].into_iter().collect()));
    }
    Ok(None)
}

/// Refutes a supported injection `[A]^2 -> A x A` in the pair model.
///
/// The support is closed downwards. With `k` its size and `r = k + 4`, the
/// pairs of up to `min(budget, N)` fresh base atoms are colored by the
/// classes of both answer components, `N` being the constructive bound for
/// monochromatic triangles in `r^2` colors. A monochromatic triple then
/// yields either two equal answers or a map fixing the support that does
/// not commute with the oracle.
pub fn refute_unordered_to_ordered_pairmodel(
    s: &mut AtomStructure,
    g: &mut InjectionOracle<'_, Value, Value>,
    budget: usize,
) -> Result<RamseyOutcome> {
    if s.kind() != StructureKind::PairModel {
        return Err(Error::WrongStructure {
            expected: StructureKind::PairModel,
            found: s.kind(),
        });
    }
    s.check_atoms(g.support())?;
    let mut closed = BTreeSet::new();
    for a in g.support() {
        a.close_into(&mut closed);
    }
    for a in &closed {
        s.materialize(a)?;
    }
    let e: Vec<Atom> = closed.iter().cloned().collect();
    let r = e.len() as u64 + 4;
    let threshold = ramsey_upper(r * r);
    let m = threshold.to_usize().map_or(budget, |n| budget.min(n));
    let xs = atoms_outside(s, &closed, m);

    let mut color: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for j in 0..m {
        for i in 0..j {
            let answer = g.query(&pair_input(&xs[i], &xs[j]))?;
            let (t0, t1) = answer_pair(&answer)?;
            s.materialize(&t0)?;
            s.materialize(&t1)?;
            let c = (
                component_class(&e, &t0, &xs[i], &xs[j]),
                component_class(&e, &t1, &xs[i], &xs[j]),
            );
            color.insert((i, j), c);
            for h in 0..i {
                if color[&(h, i)] == c && color[&(h, j)] == c {
                    let triple = [xs[h].clone(), xs[i].clone(), xs[j].clone()];
                    let (case, witness) = analyse(s, g, &e, &triple, c)?;
                    return Ok(RamseyOutcome::Witness { case, triple, witness });
                }
            }
        }
    }
    if BigUint::from(m) >= threshold {
        return Err(Error::ProbeBound {
            bound: (m * m.saturating_sub(1) / 2) as u64,
        });
    }
    Ok(RamseyOutcome::BudgetExhausted { sampled: m, threshold })
}

fn analyse(
    s: &mut AtomStructure,
    g: &mut InjectionOracle<'_, Value, Value>,
    e: &[Atom],
    x: &[Atom; 3],
    (c0, c1): (usize, usize),
) -> Result<(u8, Witness)> {
    let k = e.len();
    let p01 = pair_input(&x[0], &x[1]);
    let p02 = pair_input(&x[0], &x[2]);
    let p12 = pair_input(&x[1], &x[2]);
    let collapse = |g: &mut InjectionOracle<'_, Value, Value>, left: Value, right: Value| -> Result<Witness> {
        let answer = g.query(&left)?;
        if g.query(&right)? != answer {
            return Err(Error::InvalidInput("monochromatic answers differ".into()));
        }
        Ok(ContradictionWitness::InjectivityCollapse { left, right, answer })
    };
    let classes = [c0, c1];
    // (1)-(3): one component in the support, the other in the support or a
    // probed atom
    for l in 0..2 {
        if classes[l] < k {
            let other = classes[1 - l];
            if other < k || other == k {
                return Ok((if other < k { 1 } else { 2 }, collapse(g, p01, p02)?));
            }
            if other == k + 1 {
                return Ok((3, collapse(g, p02, p12)?));
            }
        }
    }
    let (t0, t1) = answer_pair(&g.query(&p01)?)?;
    let comps = [t0, t1];
    let mut fixed: Vec<Atom> = e.to_vec();
    fixed.extend([x[0].clone(), x[1].clone()]);
    let fixed_set: BTreeSet<Atom> = fixed.iter().cloned().collect();
    let mut avoid: BTreeSet<Atom> = x.iter().cloned().collect();
    for t in &comps {
        t.close_into(&mut avoid);
    }
    let broken = |w: Option<Witness>| w.ok_or(Error::InvalidInput("map commutes with the oracle".into()));
    // (5): a component is another base atom
    for l in 0..2 {
        if classes[l] == k + 2 {
            let seed = mover(s, &fixed_set, &comps[l], &avoid)?.expect("base atom outside the fixed set");
            return Ok((5, broken(probe_move(s, g, &fixed, &seed, &p01)?)?));
        }
    }
    // (6): a lifted component outside the support
    for l in 0..2 {
        if classes[l] == k + 3 {
            if let Some(seed) = mover(s, &fixed_set, &comps[l], &avoid)? {
                return Ok((6, broken(probe_move(s, g, &fixed, &seed, &p01)?)?));
            }
        }
    }
    // (4): a component mentions a probed atom; exchange the two
    let mentions = |t: &Atom| {
        let mut leaves = BTreeSet::new();
        t.base_leaves(&mut leaves);
        leaves.contains(&x[0]) || leaves.contains(&x[1])
    };
    if comps.iter().any(mentions) {
        return Ok((4, broken(probe_move(s, g, e, &swap(&x[0], &x[1]), &p01)?)?));
    }
    // both components are fixed by every map fixing the support, so the
    // answer at {x0, x2} is forced to equal the one at {x0, x1}
    let answer = g.query(&p01)?;
    if g.query(&p02)? == answer {
        return Ok((7, ContradictionWitness::InjectivityCollapse {
            left: p01,
            right: p02,
            answer,
        }));
    }
    let mut fix_x0 = e.to_vec();
    fix_x0.push(x[0].clone());
    Ok((7, broken(probe_move(s, g, &fix_x0, &swap(&x[1], &x[2]), &p01)?)?))
}
