//! The `verify` suites.

use std::collections::BTreeSet;

use clap::ValueEnum;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cardlab_core::atoms::{random_extension, Atom, AtomStructure, PartialAutomorphism};
use cardlab_core::cardtable::{
    certify_two_color_triangles, check_forbidden, check_summary_table, factorial_bounds, forbidden_pattern, ramsey_upper,
};
use cardlab_core::constructions::{
    categorical_seq_to_power, kuratowski, mostowski_power_to_seq, pairmodel_pair_to_unordered, seq_to_chain, Anchors, Hf,
};
use cardlab_core::refute::{builtin, refute_seq_to_power_fraenkel};
use cardlab_core::symsets::{classify_fraenkel, count_supported, types_over, FraenkelClass, SupportedSubset};

use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    MostowskiCounting,
    FraenkelDichotomy,
    Equivariance,
    SeqVsPower,
    Arithmetic,
    Table,
    All,
}

pub struct SuiteConfig {
    pub max_atoms: usize,
    pub max_support: usize,
    pub probes: usize,
    pub seed: u64,
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    let suites = match suite {
        Suite::All => vec![
            Suite::MostowskiCounting,
            Suite::FraenkelDichotomy,
            Suite::Equivariance,
            Suite::SeqVsPower,
            Suite::Arithmetic,
            Suite::Table,
        ],
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in suites {
        match s {
            Suite::MostowskiCounting => out.extend(mostowski_counting(cfg)),
            Suite::FraenkelDichotomy => out.extend(fraenkel_dichotomy(cfg)),
            Suite::Equivariance => out.extend(equivariance(cfg)),
            Suite::SeqVsPower => out.extend(seq_vs_power()),
            Suite::Arithmetic => out.extend(arithmetic()),
            Suite::Table => out.extend(table()),
            Suite::All => unreachable!(),
        }
    }
    out
}

fn mostowski_counting(cfg: &SuiteConfig) -> Vec<Check> {
    (0..=cfg.max_support)
        .map(|n| {
            let id = format!("mostowski-counting/n={n}");
            let s = AtomStructure::dense_integers(0..n as i64);
            let e: Vec<Atom> = (0..n as i64).map(Atom::rational).collect();
            match count_supported(&s, &e) {
                Ok(got) => {
                    let want = BigUint::from(2u32).pow(2 * n as u32 + 1);
                    Check::new(id, got == want, format!("{got} sets supported by {n} points, expected {want}"))
                        .with_data(json!({ "n": n, "count": got.to_string(), "expected": want.to_string() }))
                }
                Err(e) => Check::error(id, e),
            }
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Masks of `{0..n}` fixed by every permutation fixing the first `k` points.
fn invariant_masks(n: usize, k: usize) -> BTreeSet<u32> {
    let mut alive = vec![true; 1 << n];
    for perm in permutations(&(k..n).collect::<Vec<_>>()) {
        for (mask, ok) in alive.iter_mut().enumerate().filter(|(_, ok)| **ok) {
            let moved = (0..n)
                .filter(|&x| mask >> x & 1 == 1)
                .fold(0usize, |m, x| m | 1 << if x < k { x } else { perm[x - k] });
            *ok = moved == mask;
        }
    }
    (0..1u32 << n).filter(|&m| alive[m as usize]).collect()
}

fn dichotomy_at(n: usize, k: usize) -> cardlab_core::Result<(bool, String)> {
    let s = AtomStructure::pure(n as u64);
    let pool: Vec<Atom> = (0..n as u64).map(Atom::Pure).collect();
    let e = &pool[..k];
    let full = (1u32 << n) - 1;
    let brute = invariant_masks(n, k);
    let shaped = brute
        .iter()
        .all(|&m| m >> k == 0 || (full & !m) >> k == 0);
    let types = types_over(&s, e)?.len();
    let mut library = BTreeSet::new();
    let mut classified = true;
    for code in 0u32..1 << types {
        let set = SupportedSubset::new(&s, e, (0..types).map(|i| code >> i & 1 == 1).collect())?;
        let mask = set
            .contains_each(&s, &pool)?
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| m | u32::from(b) << i);
        let of = |atoms: &BTreeSet<Atom>| atoms.iter().fold(0u32, |m, a| m | 1 << pool.iter().position(|p| p == a).unwrap_or(31));
        classified &= match classify_fraenkel(&s, &set)? {
            FraenkelClass::Finite(atoms) => of(&atoms) == mask,
            FraenkelClass::Cofinite(missing) => full & !of(&missing) == mask,
        };
        library.insert(mask);
    }
    let count = count_supported(&s, e)?;
    let ok = shaped && classified && library == brute && count == BigUint::from(1u32 << (k + 1)) && brute.len() == 1 << (k + 1);
    Ok((ok, format!("{} invariant subsets, count {count}", brute.len())))
}

fn fraenkel_dichotomy(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=cfg.max_atoms.min(8) {
        for k in 0..=cfg.max_support.min(3).min(n - 1) {
            let id = format!("fraenkel-dichotomy/pool={n}/support={k}");
            out.push(match dichotomy_at(n, k) {
                Ok((ok, detail)) => Check::new(id, ok, detail),
                Err(e) => Check::error(id, e),
            });
        }
    }
    out
}

/// Seeded probes `pi` for each explicit map, counting those with
/// `f(pi x) != pi f(x)`.
fn equivariance(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut record = |name: &str, r: cardlab_core::Result<usize>| {
        let id = format!("equivariance/{name}");
        out.push(match r {
            Ok(0) => Check::new(id, true, format!("{} probes commute", cfg.probes)),
            Ok(bad) => Check::new(id, false, format!("{bad} of {} probes do not commute", cfg.probes)),
            Err(e) => Check::error(id, e),
        });
    };

    let pool: Vec<Atom> = (0..4).map(Atom::Pure).collect();
    let r = (|| {
        let mut s = AtomStructure::pure(4);
        let mut bad = 0;
        for _ in 0..cfg.probes {
            let x = Hf::Atom(pool.choose(&mut rng).unwrap().clone());
            let y = Hf::Atom(pool.choose(&mut rng).unwrap().clone());
            let pi = random_extension(&mut s, &PartialAutomorphism::new(), &pool, &mut rng)?;
            bad += usize::from(kuratowski(&x.act(&pi)?, &y.act(&pi)?)? != kuratowski(&x, &y)?.act(&pi)?);
        }
        Ok(bad)
    })();
    record("kuratowski", r);

    let r = (|| {
        let mut s = AtomStructure::pure(4);
        let mut bad = 0;
        for _ in 0..cfg.probes {
            let mut v = pool.clone();
            v.shuffle(&mut rng);
            v.truncate(rand::Rng::gen_range(&mut rng, 0..=3));
            let v = Hf::atoms(v);
            let pi = random_extension(&mut s, &PartialAutomorphism::new(), &pool, &mut rng)?;
            bad += usize::from(seq_to_chain(&v.act(&pi)?)? != seq_to_chain(&v)?.act(&pi)?);
        }
        Ok(bad)
    })();
    record("seq-to-chain", r);

    let r = (|| {
        let mut s = AtomStructure::pair_model(4);
        let base: Vec<Atom> = (0..4).map(Atom::Base).collect();
        let mut bad = 0;
        for _ in 0..cfg.probes {
            let x = base.choose(&mut rng).unwrap().clone();
            let y = base.choose(&mut rng).unwrap().clone();
            let image = pairmodel_pair_to_unordered(&mut s, &x, &y)?;
            let mut atoms = vec![x.clone(), y.clone()];
            atoms.extend(image.support());
            let pi = random_extension(&mut s, &PartialAutomorphism::new(), &atoms, &mut rng)?;
            let moved = pairmodel_pair_to_unordered(&mut s, pi.get(&x).unwrap(), pi.get(&y).unwrap())?;
            bad += usize::from(moved != image.act(&pi)?);
        }
        Ok(bad)
    })();
    record("pair-to-unordered", r);

    let r = (|| {
        let mut s = AtomStructure::dense_integers(-6..30);
        let anchors = Anchors::default();
        let points: Vec<Atom> = [-2, -1, 0, 5, 25].into_iter().map(Atom::rational).collect();
        let mut bad = 0;
        for _ in 0..cfg.probes {
            let k = rand::Rng::gen_range(&mut rng, 0..=2);
            let mut e: Vec<Atom> = points.choose_multiple(&mut rng, k).cloned().collect();
            e.sort();
            let types = types_over(&s, &e)?.len();
            let bits = (0..types).map(|_| rand::Rng::gen(&mut rng)).collect();
            let set = SupportedSubset::new(&s, &e, bits)?;
            let pi = random_extension(&mut s, &PartialAutomorphism::identity_on(anchors.atoms()), &e, &mut rng)?;
            let moved = set.act(&mut s, &pi)?;
            bad += usize::from(mostowski_power_to_seq(&s, &moved, &anchors)? != mostowski_power_to_seq(&s, &set, &anchors)?.act(&pi)?);
        }
        Ok(bad)
    })();
    record("mostowski-power-to-seq", r);

    let r = (|| {
        let mut s = AtomStructure::categorical();
        let atoms: Vec<Atom> = (0..3).map(|_| s.fresh_atom()).collect();
        let mut bad = 0;
        for _ in 0..cfg.probes {
            let k = rand::Rng::gen_range(&mut rng, 0..=2);
            let y: Vec<Atom> = atoms.choose_multiple(&mut rng, k).cloned().collect();
            let image = categorical_seq_to_power(&s, &y)?;
            let pi = random_extension(&mut s, &PartialAutomorphism::new(), &y, &mut rng)?;
            let moved: Vec<Atom> = y.iter().map(|a| pi.get(a).unwrap().clone()).collect();
            let lhs = categorical_seq_to_power(&s, &moved)?;
            let rhs = image.act(&mut s, &pi)?;
            bad += usize::from(!lhs.same_set(&s, &rhs)?);
        }
        Ok(bad)
    })();
    record("categorical-seq-to-power", r);
    out
}

fn seq_vs_power() -> Vec<Check> {
    builtin::SEQ_TO_POWER
        .iter()
        .map(|name| {
            let id = format!("seq-vs-power/{name}");
            let run = || -> cardlab_core::Result<Check> {
                let mut s = AtomStructure::pure(6);
                let mut h = builtin::seq_to_power(name, &s, vec![])?;
                let out = refute_seq_to_power_fraenkel(&mut s, &mut h)?;
                let verified = h.certificate(&s, out.witness).verify().is_ok();
                let ok = verified && out.seq_count > out.supported_count;
                Ok(Check::new(
                    id.clone(),
                    ok,
                    format!("|Seq(E)| = {} > {} supported subsets, witness verified: {verified}", out.seq_count, out.supported_count),
                ))
            };
            run().unwrap_or_else(|e| Check::error(id, e))
        })
        .collect()
}

fn arithmetic() -> Vec<Check> {
    let first = |pick: fn((bool, bool)) -> bool| (0..=30).find(|&n| pick(factorial_bounds(n)));
    let (a, b) = (first(|p| p.0), first(|p| p.1));
    let cert = certify_two_color_triangles();
    vec![
        Check::new(
            "arithmetic/factorial-thresholds",
            a == Some(10) && b == Some(10),
            format!("first n with n! >= 2^(2n+1): {a:?}; with n! > 2^(2n+1) + 2: {b:?}"),
        ),
        Check::new(
            "arithmetic/ramsey",
            ramsey_upper(2) == BigUint::from(6u32) && cert.k5_coloring.is_some() && cert.k6_forced,
            format!("ramsey_upper(2) = {}, K5 avoids, K6 forces a monochromatic triangle", ramsey_upper(2)),
        )
        .with_data(&cert),
    ]
}

fn table() -> Vec<Check> {
    let report = check_summary_table();
    let failures = report.failures();
    let mut out = vec![Check::new(
        "table/summary",
        report.ok,
        if report.ok {
            format!("{} cells and {} chains agree with the model closures", report.cells.len(), report.chains.len())
        } else {
            failures.join("; ")
        },
    )];
    let forbidden = check_forbidden(&forbidden_pattern());
    out.push(
        Check::new(
            "table/forbidden-pattern",
            forbidden.ok,
            format!("contradiction found: {}, trace replays: {}", forbidden.contradiction.is_some(), forbidden.replays),
        )
        .with_data(&forbidden),
    );
    out
}
