use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cardlab_core::atoms::{
    extend_fixing, extendable, random_extension, Atom, AtomStructure, PartialAutomorphism,
};

fn partial(pairs: &[(i64, i64)]) -> Option<PartialAutomorphism> {
    let mut p = PartialAutomorphism::new();
    for &(x, y) in pairs {
        if !p.insert(Atom::rational(x), Atom::rational(y)) {
            return None;
        }
    }
    Some(p)
}

fn strictly_monotone(pairs: &[(i64, i64)]) -> bool {
    pairs
        .iter()
        .all(|&(x0, y0)| pairs.iter().all(|&(x1, y1)| (x0 < x1) == (y0 < y1) && (x0 == x1) == (y0 == y1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dense_extendable_iff_monotone(pairs in prop::collection::vec((-6i64..6, -6i64..6), 0..6)) {
        let s = AtomStructure::dense_integers(-6..6);
        if let Some(p) = partial(&pairs) {
            prop_assert_eq!(extendable(&s, &p).unwrap(), strictly_monotone(&pairs));
        }
    }

    #[test]
    fn extendable_maps_restrict(pairs in prop::collection::vec((-6i64..6, -6i64..6), 0..6), keep in any::<u8>()) {
        let s = AtomStructure::dense_integers(-6..6);
        let Some(p) = partial(&pairs) else { return Ok(()) };
        prop_assume!(extendable(&s, &p).unwrap());
        let kept: Vec<Atom> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| keep >> i & 1 == 1)
            .map(|(_, (x, _))| Atom::rational(*x))
            .collect();
        prop_assert!(extendable(&s, &p.restricted(&kept)).unwrap());
    }

    #[test]
    fn extend_fixing_fixes(fixed in prop::collection::btree_set(-6i64..6, 0..4), x in -6i64..6, y in -6i64..6) {
        let s = AtomStructure::dense_integers(-6..6);
        let e: Vec<Atom> = fixed.iter().copied().map(Atom::rational).collect();
        let c = partial(&[(x, y)]).unwrap();
        if let Some(q) = extend_fixing(&s, &e, &c).unwrap() {
            prop_assert!(extendable(&s, &q).unwrap());
            prop_assert!(q.fixes(&e));
            prop_assert_eq!(q.get(&Atom::rational(x)), Some(&Atom::rational(y)));
        }
    }

    #[test]
    fn pure_maps_extend_iff_injective(pairs in prop::collection::vec((0u64..6, 0u64..6), 0..6)) {
        let s = AtomStructure::pure(6);
        let mut p = PartialAutomorphism::new();
        for (x, y) in &pairs {
            if !p.insert(Atom::Pure(*x), Atom::Pure(*y)) {
                return Ok(());
            }
        }
        let images: std::collections::BTreeSet<&Atom> = p.range().collect();
        prop_assert_eq!(extendable(&s, &p).unwrap(), images.len() == p.len());
    }

    #[test]
    fn random_pair_model_extensions_extend(seed in any::<u64>(), fixed in 0u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = AtomStructure::pair_model(4);
        let x = Atom::lift(1, Atom::Base(0), Atom::Base(1), 0).unwrap();
        let y = Atom::lift(2, x, Atom::Base(2), 1).unwrap();
        s.materialize(&y).unwrap();
        let atoms: Vec<Atom> = s.universe().iter().cloned().collect();
        let e = PartialAutomorphism::identity_on([&Atom::Base(fixed)]);
        let q = random_extension(&mut s, &e, &atoms, &mut rng).unwrap();
        prop_assert!(extendable(&s, &q).unwrap());
        prop_assert!(q.fixes([&Atom::Base(fixed)]));
        prop_assert!(atoms.iter().all(|a| q.get(a).is_some_and(|b| b.level() == a.level())));
    }
}
