use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cardlab_core::atoms::{random_extension, Atom, AtomStructure, PartialAutomorphism};
use cardlab_core::symsets::{
    count_least_supported, rank_among_least_supported, types_over, unrank_least_supported, SupportedSubset,
};

/// A dense-order subset over a random support drawn from `-8..8`.
fn dense_subset() -> impl Strategy<Value = (Vec<i64>, Vec<bool>)> {
    prop::collection::btree_set(-8i64..8, 0..4).prop_flat_map(|e| {
        let n = 2 * e.len() + 1;
        (Just(e.into_iter().collect::<Vec<_>>()), prop::collection::vec(any::<bool>(), n))
    })
}

fn build(s: &AtomStructure, e: &[i64], bits: Vec<bool>) -> SupportedSubset {
    let e: Vec<Atom> = e.iter().copied().map(Atom::rational).collect();
    SupportedSubset::new(s, &e, bits).unwrap()
}

fn probe_points() -> Vec<Atom> {
    (-18..18).map(|n| Atom::ratio(n, 2)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dense_type_counts(n in 0usize..=6) {
        let s = AtomStructure::dense_integers(0..6);
        let e: Vec<Atom> = (0..n as i64).map(Atom::rational).collect();
        prop_assert_eq!(types_over(&s, &e).unwrap().len(), 2 * n + 1);
    }

    #[test]
    fn automorphisms_fixing_the_support_fix_the_set((e, bits) in dense_subset(), seed in any::<u64>()) {
        let mut s = AtomStructure::dense_integers(-8..8);
        let set = build(&s, &e, bits);
        let points = probe_points();
        for p in &points {
            s.materialize(p).unwrap();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = random_extension(&mut s, &PartialAutomorphism::identity_on(set.support()), &points, &mut rng).unwrap();
        for x in &points {
            prop_assert_eq!(set.contains(&s, x).unwrap(), set.contains(&s, pi.get(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn least_supports_are_minimal((e, bits) in dense_subset()) {
        let s = AtomStructure::dense_integers(-8..8);
        let set = build(&s, &e, bits);
        let least = set.least_support(&s).unwrap();
        prop_assert!(least.iter().all(|a| set.support().contains(a)));
        prop_assert!(set.supported_by(&s, &least).unwrap());
        for i in 0..least.len() {
            let mut smaller = least.clone();
            smaller.remove(i);
            prop_assert!(!set.supported_by(&s, &smaller).unwrap());
        }
        let canon = set.canonical(&s).unwrap();
        prop_assert_eq!(canon.least_support(&s).unwrap(), least);
        prop_assert!(canon.same_set(&s, &set).unwrap());
    }

    #[test]
    fn boolean_operations_are_pointwise((e, a) in dense_subset(), b_seed in any::<u64>()) {
        let s = AtomStructure::dense_integers(-8..8);
        let x = build(&s, &e, a.clone());
        let b: Vec<bool> = (0..a.len()).map(|i| b_seed >> (i % 64) & 1 == 1).collect();
        let y = build(&s, &e, b);
        let (union, meet, comp) = (x.union(&s, &y).unwrap(), x.intersection(&s, &y).unwrap(), x.complement());
        prop_assert_eq!(union.support(), x.support());
        for p in probe_points() {
            let (in_x, in_y) = (x.contains(&s, &p).unwrap(), y.contains(&s, &p).unwrap());
            prop_assert_eq!(union.contains(&s, &p).unwrap(), in_x || in_y);
            prop_assert_eq!(meet.contains(&s, &p).unwrap(), in_x && in_y);
            prop_assert_eq!(comp.contains(&s, &p).unwrap(), !in_x);
        }
    }

    #[test]
    fn least_support_ranks_round_trip(e in prop::collection::btree_set(-8i64..8, 0..4), k in any::<u64>()) {
        let s = AtomStructure::dense_integers(-8..8);
        let e: Vec<Atom> = e.into_iter().map(Atom::rational).collect();
        let total = count_least_supported(&s, &e).unwrap();
        prop_assert_eq!(total.clone(), BigUint::from(2u32) * BigUint::from(3u32).pow(e.len() as u32));
        let k = BigUint::from(k) % total;
        let set = unrank_least_supported(&s, &e, &k).unwrap();
        prop_assert_eq!(set.least_support(&s).unwrap(), e);
        prop_assert_eq!(rank_among_least_supported(&s, &set).unwrap(), k);
    }

    #[test]
    fn pure_sets_are_finite_or_cofinite(e in prop::collection::btree_set(0u64..6, 0..4), code in any::<u16>()) {
        let s = AtomStructure::pure(6);
        let e: Vec<Atom> = e.into_iter().map(Atom::Pure).collect();
        let n = types_over(&s, &e).unwrap().len();
        let set = SupportedSubset::new(&s, &e, (0..n).map(|i| code >> i & 1 == 1).collect()).unwrap();
        let pool: Vec<Atom> = (0..10).map(Atom::Pure).collect();
        let inside: BTreeSet<Atom> = pool.iter().filter(|a| set.contains(&s, a).unwrap()).cloned().collect();
        let outside: BTreeSet<Atom> = pool.iter().filter(|a| !inside.contains(a)).cloned().collect();
        prop_assert!(inside.iter().all(|a| e.contains(a)) || outside.iter().all(|a| e.contains(a)));
    }
}
