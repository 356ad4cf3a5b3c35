use proptest::prelude::*;

use cardlab_core::atoms::{Atom, PartialAutomorphism};
use cardlab_core::constructions::{kuratowski, nth_permutation, permutation_rank, seq_to_chain, DomainExpr, Hf};
use num_bigint::BigUint;

fn atoms(max: usize) -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec((0u64..6).prop_map(Atom::Pure), 0..max)
}

fn injective_seq() -> impl Strategy<Value = Vec<Atom>> {
    Just((0u64..6).map(Atom::Pure).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_flat_map(|v| (0..=4usize).prop_map(move |n| v[..n].to_vec()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sets_are_extensional(xs in atoms(6), seed in any::<u64>()) {
        let mut shuffled = xs.clone();
        shuffled.rotate_left(if xs.is_empty() { 0 } else { (seed as usize) % xs.len() });
        shuffled.extend(xs.iter().take(2).cloned());
        prop_assert_eq!(Hf::atom_set(xs.clone()), Hf::atom_set(shuffled.clone()));
        let json = serde_json::to_string(&Hf::atom_set(xs.clone())).unwrap();
        prop_assert_eq!(serde_json::from_str::<Hf>(&json).unwrap(), Hf::atom_set(shuffled));
    }

    #[test]
    fn tuples_are_positional(a in 0u64..6, b in 0u64..6) {
        let (x, y) = (Atom::Pure(a), Atom::Pure(b));
        prop_assert_eq!(Hf::atoms([x.clone(), y.clone()]) == Hf::atoms([y, x]), a == b);
    }

    #[test]
    fn maps_land_in_their_codomains(v in injective_seq(), a in 0u64..6, b in 0u64..6) {
        prop_assert!(DomainExpr::Seq.member_hf(&Hf::atoms(v.clone())));
        let chain = seq_to_chain(&Hf::atoms(v)).unwrap();
        prop_assert!(DomainExpr::fin_n(2).member_hf(&chain));
        let k = kuratowski(&Hf::Atom(Atom::Pure(a)), &Hf::Atom(Atom::Pure(b))).unwrap();
        prop_assert!(DomainExpr::fin_n(2).member_hf(&k));
    }

    #[test]
    fn identity_acts_trivially(v in injective_seq()) {
        let id = PartialAutomorphism::identity_on(&v);
        let h = seq_to_chain(&Hf::atoms(v.clone())).unwrap();
        prop_assert_eq!(h.act(&id).unwrap(), h);
    }

    #[test]
    fn permutation_ranks_round_trip(n in 0usize..8, k in any::<u32>()) {
        let items: Vec<usize> = (0..n).collect();
        let total: u32 = (1..=n as u32).product();
        let k = BigUint::from(k % total);
        let perm = nth_permutation(&items, &k).unwrap();
        prop_assert_eq!(permutation_rank(&items, &perm), Some(k));
    }
}
