use std::collections::BTreeSet;

use proptest::prelude::*;

use cardlab_core::atoms::{Atom, AtomStructure};
use cardlab_core::constructions::{DomainExpr, Hf};
use cardlab_core::refute::{
    disjointify_finite, extract_from_surplus, refute_fin_to_seq_fraenkel, refute_fin_to_seqstar_fraenkel, Certificate,
    Extraction, InjectionOracle, NatPartition, NatSet, Value,
};

fn nat_set() -> impl Strategy<Value = NatSet> {
    (prop::collection::btree_set(0u64..24, 0..8), any::<bool>()).prop_map(|(elems, co)| {
        if co {
            NatSet::cofinite(elems)
        } else {
            NatSet::finite(elems)
        }
    })
}

/// A total table from the first few size-<=2 subsets of the atoms to
/// sequences, answered in query order.
fn table() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0u64..6, 0..3), 1..8)
}

fn table_oracle(table: Vec<Vec<u64>>, support: Vec<Atom>, star: bool) -> InjectionOracle<'static, Value, Value> {
    let codomain = if star { DomainExpr::SeqStar } else { DomainExpr::Seq };
    let mut next = 0;
    InjectionOracle::hf(DomainExpr::fin(DomainExpr::A), codomain, support, move |_| {
        let mut row = table[next % table.len()].clone();
        next += 1;
        if !star {
            let mut seen = BTreeSet::new();
            row.retain(|x| seen.insert(*x));
        }
        Hf::atoms(row.into_iter().map(Atom::Pure))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn nat_sets_form_a_boolean_algebra(a in nat_set(), b in nat_set()) {
        for n in 0..40 {
            prop_assert_eq!(a.union(&b).contains(n), a.contains(n) || b.contains(n));
            prop_assert_eq!(a.intersection(&b).contains(n), a.contains(n) && b.contains(n));
            prop_assert_eq!(a.difference(&b).contains(n), a.contains(n) && !b.contains(n));
            prop_assert_eq!(a.complement().contains(n), !a.contains(n));
        }
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert_eq!(a.is_subset(&b), a.difference(&b).is_empty());
        prop_assert_eq!(a.is_disjoint(&b), a.intersection(&b).is_empty());
    }

    #[test]
    fn partition_codes_are_injective(xs in prop::collection::vec(0u8..4, 1..7), ys in prop::collection::vec(0u8..4, 1..7)) {
        let build = |labels: &[u8]| {
            let n = labels.len() as u64;
            let mut blocks: Vec<NatSet> = (0..4u8)
                .map(|b| NatSet::finite((0..n).filter(|&i| labels[i as usize] == b)))
                .filter(|s| !s.is_empty())
                .collect();
            blocks.push(NatSet::cofinite(0..n));
            NatPartition::new(blocks).unwrap()
        };
        let (p, q) = (build(&xs), build(&ys));
        prop_assert_eq!(p == q, p.code() == q.code());
    }

    #[test]
    fn disjointify_partitions_m(size in 0u64..10, masks in prop::collection::btree_set(any::<u16>(), 0..12)) {
        let m: BTreeSet<u64> = (0..size).collect();
        let mut ps: Vec<BTreeSet<u64>> = Vec::new();
        for mask in masks {
            let p: BTreeSet<u64> = m.iter().copied().filter(|x| mask >> x & 1 == 1).collect();
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        let d = disjointify_finite(&m, &ps).unwrap();
        let total: usize = d.classes.iter().map(BTreeSet::len).sum();
        let covered: BTreeSet<u64> = d.classes.iter().flatten().copied().collect();
        prop_assert_eq!(total, m.len());
        prop_assert_eq!(covered, m);
        for p in &ps {
            let union: BTreeSet<u64> = d.classes.iter().filter(|c| c.is_subset(p)).flatten().copied().collect();
            prop_assert_eq!(&union, p);
        }
        prop_assert!(d.signatures.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(ps.len() as u64 <= 1u64 << d.classes.len());
    }

    #[test]
    fn fin_engines_always_certify(rows in table(), k in 0usize..=2, star in any::<bool>()) {
        let mut s = AtomStructure::pure(6);
        let support: Vec<Atom> = (0..k as u64).map(Atom::Pure).collect();
        let mut f = table_oracle(rows, support, star);
        let w = if star {
            refute_fin_to_seqstar_fraenkel(&mut s, &mut f)
        } else {
            refute_fin_to_seq_fraenkel(&mut s, &mut f)
        }
        .unwrap();
        let cert = f.certificate(&s, w);
        cert.verify().unwrap();
        let back: Certificate<Value, Value> = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(&back, &cert);
        back.verify().unwrap();
    }

    #[test]
    fn surplus_streams_are_distinct_or_collapse(n in 1u64..4, shift in 0u64..4, keep_tag in any::<bool>()) {
        let mut f = InjectionOracle::with_check(
            "(n+1)xP(N)",
            "nxP(N)",
            vec![],
            move |(tag, _): &(u64, NatSet)| *tag < n,
            move |(l, set): &(u64, NatSet)| {
                let moved = NatSet::finite(set.elems.iter().map(|x| x + shift));
                let moved = if set.cofinite { moved.complement() } else { moved };
                if keep_tag {
                    (0, moved.union(&NatSet::finite([*l + 1000])))
                } else {
                    (0, moved)
                }
            },
        );
        match extract_from_surplus(n, &mut f, 12).unwrap() {
            Extraction::Stream(v) => {
                prop_assert_eq!(v.len(), 12);
                prop_assert!(v.iter().collect::<BTreeSet<_>>().len() == v.len());
            }
            Extraction::Collapse(w) => {
                w.verify(&mut AtomStructure::pure(1), &[], f.transcript()).unwrap();
            }
        }
    }
}
