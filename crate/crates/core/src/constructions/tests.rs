use super::*;
use crate::atoms::{AtomStructure, StructureKind};
use crate::symsets::{count_least_supported, unrank_least_supported, OneType};
use num_bigint::BigUint;

fn p(i: u64) -> Hf {
    Hf::Atom(Atom::Pure(i))
}

#[test]
fn membership_examples() {
    let (a, b) = (Atom::Pure(0), Atom::Pure(1));
    let aba = Hf::atoms([a.clone(), b.clone(), a.clone()]);
    assert!(!DomainExpr::Seq.member_hf(&aba));
    assert!(DomainExpr::SeqStar.member_hf(&aba));
    assert!(DomainExpr::SeqStar.member_hf(&Hf::atoms([a.clone(), a.clone(), a.clone()])));
    let k = Hf::set([Hf::atom_set([a.clone()]), Hf::atom_set([a.clone(), b.clone()])]);
    assert!(DomainExpr::fin_n(2).member_hf(&k));
    assert!(!DomainExpr::fin_n(1).member_hf(&k));
    let pair = Hf::atom_set([a.clone(), b.clone()]);
    assert!(DomainExpr::UnordPairs(Box::new(DomainExpr::A)).member_hf(&pair));
    assert!(!DomainExpr::UnordPairs(Box::new(DomainExpr::A)).member_hf(&Hf::atom_set([a])));
    let s = AtomStructure::pure(2);
    let all = crate::symsets::SupportedSubset::everything(&s).unwrap();
    assert!(DomainExpr::PowA.member(&Element::Subset(all)));
}

#[test]
fn domain_expressions_parse() {
    for text in ["A", "Fin(Fin(A))", "Seq(A)", "seq(A)", "Pair(A,Fin(A))", "[A]2", "P(A)"] {
        let d: DomainExpr = text.parse().unwrap();
        assert_eq!(d.to_string(), text);
    }
    assert!("Fin(A".parse::<DomainExpr>().is_err());
    assert!("B".parse::<DomainExpr>().is_err());
}

#[test]
fn kuratowski_examples() {
    let k = kuratowski(&p(0), &p(1)).unwrap();
    assert_eq!(k, Hf::set([Hf::set([p(0)]), Hf::set([p(0), p(1)])]));
    assert_eq!(kuratowski(&p(0), &p(0)).unwrap(), Hf::set([Hf::set([p(0)])]));
    assert_ne!(kuratowski(&p(0), &p(1)).unwrap(), kuratowski(&p(1), &p(0)).unwrap());
    assert!(kuratowski(&Hf::empty(), &p(0)).is_err());
}

#[test]
fn chain_examples() {
    let a: Vec<Atom> = (0..3).map(Atom::Pure).collect();
    assert_eq!(seq_to_chain(&Hf::atoms([])).unwrap(), Hf::empty());
    assert_eq!(seq_to_chain(&Hf::atoms(a[..1].to_vec())).unwrap(), Hf::set([Hf::set([p(0)])]));
    assert_eq!(
        seq_to_chain(&Hf::atoms(a[..2].to_vec())).unwrap(),
        Hf::set([Hf::set([p(0)]), Hf::set([p(0), p(1)])])
    );
    assert_eq!(
        seq_to_chain(&Hf::atoms([a[0].clone(), a[0].clone()])),
        Err(Error::NotASeq)
    );
}

#[test]
fn size_classes() {
    let pool: Vec<Atom> = (0..3).map(Atom::Pure).collect();
    let one = size_class_map(&[1].into(), &pool).unwrap();
    assert_eq!(one.len(), 3);
    assert_eq!(size_class_map(&[0].into(), &pool).unwrap(), Hf::set([Hf::empty()]));
    assert_eq!(size_class_map(&[1, 2].into(), &pool).unwrap().len(), 6);
    assert!(size_class_map(&[4].into(), &pool).is_err());
}

#[test]
fn pair_to_unordered_examples() {
    let mut s = AtomStructure::pair_model(4);
    let (x, y) = (Atom::Base(0), Atom::Base(1));
    let out = pairmodel_pair_to_unordered(&mut s, &x, &y).unwrap();
    assert_eq!(
        out,
        Hf::atom_set([
            Atom::lift(1, x.clone(), y.clone(), 0).unwrap(),
            Atom::lift(1, x.clone(), y.clone(), 1).unwrap()
        ])
    );
    let z = Atom::lift(1, x.clone(), y.clone(), 0).unwrap();
    let up = pairmodel_pair_to_unordered(&mut s, &x, &z).unwrap();
    let Hf::Set(members) = up else { panic!() };
    assert!(members.iter().all(|m| m.as_atom().unwrap().level() == 2));
    let mut d = AtomStructure::pure(2);
    assert!(pairmodel_pair_to_unordered(&mut d, &Atom::Pure(0), &Atom::Pure(1)).is_err());
}

#[test]
fn permutations_round_trip() {
    let items: Vec<u32> = (0..5).collect();
    for k in 0u32..120 {
        let perm = nth_permutation(&items, &BigUint::from(k)).unwrap();
        assert_eq!(permutation_rank(&items, &perm), Some(BigUint::from(k)));
    }
    assert_eq!(nth_permutation(&items, &BigUint::from(0u32)).unwrap(), items);
    assert!(nth_permutation(&items, &BigUint::from(120u32)).is_err());
}

#[test]
fn mostowski_small_supports() {
    let s = AtomStructure::dense_integers(-6..20);
    let anchors = Anchors::default();
    let empty = crate::symsets::SupportedSubset::nothing(&s).unwrap();
    let full = crate::symsets::SupportedSubset::everything(&s).unwrap();
    let f_empty = mostowski_power_to_seq(&s, &empty, &anchors).unwrap();
    let f_full = mostowski_power_to_seq(&s, &full, &anchors).unwrap();
    assert_ne!(f_empty, f_full);
    let anchor_atoms: Vec<Atom> = anchors.atoms()[..10].to_vec();
    for f in [&f_empty, &f_full] {
        assert!(DomainExpr::Seq.member_hf(f));
        let v = f.as_atom_tuple().unwrap();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, anchor_atoms);
    }
    // empty set has rank 0, so k = 1 and the (10! - 1)th permutation
    let want = nth_permutation(&anchor_atoms, &BigUint::from(3_628_800u32 - 2)).unwrap();
    assert_eq!(f_empty, Hf::atoms(want));

    let e = [Atom::rational(-3)];
    let set = crate::symsets::SupportedSubset::from_types(&s, &e, |t| matches!(t, OneType::Equal(_))).unwrap();
    let v = mostowski_power_to_seq(&s, &set, &anchors).unwrap().as_atom_tuple().unwrap();
    assert_eq!(v.len(), 11);
    assert_eq!(v[0], e[0]);
}

/// The two branches of the power-set map can meet. Exactly `2 * 3^n` sets
/// have a given `n`-element least support, so a set with least support
/// `{x1, .., x4}` below the anchors, whose image is ranked near `10!` among
/// permutations of `{x1, .., x4, c0, .., c9}`, shares its image with a set
/// whose least support is that 14-element set (`2 * 3^14 > 10!`).
#[test]
fn mostowski_branches_can_collide() {
    let s = AtomStructure::dense_integers(-6..20);
    let anchors = Anchors::default();
    let xs: Vec<Atom> = (-4..0).map(Atom::rational).collect();
    let small = unrank_least_supported(&s, &xs, &BigUint::from(0u32)).unwrap();
    let image = mostowski_power_to_seq(&s, &small, &anchors).unwrap();

    let mut big_support = xs.clone();
    big_support.extend(anchors.atoms()[..10].iter().cloned());
    let rank = permutation_rank(&big_support, &image.as_atom_tuple().unwrap()).unwrap();
    assert!(rank < count_least_supported(&s, &big_support).unwrap());
    let big = unrank_least_supported(&s, &big_support, &rank).unwrap();
    assert_eq!(big.least_support(&s).unwrap(), big_support);
    assert!(!big.same_set(&s, &small).unwrap());
    assert_eq!(mostowski_power_to_seq(&s, &big, &anchors).unwrap(), image);

    // below 14 points the branch-one ranks stay under every branch-two tail rank
    let pts: Vec<Atom> = (0..13).map(Atom::rational).collect();
    let lowest_tail = BigUint::from(3_628_800u32 - 2 * 3u32.pow(3) - 1);
    assert!(count_least_supported(&s, &pts).unwrap() < lowest_tail);
}

#[test]
fn categorical_phi_examples() {
    let mut s = AtomStructure::categorical();
    let e0 = s.fresh_atom();
    let e1 = s.fresh_atom();
    let unary = categorical_seq_to_power(&s, &[]).unwrap();
    assert!(unary.support().is_empty());
    let x = s.fresh_atom();
    s.declare(std::slice::from_ref(&x)).unwrap();
    assert!(unary.contains(&s, &x).unwrap());
    assert!(!unary.contains(&s, &e0).unwrap());

    let fwd = categorical_seq_to_power(&s, &[e0.clone(), e1.clone()]).unwrap();
    let bwd = categorical_seq_to_power(&s, &[e1.clone(), e0.clone()]).unwrap();
    assert!(!fwd.same_set(&s, &bwd).unwrap());
    // a fresh realizer of one but not the other
    let w = crate::atoms::fresh_realizer(
        &mut s,
        &[e0.clone(), e1.clone()],
        &[crate::atoms::AtomicFormula::Rel(crate::atoms::RelFormula {
            slot: 0,
            params: vec![e0.clone(), e1.clone()],
        })],
    )
    .unwrap();
    assert!(fwd.contains(&s, &w).unwrap());
    assert!(!bwd.contains(&s, &w).unwrap());
    assert_eq!(categorical_seq_to_power(&s, &[e0.clone(), e0]), Err(Error::NotASeq));
}

#[test]
fn categorical_psi_examples() {
    let mut s = AtomStructure::categorical();
    let a = s.fresh_atom();
    let b = s.fresh_atom();
    let e0 = s.fresh_atom();
    let all = crate::symsets::SupportedSubset::everything(&s).unwrap();
    let none = crate::symsets::SupportedSubset::nothing(&s).unwrap();
    let pa = categorical_power_to_seq(&s, &all, &a, &b).unwrap();
    let pn = categorical_power_to_seq(&s, &none, &a, &b).unwrap();
    assert!(pa.prefix.is_empty() && pn.prefix.is_empty());
    assert_ne!(pa.len(), pn.len());
    let single = crate::symsets::SupportedSubset::from_types(&s, std::slice::from_ref(&e0), |t| {
        matches!(t, OneType::Equal(_))
    })
    .unwrap();
    let ps = categorical_power_to_seq(&s, &single, &a, &b).unwrap();
    assert_eq!(ps.prefix, vec![e0.clone()]);
    let hf = ps.to_hf(1 << 20).unwrap();
    let v = hf.as_atom_tuple().unwrap();
    assert_eq!((&v[0], &v[1]), (&e0, &a));
    assert!(categorical_power_to_seq(&s, &single, &a, &a).is_err());
    assert_eq!(s.kind(), StructureKind::Categorical);
}
