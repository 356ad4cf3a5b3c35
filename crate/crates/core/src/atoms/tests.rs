use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pa(pairs: &[(Atom, Atom)]) -> PartialAutomorphism {
    pairs.iter().cloned().collect()
}

#[test]
fn pure_injections_extend() {
    let s = AtomStructure::pure(4);
    let (a, b) = (Atom::Pure(0), Atom::Pure(1));
    assert!(extendable(&s, &pa(&[(a.clone(), b.clone()), (b.clone(), a.clone())])).unwrap());
    assert!(!extendable(&s, &pa(&[(a.clone(), b.clone()), (Atom::Pure(2), b)])).unwrap());
}

#[test]
fn dense_needs_monotone() {
    let s = AtomStructure::dense([1, 2, 3].map(|n| BigRational::from_integer(n.into())));
    let good = pa(&[(Atom::rational(1), Atom::rational(2)), (Atom::rational(3), Atom::ratio(5, 2))]);
    let bad = pa(&[(Atom::rational(1), Atom::rational(2)), (Atom::rational(3), Atom::ratio(3, 2))]);
    let mut s = s;
    s.materialize(&Atom::ratio(5, 2)).unwrap();
    s.materialize(&Atom::ratio(3, 2)).unwrap();
    assert!(extendable(&s, &good).unwrap());
    assert!(!extendable(&s, &bad).unwrap());
}

#[test]
fn mixed_atoms_are_rejected() {
    let s = AtomStructure::pure(2);
    let p = pa(&[(Atom::Pure(0), Atom::rational(1))]);
    assert!(matches!(extendable(&s, &p), Err(Error::StructureMismatch { .. })));
}

#[test]
fn pair_flip_of_one_level() {
    let mut s = AtomStructure::pair_model(2);
    let (a, b) = (Atom::Base(0), Atom::Base(1));
    let x0 = Atom::lift(1, a.clone(), b.clone(), 0).unwrap();
    let x1 = Atom::lift(1, a.clone(), b.clone(), 1).unwrap();
    s.materialize(&x0).unwrap();
    s.materialize(&x1).unwrap();
    let p = pa(&[(x0.clone(), x1.clone()), (a.clone(), a.clone()), (b.clone(), b.clone())]);
    assert!(extendable(&s, &p).unwrap());
    // the flip is uniform on a level
    let y0 = Atom::lift(1, b.clone(), a.clone(), 0).unwrap();
    s.materialize(&y0).unwrap();
    let q = pa(&[(x0, x1), (y0.clone(), y0)]);
    assert!(!extendable(&s, &q).unwrap());
}

#[test]
fn lift_checks_levels() {
    let a = Atom::Base(0);
    let x = Atom::lift(1, a.clone(), a.clone(), 0).unwrap();
    assert!(Atom::lift(1, x.clone(), a.clone(), 0).is_err());
    assert!(Atom::lift(2, x.clone(), a.clone(), 0).is_ok());
    assert!(Atom::lift(0, a.clone(), a.clone(), 0).is_err());
    assert!(Atom::lift(2, x, Atom::Pure(0), 0).is_err());
}

#[test]
fn extend_fixing_examples() {
    let s = AtomStructure::dense_integers(0..4);
    let c = pa(&[(Atom::rational(1), Atom::rational(2))]);
    let p = extend_fixing(&s, &[Atom::rational(0)], &c).unwrap().unwrap();
    assert!(p.fixes(&[Atom::rational(0)]));
    assert_eq!(p.get(&Atom::rational(1)), Some(&Atom::rational(2)));

    let swap = pa(&[(Atom::rational(1), Atom::rational(2)), (Atom::rational(2), Atom::rational(1))]);
    let e = [Atom::rational(0), Atom::rational(3)];
    assert!(extend_fixing(&s, &e, &swap).unwrap().is_none());

    let s = AtomStructure::pure(3);
    let (a, b, c) = (Atom::Pure(0), Atom::Pure(1), Atom::Pure(2));
    let t = pa(&[(b.clone(), c.clone()), (c.clone(), b.clone())]);
    let p = extend_fixing(&s, std::slice::from_ref(&a), &t).unwrap().unwrap();
    assert_eq!(p.len(), 3);
    assert!(p.fixes([&a]));
    assert!(extend_fixing(&s, std::slice::from_ref(&b), &t).unwrap().is_none());
}

#[test]
fn extend_to_closes_chains() {
    let mut s = AtomStructure::pure(4);
    let p = pa(&[(Atom::Pure(0), Atom::Pure(1))]);
    let q = extend_to(&mut s, &p, &[Atom::Pure(1), Atom::Pure(2)]).unwrap();
    assert_eq!(q.get(&Atom::Pure(1)), Some(&Atom::Pure(0)));
    assert_eq!(q.get(&Atom::Pure(2)), Some(&Atom::Pure(2)));
    assert!(q.is_injective());
}

#[test]
fn dense_extend_to_interpolates() {
    let mut s = AtomStructure::dense_integers(0..10);
    let p = pa(&[(Atom::rational(0), Atom::rational(0)), (Atom::rational(4), Atom::rational(2))]);
    let atoms: Vec<Atom> = (0..10).map(Atom::rational).collect();
    let q = extend_to(&mut s, &p, &atoms).unwrap();
    assert_eq!(q.get(&Atom::rational(2)), Some(&Atom::rational(1)));
    assert_eq!(q.get(&Atom::rational(9)), Some(&Atom::rational(7)));
    assert!(extendable(&s, &q).unwrap());
}

#[test]
fn pair_extend_to_is_total_on_closure() {
    let mut s = AtomStructure::pair_model(3);
    let (a, b, c) = (Atom::Base(0), Atom::Base(1), Atom::Base(2));
    let x = Atom::lift(1, a.clone(), b.clone(), 0).unwrap();
    let y = Atom::lift(2, x.clone(), c.clone(), 1).unwrap();
    s.materialize(&y).unwrap();
    let p = pa(&[(a.clone(), b.clone()), (b.clone(), a.clone())]);
    let atoms: Vec<Atom> = s.universe().iter().cloned().collect();
    let q = extend_to(&mut s, &p, &atoms).unwrap();
    assert_eq!(
        q.get(&y),
        Some(&Atom::lift(2, Atom::lift(1, b, a, 0).unwrap(), c, 1).unwrap())
    );
    assert!(extendable(&s, &q).unwrap());
}

#[test]
fn fresh_realizer_examples() {
    let mut s = AtomStructure::categorical();
    let e0 = s.fresh_atom();
    let below = fresh_realizer(&mut s, std::slice::from_ref(&e0), &[AtomicFormula::Below(e0.clone())]).unwrap();
    assert_eq!(s.compare(&below, &e0), Ordering::Less);

    let e1 = s.fresh_atom();
    let params = [e0.clone(), e1.clone()];
    let r = RelFormula { slot: 0, params: params.to_vec() };
    let a = fresh_realizer(&mut s, &params, &[AtomicFormula::Rel(r.clone())]).unwrap();
    assert!(s.holds(&[a.clone(), e0.clone(), e1.clone()]));
    assert!(!s.holds(&[a.clone(), e1.clone(), e0.clone()]));
    assert_eq!(s.compare(&e1, &a), Ordering::Less);

    let same = fresh_realizer(&mut s, &params, &[AtomicFormula::Equals(e0.clone())]).unwrap();
    assert_eq!(same, e0);

    let dup = RelFormula { slot: 0, params: vec![e0.clone(), e0.clone()] };
    assert!(matches!(
        fresh_realizer(&mut s, &params, &[AtomicFormula::Rel(dup)]),
        Err(Error::UnsatisfiableType(_))
    ));
    // x < e0 but not x < e1, while e0 < e1
    assert!(matches!(
        fresh_realizer(&mut s, &params, &[AtomicFormula::Below(e0.clone())]),
        Err(Error::UnsatisfiableType(_))
    ));
    assert!(s.declare(&[e0.clone(), e0]).is_err());
}

#[test]
fn categorical_homogeneity_on_equal_diagrams() {
    let mut s = AtomStructure::categorical();
    let e = s.fresh_atom();
    let theta = [AtomicFormula::Rel(RelFormula { slot: 1, params: vec![e.clone()] })];
    let a = fresh_realizer(&mut s, std::slice::from_ref(&e), &theta).unwrap();
    let b = fresh_realizer(&mut s, std::slice::from_ref(&e), &theta).unwrap();
    let c = fresh_realizer(&mut s, std::slice::from_ref(&e), &[]).unwrap();
    assert_eq!(diagram(&s, &a, std::slice::from_ref(&e)), diagram(&s, &b, std::slice::from_ref(&e)));
    let fixed = std::slice::from_ref(&e);
    assert!(extend_fixing(&s, fixed, &pa(&[(a.clone(), b)])).unwrap().is_some());
    assert!(extend_fixing(&s, fixed, &pa(&[(a, c)])).unwrap().is_none());
}

#[test]
fn categorical_extend_to_grows_universe() {
    let mut s = AtomStructure::categorical();
    let e = s.fresh_atom();
    let x = s.fresh_atom();
    let y = s.fresh_atom();
    s.declare(&[x.clone(), e.clone()]).unwrap();
    s.declare(&[y.clone()]).unwrap();
    let p = pa(&[(e.clone(), e.clone()), (x.clone(), y.clone())]);
    assert!(!extendable(&s, &p).unwrap());
    let p = pa(&[(e.clone(), e.clone())]);
    let before = s.universe().len();
    let q = extend_to(&mut s, &p, &[x.clone(), y.clone()]).unwrap();
    assert!(extendable(&s, &q).unwrap());
    assert!(s.universe().len() >= before);
}

#[test]
fn random_extensions_are_extendable() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in [
        StructureKind::PureSet,
        StructureKind::DenseOrder,
        StructureKind::PairModel,
        StructureKind::Categorical,
    ] {
        let mut s = match kind {
            StructureKind::PureSet => AtomStructure::pure(6),
            StructureKind::DenseOrder => AtomStructure::dense_integers(0..6),
            StructureKind::PairModel => AtomStructure::pair_model(4),
            StructureKind::Categorical => {
                let mut s = AtomStructure::categorical();
                let v: Vec<Atom> = (0..4).map(|_| s.fresh_atom()).collect();
                s.declare(&[v[0].clone(), v[2].clone()]).unwrap();
                s.declare(&[v[3].clone(), v[1].clone(), v[0].clone()]).unwrap();
                s
            }
        };
        if kind == StructureKind::PairModel {
            let x = Atom::lift(1, Atom::Base(0), Atom::Base(1), 1).unwrap();
            s.materialize(&Atom::lift(2, x, Atom::Base(2), 0).unwrap()).unwrap();
        }
        let atoms: Vec<Atom> = s.universe().iter().cloned().collect();
        let fixed = PartialAutomorphism::identity_on(&atoms[..1]);
        for _ in 0..20 {
            let mut t = s.clone();
            let q = random_extension(&mut t, &fixed, &atoms, &mut rng).unwrap();
            assert!(q.fixes(&atoms[..1]));
            assert!(extendable(&t, &q).unwrap(), "{kind:?}: {q:?}");
        }
    }
}

#[test]
fn serde_round_trip() {
    let mut s = AtomStructure::categorical();
    let a = s.fresh_atom();
    let b = s.fresh_atom();
    s.declare(&[b.clone(), a.clone()]).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: AtomStructure = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);

    let q = Atom::ratio(-3, 6);
    let json = serde_json::to_string(&q).unwrap();
    assert_eq!(json, r#"{"rational":"-1/2"}"#);
    assert_eq!(serde_json::from_str::<Atom>(&json).unwrap(), q);

    let p = pa(&[(Atom::Base(1), Atom::Base(2))]);
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<PartialAutomorphism>(&json).unwrap(), p);
}
