mod support;

use std::sync::Arc;

use proptest::prelude::*;
use toporeal_core::catsite::{has_final_object, nerve, FinCat};
use toporeal_core::gallery::{circle, z2};
use toporeal_core::homology::{normalized_chain_complex, simplicial_homology, HomologyGroup};
use toporeal_core::presheaf::{gamma_prime_set, Presheaf, SetPresheaf};
use toporeal_core::realization::{
    induced_map, induced_realization_map, levelwise_diagonal, realize,
};
use toporeal_core::sset::SimplicialSet;
use toporeal_core::Int;

const CAP: usize = 3;

fn homology(s: &SimplicialSet) -> Vec<HomologyGroup> {
    simplicial_homology(s, s.dim_cap() - 1).unwrap()
}

fn boundary_squares_vanish(s: &SimplicialSet) {
    let c = normalized_chain_complex(s, s.dim_cap()).unwrap();
    for k in 2..=s.dim_cap() {
        assert!(c.boundary(k - 1).mul(c.boundary(k)).is_zero(), "degree {k}");
    }
}

fn same_tables(a: &SimplicialSet, b: &SimplicialSet) -> bool {
    let cap = a.dim_cap();
    a.counts() == b.counts()
        && (0..=cap).all(|k| {
            (0..a.count(k)).all(|x| {
                (0..=k).all(|i| {
                    (k == 0 || a.face(k, x, i) == b.face(k, x, i))
                        && (k == cap || a.degeneracy(k, x, i) == b.degeneracy(k, x, i))
                })
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn final_object_computes_the_realization(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let n = 2 + (seed % 4) as usize;
        let leq = support::random_poset_with_max(&mut rng, n);
        let cat = support::poset_category("x", &leq);
        let top = has_final_object(&cat).expect("maximum is final");
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, CAP);
        let r = realize(&cat, &f, &Presheaf::terminal(cat.clone(), CAP), CAP).unwrap();
        prop_assert!(r.set().validate().is_ok());
        prop_assert_eq!(r.set().pi0().count, f.value(top).pi0().count);
        prop_assert_eq!(homology(r.set()), homology(f.value(top)));
        boundary_squares_vanish(r.set());
    }

    #[test]
    fn random_set_presheaves_realize_validly(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let leq = support::random_order(&mut rng, 4, 0.5);
        let cat = support::poset_category("x", &leq);
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, CAP);
        let g = support::random_set_presheaf(&mut rng, &cat).to_presheaf(CAP);
        let r = realize(&cat, &f, &g, CAP).unwrap();
        prop_assert!(r.set().validate().is_ok());
        boundary_squares_vanish(r.set());
        for k in 0..=CAP {
            for x in 0..r.set().count(k) {
                prop_assert_eq!(r.index_of(k, &r.simplex(k, x)), Some(x));
            }
        }
    }

    #[test]
    fn levelwise_then_diagonal_is_the_diagonal(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let leq = support::random_order(&mut rng, 3, 0.5);
        let cat = support::poset_category("x", &leq);
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, 2);
        let value = match seed % 3 {
            0 => circle(2),
            1 => SimplicialSet::standard_simplex(1, 2),
            _ => SimplicialSet::discrete(&["u".into(), "v".into()], 2),
        };
        let g = Presheaf::constant(cat.clone(), Arc::new(value));
        let direct = realize(&cat, &f, &g, 2).unwrap();
        let levelwise = levelwise_diagonal(&f, &g, 2).unwrap();
        prop_assert!(same_tables(direct.set(), &levelwise));
    }

    #[test]
    fn induced_maps_are_functorial(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let leq = support::random_order(&mut rng, 3, 0.6);
        let cat = support::poset_category("x", &leq);
        let site = toporeal_core::catsite::Site::trivial(cat.clone());
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, 2);
        let g = support::random_set_presheaf(&mut rng, &cat);
        let (g1, u1) = gamma_prime_set(&site, &g).unwrap();
        let (g2, u2) = gamma_prime_set(&site, &g1).unwrap();
        let p: Vec<Arc<Presheaf>> = [&g, &g1, &g2].iter().map(|x| Arc::new(x.to_presheaf(2))).collect();
        let m1 = u1.to_presheaf_map(p[0].clone(), p[1].clone()).unwrap();
        let m2 = u2.to_presheaf_map(p[1].clone(), p[2].clone()).unwrap();
        let id = toporeal_core::presheaf::PresheafMap::identity(p[0].clone());
        prop_assert!(induced_realization_map(&f, &id, 2).unwrap().is_identity());
        let composite = induced_realization_map(&f, &m1.then(&m2).unwrap(), 2).unwrap();
        let stepwise = induced_realization_map(&f, &m1, 2).unwrap().then(&induced_realization_map(&f, &m2, 2).unwrap()).unwrap();
        prop_assert!(composite.same_tables(&stepwise));
        prop_assert!(composite.validate().is_ok());
    }
}

#[test]
fn representables_and_their_sums() {
    for seed in 0..5u64 {
        let mut rng = support::rng(100 + seed);
        let leq = support::random_order(&mut rng, 4, 0.5);
        let cat = support::poset_category("x", &leq);
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, CAP);
        let reps: Vec<SetPresheaf> = (0..4)
            .map(|z| SetPresheaf::representable(cat.clone(), z))
            .collect();
        for z in 0..4 {
            let r = realize(&cat, &f, &reps[z].to_presheaf(CAP), CAP).unwrap();
            assert_eq!(
                homology(r.set()),
                homology(f.value(z)),
                "seed {seed} object {z}"
            );
        }
        let sum = SetPresheaf::coproduct(&[&reps[0], &reps[3]]).unwrap();
        let r = realize(&cat, &f, &sum.to_presheaf(CAP), CAP).unwrap();
        let (a, b) = (homology(f.value(0)), homology(f.value(3)));
        for (h, (x, y)) in homology(r.set()).iter().zip(a.iter().zip(&b)) {
            let mut torsion: Vec<Int> = x.torsion.iter().chain(&y.torsion).cloned().collect();
            torsion.sort();
            assert_eq!((h.betti, &h.torsion), (x.betti + y.betti, &torsion));
        }
    }
}

#[test]
fn nerve_of_z2() {
    let n = nerve(&z2(), 4);
    let groups: Vec<String> = homology(&n).iter().map(|h| h.to_string()).collect();
    assert_eq!(groups, ["Z", "Z/2", "0", "Z/2"]);
    boundary_squares_vanish(&n);
    let r = realize(
        &z2(),
        &toporeal_core::presheaf::CovariantDiagram::terminal(z2(), 4),
        &Presheaf::terminal(z2(), 4),
        4,
    )
    .unwrap();
    assert_eq!(homology(r.set()), homology(&n));
}

#[test]
fn induced_map_rejects_foreign_presheaf() {
    let cat = Arc::new(FinCat::discrete(&["*".into()]).unwrap());
    let f = toporeal_core::presheaf::CovariantDiagram::terminal(cat.clone(), 2);
    let g = Arc::new(Presheaf::terminal(cat.clone(), 2));
    let two =
        Arc::new(SetPresheaf::constant(cat.clone(), &["0".into(), "1".into()]).to_presheaf(2));
    let ra = realize(&cat, &f, &g, 2).unwrap();
    let rb = realize(&cat, &f, &two, 2).unwrap();
    let id = toporeal_core::presheaf::PresheafMap::identity(g.clone());
    assert!(induced_map(&ra, &rb, &id).is_err());
}
