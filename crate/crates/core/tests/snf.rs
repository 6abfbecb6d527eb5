mod support;

use proptest::prelude::*;
use toporeal_core::homology::{invariant_factors, smith_normal_form, IntMatrix};
use toporeal_core::Int;

fn dense(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.to_dense()
}

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=8, 1usize..=8)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization((r, c, entries) in matrix()) {
        let m = IntMatrix::from_dense(r, c, &entries);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.u.mul(&m).mul(&snf.v).is_diagonal(&snf.factors));
        prop_assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(r));
        prop_assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(c));
        prop_assert!(support::bareiss_det(dense(&snf.u)).is_unit());
        prop_assert!(support::bareiss_det(dense(&snf.v)).is_unit());
        for w in snf.factors.windows(2) {
            prop_assert!(w[0].divides(&w[1]), "{} does not divide {}", w[0], w[1]);
        }
        prop_assert!(snf.factors.iter().all(|d| !d.is_zero() && !d.is_negative()));
        prop_assert_eq!(&snf.factors, &invariant_factors(&m));
    }

    #[test]
    fn factors_match_determinantal_divisors((r, c, entries) in matrix()) {
        let m = IntMatrix::from_dense(r, c, &entries);
        prop_assert_eq!(invariant_factors(&m), support::determinantal_factors(r, c, &entries));
    }
}

#[test]
fn transposition_keeps_factors() {
    let mut rng = support::rng(7);
    for _ in 0..50 {
        let (r, c, e) = support::random_matrix(&mut rng, 8);
        let m = IntMatrix::from_dense(r, c, &e);
        assert_eq!(invariant_factors(&m), invariant_factors(&m.transpose()));
    }
}

#[test]
fn known_forms() {
    let m = IntMatrix::from_dense(2, 2, &[2, 4, 6, 8]);
    assert_eq!(invariant_factors(&m), vec![Int::from(2), Int::from(4)]);
    let m = IntMatrix::from_dense(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 0]);
    assert_eq!(invariant_factors(&m), vec![Int::from(1), Int::from(6)]);
    assert!(invariant_factors(&IntMatrix::zeros(3, 2)).is_empty());
}
