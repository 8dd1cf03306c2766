use std::collections::BTreeSet;

use mckay_core::lattice::{
    characters, fixed_point_order, lang_quotient, norm_endomorphism, smith_normal_form, AbelianEndomorphism,
    FiniteAbelianGroup, IntMatrix,
};
use num_integer::Integer;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

/// A random group with `|H| ≤ bound` and a well-defined endomorphism on it.
fn endomorphism(bound: u64) -> impl Strategy<Value = AbelianEndomorphism> {
    (
        proptest::collection::vec(1u64..=60, 1..=3),
        proptest::collection::vec(0i64..1000, 9),
    )
        .prop_filter_map("group too large or trivial", move |(orders, ks)| {
            if orders.iter().product::<u64>() > bound {
                return None;
            }
            let h = FiniteAbelianGroup::from_cyclic_orders(&orders);
            if h.is_trivial() {
                return None;
            }
            let d = h.invariant_factors().to_vec();
            let k = d.len();
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| ks[i * 3 + j] * (d[i] / d[i].gcd(&d[j])) as i64)
                        .collect()
                })
                .collect();
            AbelianEndomorphism::new(h, IntMatrix::from_rows(k, &rows)).ok()
        })
}

fn fixed_by_enumeration(phi: &AbelianEndomorphism) -> Vec<Vec<u64>> {
    phi.group().elements().into_iter().filter(|h| phi.apply(h) == *h).collect()
}

fn image_size(phi: &AbelianEndomorphism) -> usize {
    phi.group()
        .elements()
        .iter()
        .map(|h| phi.apply(h))
        .collect::<BTreeSet<_>>()
        .len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_round_trip(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert!(s.verify());
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn kernel_and_cokernel_orders_agree(phi in endomorphism(10_000)) {
        // φ + 1 has fixed points ker φ and Lang quotient coker φ
        let shifted = phi.add(&AbelianEndomorphism::identity(phi.group()));
        let ker = fixed_point_order(&shifted);
        let coker = lang_quotient(&shifted).order();
        prop_assert_eq!(ker, coker);
        let h = phi.group().order();
        let brute_ker = phi.group().elements().iter().filter(|x| phi.apply(x).iter().all(|&c| c == 0)).count() as u64;
        prop_assert_eq!(ker, brute_ker);
        prop_assert_eq!(coker, h / image_size(&phi) as u64);
    }

    #[test]
    fn fixed_points_of_any_endomorphism(phi in endomorphism(2_000)) {
        prop_assert_eq!(fixed_point_order(&phi), fixed_by_enumeration(&phi).len() as u64);
        prop_assert_eq!(fixed_point_order(&phi), lang_quotient(&phi).order());
    }

    #[test]
    fn multiplication_fixed_points(orders in proptest::collection::vec(1u64..=40, 1..=3), q in 2u64..=30) {
        prop_assume!(orders.iter().product::<u64>() <= 10_000);
        let h = FiniteAbelianGroup::from_cyclic_orders(&orders);
        let phi = AbelianEndomorphism::multiplication(&h, q as i64);
        let expect: u64 = h.invariant_factors().iter().map(|&d| d.gcd(&(q - 1))).product();
        prop_assert_eq!(fixed_point_order(&phi), expect);
        prop_assert_eq!(fixed_by_enumeration(&phi).len() as u64, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_transitivity(phi in endomorphism(1_000), a in 1u32..=4, b in 1u32..=4) {
        let whole = norm_endomorphism(&phi, a * b).unwrap();
        let lower = norm_endomorphism(&phi, a).unwrap();
        let upper = norm_endomorphism(&phi.power(a), b).unwrap();
        prop_assert!(whole.same_map(&lower.compose(&upper)));
        prop_assert!(whole.same_map(&upper.compose(&lower)));
    }

    #[test]
    fn surjective_norm_pullback(phi in endomorphism(256), m in 1u32..=4) {
        let h = phi.group();
        let fixed = fixed_by_enumeration(&phi);
        let fixed_m = fixed_by_enumeration(&phi.power(m));
        let norm = norm_endomorphism(&phi, m).unwrap();
        let image: BTreeSet<Vec<u64>> = fixed_m.iter().map(|x| norm.apply(x)).collect();
        prop_assert!(image.iter().all(|x| phi.apply(x) == *x));
        prop_assume!(image.len() == fixed.len());
        // characters of a subgroup, as value vectors, are restrictions of characters of H
        let restrict = |sub: &[Vec<u64>]| -> BTreeSet<Vec<u64>> {
            characters(h).iter().map(|c| sub.iter().map(|x| h.pairing(c, x)).collect()).collect()
        };
        let lower = restrict(&fixed);
        let upper = restrict(&fixed_m);
        let position = |x: &Vec<u64>| fixed.iter().position(|y| y == x).unwrap();
        let pulled: BTreeSet<Vec<u64>> = lower
            .iter()
            .map(|lam| fixed_m.iter().map(|x| lam[position(&norm.apply(x))]).collect())
            .collect();
        prop_assert_eq!(pulled.len(), lower.len());
        let position_m = |x: &Vec<u64>| fixed_m.iter().position(|y| y == x).unwrap();
        let stable: BTreeSet<Vec<u64>> = upper
            .iter()
            .filter(|lam| fixed_m.iter().all(|x| lam[position_m(&phi.apply(x))] == lam[position_m(x)]))
            .cloned()
            .collect();
        prop_assert_eq!(pulled, stable);
    }
}
