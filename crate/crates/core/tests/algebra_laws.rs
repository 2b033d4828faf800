mod common;

use common::{dim_and_grade, multivector, rvector, vector};
use num_traits::Zero;
use plucker_ga::ga::{Blade, Multivector, Rational};
use proptest::prelude::*;

fn sign(k: usize) -> Rational {
    Rational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn geometric_product_is_associative(
        (a, b, c) in (1usize..=6).prop_flat_map(|n| (multivector(n, 5), multivector(n, 5), multivector(n, 5)))
    ) {
        let left = a.geometric_product(&b).unwrap().geometric_product(&c).unwrap();
        let right = a.geometric_product(&b.geometric_product(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_are_bilinear(
        (a, b, c) in (1usize..=6).prop_flat_map(|n| (multivector(n, 4), multivector(n, 4), multivector(n, 4))),
        s in common::rational(),
    ) {
        let bc = b.add(&c.scale(&s)).unwrap();
        let lhs = a.geometric_product(&bc).unwrap();
        let rhs = a.geometric_product(&b).unwrap()
            .add(&a.geometric_product(&c).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = a.outer_product(&bc).unwrap();
        let rhs = a.outer_product(&b).unwrap()
            .add(&a.outer_product(&c).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn outer_product_graded_antisymmetry(
        (a, b, s, t) in dim_and_grade(6).prop_flat_map(|(n, s)| {
            (1..=n).prop_flat_map(move |t| (rvector(n, s, 4), rvector(n, t, 4), Just(s), Just(t)))
        })
    ) {
        let ab = a.outer_product(&b).unwrap();
        let ba = b.outer_product(&a).unwrap();
        prop_assert_eq!(ab, ba.scale(&sign(s * t)));
    }

    #[test]
    fn reverse_is_an_involutive_anti_automorphism(
        (a, b) in (1usize..=6).prop_flat_map(|n| (multivector(n, 5), multivector(n, 5)))
    ) {
        prop_assert_eq!(a.reverse().reverse(), a.clone());
        let lhs = a.geometric_product(&b).unwrap().reverse();
        let rhs = b.reverse().geometric_product(&a.reverse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grade_parts_sum_to_whole(a in (1usize..=6).prop_flat_map(|n| multivector(n, 8))) {
        let sum = (0..=a.dim())
            .map(|k| a.grade_project(k))
            .try_fold(Multivector::zero(a.dim()).unwrap(), |acc, part| acc.add(&part))
            .unwrap();
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn coefficients_round_trip_through_reverse(
        (b, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 6), Just(r)))
    ) {
        let n = b.dim();
        let rebuilt = Blade::all_of_grade(n, r)
            .map(|j| Multivector::blade(n, j).unwrap().scale(&b.coefficient_via_reverse(j).unwrap()))
            .try_fold(Multivector::zero(n).unwrap(), |acc, t| acc.add(&t))
            .unwrap();
        prop_assert_eq!(rebuilt, b);
    }

    #[test]
    fn wedge_with_vector_splits_geometric_product(
        (b, v, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 5), vector(n), Just(r)))
    ) {
        let two = Rational::from_integer(2.into());
        let lhs = b.outer_product(&v).unwrap().scale(&two);
        let rhs = b.geometric_product(&v).unwrap()
            .add(&v.geometric_product(&b).unwrap().scale(&sign(r))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_of_vector_into_rvector_has_grade_r_minus_one(
        (b, v, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 5), vector(n), Just(r)))
    ) {
        let c = v.left_contraction(&b).unwrap();
        prop_assert!(c.is_homogeneous_of(r - 1));
        // v B = v _| B + v ^ B for a vector v
        let split = c.add(&v.outer_product(&b).unwrap()).unwrap();
        prop_assert_eq!(split, v.geometric_product(&b).unwrap());
    }
}

#[test]
fn stored_and_derived_coefficients_agree_on_mixed_input() {
    let a = plucker_ga::parse_multivector("3 - e1 + 2/3 e24 + e1234", 4).unwrap();
    for bits in 0..16u64 {
        let j = Blade::from_bits(bits);
        assert_eq!(a.coefficient(j), a.coefficient_via_reverse(j).unwrap());
    }
    assert!(a.coefficient(Blade::from_bits(0b0110)).is_zero());
}
