mod common;

use common::{dim_and_grade, rvector};
use plucker_ga::ga::{Multivector, Rational};
use plucker_ga::oracle::{self, TrialConfig};
use plucker_ga::plucker;
use proptest::prelude::*;

/// Outer product of `r` vectors; zero when they are dependent.
fn wedge(vs: &[Multivector], n: usize) -> Multivector {
    vs.iter().fold(
        Multivector::scalar(n, Rational::from_integer(1.into())).unwrap(),
        |acc, v| acc.outer_product(v).unwrap(),
    )
}

fn blade_inputs(max_n: usize) -> impl Strategy<Value = (Multivector, usize)> {
    dim_and_grade(max_n).prop_flat_map(|(n, r)| {
        (prop::collection::vec(common::vector(n), r), Just(n), Just(r))
            .prop_map(|(vs, n, r)| (wedge(&vs, n), r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn every_criterion_agrees_with_the_oracle(
        (b, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 6), Just(r)))
    ) {
        prop_assume!(!b.is_zero());
        let truth = oracle::blade_oracle(&b, r).unwrap();
        prop_assert_eq!(plucker::plucker_check(&b, r).unwrap().passed, truth);
        prop_assert_eq!(plucker::nguyen_check(&b, r).unwrap().passed, truth);
        prop_assert_eq!(plucker::span_rank(&b, r).unwrap() == r, truth);
        prop_assert_eq!(plucker::rank_space(&b, r).unwrap().0 == r, truth);
    }

    #[test]
    fn lemma_bounds_on_span_rank(
        (b, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 6), Just(r)))
    ) {
        prop_assume!(!b.is_zero());
        let rank = plucker::span_rank(&b, r).unwrap();
        prop_assert!(r <= rank && rank <= b.dim());
    }

    #[test]
    fn blades_pass_and_factor((b, r) in blade_inputs(6)) {
        prop_assume!(!b.is_zero());
        prop_assert!(plucker::plucker_check(&b, r).unwrap().passed);
        prop_assert!(plucker::nguyen_check(&b, r).unwrap().passed);
        prop_assert!(plucker::blade_vb_identity_residual(&b, r).unwrap().is_zero());
        let f = plucker::factorize(&b, r).unwrap();
        prop_assert_eq!(f.vectors.len(), r);
        let rebuilt = f.reconstruct().unwrap();
        prop_assert_eq!(&rebuilt, &b);
        prop_assert_eq!(plucker::rank_space(&rebuilt, r).unwrap().0, r);
    }

    #[test]
    fn failed_checks_carry_reproducible_witnesses(
        (b, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 6), Just(r)))
    ) {
        prop_assume!(!b.is_zero());
        let report = plucker::plucker_check(&b, r).unwrap();
        prop_assert_eq!(report.passed, report.witness_k.is_none());
        if let (Some(k), Some(res)) = (report.witness_k, report.residual) {
            prop_assert_eq!(k.grade(), r - 1);
            prop_assert_eq!(plucker::plucker_residual(k, &b).unwrap(), res);
            let rejected = matches!(
                plucker::factorize(&b, r),
                Err(plucker::PluckerError::NotABlade { witness, .. }) if witness == k
            );
            prop_assert!(rejected, "factorize accepted a non-blade");
        }
    }

    #[test]
    fn non_scalar_square_implies_failure_with_witness(
        (b, r) in dim_and_grade(6).prop_flat_map(|(n, r)| (rvector(n, r, 6), Just(r)))
    ) {
        prop_assume!(!b.is_zero());
        if !plucker::square_parity(&b).unwrap() {
            prop_assert!(!plucker::plucker_check(&b, r).unwrap().passed);
            let k = plucker::parity_witness(&b, r).unwrap().expect("witness exists");
            prop_assert!(!plucker::plucker_residual(k, &b).unwrap().is_zero());
        } else {
            prop_assert_eq!(plucker::parity_witness(&b, r).unwrap(), None);
        }
    }

    #[test]
    fn dividing_by_a_contraction_vector(
        (b, r) in (2usize..=6).prop_flat_map(|n| (2..=n).prop_flat_map(move |r| (rvector(n, r, 6), Just(r))))
    ) {
        prop_assume!(!b.is_zero());
        for (_, v) in plucker::span_set(&b, r).unwrap() {
            if plucker::is_divisible(&b, &v).unwrap() {
                let quotient = plucker::divide(&b, &v).unwrap();
                prop_assert_eq!(v.geometric_product(&quotient).unwrap(), b.clone());
            } else {
                prop_assert!(plucker::divide(&b, &v).is_err());
            }
        }
    }

    #[test]
    fn g4_bivector_quadratic_law(b in rvector(4, 2, 6)) {
        prop_assume!(!b.is_zero());
        let quadratic_zero = num_traits::Zero::is_zero(&plucker::quadratic_plucker_g4(&b).unwrap());
        let wedge_zero = plucker::wedge_square(&b).unwrap().is_zero();
        prop_assert_eq!(plucker::plucker_check(&b, 2).unwrap().passed, quadratic_zero);
        prop_assert_eq!(quadratic_zero, wedge_zero);
    }
}

#[test]
fn pseudoscalar_multiples_are_blades() {
    for n in 1..=6 {
        let b = Multivector::basis(n, &(1..=n).collect::<Vec<_>>())
            .unwrap()
            .scale(&Rational::new((-7).into(), 3.into()));
        assert!(plucker::plucker_check(&b, n).unwrap().passed);
        assert!(oracle::blade_oracle(&b, n).unwrap());
        assert_eq!(plucker::factorize(&b, n).unwrap().reconstruct().unwrap(), b);
    }
}

#[test]
fn sweeps_cover_all_grades_and_both_branches() {
    let mut blades = 0;
    let mut instances = 0;
    for n in 2..=5 {
        for r in 1..=n {
            let report = oracle::run_equivalence_trials(&TrialConfig::new(n, r, 25, 3)).unwrap();
            assert!(report.is_clean(), "{}", report.to_text());
            blades += report.blades;
            instances += report.instances;
        }
    }
    assert!(blades > instances / 2 && blades < instances);
}
