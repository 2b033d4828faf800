#![allow(dead_code)]

use plucker_ga::ga::{Blade, Multivector, Rational};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Arbitrary (mixed-grade) multivector in `G_dim`.
pub fn multivector(dim: usize, max_terms: usize) -> impl Strategy<Value = Multivector> {
    let mask = Blade::pseudoscalar(dim).bits();
    prop::collection::vec((any::<u64>(), rational()), 0..=max_terms).prop_map(move |terms| {
        Multivector::from_terms(
            dim,
            terms.into_iter().map(|(bits, c)| (Blade::from_bits(bits & mask), c)),
        )
        .unwrap()
    })
}

/// Homogeneous grade-`r` element, possibly zero.
pub fn rvector(dim: usize, r: usize, max_terms: usize) -> impl Strategy<Value = Multivector> {
    let blades: Vec<Blade> = Blade::all_of_grade(dim, r).collect();
    prop::collection::vec((0..blades.len(), rational()), 1..=max_terms).prop_map(move |terms| {
        Multivector::from_terms(dim, terms.into_iter().map(|(i, c)| (blades[i], c))).unwrap()
    })
}

pub fn vector(dim: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(rational(), dim)
        .prop_map(move |c| Multivector::vector(dim, &c).unwrap())
}

/// `(n, r)` with `1 <= r <= n <= max_n`.
pub fn dim_and_grade(max_n: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), 1..=n))
}
