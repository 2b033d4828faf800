//! Exact multivector arithmetic in the Euclidean geometric algebra `G_n`.
//!
//! Basis blades are bitmasks over `e1..en` (bit `i - 1` set means `e_i` is a
//! factor), always read in ascending index order. Every sign in the algebra
//! comes from [`blade_sign_and_index`]; the products below are its bilinear
//! extensions restricted to different grade selections.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact scalar field of the algebra.
pub type Rational = BigRational;

/// Largest supported ambient dimension; an index set must fit one `u64`.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    InvalidDimension(usize),
    #[error("basis index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis index {0} repeated within one blade")]
    RepeatedIndex(usize),
}

/// A coordinate blade `e_J`, identified by its index set `J`.
///
/// Ordered by grade first, then lexicographically on the ascending index
/// sequence, so `e12 < e13 < e23 < e123`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub const fn from_bits(bits: u64) -> Self {
        Blade(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The basis vector `e_i` (1-based).
    pub fn vector(i: usize, dim: usize) -> Result<Self, GaError> {
        Self::from_indices(&[i], dim)
    }

    /// Builds a blade from distinct indices given in ascending order or not;
    /// the ordering sign is discarded. Use [`Blade::from_sequence`] to keep it.
    pub fn from_indices(indices: &[usize], dim: usize) -> Result<Self, GaError> {
        Self::from_sequence(indices, dim).map(|(_, blade)| blade)
    }

    /// Canonicalizes an ordered product `e_{i1} e_{i2} ...` of distinct basis
    /// vectors, returning the permutation sign and the ascending blade.
    pub fn from_sequence(indices: &[usize], dim: usize) -> Result<(i8, Self), GaError> {
        check_dim(dim)?;
        let mut acc = Blade::SCALAR;
        let mut sign = 1i8;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(GaError::IndexOutOfRange { index: i, dim });
            }
            let e = Blade(1u64 << (i - 1));
            if acc.0 & e.0 != 0 {
                return Err(GaError::RepeatedIndex(i));
            }
            let (s, next) = blade_sign_and_index(acc, e);
            sign *= s;
            acc = next;
        }
        Ok((sign, acc))
    }

    /// Pseudoscalar `e_{1..n}`.
    pub fn pseudoscalar(dim: usize) -> Self {
        if dim >= 64 {
            Blade(u64::MAX)
        } else {
            Blade((1u64 << dim) - 1)
        }
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i + 1)
        })
    }

    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=64).contains(&i) && self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Blade) -> Blade {
        Blade(self.0 & other.0)
    }

    pub fn difference(self, other: Blade) -> Blade {
        Blade(self.0 & !other.0)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1u64 << (i - 1)))
    }

    /// Sign `(-1)^{k(k-1)/2}` picked up by reversing a grade-`k` blade.
    pub fn reverse_sign(self) -> i8 {
        let k = self.grade();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All grade-`k` coordinate blades of `G_dim`, in lexicographic order.
    pub fn all_of_grade(dim: usize, k: usize) -> impl Iterator<Item = Blade> {
        use itertools::Itertools;
        (1..=dim).combinations(k).map(|idx| {
            Blade(idx.into_iter().fold(0u64, |acc, i| acc | (1u64 << (i - 1))))
        })
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // the lowest differing index belongs to self
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        if self.max_index() <= 9 {
            f.write_str("e")?;
            for i in self.indices() {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
            write!(f, "e{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of two coordinate blades under the Euclidean metric.
///
/// The sign counts the transpositions that sort the concatenation `a ++ b`;
/// repeated indices then annihilate to `+1`, leaving the symmetric
/// difference.
pub fn blade_sign_and_index(a: Blade, b: Blade) -> (i8, Blade) {
    let mut swaps = 0u32;
    let mut rest = a.0 >> 1;
    // each factor of `b` must pass every factor of `a` with a larger index
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
    (sign, Blade(a.0 ^ b.0))
}

fn check_dim(dim: usize) -> Result<(), GaError> {
    if dim == 0 || dim > MAX_DIM {
        Err(GaError::InvalidDimension(dim))
    } else {
        Ok(())
    }
}

fn signed(q: &Rational, sign: i8) -> Rational {
    if sign < 0 {
        -q
    } else {
        q.clone()
    }
}

/// A sparse element of `G_n` with exact rational coefficients.
///
/// No stored coefficient is zero, so structural equality is algebraic
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Result<Self, GaError> {
        check_dim(dim)?;
        Ok(Multivector {
            dim,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(dim: usize, value: Rational) -> Result<Self, GaError> {
        Self::from_terms(dim, [(Blade::SCALAR, value)])
    }

    pub fn blade(dim: usize, blade: Blade) -> Result<Self, GaError> {
        Self::from_terms(dim, [(blade, Rational::one())])
    }

    /// Coordinate blade from 1-based indices, e.g. `basis(6, &[1, 2, 3])`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self, GaError> {
        let (sign, blade) = Blade::from_sequence(indices, dim)?;
        Self::from_terms(dim, [(blade, Rational::from_integer(sign.into()))])
    }

    /// The vector `sum_i coeffs[i] e_{i+1}`.
    pub fn vector(dim: usize, coeffs: &[Rational]) -> Result<Self, GaError> {
        if coeffs.len() > dim {
            return Err(GaError::IndexOutOfRange {
                index: coeffs.len(),
                dim,
            });
        }
        Self::from_terms(
            dim,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Blade(1u64 << i), c.clone())),
        )
    }

    /// Sums the given terms; duplicate blades accumulate and zeros vanish.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, GaError>
    where
        I: IntoIterator<Item = (Blade, Rational)>,
    {
        let mut out = Self::zero(dim)?;
        let limit = Blade::pseudoscalar(dim);
        for (blade, coeff) in terms {
            if !blade.is_subset_of(limit) {
                return Err(GaError::IndexOutOfRange {
                    index: blade.max_index(),
                    dim,
                });
            }
            out.accumulate(blade, coeff);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Rational)> + '_ {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    /// Stored coefficient at `blade`, zero when absent.
    pub fn coefficient(&self, blade: Blade) -> Rational {
        self.terms.get(&blade).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient recovered as `<B e_J^dagger>_0`, through the geometric
    /// product rather than the term map.
    pub fn coefficient_via_reverse(&self, blade: Blade) -> Result<Rational, GaError> {
        let e = Multivector::blade(self.dim, blade)?;
        Ok(self
            .geometric_product(&e.reverse())?
            .coefficient(Blade::SCALAR))
    }

    /// Scalar part `<A>_0`.
    pub fn scalar_part(&self) -> Rational {
        self.coefficient(Blade::SCALAR)
    }

    fn accumulate(&mut self, blade: Blade, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn same_dim(&self, other: &Multivector) -> Result<(), GaError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(GaError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.same_dim(other)?;
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.accumulate(b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Multivector {
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Multivector {
        if factor.is_zero() {
            return Multivector {
                dim: self.dim,
                terms: BTreeMap::new(),
            };
        }
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c * factor)).collect(),
        }
    }

    /// Bilinear extension of a blade-level product rule; `rule` returns
    /// `None` when a pair of blades contributes nothing.
    fn bilinear<F>(&self, other: &Multivector, rule: F) -> Result<Multivector, GaError>
    where
        F: Fn(Blade, Blade) -> Option<(i8, Blade)>,
    {
        self.same_dim(other)?;
        // sum integer numerators over the common denominator, normalize once
        let (da, ia) = self.integer_terms();
        let (db, ib) = other.integer_terms();
        let mut sums: BTreeMap<Blade, BigInt> = BTreeMap::new();
        for (a, ca) in &ia {
            for (b, cb) in &ib {
                if let Some((sign, blade)) = rule(*a, *b) {
                    let prod = ca * cb;
                    let slot = sums.entry(blade).or_default();
                    if sign < 0 {
                        *slot -= prod;
                    } else {
                        *slot += prod;
                    }
                }
            }
        }
        let denom = da * db;
        Ok(Multivector {
            dim: self.dim,
            terms: sums
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| (b, Rational::new(c, denom.clone())))
                .collect(),
        })
    }

    /// `(d, [(blade, m)])` with `coefficient = m / d` for every term.
    fn integer_terms(&self) -> (BigInt, Vec<(Blade, BigInt)>) {
        let denom = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .terms
            .iter()
            .map(|(b, c)| (*b, c.numer() * (&denom / c.denom())))
            .collect();
        (denom, ints)
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.bilinear(other, |a, b| Some(blade_sign_and_index(a, b)))
    }

    /// `A ^ B`: the grade `s + t` part of each blade product.
    pub fn outer_product(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.bilinear(other, |a, b| {
            (a.0 & b.0 == 0).then(|| blade_sign_and_index(a, b))
        })
    }

    /// `A _| B`: the grade `t - s` part of each blade product, zero when
    /// `s > t`.
    pub fn left_contraction(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.bilinear(other, |a, b| {
            a.is_subset_of(b).then(|| blade_sign_and_index(a, b))
        })
    }

    pub fn reverse(&self) -> Multivector {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, signed(c, b.reverse_sign())))
                .collect(),
        }
    }

    /// `<A>_k`.
    pub fn grade_project(&self, k: usize) -> Multivector {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn grades(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|b| b.grade()).collect()
    }

    /// `Some(k)` when every term has grade `k`; `None` for mixed grades or
    /// for zero, which is homogeneous of every grade.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|b| b.grade());
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    /// Largest coefficient magnitude, handy for diagnostics.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::format_multivector(self))
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}, {})", self.dim, self)
    }
}
