//! Decomposability criteria for `r`-vectors and blade factorization.
//!
//! Every criterion reports a witness on failure: the coordinate
//! `(r-1)`-blade `e_K` and the nonzero multivector whose vanishing the
//! criterion requires, so a verdict can be re-derived from `(B, K)` alone.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ga::{Blade, GaError, Multivector, Rational};
use crate::linalg::{self, Echelon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PluckerError {
    #[error("input is the zero multivector")]
    Zero,
    #[error("input is not homogeneous of grade {expected} (grades {found:?})")]
    NotHomogeneous { expected: usize, found: Vec<usize> },
    #[error("grade {grade} outside 1..={dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("divisor grade {divisor} exceeds grade {grade}")]
    DivisorGradeTooHigh { divisor: usize, grade: usize },
    #[error("not a blade: ({witness}^dagger _| B) ^ B = {residual}")]
    NotABlade { witness: Blade, residual: Multivector },
    #[error("not divisible: K B has grades {0:?}")]
    NotDivisible(Vec<usize>),
    #[error("divisor squares to zero")]
    NullSquare,
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Algebra(#[from] GaError),
}

/// Which requirement a failed check violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `(e_K^dagger _| B) ^ B = 0`.
    PluckerRelation,
    /// `B^2` is a scalar.
    ScalarSquare,
    /// `B v B` is a vector for `v = e_K^dagger _| B`.
    SandwichIsVector,
}

/// Outcome of one blade criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub condition: Option<Condition>,
    pub witness_k: Option<Blade>,
    pub residual: Option<Multivector>,
}

impl CheckReport {
    fn pass() -> Self {
        CheckReport {
            passed: true,
            condition: None,
            witness_k: None,
            residual: None,
        }
    }

    fn fail(condition: Condition, witness_k: Option<Blade>, residual: Multivector) -> Self {
        debug_assert!(!residual.is_zero());
        CheckReport {
            passed: false,
            condition: Some(condition),
            witness_k,
            residual: Some(residual),
        }
    }
}

/// `scale * (vectors[0] ^ ... ^ vectors[r-1]) == B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub scale: Rational,
    pub vectors: Vec<Multivector>,
    pub pivot: Blade,
}

impl Factorization {
    /// Recomputes `scale * (v1 ^ ... ^ vr)`.
    pub fn reconstruct(&self) -> Result<Multivector, GaError> {
        let dim = self.vectors.first().map_or(1, |v| v.dim());
        let wedge = wedge_all(dim, &self.vectors)?;
        Ok(wedge.scale(&self.scale))
    }
}

/// Checks that `b` is a nonzero grade-`r` element and `1 <= r <= n`.
fn require_rvector(b: &Multivector, r: usize) -> Result<(), PluckerError> {
    if r == 0 || r > b.dim() {
        return Err(PluckerError::GradeOutOfRange {
            grade: r,
            dim: b.dim(),
        });
    }
    if b.is_zero() {
        return Err(PluckerError::Zero);
    }
    if !b.is_homogeneous_of(r) {
        return Err(PluckerError::NotHomogeneous {
            expected: r,
            found: b.grades().into_iter().collect(),
        });
    }
    Ok(())
}

fn require_homogeneous(b: &Multivector) -> Result<usize, PluckerError> {
    match b.homogeneous_grade() {
        Some(k) => Ok(k),
        None if b.is_zero() => Ok(0),
        None => Err(PluckerError::NotHomogeneous {
            expected: b.grades().into_iter().next().unwrap_or(0),
            found: b.grades().into_iter().collect(),
        }),
    }
}

fn wedge_all(dim: usize, vectors: &[Multivector]) -> Result<Multivector, GaError> {
    vectors
        .iter()
        .try_fold(Multivector::scalar(dim, Rational::one())?, |acc, v| {
            acc.outer_product(v)
        })
}

/// `e_K^dagger _| B`, the vector of `B` "along" the coordinate blade `e_K`.
///
/// Reversing `e_K` makes `e_K^dagger _| e_{K j} = e_j` for every `j` above
/// `K`, so `e12` contracted into `e123 + e456` yields `e3`.
pub fn contract(k: Blade, b: &Multivector) -> Result<Multivector, GaError> {
    Multivector::blade(b.dim(), k)?.reverse().left_contraction(b)
}

/// `(e_K^dagger _| B) ^ B`.
pub fn plucker_residual(k: Blade, b: &Multivector) -> Result<Multivector, GaError> {
    contract(k, b)?.outer_product(b)
}

/// Coordinate relations `(e_K^dagger _| B) ^ B = 0` over all `(r-1)`-subsets `K`,
/// in lexicographic order; stops at the first failure.
pub fn plucker_check(b: &Multivector, r: usize) -> Result<CheckReport, PluckerError> {
    require_rvector(b, r)?;
    for k in Blade::all_of_grade(b.dim(), r - 1) {
        let residual = plucker_residual(k, b)?;
        if !residual.is_zero() {
            return Ok(CheckReport::fail(
                Condition::PluckerRelation,
                Some(k),
                residual,
            ));
        }
    }
    Ok(CheckReport::pass())
}

/// Every failing relation, for diagnostics.
pub fn plucker_failures(
    b: &Multivector,
    r: usize,
) -> Result<Vec<(Blade, Multivector)>, PluckerError> {
    require_rvector(b, r)?;
    let mut out = Vec::new();
    for k in Blade::all_of_grade(b.dim(), r - 1) {
        let residual = plucker_residual(k, b)?;
        if !residual.is_zero() {
            out.push((k, residual));
        }
    }
    Ok(out)
}

/// `B ^ B` for a bivector; in `G_4` its only coefficient is
/// `2 (B12 B34 - B13 B24 + B14 B23)`.
pub fn wedge_square(b: &Multivector) -> Result<Multivector, PluckerError> {
    if !b.is_homogeneous_of(2) {
        return Err(PluckerError::NotHomogeneous {
            expected: 2,
            found: b.grades().into_iter().collect(),
        });
    }
    Ok(b.outer_product(b)?)
}

/// `B12 B34 - B13 B24 + B14 B23` for a bivector of `G_4`.
pub fn quadratic_plucker_g4(b: &Multivector) -> Result<Rational, PluckerError> {
    if b.dim() != 4 {
        return Err(GaError::DimensionMismatch {
            left: b.dim(),
            right: 4,
        }
        .into());
    }
    let c = |i: usize, j: usize| b.coefficient(Blade::from_indices(&[i, j], 4).expect("valid"));
    Ok(c(1, 2) * c(3, 4) - c(1, 3) * c(2, 4) + c(1, 4) * c(2, 3))
}

/// Geometric-product criterion: `B^2` is a scalar and `B v B` is a vector
/// for every `v = e_K^dagger _| B`.
pub fn nguyen_check(b: &Multivector, r: usize) -> Result<CheckReport, PluckerError> {
    require_rvector(b, r)?;
    let square = b.geometric_product(b)?;
    let excess = square.sub(&square.grade_project(0))?;
    if !excess.is_zero() {
        return Ok(CheckReport::fail(Condition::ScalarSquare, None, excess));
    }
    for k in Blade::all_of_grade(b.dim(), r - 1) {
        let v = contract(k, b)?;
        if v.is_zero() {
            continue;
        }
        let sandwich = b.geometric_product(&v)?.geometric_product(b)?;
        let beyond = sandwich
            .sub(&sandwich.grade_project(1))?
            .sub(&sandwich.grade_project(0))?;
        if !beyond.is_zero() {
            return Ok(CheckReport::fail(
                Condition::SandwichIsVector,
                Some(k),
                beyond,
            ));
        }
    }
    Ok(CheckReport::pass())
}

/// Whether `B^2 = <B^2>_0`.
pub fn square_parity(b: &Multivector) -> Result<bool, PluckerError> {
    require_homogeneous(b)?;
    let square = b.geometric_product(b)?;
    Ok(square.grades().iter().all(|&g| g == 0))
}

/// When `B^2` is not a scalar, finds a failing relation from the
/// expansion of `B^2`: a term pair `(J_m, J_p)` whose overlap `k` has the
/// parity of `r` and `k < r`, and `K` inside `J_m`, trying first `J_m`
/// without its lowest index. Any such `K` meets `J_p` in at most `r - 2`
/// indices.
pub fn parity_witness(b: &Multivector, r: usize) -> Result<Option<Blade>, PluckerError> {
    require_rvector(b, r)?;
    if square_parity(b)? {
        return Ok(None);
    }
    let terms: Vec<Blade> = b.terms().map(|(j, _)| j).collect();
    for (m, &jm) in terms.iter().enumerate() {
        for &jp in &terms[m + 1..] {
            let overlap = jm.intersection(jp).grade();
            if !(r - overlap).is_multiple_of(2) {
                continue;
            }
            for i in jm.indices() {
                let k = jm.without(i);
                debug_assert!(k.intersection(jp).grade() + 2 <= r);
                if !plucker_residual(k, b)?.is_zero() {
                    return Ok(Some(k));
                }
            }
        }
    }
    Err(PluckerError::Verification(
        "non-scalar square without a failing relation".into(),
    ))
}

/// The nonzero vectors `e_K^dagger _| B` over grade-`(r-1)` blades `K`, in
/// lexicographic order of `K`.
pub fn span_set(b: &Multivector, r: usize) -> Result<Vec<(Blade, Multivector)>, PluckerError> {
    require_rvector(b, r)?;
    let mut out = Vec::new();
    for k in Blade::all_of_grade(b.dim(), r - 1) {
        let v = contract(k, b)?;
        if !v.is_zero() {
            out.push((k, v));
        }
    }
    Ok(out)
}

fn vector_coords(v: &Multivector) -> Vec<Rational> {
    (1..=v.dim())
        .map(|i| v.coefficient(Blade::from_bits(1u64 << (i - 1))))
        .collect()
}

/// Rank of [`span_set`].
pub fn span_rank(b: &Multivector, r: usize) -> Result<usize, PluckerError> {
    let rows: Vec<Vec<Rational>> = span_set(b, r)?
        .iter()
        .map(|(_, v)| vector_coords(v))
        .collect();
    Ok(linalg::rank(&rows, b.dim()))
}

/// The rank space `{x : x ^ B = 0}` as `(dimension, basis)`.
pub fn rank_space(b: &Multivector, r: usize) -> Result<(usize, Vec<Multivector>), PluckerError> {
    require_rvector(b, r)?;
    let n = b.dim();
    // column i holds the coefficients of e_i ^ B
    let columns: Vec<Multivector> = (1..=n)
        .map(|i| Multivector::basis(n, &[i])?.outer_product(b))
        .collect::<Result<_, _>>()?;
    let mut equations: Vec<Blade> = columns
        .iter()
        .flat_map(|c| c.terms().map(|(j, _)| j))
        .collect();
    equations.sort();
    equations.dedup();
    let rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|&j| columns.iter().map(|c| c.coefficient(j)).collect())
        .collect();
    let basis = Echelon::from_rational_rows(&rows, n)
        .nullspace()
        .into_iter()
        .map(|x| Multivector::vector(n, &x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((basis.len(), basis))
}

/// Whether the blade `k` divides `b`: `k b` is homogeneous of grade
/// `r - grade(k)`.
pub fn is_divisible(b: &Multivector, k: &Multivector) -> Result<bool, PluckerError> {
    let r = b.homogeneous_grade().ok_or_else(|| {
        if b.is_zero() {
            PluckerError::Zero
        } else {
            PluckerError::NotHomogeneous {
                expected: 0,
                found: b.grades().into_iter().collect(),
            }
        }
    })?;
    if k.is_zero() {
        return Err(PluckerError::Zero);
    }
    let s = k.homogeneous_grade().ok_or_else(|| PluckerError::NotHomogeneous {
        expected: 0,
        found: k.grades().into_iter().collect(),
    })?;
    if s > r {
        return Err(PluckerError::DivisorGradeTooHigh {
            divisor: s,
            grade: r,
        });
    }
    let product = k.geometric_product(b)?;
    Ok(product.is_homogeneous_of(r - s))
}

/// Quotient `Q = (L _| B) / L^2` with `L Q = B`, checked before returning.
pub fn divide(b: &Multivector, l: &Multivector) -> Result<Multivector, PluckerError> {
    if !is_divisible(b, l)? {
        return Err(PluckerError::NotDivisible(
            l.geometric_product(b)?.grades().into_iter().collect(),
        ));
    }
    let square = l.geometric_product(l)?;
    let norm = square.scalar_part();
    if norm.is_zero() || !square.is_homogeneous_of(0) {
        return Err(PluckerError::NullSquare);
    }
    let quotient = l.left_contraction(b)?.scale(&norm.recip());
    if l.geometric_product(&quotient)? != *b {
        return Err(PluckerError::Verification(format!(
            "L Q != B for L = {l}, Q = {quotient}"
        )));
    }
    Ok(quotient)
}

/// Factors a blade as `scale * (v1 ^ ... ^ vr)`.
///
/// The pivot `J` is the first term of `b`; `v_i = e_{J \ j_i} _| B` for the
/// indices `j_i` of `J` in ascending order, and the scale is fixed by
/// comparing coefficients at `J`. Inputs failing [`plucker_check`] are
/// rejected with its witness.
pub fn factorize(b: &Multivector, r: usize) -> Result<Factorization, PluckerError> {
    require_rvector(b, r)?;
    let n = b.dim();
    let (pivot, pivot_coeff) = b
        .terms()
        .next()
        .map(|(j, c)| (j, c.clone()))
        .ok_or(PluckerError::Zero)?;
    if r == 1 {
        return Ok(Factorization {
            scale: Rational::one(),
            vectors: vec![b.clone()],
            pivot,
        });
    }
    if r == n {
        let vectors = (1..=n)
            .map(|i| Multivector::basis(n, &[i]))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Factorization {
            scale: pivot_coeff,
            vectors,
            pivot,
        });
    }
    let report = plucker_check(b, r)?;
    if !report.passed {
        return Err(PluckerError::NotABlade {
            witness: report.witness_k.expect("failed check carries a witness"),
            residual: report.residual.expect("failed check carries a residual"),
        });
    }
    let vectors = pivot
        .indices()
        .map(|j| contract(pivot.without(j), b))
        .collect::<Result<Vec<_>, _>>()?;
    let wedge = wedge_all(n, &vectors)?;
    let wedge_coeff = wedge.coefficient(pivot);
    if wedge_coeff.is_zero() {
        return Err(PluckerError::Verification(format!(
            "pivot {pivot} vanishes in the wedge of contractions"
        )));
    }
    let scale = pivot_coeff / wedge_coeff;
    if wedge.scale(&scale) != *b {
        return Err(PluckerError::Verification(format!(
            "reconstruction differs from input {b}"
        )));
    }
    Ok(Factorization {
        scale,
        vectors,
        pivot,
    })
}

/// First nonzero `B v B - (-1)^{r+1} (B . B) v` over `v = e_K^dagger _| B` in
/// lexicographic order of `K`, or zero.
pub fn blade_vb_identity_residual(b: &Multivector, r: usize) -> Result<Multivector, PluckerError> {
    require_rvector(b, r)?;
    let norm = b.geometric_product(b)?.scalar_part();
    let sign = if r % 2 == 1 { 1 } else { -1 };
    let factor = norm * Rational::from_integer(BigInt::from(sign));
    for k in Blade::all_of_grade(b.dim(), r - 1) {
        let v = contract(k, b)?;
        if v.is_zero() {
            continue;
        }
        let sandwich = b.geometric_product(&v)?.geometric_product(b)?;
        let residual = sandwich.sub(&v.scale(&factor))?;
        if !residual.is_zero() {
            return Ok(residual);
        }
    }
    Ok(Multivector::zero(b.dim())?)
}
