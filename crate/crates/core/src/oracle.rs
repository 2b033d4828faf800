//! Independent blade oracle and seeded equivalence sweeps.
//!
//! The oracle decides blade-ness from the dimension of the rank space
//! `{x : x ^ B = 0}` using its own rational elimination, touching nothing in
//! [`crate::plucker`] except through the shared `ga` products.
//!
//! # Generator
//!
//! Trial `t` of a run with seed `s` draws from PCG-XSH-RR 64/32
//! (`Pcg32::new(s, t)`), so every trial replays on its own. Integers in
//! `[lo, hi]` are drawn by rejection: with `span = hi - lo + 1`, take
//! `x = next_u32()` until `x < 2^32 - (2^32 mod span)` and return
//! `lo + x mod span`. A coin flip is the top bit of `next_u32()`.
//! Rationals are `p / q` with `p` in `[-bound, bound]` then `q` in
//! `[1, bound]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand_core::Rng;
use rand_pcg::Pcg32;
use serde::Serialize;
use thiserror::Error;

use crate::ga::{Blade, Multivector, Rational};
use crate::notation::format_multivector;
use crate::plucker::{self, PluckerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid trial configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Plucker(#[from] PluckerError),
}

/// Dimension of `{x : x ^ B = 0}`.
pub fn rank_space_dimension(b: &Multivector) -> Result<usize, OracleError> {
    let n = b.dim();
    let images: Vec<Multivector> = (1..=n)
        .map(|i| {
            Multivector::basis(n, &[i])
                .and_then(|e| e.outer_product(b))
                .map_err(PluckerError::from)
        })
        .collect::<Result<_, _>>()?;
    let mut rows: Vec<Blade> = images.iter().flat_map(|m| m.terms().map(|(j, _)| j)).collect();
    rows.sort();
    rows.dedup();
    let mut matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&j| images.iter().map(|m| m.coefficient(j)).collect())
        .collect();
    Ok(n - gauss_jordan_rank(&mut matrix, n))
}

/// Plain Gauss-Jordan over the rationals.
fn gauss_jordan_rank(m: &mut [Vec<Rational>], cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A nonzero `r`-vector is an `r`-blade iff its rank space has dimension `r`.
pub fn blade_oracle(b: &Multivector, r: usize) -> Result<bool, OracleError> {
    if b.is_zero() {
        return Err(PluckerError::Zero.into());
    }
    if r == 0 || r > b.dim() {
        return Err(PluckerError::GradeOutOfRange {
            grade: r,
            dim: b.dim(),
        }
        .into());
    }
    if !b.is_homogeneous_of(r) {
        return Err(PluckerError::NotHomogeneous {
            expected: r,
            found: b.grades().into_iter().collect(),
        }
        .into());
    }
    Ok(rank_space_dimension(b)? == r)
}

fn draw_int(rng: &mut Pcg32, lo: i64, hi: i64) -> i64 {
    debug_assert!(lo <= hi && hi - lo < u32::MAX as i64);
    let span = (hi - lo + 1) as u64;
    let limit = (1u64 << 32) - (1u64 << 32) % span;
    loop {
        let x = rng.next_u32() as u64;
        if x < limit {
            return lo + (x % span) as i64;
        }
    }
}

fn coin(rng: &mut Pcg32) -> bool {
    rng.next_u32() >> 31 == 1
}

fn draw_rational(rng: &mut Pcg32, bound: u32) -> Rational {
    let b = i64::from(bound.max(1));
    let num = draw_int(rng, -b, b);
    let den = draw_int(rng, 1, b);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonzero vector with coefficients drawn from `rng`.
pub fn random_vector(n: usize, bound: u32, rng: &mut Pcg32) -> Multivector {
    loop {
        let coeffs: Vec<Rational> = (0..n).map(|_| draw_rational(rng, bound)).collect();
        let v = Multivector::vector(n, &coeffs).expect("n within supported range");
        if !v.is_zero() {
            return v;
        }
    }
}

/// Outer product of `r` random vectors; nonzero, hence an `r`-blade.
pub fn random_blade(n: usize, r: usize, bound: u32, rng: &mut Pcg32) -> Multivector {
    loop {
        let mut acc = Multivector::scalar(n, Rational::one()).expect("n within supported range");
        for _ in 0..r {
            let v = random_vector(n, bound, rng);
            acc = acc.outer_product(&v).expect("same dimension");
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// Sparse random `r`-vector: each coordinate blade enters with probability
/// one half.
pub fn random_rvector(n: usize, r: usize, bound: u32, rng: &mut Pcg32) -> Multivector {
    loop {
        let mut terms = Vec::new();
        for j in Blade::all_of_grade(n, r) {
            if coin(rng) {
                terms.push((j, draw_rational(rng, bound)));
            }
        }
        let b = Multivector::from_terms(n, terms).expect("n within supported range");
        if !b.is_zero() {
            return b;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    pub bound: u32,
}

impl TrialConfig {
    pub fn new(n: usize, r: usize, trials: usize, seed: u64) -> Self {
        TrialConfig {
            n,
            r,
            trials,
            seed,
            bound: 5,
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(1 <= self.r && self.r <= self.n && self.n <= 12) {
            return Err(OracleError::InvalidConfig(format!(
                "need 1 <= r <= n <= 12, got n = {}, r = {}",
                self.n, self.r
            )));
        }
        if self.trials == 0 {
            return Err(OracleError::InvalidConfig("trial count must be positive".into()));
        }
        if self.bound == 0 {
            return Err(OracleError::InvalidConfig("coefficient bound must be positive".into()));
        }
        Ok(())
    }

    /// Generator for trial `index`.
    pub fn rng(&self, index: usize) -> Pcg32 {
        Pcg32::new(self.seed, index as u64)
    }
}

/// Every criterion's output on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub oracle: bool,
    pub plucker: bool,
    pub nguyen: bool,
    pub span_rank: usize,
    pub span_rank_is_r: bool,
    pub rank_space_dim: usize,
    /// `B12 B34 - B13 B24 + B14 B23 == 0`, only for `n = 4`, `r = 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wedge_square_zero: Option<bool>,
    pub square_parity: bool,
    pub plucker_witness: Option<String>,
    pub plucker_residual: Option<String>,
}

impl Verdicts {
    pub fn evaluate(b: &Multivector, r: usize) -> Result<Self, OracleError> {
        let n = b.dim();
        let oracle = blade_oracle(b, r)?;
        let plucker_report = plucker::plucker_check(b, r)?;
        let nguyen = plucker::nguyen_check(b, r)?.passed;
        let span_rank = plucker::span_rank(b, r)?;
        let rank_space_dim = plucker::rank_space(b, r)?.0;
        let (quadratic_zero, wedge_square_zero) = if n == 4 && r == 2 {
            (
                Some(plucker::quadratic_plucker_g4(b)?.is_zero()),
                Some(plucker::wedge_square(b)?.is_zero()),
            )
        } else {
            (None, None)
        };
        Ok(Verdicts {
            oracle,
            plucker: plucker_report.passed,
            nguyen,
            span_rank,
            span_rank_is_r: span_rank == r,
            rank_space_dim,
            quadratic_zero,
            wedge_square_zero,
            square_parity: plucker::square_parity(b)?,
            plucker_witness: plucker_report
                .witness_k
                .map(|k| crate::notation::format_blade(k, n)),
            plucker_residual: plucker_report.residual.as_ref().map(format_multivector),
        })
    }

    /// All blade criteria give the same answer.
    pub fn agree(&self, r: usize) -> bool {
        let o = self.oracle;
        self.plucker == o
            && self.nguyen == o
            && self.span_rank_is_r == o
            && (self.rank_space_dim == r) == o
            && self.quadratic_zero.is_none_or(|q| q == o)
            && self.wedge_square_zero.is_none_or(|w| w == o)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub trial: usize,
    /// `"blade"` or `"rvector"`.
    pub source: &'static str,
    pub input: String,
    pub reason: String,
    pub verdicts: Option<Verdicts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub config: TrialConfig,
    pub trials_run: usize,
    pub instances: usize,
    pub agreements: usize,
    pub blades: usize,
    pub quadratic_checks: usize,
    /// Instances whose square is not a scalar.
    pub parity_false: usize,
    /// Parity-false instances lacking a failing relation or witness.
    pub parity_violations: usize,
    pub identity_checks: usize,
    pub identity_violations: usize,
    pub lemma2_violations: usize,
    pub first_disagreement: Option<Disagreement>,
}

impl TrialReport {
    /// No disagreement of any kind.
    pub fn is_clean(&self) -> bool {
        self.agreements == self.instances
            && self.parity_violations == 0
            && self.identity_violations == 0
            && self.lemma2_violations == 0
            && self.first_disagreement.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `key: value` lines for terminals.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut lines = vec![
            format!("n: {}", c.n),
            format!("r: {}", c.r),
            format!("seed: {}", c.seed),
            format!("bound: {}", c.bound),
            format!("trials: {}", self.trials_run),
            format!("instances: {}", self.instances),
            format!("agreements: {}", self.agreements),
            format!("blades: {}", self.blades),
        ];
        if c.n == 4 && c.r == 2 {
            lines.push(format!("quadratic_checks: {}", self.quadratic_checks));
        }
        lines.extend([
            format!("parity_false: {}", self.parity_false),
            format!("parity_violations: {}", self.parity_violations),
            format!("identity_checks: {}", self.identity_checks),
            format!("identity_violations: {}", self.identity_violations),
            format!("lemma2_violations: {}", self.lemma2_violations),
        ]);
        match &self.first_disagreement {
            None => lines.push("verdict: agreement".into()),
            Some(d) => {
                lines.push("verdict: DISAGREEMENT".into());
                lines.push(format!("disagreement_trial: {}", d.trial));
                lines.push(format!("disagreement_source: {}", d.source));
                lines.push(format!("disagreement_input: {}", d.input));
                lines.push(format!("disagreement_reason: {}", d.reason));
                if let Some(v) = &d.verdicts {
                    lines.push(format!(
                        "disagreement_verdicts: {}",
                        serde_json::to_string(v).expect("verdicts serialize")
                    ));
                }
            }
        }
        lines.join("\n")
    }
}

/// Secondary properties checked on each instance: parity necessity, the
/// sandwich identity and the span-rank bounds. Returns a failure reason.
fn side_checks(
    b: &Multivector,
    r: usize,
    v: &Verdicts,
    report: &mut TrialReport,
) -> Result<Option<String>, OracleError> {
    let n = b.dim();
    let mut reason = None;
    if !(r <= v.span_rank && v.span_rank <= n) {
        report.lemma2_violations += 1;
        reason = Some(format!("span rank {} outside [{r}, {n}]", v.span_rank));
    }
    if !v.square_parity {
        report.parity_false += 1;
        let witness_ok = match plucker::parity_witness(b, r) {
            Ok(Some(k)) => !plucker::plucker_residual(k, b)
                .map_err(PluckerError::from)?
                .is_zero(),
            Ok(None) | Err(PluckerError::Verification(_)) => false,
            Err(e) => return Err(e.into()),
        };
        if v.plucker || !witness_ok {
            report.parity_violations += 1;
            reason.get_or_insert_with(|| "non-scalar square without parity witness".into());
        }
    }
    if v.plucker {
        report.identity_checks += 1;
        if !plucker::blade_vb_identity_residual(b, r)?.is_zero() {
            report.identity_violations += 1;
            reason.get_or_insert_with(|| "B v B identity fails on a blade".into());
        }
    }
    Ok(reason)
}

fn check_instance(
    trial: usize,
    source: &'static str,
    b: &Multivector,
    r: usize,
    report: &mut TrialReport,
) {
    report.instances += 1;
    let outcome = Verdicts::evaluate(b, r).and_then(|v| {
        let side = side_checks(b, r, &v, report)?;
        Ok((v, side))
    });
    let failure = match outcome {
        Ok((v, side)) => {
            if v.oracle {
                report.blades += 1;
            }
            if v.quadratic_zero.is_some() {
                report.quadratic_checks += 1;
            }
            let agree = v.agree(r);
            if agree {
                report.agreements += 1;
            }
            match (agree, side) {
                (true, None) => None,
                (false, _) => Some(("criteria disagree".to_owned(), Some(v))),
                (true, Some(reason)) => Some((reason, Some(v))),
            }
        }
        Err(e) => Some((format!("evaluation error: {e}"), None)),
    };
    if let Some((reason, verdicts)) = failure {
        report.first_disagreement.get_or_insert(Disagreement {
            trial,
            source,
            input: format_multivector(b),
            reason,
            verdicts,
        });
    }
}

/// Runs `cfg.trials` trials, each checking one random blade and one random
/// sparse `r`-vector against every criterion.
pub fn run_equivalence_trials(cfg: &TrialConfig) -> Result<TrialReport, OracleError> {
    cfg.validate()?;
    let mut report = TrialReport {
        config: *cfg,
        trials_run: 0,
        instances: 0,
        agreements: 0,
        blades: 0,
        quadratic_checks: 0,
        parity_false: 0,
        parity_violations: 0,
        identity_checks: 0,
        identity_violations: 0,
        lemma2_violations: 0,
        first_disagreement: None,
    };
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let blade = random_blade(cfg.n, cfg.r, cfg.bound, &mut rng);
        let candidate = random_rvector(cfg.n, cfg.r, cfg.bound, &mut rng);
        check_instance(trial, "blade", &blade, cfg.r, &mut report);
        check_instance(trial, "rvector", &candidate, cfg.r, &mut report);
        report.trials_run += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_multivector;

    fn p(s: &str, n: usize) -> Multivector {
        parse_multivector(s, n).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert!(!blade_oracle(&p("e123 + e456", 6), 3).unwrap());
        assert!(blade_oracle(&p("e123", 6), 3).unwrap());
        assert!(blade_oracle(&p("e125 + e234 + 2e124 + e235 + e123 + e245", 5), 3).unwrap());
        assert!(blade_oracle(&Multivector::zero(3).unwrap(), 1).is_err());
    }

    #[test]
    fn draws_are_deterministic() {
        let cfg = TrialConfig::new(5, 2, 1, 42);
        let a = random_vector(5, 5, &mut cfg.rng(0));
        let b = random_vector(5, 5, &mut cfg.rng(0));
        assert_eq!(a, b);
        assert!(!a.is_zero() && a.is_homogeneous_of(1));
        let c = random_rvector(6, 3, 5, &mut cfg.rng(3));
        assert_eq!(c, random_rvector(6, 3, 5, &mut cfg.rng(3)));
        assert!(c.is_homogeneous_of(3) && !c.is_zero());
        assert_eq!(c.dim(), 6);
    }

    #[test]
    fn draw_int_stays_in_range() {
        let mut rng = Pcg32::new(9, 0);
        for _ in 0..2000 {
            let x = draw_int(&mut rng, -3, 3);
            assert!((-3..=3).contains(&x));
        }
    }

    #[test]
    fn random_blades_are_blades() {
        let cfg = TrialConfig::new(6, 3, 1, 5);
        for t in 0..10 {
            let b = random_blade(6, 3, 5, &mut cfg.rng(t));
            assert!(blade_oracle(&b, 3).unwrap());
        }
        let b = random_blade(4, 2, 5, &mut cfg.rng(0));
        assert!(plucker::wedge_square(&b).unwrap().is_zero());
        let top = random_blade(4, 4, 5, &mut cfg.rng(1));
        assert_eq!(top.len(), 1);
        assert_eq!(top.terms().next().unwrap().0, Blade::pseudoscalar(4));
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::new(3, 4, 1, 0).validate().is_err());
        assert!(TrialConfig::new(13, 2, 1, 0).validate().is_err());
        assert!(TrialConfig::new(4, 2, 0, 0).validate().is_err());
        assert!(TrialConfig::new(4, 0, 1, 0).validate().is_err());
        assert!(TrialConfig::new(4, 2, 1, 0).validate().is_ok());
    }

    #[test]
    fn small_sweeps_agree() {
        let report = run_equivalence_trials(&TrialConfig::new(6, 3, 20, 1)).unwrap();
        assert_eq!(report.instances, 40);
        assert!(report.is_clean(), "{}", report.to_text());

        let report = run_equivalence_trials(&TrialConfig::new(3, 3, 10, 0)).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.blades, 20);

        let report = run_equivalence_trials(&TrialConfig::new(4, 2, 30, 7)).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.quadratic_checks, 60);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = TrialConfig::new(5, 3, 8, 11);
        let a = run_equivalence_trials(&cfg).unwrap().to_json();
        let b = run_equivalence_trials(&cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}
