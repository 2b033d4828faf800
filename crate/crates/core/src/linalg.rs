//! Fraction-free Gaussian elimination over the integers.
//!
//! Rational input rows are cleared of denominators, then reduced with
//! Bareiss' one-step scheme: every intermediate entry is a minor of the
//! scaled input, so each division is exact and no fractions appear until
//! back substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ga::Rational;

/// Row echelon form of an integer matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    /// Nonzero rows only, each with its leading entry at `pivots[i]`.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces a matrix given as rational rows of length `cols`.
    pub fn from_rational_rows(rows: &[Vec<Rational>], cols: usize) -> Self {
        let int_rows = rows.iter().map(|row| clear_denominators(row, cols)).collect();
        Self::from_integer_rows(int_rows, cols)
    }

    pub fn from_integer_rows(mut m: Vec<Vec<BigInt>>, cols: usize) -> Self {
        debug_assert!(m.iter().all(|r| r.len() == cols));
        let nrows = m.len();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut k = 0;
        for c in 0..cols {
            if k == nrows {
                break;
            }
            let Some(p) = (k..nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(k, p);
            for i in k + 1..nrows {
                for j in c + 1..cols {
                    let num = &m[k][c] * &m[i][j] - &m[i][c] * &m[k][j];
                    let (quot, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[i][j] = quot;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[k][c].clone();
            pivots.push(c);
            k += 1;
        }
        m.truncate(k);
        Echelon {
            cols,
            rows: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// A basis of `{x : M x = 0}`, one vector per free column, with the free
    /// variable set to 1.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots).rev() {
                    let mut acc = Rational::zero();
                    for (j, xj) in x.iter().enumerate().skip(pc + 1) {
                        if !row[j].is_zero() && !xj.is_zero() {
                            acc += Rational::from_integer(row[j].clone()) * xj;
                        }
                    }
                    x[pc] = -acc / Rational::from_integer(row[pc].clone());
                }
                x
            })
            .collect()
    }
}

/// Scales a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Rational], cols: usize) -> Vec<BigInt> {
    debug_assert_eq!(row.len(), cols);
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    Echelon::from_rational_rows(rows, cols).rank()
}

pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    Echelon::from_rational_rows(rows, cols).nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| q(v, 1)).collect())
            .collect()
    }

    fn apply(rows: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&mat(&[&[1, 2], &[3, 4]]), 2), 2);
        assert_eq!(rank(&mat(&[&[0, 0, 0]]), 3), 0);
        assert_eq!(rank(&[], 4), 0);
        assert_eq!(rank(&mat(&[&[0, 1, 1], &[0, 2, 2], &[1, 0, 0]]), 3), 2);
    }

    #[test]
    fn fractions_are_cleared() {
        let rows = vec![vec![q(1, 2), q(1, 3)], vec![q(3, 2), q(1, 1)]];
        assert_eq!(rank(&rows, 2), 1);
        let ns = nullspace(&rows, 2);
        assert_eq!(ns, vec![vec![q(-2, 3), q(1, 1)]]);
    }

    #[test]
    fn nullspace_of_empty_system_is_identity() {
        let ns = nullspace(&[], 3);
        assert_eq!(ns.len(), 3);
        assert_eq!(ns[1], vec![q(0, 1), q(1, 1), q(0, 1)]);
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(
            entries in prop::collection::vec(-4i64..=4, 20),
            rows in 1usize..=4,
        ) {
            let cols = 5;
            let m: Vec<Vec<Rational>> = entries
                .chunks(cols)
                .take(rows)
                .map(|r| r.iter().map(|&v| q(v, 1)).collect())
                .collect();
            let ech = Echelon::from_rational_rows(&m, cols);
            let ns = ech.nullspace();
            prop_assert_eq!(ech.rank() + ns.len(), cols);
            for x in &ns {
                prop_assert!(apply(&m, x).iter().all(|v| v.is_zero()));
            }
            // kernel vectors are independent
            prop_assert_eq!(rank(&ns, cols), ns.len());
        }
    }
}
