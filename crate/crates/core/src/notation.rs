//! Text notation for multivectors: `3/2 e{10,12} - e12 + 2`.
//!
//! ```text
//! expression := term (('+' | '-') term)*      (leading sign allowed)
//! term       := [rational] [blade]            (at least one present)
//! rational   := integer | integer '/' integer
//! blade      := 'e' digit+                    (n <= 9, one digit per index)
//!             | 'e{' index (',' index)* '}'   (any n)
//! ```
//!
//! Indices written out of order are sorted with the transposition sign
//! applied, so `e21` reads as `-e12`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ga::{Blade, GaError, Multivector, Rational, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    InvalidDimension(usize),
    #[error("at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("at byte {offset}: index {index} outside 1..={dim}")]
    IndexOutOfRange {
        offset: usize,
        index: usize,
        dim: usize,
    },
    #[error("at byte {offset}: index {index} repeated within one blade")]
    RepeatedIndex { offset: usize, index: usize },
    #[error("at byte {offset}: compact blade notation needs n <= 9, use e{{..}} for n = {dim}")]
    CompactNotationUnavailable { offset: usize, dim: usize },
    #[error("at byte {offset}: zero denominator")]
    ZeroDenominator { offset: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            // ASCII digits are valid UTF-8
            (start, std::str::from_utf8(&self.src[start..self.pos]).unwrap())
        })
    }

    fn rational(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some((_, num)) = self.digits() else {
            return Ok(None);
        };
        let numer: BigInt = num.parse().expect("digit string");
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let Some((_, den)) = self.digits() else {
                return Err(self.syntax("expected denominator after '/'"));
            };
            let denom: BigInt = den.parse().expect("digit string");
            if denom.is_zero() {
                return Err(ParseError::ZeroDenominator { offset: at });
            }
            Ok(Some(Rational::new(numer, denom)))
        } else {
            self.pos = save;
            Ok(Some(Rational::from_integer(numer)))
        }
    }

    fn index(&self, text: &str, offset: usize) -> Result<usize, ParseError> {
        let index: usize = text.parse().map_err(|_| ParseError::IndexOutOfRange {
            offset,
            index: usize::MAX,
            dim: self.dim,
        })?;
        if index == 0 || index > self.dim {
            return Err(ParseError::IndexOutOfRange {
                offset,
                index,
                dim: self.dim,
            });
        }
        Ok(index)
    }

    /// Parses the part after 'e'; returns the ordering sign and blade.
    fn blade(&mut self) -> Result<(i8, Blade), ParseError> {
        let mut seq: Vec<(usize, usize)> = Vec::new();
        if self.peek() == Some(b'{') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(b'}') {
                self.pos += 1;
                return Ok((1, Blade::SCALAR));
            }
            loop {
                self.skip_ws();
                let Some((at, text)) = self.digits() else {
                    return Err(self.syntax("expected index"));
                };
                seq.push((at, self.index(text, at)?));
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.syntax("expected ',' or '}'")),
                }
            }
        } else {
            let start = self.pos;
            let Some((_, text)) = self.digits() else {
                return Err(self.syntax("expected blade indices after 'e'"));
            };
            if self.dim > 9 {
                return Err(ParseError::CompactNotationUnavailable {
                    offset: start,
                    dim: self.dim,
                });
            }
            for (k, ch) in text.char_indices() {
                let at = start + k;
                seq.push((at, self.index(&ch.to_string(), at)?));
            }
        }
        let indices: Vec<usize> = seq.iter().map(|&(_, i)| i).collect();
        Blade::from_sequence(&indices, self.dim).map_err(|e| match e {
            GaError::RepeatedIndex(index) => {
                let offset = seq
                    .iter()
                    .filter(|&&(_, i)| i == index)
                    .nth(1)
                    .map_or(self.pos, |&(at, _)| at);
                ParseError::RepeatedIndex { offset, index }
            }
            other => self.syntax(other.to_string()),
        })
    }

    fn term(&mut self) -> Result<(Rational, Blade), ParseError> {
        self.skip_ws();
        let coeff = self.rational()?;
        self.skip_ws();
        if self.peek() == Some(b'e') {
            self.pos += 1;
            let (sign, blade) = self.blade()?;
            let c = coeff.unwrap_or_else(Rational::one);
            Ok((if sign < 0 { -c } else { c }, blade))
        } else if let Some(c) = coeff {
            Ok((c, Blade::SCALAR))
        } else {
            Err(self.syntax("expected coefficient or blade"))
        }
    }

    fn expression(&mut self) -> Result<Multivector, ParseError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (c, b) = self.term()?;
            terms.push((b, if negate { -c } else { c }));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.syntax("expected '+', '-' or end of input")),
            }
            self.pos += 1;
        }
        Multivector::from_terms(self.dim, terms).map_err(|e| self.syntax(e.to_string()))
    }
}

/// Parses `text` as an element of `G_dim`.
pub fn parse_multivector(text: &str, dim: usize) -> Result<Multivector, ParseError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(ParseError::InvalidDimension(dim));
    }
    Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    }
    .expression()
}

/// Writes a blade the way [`parse_multivector`] reads it in `G_dim`.
pub fn format_blade(blade: Blade, dim: usize) -> String {
    if blade == Blade::SCALAR {
        return "1".to_owned();
    }
    if dim <= 9 {
        let digits: String = blade.indices().map(|i| i.to_string()).collect();
        format!("e{digits}")
    } else {
        let parts: Vec<String> = blade.indices().map(|i| i.to_string()).collect();
        format!("e{{{}}}", parts.join(","))
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: terms in blade order, reduced rationals, unit
/// coefficients elided, `0` for zero.
pub fn format_multivector(b: &Multivector) -> String {
    if b.is_zero() {
        return "0".to_owned();
    }
    let mut out = String::new();
    for (i, (blade, coeff)) in b.terms().enumerate() {
        let negative = coeff.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = coeff.abs();
        if blade == Blade::SCALAR {
            out.push_str(&format_rational(&magnitude));
        } else {
            if !magnitude.is_one() {
                out.push_str(&format_rational(&magnitude));
                if !magnitude.is_integer() {
                    out.push(' ');
                }
            }
            out.push_str(&format_blade(blade, b.dim()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_paper_style_sums() {
        let b = parse_multivector("e123 + e456", 6).unwrap();
        let expected = Multivector::basis(6, &[1, 2, 3])
            .unwrap()
            .add(&Multivector::basis(6, &[4, 5, 6]).unwrap())
            .unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn out_of_order_indices_pick_up_sign() {
        let b = parse_multivector("e21", 4).unwrap();
        assert_eq!(b, Multivector::basis(4, &[1, 2]).unwrap().neg());
    }

    #[test]
    fn braces_and_fractions() {
        let b = parse_multivector("3/2 e{10,12} - e{1,2}", 12).unwrap();
        let e = |i: &[usize]| Blade::from_indices(i, 12).unwrap();
        assert_eq!(b.coefficient(e(&[10, 12])), q(3, 2));
        assert_eq!(b.coefficient(e(&[1, 2])), q(-1, 1));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn scalars_and_signs() {
        let b = parse_multivector("-2 + 2e1234", 4).unwrap();
        assert_eq!(b.scalar_part(), q(-2, 1));
        assert!(parse_multivector("0", 3).unwrap().is_zero());
        assert_eq!(parse_multivector("-e12", 3).unwrap().to_string(), "-e12");
        assert_eq!(parse_multivector("6/4", 3).unwrap().scalar_part(), q(3, 2));
    }

    #[test]
    fn error_offsets() {
        assert_eq!(
            parse_multivector("e15", 4),
            Err(ParseError::IndexOutOfRange {
                offset: 2,
                index: 5,
                dim: 4
            })
        );
        assert_eq!(
            parse_multivector("e1 + e121", 4),
            Err(ParseError::RepeatedIndex { offset: 8, index: 1 })
        );
        assert!(matches!(
            parse_multivector("e12 +", 4),
            Err(ParseError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_multivector("e12 e3", 4),
            Err(ParseError::Syntax { offset: 4, .. })
        ));
        assert_eq!(
            parse_multivector("e12", 10),
            Err(ParseError::CompactNotationUnavailable { offset: 1, dim: 10 })
        );
        assert_eq!(
            parse_multivector("1/0 e1", 4),
            Err(ParseError::ZeroDenominator { offset: 2 })
        );
        assert_eq!(parse_multivector("e1", 0), Err(ParseError::InvalidDimension(0)));
    }

    #[test]
    fn formatting_is_canonical() {
        assert_eq!(format_multivector(&Multivector::zero(3).unwrap()), "0");
        assert_eq!(
            format_multivector(&Multivector::basis(4, &[1, 2]).unwrap().neg()),
            "-e12"
        );
        let b = parse_multivector("2e124 + e123", 5).unwrap();
        assert_eq!(format_multivector(&b), "e123 + 2e124");
        let c = parse_multivector("3/2 e{10,12} - e{1,2}", 12).unwrap();
        assert_eq!(format_multivector(&c), "-e{1,2} + 3/2 e{10,12}");
        let d = parse_multivector("2e1234 - 2", 4).unwrap();
        assert_eq!(format_multivector(&d), "-2 + 2e1234");
    }
}
