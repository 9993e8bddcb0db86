//! Hand-written recursive-descent parser for univariate integer polynomials.
//!
//! ```text
//! poly    := term (('+'|'-') term)*
//! term    := '-'? ( integer '*'? var | integer | var )
//! var     := 'x' ('^' natural)?
//! integer := digit+
//! ```
//!
//! Whitespace between tokens is ignored. A bracketed list `[a_k, ..., a_1, a_0]`
//! (highest degree first) is accepted as an alternative form.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str) -> Result<IntPolynomial> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    parser.skip_ws();
    let poly = if parser.peek() == Some(b'[') { parser.coefficient_list()? } else { parser.sum()? };
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.error(format!("unexpected character '{}'", c as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn sum(&mut self) -> Result<IntPolynomial> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let add = |coeffs: &mut Vec<BigInt>, (c, e): (BigInt, usize)| {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        };
        let first = self.term()?;
        add(&mut coeffs, first);
        loop {
            let negate = if self.eat(b'+') {
                false
            } else if self.eat(b'-') {
                true
            } else {
                break;
            };
            let (c, e) = self.term()?;
            add(&mut coeffs, (if negate { -c } else { c }, e));
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// One monomial as (coefficient, exponent).
    fn term(&mut self) -> Result<(BigInt, usize)> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let (coeff, exponent) = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let starred = self.eat(b'*');
                self.skip_ws();
                if self.peek() == Some(b'x') {
                    (n, self.var()?)
                } else if starred {
                    return Err(self.error("expected 'x' after '*'"));
                } else {
                    (n, 0)
                }
            }
            Some(b'x') => (BigInt::one(), self.var()?),
            Some(c) => return Err(self.error(format!("expected a term, found '{}'", c as char))),
            None => return Err(self.error("expected a term, found end of input")),
        };
        Ok((if negative { -coeff } else { coeff }, exponent))
    }

    fn var(&mut self) -> Result<usize> {
        debug_assert_eq!(self.peek(), Some(b'x'));
        self.pos += 1;
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an exponent after '^'"));
        }
        digits
            .parse::<usize>()
            .map_err(|_| Error::Parse { position: start, message: format!("exponent {digits} is too large") })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn integer(&mut self) -> Result<BigInt> {
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn signed_integer(&mut self) -> Result<BigInt> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let n = self.integer()?;
        Ok(if negative { -n } else { n })
    }

    fn coefficient_list(&mut self) -> Result<IntPolynomial> {
        assert!(self.eat(b'['));
        let mut descending = Vec::new();
        if !self.eat(b']') {
            loop {
                descending.push(self.signed_integer()?);
                if self.eat(b']') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(self.error("expected ',' or ']'"));
                }
            }
        }
        descending.reverse();
        Ok(IntPolynomial::new(descending))
    }
}
