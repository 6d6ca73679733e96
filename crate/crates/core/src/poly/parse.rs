//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! poly   = [sign] term { sign term }
//! term   = factor { "*" factor }
//! factor = atom [ "^" digits ]
//! atom   = number | "x" digits | "(" poly ")"
//! number = digits [ "." digits ] [ "/" digits ]
//! ```
//!
//! Variables are 1-based (`x1` … `xn`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// Parses `text` as a polynomial in `n` variables. Columns in errors are
/// 1-based offsets into `text` plus `column_offset`.
pub fn parse_polynomial_at(text: &str, n: usize, line: usize, column_offset: usize) -> Result<Polynomial> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0, n, line, column_offset };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("expected a polynomial"));
    }
    let p = parser.poly()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error(&format!("unexpected character {:?}", parser.chars[parser.pos])));
    }
    Ok(p)
}

pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial> {
    parse_polynomial_at(text, n, 1, 0)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
    line: usize,
    column_offset: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column_offset + self.pos + 1,
            message: message.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn poly(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut negate = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            negate = c == '-';
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected an exponent after '^'"));
            }
            let e: u32 = digits.parse().map_err(|_| {
                Error::Parse {
                    line: self.line,
                    column: self.column_offset + start + 1,
                    message: format!("exponent {digits} is too large"),
                }
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(self.error("expected a variable index after 'x'"));
                }
                let index: usize = digits.parse().unwrap_or(usize::MAX);
                if index == 0 || index > self.n {
                    return Err(Error::Parse {
                        line: self.line,
                        column: self.column_offset + start + 1,
                        message: format!("variable x{digits} out of range (vars: {})", self.n),
                    });
                }
                Ok(Polynomial::var(self.n, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let mut literal = self.digits();
                if self.peek() == Some('.') {
                    self.pos += 1;
                    let frac = self.digits();
                    if frac.is_empty() {
                        return Err(self.error("expected digits after '.'"));
                    }
                    literal = format!("{literal}.{frac}");
                }
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.error("expected a denominator after '/'"));
                    }
                    if den.parse::<BigInt>().map(|d| d.is_zero()).unwrap_or(true) {
                        return Err(Error::Parse {
                            line: self.line,
                            column: self.column_offset + start + 1,
                            message: "zero denominator".into(),
                        });
                    }
                    let value = parse_rational(&literal).map_err(|_| self.error("bad number"))?
                        / Rational::from_integer(den.parse().unwrap_or_else(|_| BigInt::one()));
                    return Ok(Polynomial::constant(self.n, value));
                }
                let value = parse_rational(&literal).map_err(|_| self.error("bad number"))?;
                Ok(Polynomial::constant(self.n, value))
            }
            Some(c) => Err(self.error(&format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

/// Convenience for tests and examples: parses or panics.
pub fn poly(text: &str, n: usize) -> Polynomial {
    parse_polynomial(text, n).unwrap_or_else(|e| panic!("bad polynomial {text:?}: {e}"))
}

/// A monomial as a bare product, e.g. `x1^2*x3`.
pub fn monomial(text: &str, n: usize) -> Monomial {
    let p = poly(text, n);
    assert_eq!(p.len(), 1, "{text:?} is not a monomial");
    p.leading_term().map(|(m, _)| m.clone()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn parses_the_reference_term() {
        let p = parse_polynomial("3/2*x1^2*x3 - x2 + 1", 3).unwrap();
        assert_eq!(p.to_string(), "3/2*x1^2*x3 - x2 + 1");
        assert_eq!(p.coefficient(&Monomial::new(vec![2, 0, 1])), frac(3, 2));
    }

    #[test]
    fn parentheses_powers_and_decimals() {
        let p = parse_polynomial("(x1 - 1/2)^2", 1).unwrap();
        assert_eq!(p.to_string(), "x1^2 - x1 + 1/4");
        let q = parse_polynomial("-0.5*x1 + 2.25", 1).unwrap();
        assert_eq!(q.to_string(), "-1/2*x1 + 9/4");
    }

    #[test]
    fn reports_positions() {
        match parse_polynomial("x1 + x3", 2) {
            Err(Error::Parse { column, message, .. }) => {
                assert_eq!(column, 6);
                assert!(message.contains("out of range"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_polynomial("x1 +", 2), Err(Error::Parse { column: 5, .. })));
        assert!(parse_polynomial("x1 $ 2", 2).is_err());
        assert!(parse_polynomial("1/0", 1).is_err());
        assert!(parse_polynomial("", 1).is_err());
    }
}
