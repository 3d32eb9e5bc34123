//! Recursive-descent parser for the polynomial text format:
//!
//! ```text
//! expr   ::= term (('+' | '-') term)*
//! term   ::= factor ('*' factor)*
//! factor ::= integer | var | var '^' N | '(' expr ')'
//! var    ::= 'x' N | 'y' N | 't' N | 'b'
//! ```
//!
//! Integers may carry a leading `-`; whitespace between tokens is ignored.

use num_bigint::BigInt;

use super::{Polynomial, Var};
use crate::error::{Error, Result};

pub(super) fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                inner
            }
            Some(b'-') => {
                self.pos += 1;
                if !self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected digits after '-'"));
                }
                -Polynomial::constant(self.integer()?)
            }
            Some(c) if c.is_ascii_digit() => Polynomial::constant(self.integer()?),
            Some(b'b') => {
                self.pos += 1;
                Polynomial::var(Var::Beta)
            }
            Some(family @ (b'x' | b'y' | b't')) => {
                self.pos += 1;
                let start = self.pos;
                let index = self.natural()?;
                if index == 0 {
                    self.pos = start;
                    return Err(self.error("variable indices start at 1"));
                }
                let index = u32::try_from(index).map_err(|_| self.error("index too large"))?;
                Polynomial::var(match family {
                    b'x' => Var::X(index),
                    b'y' => Var::Y(index),
                    _ => Var::T(index),
                })
            }
            Some(_) => return Err(self.error("unexpected character")),
            None => return Err(self.error("unexpected end of input")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.natural()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        Ok(self.digits()?.parse().expect("digits form an integer"))
    }

    fn natural(&mut self) -> Result<u64> {
        let start = self.pos;
        let digits = self.digits()?;
        digits.parse().map_err(|_| Error::Syntax { pos: start, msg: "number too large".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let square = parse_polynomial("x1*x1 - 2*x1*t1 + t1^2").unwrap();
        let d = parse_polynomial("x1 - t1").unwrap();
        assert_eq!(square, &d * &d);
        let beta = parse_polynomial("b*x1 + x1").unwrap();
        assert!(beta.contains_var(|v| v == Var::Beta));
        assert_eq!(parse_polynomial(" ( x1 + y2 ) ^ 2 ").unwrap().len(), 3);
        assert_eq!(parse_polynomial("-3*y1").unwrap(), parse_polynomial("0 - 3*y1").unwrap());
        assert!(parse_polynomial("0").unwrap().is_zero());
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            parse_polynomial("x1 + + y1"),
            Err(Error::Syntax { pos: 5, msg: "unexpected character".into() })
        );
        assert!(matches!(parse_polynomial("x0"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_polynomial("(x1"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_polynomial("z1"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_polynomial("x1 y1"), Err(Error::Syntax { pos: 3, .. })));
    }
}
