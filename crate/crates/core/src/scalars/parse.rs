//! Recursive-descent reader for scalar strings such as `(1/3)*z^2*s^-1`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' ['-'] digits)?
//! atom  := digits | 'z' | 's' | 'T' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use thiserror::Error;

use super::{Field, GroundField, GroundScalar, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a, F: Field> {
    src: &'a [u8],
    pos: usize,
    ctx: F::Ctx,
    var: &'a dyn Fn(&str) -> Option<F>,
}

impl<'a, F: Field> Parser<'a, F> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn expr(&mut self) -> Result<F, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<F, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                acc = match acc.div(&d) {
                    Some(v) => v,
                    None => {
                        return Err(ParseError {
                            pos: at,
                            msg: "division by zero".into(),
                        })
                    }
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<F, ParseError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<F, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = self.eat(b'-');
        let e = self.digits()?;
        let e: i64 = match i64::try_from(e) {
            Ok(v) if v <= 1 << 20 => v,
            _ => return self.err("exponent too large"),
        };
        match base.pow(if neg { -e } else { e }) {
            Some(v) => Ok(v),
            None => Err(ParseError {
                pos: at,
                msg: "negative power of zero".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<F, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                Ok(F::from_rational(&self.ctx, &Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match (self.var)(name) {
                    Some(v) => Ok(v),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown symbol '{name}'"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn run<F: Field>(text: &str, ctx: F::Ctx, var: &dyn Fn(&str) -> Option<F>) -> Result<F, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
        var,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse an element of the ground field; `T` is rejected.
pub fn parse_ground(text: &str, field: &GroundField) -> Result<GroundScalar, ParseError> {
    let var = |name: &str| match name {
        "z" => Some(GroundScalar::zeta(field, 1)),
        "s" => Some(field.s()),
        _ => None,
    };
    run(text, field.clone(), &var)
}

/// Parse a rational function in `T` over the ground field.
pub fn parse_ratfunc(text: &str, field: &GroundField) -> Result<RatFunc, ParseError> {
    let var = |name: &str| match name {
        "z" => Some(RatFunc::zeta(field, 1)),
        "s" => Some(RatFunc::constant(field.s())),
        "T" => Some(RatFunc::t(field)),
        _ => None,
    };
    run(text, field.clone(), &var)
}
