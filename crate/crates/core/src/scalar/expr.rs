//! Recursive-descent parser for the scalar grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor | '/' factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := int | 'i' | 'r2' | 't' | ident | '(' expr ')'
//! ```
//!
//! Unary minus binds below '^', so `-2^8*t^23` is -256*t^23.

use super::{ExactScalar, Poly, RatFunc, Rational, ScalarError};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Parses with parameters bound to constants; the result may involve t.
pub fn parse_scalar_expr(
    text: &str,
    bindings: &BTreeMap<String, ExactScalar>,
) -> Result<RatFunc, ScalarError> {
    let lifted: BTreeMap<String, RatFunc> = bindings
        .iter()
        .map(|(k, v)| (k.clone(), RatFunc::constant(v.clone())))
        .collect();
    parse_with_ratfunc_bindings(text, &lifted)
}

/// Parses an expression that must be constant (t-free after binding).
pub fn parse_const_expr(
    text: &str,
    bindings: &BTreeMap<String, ExactScalar>,
) -> Result<ExactScalar, ScalarError> {
    parse_scalar_expr(text, bindings)?
        .as_constant()
        .ok_or_else(|| ScalarError::NotConstant {
            text: text.to_string(),
        })
}

/// Parses with parameters bound to rational functions of t. Used for curves,
/// where a family parameter follows a path such as beta(t) = 1/t.
pub fn parse_with_ratfunc_bindings(
    text: &str,
    bindings: &BTreeMap<String, RatFunc>,
) -> Result<RatFunc, ScalarError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        bindings,
    };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    bindings: &'a BTreeMap<String, RatFunc>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = acc * self.factor()?;
            } else if self.peek() == Some(b'/') {
                let op_pos = self.pos;
                self.pos += 1;
                self.skip_ws();
                let rhs = self.factor()?;
                acc = acc
                    .checked_div(&rhs)
                    .map_err(|_| ScalarError::DivisionByZeroAt { pos: op_pos })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ScalarError> {
        self.skip_ws();
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn uint(&mut self) -> Result<u32, ScalarError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ScalarError::Syntax {
                pos: start,
                msg: "exponent out of range".to_string(),
            })
    }

    fn atom(&mut self) -> Result<RatFunc, ScalarError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().unwrap();
                Ok(RatFunc::constant(ExactScalar::from_rational(
                    Rational::from_integer(n),
                )))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "i" => Ok(RatFunc::constant(ExactScalar::i())),
                    "r2" => Ok(RatFunc::constant(ExactScalar::sqrt2())),
                    "t" => Ok(RatFunc::from_poly(Poly::var())),
                    _ => self.bindings.get(name).cloned().ok_or_else(|| {
                        ScalarError::UnboundParameter {
                            name: name.to_string(),
                            pos: start,
                        }
                    }),
                }
            }
            _ => Err(self.err("expected number, name, or `(`")),
        }
    }
}
