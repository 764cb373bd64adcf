//! Parser for the canonical operator grammar produced by [`WeylOp::render`].
//!
//! Accepts sums of products of rational coefficients, `xI^k` and `dxI^k`
//! factors (1-based indices). Products are read left to right as Weyl
//! algebra products, so `dx1*x1` parses to `x1*dx1 + 1`.

use num_traits::One;

use super::op::{WeylMono, WeylOp};
use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, Rational};

pub fn parse_op(src: &str, n: usize) -> Result<WeylOp> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, n };
    let op = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(op)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("column {}", self.pos + 1), msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<WeylOp> {
        let mut acc = WeylOp::zero(self.n);
        let mut sign = Rational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylOp> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn factor(&mut self) -> Result<WeylOp> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?.to_string();
                let text = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    format!("{}/{}", num, self.digits()?)
                } else {
                    num
                };
                let r = parse_rational(&text).ok_or_else(|| self.err("bad rational"))?;
                Ok(WeylOp::constant(self.n, r))
            }
            Some(b'x') | Some(b'd') => {
                let is_d = self.s[self.pos] == b'd';
                let prefix: &[u8] = if is_d { b"dx" } else { b"x" };
                if !self.s[self.pos..].starts_with(prefix) {
                    return Err(self.err("expected variable"));
                }
                self.pos += prefix.len();
                let idx: usize = self.digits()?.parse().map_err(|_| self.err("bad index"))?;
                if idx == 0 || idx > self.n {
                    return Err(self.err("variable index out of range"));
                }
                let mut exp = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    exp = self.digits()?.parse().map_err(|_| self.err("bad exponent"))?;
                }
                let mut m = WeylMono::one(self.n);
                if is_d {
                    m.d[idx - 1] = exp;
                } else {
                    m.x[idx - 1] = exp;
                }
                Ok(WeylOp::monomial(m, Rational::one()))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}
