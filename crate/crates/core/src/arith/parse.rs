//! Text syntax for polynomials: signed sums of products such as `3*x^2*y - y + 1`.

use super::monomial::Monomial;
use super::poly::{PolyRing, Polynomial};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                column: start + 1,
                message: "number too large".into(),
            })
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }
}

pub(crate) fn parse_polynomial(ring: &PolyRing, src: &str) -> Result<Polynomial> {
    let p = ring.field().modulus() as u64;
    let mut cur = Cursor {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<(Monomial, i64)> = Vec::new();
    let mut first = true;
    loop {
        let mut negative = false;
        match cur.peek() {
            None if first => return Err(cur.err("empty polynomial")),
            None => break,
            Some(b'+') if !first => cur.pos += 1,
            Some(b'-') => {
                negative = true;
                cur.pos += 1;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("expected `+` or `-`, found `{}`", c as char))),
        }
        first = false;

        let mut coeff: u64 = 1;
        let mut exps = vec![0u32; ring.nvars()];
        let mut expect_factor = true;
        while expect_factor {
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff = coeff * (cur.number()? % p) % p;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let col = cur.pos + 1;
                    let name = cur.ident().to_string();
                    let idx = ring
                        .var_names()
                        .iter()
                        .position(|v| *v == name)
                        .ok_or(Error::Parse {
                            column: col,
                            message: format!("unknown variable `{name}`"),
                        })?;
                    let mut e = 1;
                    if cur.peek() == Some(b'^') {
                        cur.pos += 1;
                        e = u32::try_from(cur.number()?)
                            .map_err(|_| cur.err("exponent too large"))?;
                    }
                    exps[idx] += e;
                }
                Some(c) => return Err(cur.err(format!("unexpected `{}`", c as char))),
                None => return Err(cur.err("unexpected end of input")),
            }
            expect_factor = cur.peek() == Some(b'*');
            if expect_factor {
                cur.pos += 1;
            }
        }
        let m = Monomial::from_exponents(&exps).map_err(|e| cur.err(e.to_string()))?;
        let c = coeff as i64;
        terms.push((m, if negative { -c } else { c }));
    }
    Ok(ring.from_terms(terms))
}
