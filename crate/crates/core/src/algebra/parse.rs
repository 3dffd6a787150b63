//! Polynomial expression parser.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := 'z' | rational | '(' expr ')' | '-' factor
//! rational := int ('/' uint)?
//! ```
//!
//! Whitespace is ignored and implicit multiplication (`2z`) is rejected.
//! [`parse_ratfun`] additionally accepts `'/'` as a division operator inside
//! `term`, used for the rational-function coefficients of equation documents.
//! An integer immediately followed by `/ uint` is always read as a rational
//! literal, so both entry points agree wherever the strict grammar applies.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::poly::Poly;
use super::rat::Rat;
use super::ratfun::RatFun;

const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let f = Parser::new(text, false).parse_all()?;
    debug_assert!(f.is_poly());
    Ok(f.num().clone())
}

pub fn parse_ratfun(text: &str) -> Result<RatFun, ParseError> {
    Parser::new(text, true).parse_all()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_div: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allow_div: bool) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            allow_div,
        }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset,
            message: message.into(),
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

    fn parse_all(mut self) -> Result<RatFun, ParseError> {
        if self.peek().is_none() {
            return self.err(self.pos, "empty expression");
        }
        let v = self.expr()?;
        match self.peek() {
            None => Ok(v),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') if self.allow_div => {
                    let at = self.pos;
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return self.err(at, "division by zero");
                    }
                    acc = &acc / &d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, ParseError> {
        let b = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.uint()?;
            let e: u64 = match e.try_into() {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(at, "exponent too large"),
            };
            return Ok(b.pow(e as u32));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(RatFun::from_poly(Poly::z()))
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos.max(open), "expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
            None => self.err(self.pos, "unexpected end of input"),
        }
    }

    fn rational(&mut self) -> Result<RatFun, ParseError> {
        let n = self.uint()?;
        let save = self.pos;
        if self.peek() == Some(b'/') {
            let slash = self.pos;
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let d = self.uint()?;
                if d.is_zero() {
                    return self.err(slash, "zero denominator");
                }
                return Ok(RatFun::constant(Rat::new(n, d)));
            }
            if !self.allow_div {
                return self.err(self.pos, "expected unsigned integer denominator");
            }
            self.pos = save;
        }
        Ok(RatFun::constant(Rat::from_integer(n)))
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected unsigned integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};

    #[test]
    fn spec_examples() {
        assert_eq!(parse_poly("1 - z^2").unwrap(), Poly::from_ints(&[1, 0, -1]));
        assert_eq!(
            parse_poly("(1-z)*(1-z^2)").unwrap(),
            Poly::from_ints(&[1, -1, -1, 1])
        );
        assert_eq!(
            parse_poly("3/2*z").unwrap(),
            Poly::new(vec![int(0), rat(3, 2)])
        );
    }

    #[test]
    fn unary_minus_and_powers() {
        assert_eq!(parse_poly("-z^2").unwrap(), Poly::from_ints(&[0, 0, -1]));
        assert_eq!(parse_poly("-(1+z)^2").unwrap(), Poly::from_ints(&[-1, -2, -1]));
        assert_eq!(parse_poly("2/3^2").unwrap(), Poly::constant(rat(4, 9)));
        assert_eq!(parse_poly(" 0 ").unwrap(), Poly::zero());
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let e = parse_poly("2z").unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_poly("1 + (z").unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(parse_poly("").is_err());
        assert!(parse_poly("z/2").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn ratfun_division() {
        let f = parse_ratfun("z/(1-z^2)").unwrap();
        assert_eq!(f.num(), &Poly::z().scale(&int(-1)));
        assert_eq!(f.den(), &Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(parse_ratfun("2/3^2").unwrap(), RatFun::constant(rat(4, 9)));
        assert!(parse_ratfun("1/(z-z)").is_err());
    }
}
