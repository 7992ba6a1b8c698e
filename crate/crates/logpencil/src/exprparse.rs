//! A small expression parser for rational functions: `+ - * / ^`,
//! parentheses, integer literals and declared symbol names. Used to read
//! shift operators from files and to write readable fixtures in tests.

use crate::algebra::{AlgebraError, Rat, RatFun, RatFunMatrix, Vars};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("unexpected character `{0}` at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected `{0}` at byte {1}")]
    Expected(char, usize),
    #[error("exponent must be a nonnegative integer")]
    BadExponent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn parse_ratfun(input: &str, vars: &Vars) -> Result<RatFun, ParseError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        let ch = p.bytes[p.pos] as char;
        return Err(ParseError::UnexpectedChar(ch, p.pos));
    }
    Ok(e)
}

/// Parses a row-major matrix of expressions.
pub fn parse_ratfun_matrix(
    rows: &[Vec<String>],
    vars: &Vars,
) -> Result<RatFunMatrix, ParseError> {
    let dim = rows.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        for cell in row {
            entries.push(parse_ratfun(cell, vars)?);
        }
    }
    Ok(RatFunMatrix::from_entries(vars, dim, entries)?)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
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
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(ParseError::BadExponent);
            }
            let exp: u32 = std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ParseError::BadExponent)?;
            let mut acc = RatFun::one(self.vars);
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Expected(')', self.pos));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.bytes[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RatFun::constant(self.vars, Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                Ok(RatFun::var(self.vars, name)?)
            }
            Some(c) => Err(ParseError::UnexpectedChar(c as char, self.pos)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn vars() -> Vars {
        Vars::new(vec!["s", "x"])
    }

    #[test]
    fn parses_shift_operator_entry() {
        let v = vars();
        let f = parse_ratfun("x/s - 1/(s+1)", &v).unwrap();
        let s = RatFun::var(&v, "s").unwrap();
        let x = RatFun::var(&v, "x").unwrap();
        let one = RatFun::one(&v);
        let expect = x.div(&s).unwrap().sub(&one.div(&s.add(&one)).unwrap());
        assert_eq!(f, expect);
    }

    #[test]
    fn precedence_and_powers() {
        let v = vars();
        let f = parse_ratfun("2*x^2 - x*(1 - x) + 1/2", &v).unwrap();
        let x = RatFun::var(&v, "x").unwrap();
        let expect = x
            .mul(&x)
            .scale(&rat(2, 1))
            .sub(&x.mul(&RatFun::one(&v).sub(&x)))
            .add(&RatFun::constant(&v, rat(1, 2)));
        assert_eq!(f, expect);
    }

    #[test]
    fn rejects_unknown_symbols_and_garbage() {
        let v = vars();
        assert!(matches!(
            parse_ratfun("y + 1", &v),
            Err(ParseError::Algebra(AlgebraError::UnknownSymbol(_)))
        ));
        assert!(parse_ratfun("1 +", &v).is_err());
        assert!(parse_ratfun("(1", &v).is_err());
        assert!(parse_ratfun("1 @ 2", &v).is_err());
        assert!(parse_ratfun("x^-1", &v).is_err());
    }

    #[test]
    fn division_by_zero_function() {
        let v = vars();
        assert!(matches!(
            parse_ratfun("1/(x - x)", &v),
            Err(ParseError::Algebra(AlgebraError::DivisionByZero))
        ));
    }
}
