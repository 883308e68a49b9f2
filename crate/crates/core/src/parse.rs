//! Polynomial expression parser.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coefficient | variable ('^' natural)? | '(' poly ')'
//! coefficient := natural ('/' natural)?
//! ```
//!
//! Integer literals are reduced mod p over a prime field; a fractional
//! coefficient whose denominator vanishes mod p is rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;

pub fn parse_polynomial(src: &str, field: Field, var_names: &[String]) -> Result<Polynomial> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
        field,
        var_names,
    };
    p.skip_ws();
    let poly = p.parse_poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    field: Field,
    var_names: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn parse_poly(&mut self) -> Result<Polynomial> {
        let vars = self.var_names.len();
        let mut acc = Polynomial::zero(self.field, vars);
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        loop {
            self.skip_ws();
            let term = self.parse_term()?;
            acc = if negate { acc.sub(&term) } else { acc.add(&term) };
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    negate = false;
                }
                Some(b'-') => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Polynomial> {
        let mut acc = self.parse_factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                let f = self.parse_factor()?;
                acc = acc.mul(&f);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.parse_poly()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.parse_coefficient(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_variable(),
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>()
            .map_err(|_| self.err("malformed number"))
    }

    fn parse_coefficient(&mut self) -> Result<Polynomial> {
        let num = self.parse_natural()?;
        let vars = self.var_names.len();
        if self.eat(b'/') {
            let den = self.parse_natural()?;
            let c = self.field.from_ratio(&num, &den).map_err(|e| match e {
                Error::Validation(msg) => self.err(msg),
                other => other,
            })?;
            Ok(Polynomial::constant(self.field, vars, c))
        } else {
            Ok(Polynomial::constant(
                self.field,
                vars,
                self.field.from_bigint(&num),
            ))
        }
    }

    fn parse_variable(&mut self) -> Result<Polynomial> {
        let start_line = self.line;
        let start_col = self.col;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        // trailing primes distinguish tensor-factor copies
        while self.peek() == Some(b'\'') {
            self.bump();
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let Some(index) = self.var_names.iter().position(|n| n == name) else {
            return Err(Error::Parse {
                line: start_line,
                col: start_col,
                msg: format!("unknown variable `{name}`"),
            });
        };
        let mut p = Polynomial::variable(self.field, self.var_names.len(), index);
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.parse_natural()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            p = p.pow(e);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cuspidal_relation() {
        let ns = names(&["x", "y"]);
        let p = parse_polynomial("y^3 - x^4", Field::Rationals, &ns).unwrap();
        assert_eq!(format!("{}", p.display(&ns)), "-x^4 + y^3");
        let q = parse_polynomial("-x^4 + y^3", Field::Rationals, &ns).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn zero_literal() {
        let ns = names(&["x"]);
        let p = parse_polynomial("0", Field::Rationals, &ns).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn denominator_vanishes_mod_two() {
        let ns = names(&["x"]);
        let err = parse_polynomial("1/2*x", Field::prime(2).unwrap(), &ns).unwrap_err();
        match err {
            Error::Parse { msg, .. } => assert!(msg.contains("denominator")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parenthesized_products() {
        let ns = names(&["x", "y"]);
        let p = parse_polynomial("x*y*(y - x)", Field::Rationals, &ns).unwrap();
        let q = parse_polynomial("x*y^2 - x^2*y", Field::Rationals, &ns).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn unknown_variable_reports_position() {
        let ns = names(&["x"]);
        let err = parse_polynomial("x + zz", Field::Rationals, &ns).unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
                assert!(msg.contains("zz"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn primed_variables() {
        let ns = names(&["x", "x'"]);
        let p = parse_polynomial("x^3 - x'^3", Field::Rationals, &ns).unwrap();
        assert_eq!(format!("{}", p.display(&ns)), "x^3 - x'^3");
    }

    #[test]
    fn roundtrip_display_parse() {
        let ns = names(&["x", "y", "z"]);
        for src in [
            "x^2*y - 3/2*z + 1",
            "-x + y - z",
            "2*x*y*z",
            "0",
            "7/3",
        ] {
            let p = parse_polynomial(src, Field::Rationals, &ns).unwrap();
            let printed = format!("{}", p.display(&ns));
            let q = parse_polynomial(&printed, Field::Rationals, &ns).unwrap();
            assert_eq!(p, q, "roundtrip failed for {src}");
        }
    }
}
