//! Text parsing for polynomials and localized fractions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' ['-'] int | '^' '(' '-' int ')')?
//! base   := int | ident | '(' expr ')' | '(' int (',' int)+ ')'
//! ```
//!
//! A parenthesized integer tuple is an extension-field element given by its
//! power-basis coordinates. Multiplication must be written with `*`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::field::{Elem, Field};
use super::fraction::{FractionRing, LocalizedFraction};
use super::poly::{MultiPoly, PolyRing};
use crate::error::{Error, Result};

/// Arithmetic the parser evaluates into.
pub trait ParseTarget {
    type Value: Clone;
    fn field(&self) -> &Field;
    fn constant(&self, c: Elem) -> Self::Value;
    fn variable(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, n: i64) -> Result<Self::Value>;
}

impl ParseTarget for PolyRing {
    type Value = MultiPoly;

    fn field(&self) -> &Field {
        PolyRing::field(self)
    }

    fn constant(&self, c: Elem) -> MultiPoly {
        PolyRing::constant(self, c)
    }

    fn variable(&self, name: &str) -> Option<MultiPoly> {
        self.var_index(name).map(|i| self.var(i))
    }

    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
        Ok(a + b)
    }

    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        -a
    }

    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
        Ok(a * b)
    }

    fn div(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
        if !b.is_constant() || b.is_zero() {
            return Err(Error::NotUnit(b.to_string()));
        }
        Ok(a.scale(PolyRing::field(self).inv(b.constant_term())?))
    }

    fn pow(&self, a: &MultiPoly, n: i64) -> Result<MultiPoly> {
        if n < 0 {
            return self.div(&PolyRing::one(self), a).map(|inv| inv.pow(n.unsigned_abs()));
        }
        Ok(a.pow(n as u64))
    }
}

impl ParseTarget for FractionRing {
    type Value = LocalizedFraction;

    fn field(&self) -> &Field {
        FractionRing::field(self)
    }

    fn constant(&self, c: Elem) -> LocalizedFraction {
        FractionRing::constant(self, c)
    }

    fn variable(&self, name: &str) -> Option<LocalizedFraction> {
        self.poly().var_index(name).map(|i| self.var(i))
    }

    fn add(&self, a: &LocalizedFraction, b: &LocalizedFraction) -> Result<LocalizedFraction> {
        a.try_add(b)
    }

    fn neg(&self, a: &LocalizedFraction) -> LocalizedFraction {
        a.neg()
    }

    fn mul(&self, a: &LocalizedFraction, b: &LocalizedFraction) -> Result<LocalizedFraction> {
        a.try_mul(b)
    }

    fn div(&self, a: &LocalizedFraction, b: &LocalizedFraction) -> Result<LocalizedFraction> {
        a.try_div(b)
    }

    fn pow(&self, a: &LocalizedFraction, n: i64) -> Result<LocalizedFraction> {
        a.pow(n)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            let mut v: i64 = 0;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(bytes[i].to_digit(10).unwrap() as i64))
                    .ok_or(Error::Parse { pos: start, msg: "integer literal too large".into() })?;
                i += 1;
            }
            out.push((start, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: alloc::format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a, T: ParseTarget> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    target: &'a T,
}

impl<'a, T: ParseTarget> Parser<'a, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<X>(&self, msg: &str) -> Result<X> {
        Err(Error::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_error<X>(&self, e: Error) -> Result<X> {
        match e {
            Error::Parse { .. } => Err(e),
            other => Err(Error::Parse { pos: self.offset(), msg: other.to_string() }),
        }
    }

    fn expr(&mut self) -> Result<T::Value> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = self.target.neg(&acc);
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.target.add(&acc, &t).or_else(|e| self.at_error(e))?;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.target.add(&acc, &self.target.neg(&t)).or_else(|e| self.at_error(e))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<T::Value> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let f = self.unary()?;
                acc = self.target.mul(&acc, &f).or_else(|e| self.at_error(e))?;
            } else if self.eat('/') {
                let f = self.unary()?;
                acc = self.target.div(&acc, &f).or_else(|e| self.at_error(e))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<T::Value> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(self.target.neg(&v));
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected integer"),
        }
    }

    fn power(&mut self) -> Result<T::Value> {
        let b = self.base()?;
        if !self.eat('^') {
            return Ok(b);
        }
        let n = if self.eat('(') {
            let neg = self.eat('-');
            let n = self.int()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            if neg {
                -n
            } else {
                n
            }
        } else {
            let neg = self.eat('-');
            let n = self.int()?;
            if neg {
                -n
            } else {
                n
            }
        };
        self.target.pow(&b, n).or_else(|e| self.at_error(e))
    }

    fn base(&mut self) -> Result<T::Value> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(self.target.constant(self.target.field().from_int(v)))
            }
            Some(Tok::Ident(name)) => match self.target.variable(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                None => self.err(&alloc::format!("unknown variable {name:?}")),
            },
            Some(Tok::Sym('(')) => {
                let is_tuple = matches!(self.toks.get(self.pos + 1), Some((_, Tok::Int(_))))
                    && matches!(self.toks.get(self.pos + 2), Some((_, Tok::Sym(','))));
                self.pos += 1;
                if is_tuple {
                    let mut digits = Vec::new();
                    loop {
                        digits.push(self.int()?);
                        if self.eat(')') {
                            break;
                        }
                        if !self.eat(',') {
                            return self.err("expected ',' or ')' in element tuple");
                        }
                    }
                    let c = self.target.field().from_digits(&digits).or_else(|e| self.at_error(e))?;
                    return Ok(self.target.constant(c));
                }
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

/// Parses `text` into the arithmetic of `target`.
pub fn parse_into<T: ParseTarget>(target: &T, text: &str) -> Result<T::Value> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), target };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<MultiPoly> {
    parse_into(ring, text)
}

pub fn parse_fraction(ring: &FractionRing, text: &str) -> Result<LocalizedFraction> {
    parse_into(ring, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fparith::poly::MonomialOrder;

    #[test]
    fn polynomial_round_trip() {
        let r = PolyRing::new(&Field::prime(3).unwrap(), &["x", "y", "z"]);
        let f = parse_poly(&r, "y^2*z - x^3 + x*z^2").unwrap();
        assert_eq!(f.to_text(MonomialOrder::Grevlex), "2*x^3 + y^2*z + x*z^2");
        assert_eq!(parse_poly(&r, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn extension_tuples() {
        let f4 = Field::new(2, 2).unwrap();
        let r = PolyRing::new(&f4, &["x"]);
        let g = parse_poly(&r, "(0,1)*x^2 + (1,1)").unwrap();
        assert_eq!(g.to_string(), "(0,1)*x^2 + (1,1)");
        assert_eq!(parse_poly(&r, &g.to_string()).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        let r = PolyRing::new(&Field::prime(2).unwrap(), &["x"]);
        assert!(matches!(parse_poly(&r, "x + w"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly(&r, "x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "1/x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn fractions_divide_by_units() {
        let r = FractionRing::punctured_affine(&Field::prime(2).unwrap(), &["x0", "w1", "w2"]).unwrap();
        let a = parse_fraction(&r, "x0/(1+x0) - x0").unwrap();
        let b = parse_fraction(&r, "-x0^2/(1+x0)").unwrap();
        assert_eq!(a, b);
        assert!(parse_fraction(&r, "1/x0").is_err());
    }
}
