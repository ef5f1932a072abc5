//! Parser for the polynomial text format: `+ - * / ^`, parentheses, integer
//! and `p/q` constants, identifier variables.

use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[s..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[s..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character {c:?} in {text:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Arc<Ring>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} in {:?}", self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d.constant_value().filter(|c| !c.is_zero()).ok_or_else(|| self.err("division by a non-constant or zero"))?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, n.parse::<Scalar>()?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.ring.var(&name).ok_or_else(|| self.err(&format!("unknown variable {name}")))?;
                Ok(Polynomial::var(self.ring, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("unbalanced parenthesis"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

pub fn parse_polynomial(ring: &Arc<Ring>, text: &str) -> Result<Polynomial> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0, ring, text };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Variable names occurring in `text`, in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for t in lex(text)? {
        if let Tok::Ident(s) = t {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let r = Ring::new(["x_1", "x_2", "p_123"]).unwrap();
        let p = parse_polynomial(&r, "-(x_1 - 2)^2 + 3/4*p_123 * x_2").unwrap();
        assert_eq!(p.to_string(), "-x_1^2 + 3/4*x_2*p_123 + 4*x_1 - 4");
        assert!(parse_polynomial(&r, "x_1 +").is_err());
        assert!(parse_polynomial(&r, "y").is_err());
        assert!(parse_polynomial(&r, "x_1 / x_2").is_err());
        assert_eq!(identifiers("a*b + a - c1").unwrap(), vec!["a", "b", "c1"]);
    }
}
