//! Text grammar: sums of products of numbers, variables, the field parameter `s`,
//! parenthesised subexpressions and integer powers. Division is only by nonzero constants.
//! Negative powers are allowed on constants and on monomials in Laurent variables.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{Poly, Ring};
use super::scalar::PARAM;
use super::AlgError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, AlgError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[st..i].iter().collect();
            out.push((st, Tok::Num(text.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((st, Tok::Ident(chars[st..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(AlgError::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgError> {
        Err(AlgError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, AlgError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, AlgError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos();
                let d = self.unary()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(AlgError::Parse {
                        pos: at,
                        msg: "division by a non-constant or zero".into(),
                    });
                }
                acc = acc.scale(&d.constant_term().inv().unwrap());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, AlgError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, AlgError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n: u32 = match n.try_into() {
                    Ok(n) => n,
                    Err(_) => return self.err("exponent too large"),
                };
                self.at += 1;
                n
            }
            _ => return self.err("expected an integer exponent"),
        };
        if !neg {
            return Ok(base.pow(e));
        }
        let inv = self.invert(&base)?;
        Ok(inv.pow(e))
    }

    fn invert(&self, base: &Poly) -> Result<Poly, AlgError> {
        if base.len() != 1 {
            return self.err("negative power of a non-monomial");
        }
        let (m, c) = &base.terms()[0];
        let ring = base.ring();
        if m.iter()
            .enumerate()
            .any(|(i, &e)| e != 0 && !ring.vars[i].laurent)
        {
            return self.err("negative power of a non-invertible variable");
        }
        let n: Vec<i32> = m.iter().map(|e| -e).collect();
        Ok(Poly::monomial(ring, n, c.inv().unwrap()))
    }

    fn atom(&mut self) -> Result<Poly, AlgError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Poly::constant(self.ring, self.ring.field.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == PARAM {
                    if let Some(s) = self.ring.field.param() {
                        return Ok(Poly::constant(self.ring, s));
                    }
                }
                match self.ring.var_index(&name) {
                    Ok(i) => Ok(Poly::var(self.ring, i)),
                    Err(e) => {
                        self.at -= 1;
                        Err(AlgError::Parse {
                            pos: self.pos(),
                            msg: e.to_string(),
                        })
                    }
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_poly(ring: &Arc<Ring>, text: &str) -> Result<Poly, AlgError> {
    let toks = lex(text)?;
    let mut p = Parser {
        ring,
        toks,
        at: 0,
        len: text.chars().count(),
    };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
