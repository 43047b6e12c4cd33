//! Parser for noncommutative Laurent expressions.
//!
//! ```text
//! expr    := sign? term (('+' | '-') sign? term)*
//! term    := power ('*'? power)*
//! power   := atom ('^' sint)?
//! atom    := integer | 'v' | 'q' | generator | '(' expr ')' | '[' bracket ']'
//! bracket := (generator ('^' sint)? | '[' bracket ']' ('^' sint)?)+
//! ```
//!
//! Juxtaposition is the ordered product; a bracket is the normalized
//! monomial of its factors. Generator names may end in `*` when the algebra
//! has such a generator.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qtorus::{Torus, TorusElement};
use crate::scalars::{Ring, Scalar};
use crate::surgery::{SurgeryContext, SurgeryElement};
use std::sync::Arc;

/// What an expression can be evaluated in.
pub trait ExprAlgebra {
    type Elem: Clone;
    fn ring(&self) -> &Ring;
    fn has_generator(&self, name: &str) -> bool;
    fn constant(&self, c: Scalar) -> Self::Elem;
    /// The normalized monomial with the given generator powers.
    fn monomial(&self, parts: &[(String, i64)]) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

pub struct TorusAlgebra {
    pub torus: Torus,
    pub ring: Ring,
}

impl ExprAlgebra for TorusAlgebra {
    type Elem = TorusElement;
    fn ring(&self) -> &Ring {
        &self.ring
    }
    fn has_generator(&self, name: &str) -> bool {
        self.torus.index_of(name).is_some()
    }
    fn constant(&self, c: Scalar) -> TorusElement {
        TorusElement::scalar(&self.torus, c)
    }
    fn monomial(&self, parts: &[(String, i64)]) -> Result<TorusElement> {
        let mut k = self.torus.zero_exponent();
        for (name, p) in parts {
            k[self.torus.require(name)?] += p;
        }
        Ok(TorusElement::monomial(&self.torus, &self.ring, k))
    }
    fn add(&self, a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
        a.try_add(b)
    }
    fn mul(&self, a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
        a.try_mul(b)
    }
}

pub struct SurgeryAlgebra {
    pub ctx: Arc<SurgeryContext>,
    pub ring: Ring,
}

impl ExprAlgebra for SurgeryAlgebra {
    type Elem = SurgeryElement;
    fn ring(&self) -> &Ring {
        &self.ring
    }
    fn has_generator(&self, name: &str) -> bool {
        self.ctx.letter(name).is_ok()
    }
    fn constant(&self, c: Scalar) -> SurgeryElement {
        SurgeryElement::scalar(&self.ctx, c)
    }
    fn monomial(&self, parts: &[(String, i64)]) -> Result<SurgeryElement> {
        let mut k = vec![0; self.ctx.labels().len()];
        for (name, p) in parts {
            k[self.ctx.letter(name)?] += p;
        }
        SurgeryElement::basis(&self.ctx, &self.ring, k)
    }
    fn add(&self, a: &SurgeryElement, b: &SurgeryElement) -> Result<SurgeryElement> {
        a.try_add(b)
    }
    fn mul(&self, a: &SurgeryElement, b: &SurgeryElement) -> Result<SurgeryElement> {
        a.try_mul(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    End,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::SyntaxError { position, message: message.into() }
}

fn lex(text: &str, starred: impl Fn(&str) -> bool) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let mut name = text[start..i].to_string();
            if i < bytes.len() && bytes[i] == b'*' && starred(&format!("{name}*")) {
                name.push('*');
                i += 1;
            }
            out.push((Tok::Ident(name), start));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            _ => return Err(syntax(start, format!("unexpected character `{}`", text[start..].chars().next().unwrap()))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a, A: ExprAlgebra> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: &'a A,
}

impl<'a, A: ExprAlgebra> Parser<'a, A> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.at(), format!("expected {what}")))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::LParen | Tok::LBrack)
    }

    fn negate(&self, x: &A::Elem) -> Result<A::Elem> {
        self.alg.mul(&self.alg.constant(self.alg.ring().int(-1)), x)
    }

    fn expr(&mut self) -> Result<A::Elem> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.signed_term()?;
                    acc = self.alg.add(&acc, &t)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.signed_term()?;
                    acc = self.alg.add(&acc, &self.negate(&t)?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<A::Elem> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let t = self.term()?;
                self.negate(&t)
            }
            Tok::Plus => {
                self.bump();
                self.term()
            }
            _ => self.term(),
        }
    }

    fn term(&mut self) -> Result<A::Elem> {
        if !self.starts_atom() {
            return Err(syntax(self.at(), "expected a term"));
        }
        let mut acc = self.power()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_atom() {
                    return Err(syntax(self.at(), "expected a factor after `*`"));
                }
            } else if !self.starts_atom() {
                return Ok(acc);
            }
            let f = self.power()?;
            acc = self.alg.mul(&acc, &f)?;
        }
    }

    fn sint(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => {
                let n = n.to_i64().ok_or_else(|| syntax(at, "exponent out of range"))?;
                Ok(if neg { -n } else { n })
            }
            _ => Err(syntax(at, "expected an integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if *self.peek() == Tok::Caret {
            self.bump();
            Ok(Some(self.sint()?))
        } else {
            Ok(None)
        }
    }

    fn nonneg_power(&self, x: A::Elem, p: i64, at: usize) -> Result<A::Elem> {
        if p < 0 {
            return Err(syntax(at, "negative powers apply only to generators, brackets, v and q"));
        }
        let mut acc = self.alg.constant(self.alg.ring().one());
        for _ in 0..p {
            acc = self.alg.mul(&acc, &x)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<A::Elem> {
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => {
                let c = self.alg.ring().monomial(n, 0);
                match self.exponent()? {
                    None => Ok(self.alg.constant(c)),
                    Some(p) => self.nonneg_power(self.alg.constant(c), p, at),
                }
            }
            Tok::Ident(name) if name == "v" || name == "q" => {
                let p = self.exponent()?.unwrap_or(1);
                let ring = self.alg.ring();
                Ok(self.alg.constant(if name == "v" { ring.v_pow(p) } else { ring.q_pow(p) }))
            }
            Tok::Ident(name) => {
                if !self.alg.has_generator(&name) {
                    return Err(Error::UnknownGenerator(name));
                }
                let p = self.exponent()?.unwrap_or(1);
                self.alg.monomial(&[(name, p)])
            }
            Tok::LParen => {
                let x = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                match self.exponent()? {
                    None => Ok(x),
                    Some(p) => self.nonneg_power(x, p, at),
                }
            }
            Tok::LBrack => {
                let mut parts = Vec::new();
                self.bracket(&mut parts, 1)?;
                self.alg.monomial(&parts)
            }
            _ => Err(syntax(at, "expected a factor")),
        }
    }

    /// Contents of a bracket after `[`, up to and including `]` and an
    /// optional exponent, scaled by `outer`.
    fn bracket(&mut self, parts: &mut Vec<(String, i64)>, outer: i64) -> Result<()> {
        let mut inner = Vec::new();
        loop {
            let at = self.at();
            match self.bump() {
                Tok::RBrack => break,
                Tok::Ident(name) if name != "v" && name != "q" => {
                    if !self.alg.has_generator(&name) {
                        return Err(Error::UnknownGenerator(name));
                    }
                    let p = self.exponent()?.unwrap_or(1);
                    inner.push((name, p));
                }
                Tok::LBrack => self.bracket(&mut inner, 1)?,
                _ => return Err(syntax(at, "brackets hold generators and brackets only")),
            }
        }
        if inner.is_empty() {
            return Err(syntax(self.toks[self.pos - 1].1, "empty bracket"));
        }
        let p = self.exponent()?.unwrap_or(1);
        parts.extend(inner.into_iter().map(|(n, e)| (n, e * p * outer)));
        Ok(())
    }
}

/// Parse and evaluate `text` in `alg`.
pub fn parse_in<A: ExprAlgebra>(text: &str, alg: &A) -> Result<A::Elem> {
    let toks = lex(text, |n| alg.has_generator(n))?;
    let mut p = Parser { toks, pos: 0, alg };
    if *p.peek() == Tok::End {
        return Err(syntax(0, "empty expression"));
    }
    let x = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), "unexpected trailing input"));
    }
    Ok(x)
}

/// `parse_expression(text, torus)`.
pub fn parse_expression(text: &str, torus: &Torus, ring: &Ring) -> Result<TorusElement> {
    parse_in(text, &TorusAlgebra { torus: torus.clone(), ring: ring.clone() })
}

pub fn parse_surgery(text: &str, ctx: &Arc<SurgeryContext>, ring: &Ring) -> Result<SurgeryElement> {
    parse_in(text, &SurgeryAlgebra { ctx: ctx.clone(), ring: ring.clone() })
}
