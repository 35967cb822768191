//! The polynomial text grammar.
//!
//! Terms are joined by `+`; a term is `[coef*]X^a*Y^b`. Concrete
//! coefficients are enc integers, parameters are `a1, a2, ...`. `*` may be
//! elided, parentheses group, `^` binds tightest and whitespace is ignored.
//! `-` is accepted as a synonym for `+` since the characteristic is 2.

use super::{var_name, Monomial, MonomialOrder, Polynomial};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::param::{ParamCoef, ParamRing};
use crate::ring::Ring;

/// Coefficient rings that have a text form.
pub trait CoefText: Ring {
    fn field(&self) -> &FieldSpec;
    fn embed(&self, c: FieldElement) -> Self::Element;
    /// The parameter `a_{i+1}`, if this ring has parameters.
    fn param(&self, i: usize) -> Option<Self::Element>;
    /// `c` as a sum of `scalar * factor * factor ...` products.
    fn coef_terms(&self, c: &Self::Element) -> Vec<(FieldElement, Vec<String>)>;
}

impl CoefText for FieldSpec {
    fn field(&self) -> &FieldSpec {
        self
    }

    fn embed(&self, c: FieldElement) -> FieldElement {
        c
    }

    fn param(&self, _: usize) -> Option<FieldElement> {
        None
    }

    fn coef_terms(&self, c: &FieldElement) -> Vec<(FieldElement, Vec<String>)> {
        vec![(*c, Vec::new())]
    }
}

impl CoefText for ParamRing {
    fn field(&self) -> &FieldSpec {
        ParamRing::field(self)
    }

    fn embed(&self, c: FieldElement) -> ParamCoef {
        ParamCoef::constant(c)
    }

    fn param(&self, i: usize) -> Option<ParamCoef> {
        (i < self.nparams()).then(|| self.var(i))
    }

    fn coef_terms(&self, c: &ParamCoef) -> Vec<(FieldElement, Vec<String>)> {
        self.sorted_for_display(c)
            .into_iter()
            .map(|(m, k)| (k, self.factor_strings(m)))
            .collect()
    }
}

/// Prints `p` with terms in descending `ord` order.
pub fn format<R: CoefText>(ring: &R, p: &Polynomial<R::Element>, ord: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = Vec::new();
    for (m, c) in p.sorted_terms(ord) {
        for (k, factors) in ring.coef_terms(c) {
            let mut parts = Vec::new();
            if k != FieldElement::ONE || (factors.is_empty() && m.is_one()) {
                parts.push(k.to_string());
            }
            parts.extend(factors);
            if !m.is_one() {
                parts.push(m.to_string());
            }
            out.push(parts.join("*"));
        }
    }
    out.join(" + ")
}

/// Parses a monomial such as `X^3*Y` (or `1`).
pub fn parse_monomial(s: &str, arity: usize) -> Result<Monomial> {
    let f = FieldSpec::new(1, 0b11).expect("GF(2)");
    let p = parse(&f, s, arity)?;
    let terms: Vec<_> = p.terms().collect();
    match terms.as_slice() {
        [(m, c)] if **c == FieldElement::ONE => Ok((*m).clone()),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a monomial"),
        }),
    }
}

pub fn parse<R: CoefText>(ring: &R, s: &str, arity: usize) -> Result<Polynomial<R::Element>> {
    let tokens = tokenize(s, arity)?;
    let mut parser = Parser {
        ring,
        arity,
        tokens,
        pos: 0,
    };
    let p = parser.expr()?;
    if let Some((pos, t)) = parser.tokens.get(parser.pos) {
        return Err(Error::Parse {
            pos: *pos,
            msg: format!("unexpected {t:?}"),
        });
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num(u32),
    Param(usize),
    Var(usize),
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, arity: usize) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: String| Error::Parse { pos, msg };
    let digits = |i: &mut usize| -> Option<(usize, u32)> {
        let start = *i;
        let mut v: u64 = 0;
        while let Some(&(_, c)) = chars.get(*i) {
            let Some(d) = c.to_digit(10) else { break };
            v = v * 10 + d as u64;
            if v > u32::MAX as u64 {
                return None;
            }
            *i += 1;
        }
        (*i > start).then_some((chars[start].0, v as u32))
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let simple = match c {
            '+' | '-' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (_, v) = digits(&mut i).ok_or_else(|| err(pos, "number too large".into()))?;
            out.push((pos, Tok::Num(v)));
            continue;
        }
        if c == 'a' {
            i += 1;
            let (_, v) = digits(&mut i).ok_or_else(|| err(pos, "expected parameter index after `a`".into()))?;
            if v == 0 {
                return Err(err(pos, "parameters are numbered from a1".into()));
            }
            out.push((pos, Tok::Param(v as usize - 1)));
            continue;
        }
        if arity > 3 && c == 'X' {
            i += 1;
            let (_, v) = digits(&mut i).ok_or_else(|| err(pos, "expected variable index after `X`".into()))?;
            if v == 0 || v as usize > arity {
                return Err(err(pos, format!("no variable X{v} in arity {arity}")));
            }
            out.push((pos, Tok::Var(v as usize - 1)));
            continue;
        }
        let var = (0..arity.min(3)).find(|&k| var_name(k, arity).starts_with(c));
        match var {
            Some(k) => {
                out.push((pos, Tok::Var(k)));
                i += 1;
            }
            None => return Err(err(pos, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a, R> {
    ring: &'a R,
    arity: usize,
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl<R: CoefText> Parser<'_, R> {
    fn peek(&self) -> Option<Tok> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(usize::MAX, |t| t.0)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial<R::Element>> {
        let mut acc = self.term()?;
        while self.peek() == Some(Tok::Plus) {
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(self.ring, &t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<R::Element>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => self.pos += 1,
                Some(Tok::Num(_) | Tok::Param(_) | Tok::Var(_) | Tok::LParen) => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = acc.mul(self.ring, &f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<R::Element>> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Num(e)) => {
                self.pos += 1;
                // A bare monomial raised to a power never needs repeated
                // multiplication; this keeps `X^1000000` cheap.
                let terms: Vec<_> = base.terms().collect();
                if let [(m, c)] = terms.as_slice() {
                    if self.ring.is_one(c) {
                        let exps: Vec<u32> =
                            m.exps().iter().map(|&x| x.saturating_mul(e)).collect();
                        let m = Monomial::new(&exps)?;
                        return Ok(Polynomial::monomial(self.ring, m));
                    }
                }
                base.pow(self.ring, e)
            }
            _ => Err(self.error("expected exponent after `^`")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial<R::Element>> {
        let tok = self.peek().ok_or_else(|| self.error("unexpected end of input"))?;
        let ring = self.ring;
        let out = match tok {
            Tok::Num(v) => {
                let c = ring.field().elem(v).map_err(|_| self.error(format!("{v} is not a field element")))?;
                Polynomial::constant(ring, ring.embed(c), self.arity)
            }
            Tok::Param(i) => {
                let c = ring
                    .param(i)
                    .ok_or_else(|| self.error(format!("parameter a{} not available here", i + 1)))?;
                Polynomial::constant(ring, c, self.arity)
            }
            Tok::Var(k) => Polynomial::monomial(ring, Monomial::var(self.arity, k, 1)),
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                inner
            }
            _ => return Err(self.error(format!("unexpected {tok:?}"))),
        };
        self.pos += 1;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let p = parse(&f, " X + Y^3 + X^3 Y", 2).unwrap();
        assert_eq!(format(&f, &p, &o), "Y^3 + X^3*Y + X");
        let q = parse(&f, "5*X^2*Y + 3", 2).unwrap();
        assert_eq!(format(&f, &q, &o), "5*X^2*Y + 3");
        assert_eq!(format(&f, &parse(&f, "Y + Y", 2).unwrap(), &o), "0");
        assert_eq!(format(&f, &parse(&f, "(X+1)^2", 2).unwrap(), &o), "X^2 + 1");
        assert_eq!(parse_monomial("X^3*Y^2", 2).unwrap(), Monomial::xy(3, 2));
        assert_eq!(parse_monomial("1", 2).unwrap(), Monomial::one(2));
    }

    #[test]
    fn parametric_flattening() {
        let r = ParamRing::new(FieldSpec::gf8(), 2).unwrap();
        let o = MonomialOrder::klein();
        let p = parse(&r, "(a1^3 + a2)X^3 + a1 X^4 + 1", 2).unwrap();
        let s = format(&r, &p, &o);
        assert_eq!(s, "a1*X^4 + a1^3*X^3 + a2*X^3 + 1");
        assert_eq!(parse(&r, &s, 2).unwrap(), p);
    }

    #[test]
    fn errors() {
        let f = FieldSpec::gf8();
        assert!(matches!(parse(&f, "8*X", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse(&f, "a1*X", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse(&f, "X +", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse(&f, "(X", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse(&f, "Q", 2), Err(Error::Parse { .. })));
        assert!(parse_monomial("X + Y", 2).is_err());
        let four = parse(&f, "X4^2*X1", 4).unwrap();
        assert_eq!(four.support().next().unwrap(), &Monomial::new(&[1, 0, 0, 2]).unwrap());
    }

    proptest! {
        #[test]
        fn round_trip(ts in proptest::collection::vec((0u32..9, 0u32..4, 1u16..8, 0u64..64), 0..8)) {
            let r = ParamRing::new(FieldSpec::gf8(), 3).unwrap();
            let o = MonomialOrder::klein();
            let mut p = Polynomial::zero(2);
            for (a, b, k, pm) in ts {
                let c = r.from_terms(vec![(
                    r.mono(&[(0, (pm % 8) as u32), (2, (pm / 8) as u32)]).unwrap(),
                    FieldElement::from_enc_unchecked(k),
                )]);
                p.add_term(&r, Monomial::xy(a, b), &c);
            }
            let s = format(&r, &p, &o);
            prop_assert_eq!(parse(&r, &s, 2).unwrap(), p.clone());
            prop_assert_eq!(format(&r, &parse(&r, &s, 2).unwrap(), &o), s);
        }
    }
}
