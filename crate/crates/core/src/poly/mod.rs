//! Sparse multivariate polynomials over a [`Ring`], monomial orders and the
//! division algorithm.

mod monomial;
mod order;
pub mod text;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use monomial::{var_name, Monomial, EXPONENT_CAP};
pub use order::MonomialOrder;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::param::{ParamCoef, ParamRing};
use crate::ring::Ring;

/// A polynomial stored as a map from monomial to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<E> {
    arity: usize,
    terms: BTreeMap<Monomial, E>,
}

/// How far a division runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    /// Stop as soon as the leading monomial of the remainder is divisible by
    /// no divisor head; lower terms are left alone.
    Head,
    /// Ordinary multivariate division: no remainder term is divisible by a
    /// divisor head.
    Full,
}

/// Result of [`divide`]: `s = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division<E> {
    pub quotients: Vec<Polynomial<E>>,
    pub remainder: Polynomial<E>,
}

impl<E: Clone + PartialEq> Polynomial<E> {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `c·m`, or zero if `c` is zero.
    pub fn term<R: Ring<Element = E>>(ring: &R, m: Monomial, c: E) -> Self {
        let mut p = Polynomial::zero(m.arity());
        if !ring.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial<R: Ring<Element = E>>(ring: &R, m: Monomial) -> Self {
        Polynomial::term(ring, m, ring.one())
    }

    pub fn constant<R: Ring<Element = E>>(ring: &R, c: E, arity: usize) -> Self {
        Polynomial::term(ring, Monomial::one(arity), c)
    }

    /// Sums the given terms; repeated monomials are added together.
    pub fn from_terms<R, I>(ring: &R, arity: usize, terms: I) -> Result<Self>
    where
        R: Ring<Element = E>,
        I: IntoIterator<Item = (Monomial, E)>,
    {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: m.arity(),
                });
            }
            p.add_term(ring, m, &c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage order (not a monomial order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &E)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    /// Adds `c·m` in place.
    pub fn add_term<R: Ring<Element = E>>(&mut self, ring: &R, m: Monomial, c: &E) {
        debug_assert_eq!(m.arity(), self.arity);
        if ring.is_zero(c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), c);
                if ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add<R: Ring<Element = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, m.clone(), c);
        }
        Ok(out)
    }

    /// Panics on an arity mismatch; use [`Polynomial::try_add`] otherwise.
    pub fn add<R: Ring<Element = E>>(&self, ring: &R, other: &Self) -> Self {
        self.try_add(ring, other).expect("arity mismatch in add")
    }

    pub fn neg<R: Ring<Element = E>>(&self, ring: &R) -> Self {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect(),
        }
    }

    pub fn sub<R: Ring<Element = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale<R: Ring<Element = E>>(&self, ring: &R, c: &E) -> Self {
        let mut out = Polynomial::zero(self.arity);
        for (m, v) in &self.terms {
            let p = ring.mul(v, c);
            if !ring.is_zero(&p) {
                out.terms.insert(m.clone(), p);
            }
        }
        out
    }

    /// `self · c·m`.
    pub fn mul_term<R: Ring<Element = E>>(&self, ring: &R, m: &Monomial, c: &E) -> Result<Self> {
        let mut out = Polynomial::zero(self.arity);
        for (n, v) in &self.terms {
            let p = ring.mul(v, c);
            if !ring.is_zero(&p) {
                out.terms.insert(n.checked_mul(m)?, p);
            }
        }
        Ok(out)
    }

    pub fn mul<R: Ring<Element = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &other.terms {
            let part = self.mul_term(ring, m, c)?;
            for (n, v) in part.terms {
                out.add_term(ring, n, &v);
            }
        }
        Ok(out)
    }

    pub fn pow<R: Ring<Element = E>>(&self, ring: &R, e: u32) -> Result<Self> {
        let mut acc = Polynomial::constant(ring, ring.one(), self.arity);
        for _ in 0..e {
            acc = acc.mul(ring, self)?;
        }
        Ok(acc)
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(&Monomial, &E)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<&Monomial> {
        self.leading_term(ord).ok().map(|t| t.0)
    }

    pub fn map_coeffs<F, E2>(&self, mut f: F) -> Polynomial<E2>
    where
        F: FnMut(&E) -> Option<E2>,
    {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().filter_map(|(m, c)| f(c).map(|v| (m.clone(), v))).collect(),
        }
    }

    /// Removes the terms for which `keep` returns false.
    pub fn retain(&mut self, mut keep: impl FnMut(&Monomial, &E) -> bool) {
        self.terms.retain(|m, c| keep(m, c));
    }
}

impl Polynomial<FieldElement> {
    /// `Σ c·m(point)` with `0^0 = 1`.
    pub fn eval(&self, field: &FieldSpec, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(m.exps()) {
                t = field.mul(t, field.pow(x, e as u64));
            }
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    /// The same polynomial with constant parametric coefficients.
    pub fn to_param(&self) -> Polynomial<ParamCoef> {
        self.map_coeffs(|&c| Some(ParamCoef::constant(c)))
    }
}

impl Polynomial<ParamCoef> {
    /// Substitutes concrete parameter values.
    pub fn instantiate(&self, ring: &ParamRing, values: &[FieldElement]) -> Polynomial<FieldElement> {
        self.map_coeffs(|c| {
            let v = ring.eval(c, values);
            (!v.is_zero()).then_some(v)
        })
    }

    /// Drops to concrete coefficients if no parameter occurs.
    pub fn to_concrete(&self) -> Result<Polynomial<FieldElement>> {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let k = c.as_constant().ok_or(Error::ParametricCoefficients)?;
            out.terms.insert(m.clone(), k);
        }
        Ok(out)
    }

    /// Evaluation is defined only once every coefficient is a constant.
    pub fn eval(&self, field: &FieldSpec, point: &[FieldElement]) -> Result<FieldElement> {
        self.to_concrete()?.eval(field, point)
    }
}

/// Divides `s` by `divisors`, trying them in list order at every step.
pub fn divide<R: Ring>(
    ring: &R,
    s: &Polynomial<R::Element>,
    divisors: &[Polynomial<R::Element>],
    ord: &MonomialOrder,
    mode: ReductionMode,
) -> Result<Division<R::Element>> {
    let arity = s.arity;
    let mut heads = Vec::with_capacity(divisors.len());
    for (index, d) in divisors.iter().enumerate() {
        if d.arity != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: d.arity,
            });
        }
        let (m, c) = d.leading_term(ord)?;
        let inv = ring
            .try_inverse(c)
            .ok_or(Error::NonInvertibleLeadingCoefficient { index })?;
        heads.push((m.clone(), inv));
    }
    let mut quotients = vec![Polynomial::zero(arity); divisors.len()];
    let mut rest = s.clone();
    let mut remainder = Polynomial::zero(arity);
    while let Ok((lm, lc)) = rest.leading_term(ord) {
        let (lm, lc) = (lm.clone(), lc.clone());
        let hit = heads
            .iter()
            .enumerate()
            .find_map(|(i, (h, inv))| lm.checked_div(h).map(|t| (i, t, ring.mul(&lc, inv))));
        match hit {
            Some((i, t, c)) => {
                let sub = divisors[i].mul_term(ring, &t, &ring.neg(&c))?;
                rest = rest.add(ring, &sub);
                quotients[i].add_term(ring, t, &c);
            }
            None => match mode {
                ReductionMode::Head => {
                    remainder = rest;
                    break;
                }
                ReductionMode::Full => {
                    rest.terms.remove(&lm);
                    remainder.terms.insert(lm, lc);
                }
            },
        }
    }
    Ok(Division { quotients, remainder })
}
