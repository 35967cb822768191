//! Parametric coefficients: polynomials in `a1..at` over GF(2^m), reduced by
//! the field equations `ai^q = ai`.
//!
//! After that reduction every parametric coefficient is exactly a function
//! `GF(q)^t -> GF(q)`, and distinct reduced forms are distinct functions, so
//! "identically zero" is decided by comparing with the empty term list.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::ring::Ring;

/// A monomial in the parameters, packed `m` bits per parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamMono(u64);

impl ParamMono {
    pub const ONE: ParamMono = ParamMono(0);

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

/// A reduced parametric coefficient. Terms are sorted by packed monomial and
/// never carry a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamCoef {
    terms: Vec<(ParamMono, FieldElement)>,
}

impl ParamCoef {
    pub fn zero() -> Self {
        ParamCoef { terms: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            ParamCoef {
                terms: vec![(ParamMono::ONE, c)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(ParamMono, FieldElement)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if no parameter occurs.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.as_slice() {
            [] => Some(FieldElement::ZERO),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    fn from_unsorted(mut terms: Vec<(ParamMono, FieldElement)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(ParamMono, FieldElement)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = FieldElement::from_enc_unchecked(last.1.enc() ^ c.enc()),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        ParamCoef { terms: out }
    }
}

/// The ring `GF(2^m)[a1..at] / (ai^q - ai)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRing {
    field: FieldSpec,
    nparams: usize,
    bits: u32,
    mask: u64,
}

impl ParamRing {
    /// Largest parameter count representable for a field with `m` bits.
    pub fn capacity(field: &FieldSpec) -> usize {
        (64 / field.m()) as usize
    }

    pub fn new(field: FieldSpec, nparams: usize) -> Result<Self> {
        let max = Self::capacity(&field);
        if nparams > max {
            return Err(Error::TooManyParameters { requested: nparams, max });
        }
        let bits = field.m();
        Ok(ParamRing {
            field,
            nparams,
            bits,
            mask: (1u64 << bits) - 1,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    /// Exponent of parameter `i` (0-based) in `m`.
    #[inline]
    pub fn exponent(&self, m: ParamMono, i: usize) -> u32 {
        ((m.0 >> (i as u32 * self.bits)) & self.mask) as u32
    }

    /// Builds a monomial from `(index, exponent)` pairs, reducing exponents
    /// by `a^q = a`.
    pub fn mono(&self, factors: &[(usize, u32)]) -> Result<ParamMono> {
        let mut m = ParamMono::ONE;
        for &(i, e) in factors {
            if i >= self.nparams {
                return Err(Error::TooManyParameters {
                    requested: i + 1,
                    max: self.nparams,
                });
            }
            let single = ParamMono((self.reduce_exp(e) as u64) << (i as u32 * self.bits));
            m = self.mono_mul(m, single);
        }
        Ok(m)
    }

    fn reduce_exp(&self, e: u32) -> u32 {
        let q1 = self.field.q() - 1;
        if e == 0 {
            0
        } else {
            (e - 1) % q1 + 1
        }
    }

    #[inline]
    pub fn mono_mul(&self, a: ParamMono, b: ParamMono) -> ParamMono {
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        let q1 = self.field.q() - 1;
        let mut out = 0u64;
        for i in 0..self.nparams {
            let mut e = self.exponent(a, i) + self.exponent(b, i);
            if e > q1 {
                e -= q1;
            }
            out |= (e as u64) << (i as u32 * self.bits);
        }
        ParamMono(out)
    }

    /// The parameter `a_{i+1}` as a coefficient.
    pub fn var(&self, i: usize) -> ParamCoef {
        assert!(i < self.nparams, "parameter index {i} out of range");
        ParamCoef {
            terms: vec![(ParamMono(1u64 << (i as u32 * self.bits)), FieldElement::ONE)],
        }
    }

    pub fn constant(&self, c: FieldElement) -> ParamCoef {
        ParamCoef::constant(c)
    }

    pub fn from_terms(&self, terms: Vec<(ParamMono, FieldElement)>) -> ParamCoef {
        ParamCoef::from_unsorted(terms)
    }

    /// Factors of a monomial as `(index, exponent)` pairs in index order.
    pub fn factors(&self, m: ParamMono) -> Vec<(usize, u32)> {
        (0..self.nparams)
            .filter_map(|i| {
                let e = self.exponent(m, i);
                (e > 0).then_some((i, e))
            })
            .collect()
    }

    /// Bitmask of parameters occurring in `c`.
    pub fn support_vars(&self, c: &ParamCoef) -> u64 {
        let mut mask = 0u64;
        for (m, _) in &c.terms {
            for i in 0..self.nparams {
                if self.exponent(*m, i) > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn scale(&self, c: &ParamCoef, k: FieldElement) -> ParamCoef {
        if k.is_zero() {
            return ParamCoef::zero();
        }
        ParamCoef {
            terms: c.terms.iter().map(|&(m, v)| (m, self.field.mul(v, k))).collect(),
        }
    }

    pub fn pow(&self, c: &ParamCoef, e: u32) -> ParamCoef {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, c);
        }
        acc
    }

    /// Value of `c` at a full assignment of the parameters.
    pub fn eval(&self, c: &ParamCoef, values: &[FieldElement]) -> FieldElement {
        debug_assert!(values.len() >= self.nparams);
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for &(m, k) in &c.terms {
            let mut t = k;
            for (i, &v) in values.iter().enumerate().take(self.nparams) {
                let e = self.exponent(m, i);
                if e > 0 {
                    t = f.mul(t, f.pow(v, e as u64));
                    if t.is_zero() {
                        break;
                    }
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Replaces parameter `i` by `expr` everywhere in `c`.
    pub fn substitute(&self, c: &ParamCoef, i: usize, expr: &ParamCoef) -> ParamCoef {
        let shift = i as u32 * self.bits;
        if c.terms.iter().all(|(m, _)| (m.0 >> shift) & self.mask == 0) {
            return c.clone();
        }
        let q1 = (self.field.q() - 1) as usize;
        let mut powers = Vec::with_capacity(q1 + 1);
        powers.push(self.one());
        for k in 1..=q1 {
            let next = self.mul(&powers[k - 1], expr);
            powers.push(next);
        }
        let mut out = Vec::new();
        for &(m, k) in &c.terms {
            let e = ((m.0 >> shift) & self.mask) as usize;
            if e == 0 {
                out.push((m, k));
                continue;
            }
            let rest = ParamMono(m.0 & !(self.mask << shift));
            for &(pm, pk) in &powers[e].terms {
                out.push((self.mono_mul(rest, pm), self.field.mul(k, pk)));
            }
        }
        ParamCoef::from_unsorted(out)
    }

    /// If `c = λ·a_i + rest` with `λ` a nonzero constant and `rest` free of
    /// `a_i`, returns `(λ, rest)`.
    pub fn linear_in(&self, c: &ParamCoef, i: usize) -> Option<(FieldElement, ParamCoef)> {
        let shift = i as u32 * self.bits;
        let unit = ParamMono(1u64 << shift);
        let mut lambda = None;
        let mut rest = Vec::with_capacity(c.terms.len());
        for &(m, k) in &c.terms {
            if m == unit {
                lambda = Some(k);
            } else if (m.0 >> shift) & self.mask != 0 {
                return None;
            } else {
                rest.push((m, k));
            }
        }
        lambda.map(|l| (l, ParamCoef { terms: rest }))
    }

    /// Exact quotient `c / f` in the polynomial ring, if `f` divides `c`
    /// without remainder and the product needs no field-equation reduction.
    pub fn exact_div(&self, c: &ParamCoef, f: &ParamCoef) -> Option<ParamCoef> {
        if f.is_zero() {
            return None;
        }
        if let Some(k) = f.as_constant() {
            return Some(self.scale(c, self.field.inv(k).ok()?));
        }
        // Lex division on unpacked exponent vectors; the leading term is the
        // largest key of the map.
        type Wide = BTreeMap<Vec<u32>, FieldElement>;
        let unpack = |p: &ParamCoef| -> Wide {
            p.terms
                .iter()
                .map(|&(m, k)| ((0..self.nparams).rev().map(|i| self.exponent(m, i)).collect(), k))
                .collect()
        };
        let fw = unpack(f);
        let (flead, &fk) = fw.iter().next_back()?;
        let fk_inv = self.field.inv(fk).ok()?;
        let mut rem = unpack(c);
        let mut quot: Vec<(Vec<u32>, FieldElement)> = Vec::new();
        while let Some((lead, &lk)) = rem.iter().next_back() {
            if lead.iter().zip(flead).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Vec<u32> = lead.iter().zip(flead).map(|(a, b)| a - b).collect();
            let qk = self.field.mul(lk, fk_inv);
            for (fm, &fv) in &fw {
                let key: Vec<u32> = fm.iter().zip(&qm).map(|(a, b)| a + b).collect();
                let v = self.field.mul(fv, qk);
                let slot = rem.entry(key).or_insert(FieldElement::ZERO);
                *slot = self.field.add(*slot, v);
            }
            rem.retain(|_, v| !v.is_zero());
            quot.push((qm, qk));
        }
        let q1 = self.field.q() - 1;
        if quot.iter().any(|(m, _)| m.iter().any(|&e| e > q1)) {
            return None;
        }
        let terms = quot
            .into_iter()
            .map(|(m, k)| {
                let factors: Vec<(usize, u32)> =
                    m.iter().rev().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                (self.mono(&factors).expect("indices in range"), k)
            })
            .collect();
        let q = ParamCoef::from_unsorted(terms);
        (self.mul(&q, f) == *c).then_some(q)
    }

    /// Formats `c` in the text grammar (`3*a1^2*a4 + a2 + 1`).
    pub fn format(&self, c: &ParamCoef) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        self.sorted_for_display(c)
            .iter()
            .map(|&(m, k)| {
                let mut parts = Vec::new();
                if k != FieldElement::ONE || m.is_one() {
                    parts.push(k.to_string());
                }
                parts.extend(self.factor_strings(m));
                parts.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub(crate) fn factor_strings(&self, m: ParamMono) -> Vec<String> {
        self.factors(m)
            .into_iter()
            .map(|(i, e)| if e == 1 { format!("a{}", i + 1) } else { format!("a{}^{}", i + 1, e) })
            .collect()
    }

    /// Terms in display order: higher total degree first, then by the
    /// exponent of the lowest-indexed parameter, descending.
    pub(crate) fn sorted_for_display(&self, c: &ParamCoef) -> Vec<(ParamMono, FieldElement)> {
        let mut terms = c.terms.clone();
        terms.sort_by(|a, b| {
            let da: u32 = (0..self.nparams).map(|i| self.exponent(a.0, i)).sum();
            let db: u32 = (0..self.nparams).map(|i| self.exponent(b.0, i)).sum();
            db.cmp(&da).then_with(|| {
                for i in 0..self.nparams {
                    let o = self.exponent(b.0, i).cmp(&self.exponent(a.0, i));
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        terms
    }
}

impl Ring for ParamRing {
    type Element = ParamCoef;

    fn zero(&self) -> ParamCoef {
        ParamCoef::zero()
    }

    fn one(&self) -> ParamCoef {
        ParamCoef::constant(FieldElement::ONE)
    }

    fn is_zero(&self, a: &ParamCoef) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &ParamCoef, b: &ParamCoef) -> ParamCoef {
        let (x, y) = (&a.terms, &b.terms);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(x[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(y[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = self.field.add(x[i].1, y[j].1);
                    if !s.is_zero() {
                        out.push((x[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x[i..]);
        out.extend_from_slice(&y[j..]);
        ParamCoef { terms: out }
    }

    fn neg(&self, a: &ParamCoef) -> ParamCoef {
        a.clone()
    }

    fn mul(&self, a: &ParamCoef, b: &ParamCoef) -> ParamCoef {
        if a.is_zero() || b.is_zero() {
            return ParamCoef::zero();
        }
        if let Some(k) = a.as_constant() {
            return self.scale(b, k);
        }
        if let Some(k) = b.as_constant() {
            return self.scale(a, k);
        }
        let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
        for &(ma, ka) in &a.terms {
            for &(mb, kb) in &b.terms {
                out.push((self.mono_mul(ma, mb), self.field.mul(ka, kb)));
            }
        }
        ParamCoef::from_unsorted(out)
    }

    /// Units are the coefficients that vanish nowhere, i.e. `c^(q-1) = 1`;
    /// their inverse is `c^(q-2)`.
    fn try_inverse(&self, a: &ParamCoef) -> Option<ParamCoef> {
        if let Some(k) = a.as_constant() {
            return self.field.inv(k).ok().map(ParamCoef::constant);
        }
        let q = self.field.q();
        let inv = self.pow(a, q - 2);
        self.is_one(&self.mul(&inv, a)).then_some(inv)
    }
}

/// Display adapter for a coefficient together with its ring.
pub struct CoefDisplay<'a>(pub &'a ParamRing, pub &'a ParamCoef);

impl fmt::Display for CoefDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(t: usize) -> ParamRing {
        ParamRing::new(FieldSpec::gf8(), t).unwrap()
    }

    #[test]
    fn capacity_for_gf8() {
        assert_eq!(ParamRing::capacity(&FieldSpec::gf8()), 21);
        assert!(ParamRing::new(FieldSpec::gf8(), 22).is_err());
    }

    #[test]
    fn field_equation_reduction() {
        let r = ring(2);
        let a1 = r.var(0);
        assert_eq!(r.pow(&a1, 8), a1);
        assert_eq!(r.pow(&a1, 15), r.pow(&a1, 8));
        let a1_7 = r.pow(&a1, 7);
        assert_eq!(r.format(&a1_7), "a1^7");
        assert_eq!(r.format(&r.mul(&a1_7, &a1)), "a1");
    }

    #[test]
    fn pointwise_agreement() {
        let r = ring(2);
        let f = r.field().clone();
        let (a1, a2) = (r.var(0), r.var(1));
        let e = r.add(&r.mul(&r.pow(&a1, 5), &a2), &r.add(&r.pow(&a2, 3), &r.one()));
        let sq = r.mul(&e, &e);
        for x in f.elements() {
            for y in f.elements() {
                let v = r.eval(&e, &[x, y]);
                assert_eq!(r.eval(&sq, &[x, y]), f.mul(v, v));
            }
        }
    }

    #[test]
    fn substitution_and_linear_form() {
        let r = ring(4);
        let (a3, a4) = (r.var(2), r.var(3));
        let c = r.add(&a3, &a4);
        let (l, rest) = r.linear_in(&c, 2).unwrap();
        assert_eq!(l, FieldElement::ONE);
        assert_eq!(rest, a4);
        assert!(r.linear_in(&r.mul(&a3, &a4), 2).is_none());
        let s = r.substitute(&r.mul(&a3, &a3), 2, &a4);
        assert_eq!(s, r.mul(&a4, &a4));
    }

    #[test]
    fn exact_division() {
        let r = ring(2);
        let a1 = r.var(0);
        let a1p1 = r.add(&a1, &r.one());
        let prod = r.mul(&a1, &a1p1);
        assert_eq!(r.exact_div(&prod, &a1p1), Some(a1.clone()));
        assert_eq!(r.exact_div(&r.add(&prod, &r.one()), &a1p1), None);
    }

    #[test]
    fn units() {
        let r = ring(1);
        let a1 = r.var(0);
        assert!(r.try_inverse(&a1).is_none());
        // a1^2 + a1 + 1 has no root in GF(8) (it is irreducible over GF(2) of
        // degree 2, and GF(4) is not a subfield of GF(8)).
        let c = r.add(&r.add(&r.pow(&a1, 2), &a1), &r.one());
        let inv = r.try_inverse(&c).unwrap();
        assert!(r.is_one(&r.mul(&c, &inv)));
    }
}
