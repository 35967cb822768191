//! Arithmetic in GF(2^m) via log/antilog tables.
//!
//! Elements use the polynomial-basis encoding: bit `i` of the integer is the
//! coefficient of `α^i`, where `α` is a root of the modulus. Addition is XOR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// The canonical GF(8) modulus `x^3 + x + 1`.
pub const GF8_MODULUS: u32 = 0b1011;

/// An element of GF(2^m), stored as its polynomial-basis encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Encoding without range check; callers hold a spec that bounds it.
    pub(crate) const fn from_enc_unchecked(enc: u16) -> Self {
        FieldElement(enc)
    }

    pub const fn enc(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field GF(2^m) with a fixed modulus.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    m: u32,
    modulus: u32,
    q: u32,
    /// `exp[i] = g^i` for `i < 2(q-1)`, so products of logs need no reduction.
    exp: Vec<u16>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u16>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Carry-less product of two GF(2) polynomials reduced modulo `modulus`.
fn clmul_mod(mut a: u32, mut b: u32, modulus: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of GF(2)-polynomial division.
fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn is_irreducible(modulus: u32, m: u32) -> bool {
    // Any factorization has a factor of degree at most m/2.
    (1..=m / 2).all(|d| (1u32 << d..1u32 << (d + 1)).all(|f| gf2_rem(modulus, f) != 0))
}

impl FieldSpec {
    /// Builds GF(2^m) from a modulus bitmask (bit `i` is the coefficient of
    /// `x^i`; bit `m` must be set).
    pub fn new(m: u32, modulus_bits: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::InvalidDegree(m));
        }
        if degree(modulus_bits) != m as i32 {
            return Err(Error::ModulusDegree { m, bits: modulus_bits });
        }
        if !is_irreducible(modulus_bits, m) {
            return Err(Error::ReducibleModulus(modulus_bits));
        }
        let q = 1u32 << m;
        let order = q - 1;
        // x itself need not be primitive for every irreducible modulus, so
        // search for a generator of the multiplicative group.
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u32;
                for i in 1..=order {
                    x = clmul_mod(x, g, modulus_bits, m);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x as u16;
            exp[i + order as usize] = x as u16;
            log[x as usize] = i as u16;
            x = clmul_mod(x, generator, modulus_bits, m);
        }
        Ok(FieldSpec {
            m,
            modulus: modulus_bits,
            q,
            exp,
            log,
        })
    }

    /// GF(8) with the canonical modulus `x^3 + x + 1`.
    pub fn gf8() -> Self {
        FieldSpec::new(3, GF8_MODULUS).expect("x^3+x+1 is irreducible")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn elem(&self, enc: u32) -> Result<FieldElement> {
        if enc < self.q {
            Ok(FieldElement(enc as u16))
        } else {
            Err(Error::InvalidElement { enc, q: self.q })
        }
    }

    /// The polynomial-basis element `α^b`, `b < m`.
    pub fn basis_element(&self, b: u32) -> FieldElement {
        assert!(b < self.m, "basis index {b} out of range");
        FieldElement(1 << b)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[i])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = (self.q - 1) as usize;
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(order - l) % order]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`; nonzero bases reduce the exponent mod `q - 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % order)) % order) as usize])
    }

    /// All `q` elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|e| FieldElement(e as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(|e| FieldElement(e as u16))
    }
}

impl Ring for FieldSpec {
    type Element = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldSpec::add(self, *a, *b)
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        *a
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldSpec::mul(self, *a, *b)
    }

    fn try_inverse(&self, a: &FieldElement) -> Option<FieldElement> {
        self.inv(*a).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8_all() -> Vec<FieldElement> {
        FieldSpec::gf8().elements().collect()
    }

    #[test]
    fn construction() {
        let f = FieldSpec::gf8();
        assert_eq!(f.q(), 8);
        assert_eq!(f.elements().count(), 8);
        let gf2 = FieldSpec::new(1, 0b11).unwrap();
        assert_eq!(gf2.q(), 2);
        assert_eq!(gf2.elements().map(|e| e.enc()).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(FieldSpec::new(3, 0b1001), Err(Error::ReducibleModulus(0b1001)));
        assert!(matches!(FieldSpec::new(0, 0b1), Err(Error::InvalidDegree(0))));
        assert!(matches!(FieldSpec::new(3, 0b111), Err(Error::ModulusDegree { .. })));
    }

    #[test]
    fn x3_plus_1_factors() {
        // (x+1)(x^2+x+1) = x^3+1 over GF(2).
        assert_eq!(clmul_mod(0b11, 0b111, 0, 31), 0b1001);
    }

    #[test]
    fn non_primitive_modulus() {
        // x^4+x^3+x^2+x+1 is irreducible but x has order 5.
        let f = FieldSpec::new(4, 0b11111).unwrap();
        for a in f.nonzero_elements() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            assert_eq!(f.pow(a, 15), FieldElement::ONE);
        }
    }

    #[test]
    fn spot_values() {
        let f = FieldSpec::gf8();
        let e = |x| f.elem(x).unwrap();
        assert_eq!(f.add(e(5), e(5)), FieldElement::ZERO);
        assert_eq!(f.mul(e(2), e(4)), e(3));
        assert_eq!(f.inv(e(2)).unwrap(), e(5));
        assert_eq!(f.inv(FieldElement::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.pow(FieldElement::ZERO, 0), FieldElement::ONE);
        assert_eq!(f.pow(FieldElement::ZERO, 3), FieldElement::ZERO);
        assert_eq!(f.nonzero_elements().count(), 7);
        assert!(f.elem(8).is_err());
    }

    #[test]
    fn inverse_of_alpha_by_search() {
        let f = FieldSpec::gf8();
        let alpha = f.elem(2).unwrap();
        let found: Vec<_> = gf8_all().into_iter().filter(|&b| f.mul(alpha, b) == FieldElement::ONE).collect();
        assert_eq!(found, vec![f.elem(5).unwrap()]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        let f = FieldSpec::gf8();
        let all = gf8_all();
        for &a in &all {
            for &b in &all {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                let s = f.add(a, b);
                assert_eq!(f.mul(s, s), f.add(f.mul(a, a), f.mul(b, b)));
                for &c in &all {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            assert_eq!(f.pow(a, 8), a);
            if !a.is_zero() {
                assert_eq!(f.pow(a, 7), FieldElement::ONE);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
        }
    }
}
