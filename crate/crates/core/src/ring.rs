//! Coefficient domains.
//!
//! Elements do not carry their ring: a finite field needs its log tables to
//! multiply and the parametric ring needs its field, so every operation goes
//! through the ring value, in the style of `symbolica`'s `Ring` trait.

use std::fmt::Debug;

/// A commutative ring with identity whose elements are plain values.
pub trait Ring {
    type Element: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Element;
    fn one(&self) -> Self::Element;
    fn is_zero(&self, a: &Self::Element) -> bool;
    fn is_one(&self, a: &Self::Element) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn neg(&self, a: &Self::Element) -> Self::Element;
    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    /// Multiplicative inverse, when this ring can certify one exists.
    fn try_inverse(&self, a: &Self::Element) -> Option<Self::Element>;
}
