use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Hard cap on any single exponent; runaway multiply/reduce loops hit this.
pub const EXPONENT_CAP: u32 = 1 << 20;

/// An exponent vector. The derived `Ord` is plain lexicographic on the
/// vector and only serves as a storage key; use [`MonomialOrder`] to compare
/// monomials mathematically.
///
/// [`MonomialOrder`]: super::MonomialOrder
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
}

/// Name of variable `i` in a ring of the given arity.
pub fn var_name(i: usize, arity: usize) -> String {
    const NAMES: [&str; 3] = ["X", "Y", "Z"];
    if arity <= NAMES.len() {
        NAMES[i].to_string()
    } else {
        format!("X{}", i + 1)
    }
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, arity),
        }
    }

    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.iter().any(|&e| e > EXPONENT_CAP) {
            return Err(Error::ExponentOverflow { cap: EXPONENT_CAP });
        }
        Ok(Monomial {
            exps: SmallVec::from_slice(exps),
        })
    }

    /// `X^a Y^b` in the bivariate ring.
    pub fn xy(a: u32, b: u32) -> Self {
        Monomial::new(&[a, b]).expect("small exponents")
    }

    /// The single variable `x_i^e`.
    pub fn var(arity: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(arity);
        m.exps[i] = e;
        m
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// `Σ w_i e_i`.
    pub fn weight(&self, weights: &[u32]) -> u64 {
        self.exps.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    fn check_arity(&self, other: &Monomial) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: other.arity(),
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_arity(other)?;
        let mut exps = self.exps.clone();
        for (e, &o) in exps.iter_mut().zip(&other.exps) {
            *e += o;
            if *e > EXPONENT_CAP {
                return Err(Error::ExponentOverflow { cap: EXPONENT_CAP });
            }
        }
        Ok(Monomial { exps })
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.arity() == other.arity() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.min(b)).collect(),
        }
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let arity = self.arity();
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = var_name(i, arity);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
