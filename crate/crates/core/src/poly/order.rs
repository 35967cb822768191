use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;
use crate::error::{Error, Result};

/// A monomial ordering.
///
/// `WeightedDegLex` compares `Σ w_i e_i` first. On equal weight the monomial
/// with the larger exponent of `tiebreak_var` is the larger one; any further
/// tie is broken by the remaining variables from the highest index down.
/// `Lex` compares exponents from variable 0 upward (`X > Y > ...`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonomialOrder {
    Lex,
    WeightedDegLex { weights: Vec<u32>, tiebreak_var: usize },
}

impl MonomialOrder {
    /// Weights `(2, 3)` on `(X, Y)`, ties won by the larger `Y` exponent.
    pub fn klein() -> Self {
        MonomialOrder::WeightedDegLex {
            weights: vec![2, 3],
            tiebreak_var: 1,
        }
    }

    pub fn weighted(weights: Vec<u32>, tiebreak_var: usize) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) || tiebreak_var >= weights.len() {
            return Err(Error::ArityMismatch {
                expected: weights.len(),
                got: tiebreak_var + 1,
            });
        }
        Ok(MonomialOrder::WeightedDegLex { weights, tiebreak_var })
    }

    pub fn weights(&self) -> Option<&[u32]> {
        match self {
            MonomialOrder::Lex => None,
            MonomialOrder::WeightedDegLex { weights, .. } => Some(weights),
        }
    }

    /// The weight of `m` under a weighted order.
    pub fn weight(&self, m: &Monomial) -> Option<u64> {
        self.weights().map(|w| m.weight(w))
    }

    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Result<Ordering> {
        if u.arity() != v.arity() {
            return Err(Error::ArityMismatch {
                expected: u.arity(),
                got: v.arity(),
            });
        }
        if let MonomialOrder::WeightedDegLex { weights, .. } = self {
            if weights.len() != u.arity() {
                return Err(Error::ArityMismatch {
                    expected: weights.len(),
                    got: u.arity(),
                });
            }
        }
        Ok(self.cmp(u, v))
    }

    /// Unchecked comparison for hot paths; arities must already agree.
    pub fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        debug_assert_eq!(u.arity(), v.arity());
        match self {
            MonomialOrder::Lex => u.exps().cmp(v.exps()),
            MonomialOrder::WeightedDegLex { weights, tiebreak_var } => {
                let t = *tiebreak_var;
                u.weight(weights)
                    .cmp(&v.weight(weights))
                    .then_with(|| u.exp(t).cmp(&v.exp(t)))
                    .then_with(|| {
                        (0..u.arity())
                            .rev()
                            .filter(|&i| i != t)
                            .map(|i| u.exp(i).cmp(&v.exp(i)))
                            .find(|o| o.is_ne())
                            .unwrap_or(Ordering::Equal)
                    })
            }
        }
    }

    pub fn max<'a>(&self, u: &'a Monomial, v: &'a Monomial) -> &'a Monomial {
        if self.cmp(u, v) == Ordering::Less {
            v
        } else {
            u
        }
    }
}
