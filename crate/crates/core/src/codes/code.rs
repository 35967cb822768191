use std::collections::HashSet;

use serde::Serialize;

use super::linalg::{self, Matrix};
use super::Variety;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::groebner::{buchberger, footprint, GroebnerBasis};
use crate::poly::Monomial;
use crate::FieldPoly;

/// `C(I, L)`: the span of the evaluation vectors of the monomials in `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluationCode {
    monomials: Vec<Monomial>,
    #[serde(skip)]
    variety: Variety,
    generator: Matrix,
}

impl EvaluationCode {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    /// Row `i` is the evaluation vector of `monomials()[i]`.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.variety.len()
    }

    pub fn k(&self) -> usize {
        self.monomials.len()
    }
}

pub fn hamming_weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// `(F(P_1), ..., F(P_n))` in variety order.
pub fn evaluation_vector(field: &FieldSpec, f: &FieldPoly, v: &Variety) -> Result<Vec<FieldElement>> {
    v.points().iter().map(|p| f.eval(field, p.coords())).collect()
}

pub fn monomial_vector(field: &FieldSpec, m: &Monomial, v: &Variety) -> Vec<FieldElement> {
    v.points()
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .zip(m.exps())
                .fold(FieldElement::ONE, |acc, (&x, &e)| field.mul(acc, field.pow(x, e as u64)))
        })
        .collect()
}

/// Builds the generator matrix and checks it has full rank.
pub fn build_code(field: &FieldSpec, monomials: &[Monomial], v: &Variety) -> Result<EvaluationCode> {
    let mut seen = HashSet::new();
    for m in monomials {
        if !seen.insert(m) {
            return Err(Error::DuplicateMonomial(m.to_string()));
        }
    }
    let generator: Matrix = monomials.iter().map(|m| monomial_vector(field, m, v)).collect();
    let rank = linalg::rank(field, &generator);
    if rank != monomials.len() {
        return Err(Error::RankDeficient {
            rank,
            expected: monomials.len(),
        });
    }
    Ok(EvaluationCode {
        monomials: monomials.to_vec(),
        variety: v.clone(),
        generator,
    })
}

impl EvaluationCode {
    /// The codeword `Σ c_i · row_i`.
    pub fn encode(&self, field: &FieldSpec, message: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.n()];
        for (row, &c) in self.generator.iter().zip(message) {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = field.add(*o, field.mul(c, x));
            }
        }
        out
    }
}

/// `n − #Δ(⟨F⟩ + I)`, with `closure` a Gröbner basis of `I`.
pub fn weight_via_footprint(field: &FieldSpec, f: &FieldPoly, closure: &GroebnerBasis) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = footprint(closure)?.len();
    let mut gens = closure.gens().to_vec();
    gens.push(f.clone());
    let gb = buchberger(field, &gens, closure.order())?;
    Ok(n - footprint(&gb)?.len())
}

/// Number of codewords of weight one, via the parity-check matrix: the unit
/// vector `e_j` lies in the code iff column `j` of every dual basis vector
/// is zero, and then all `q − 1` multiples do.
pub fn count_weight_one(field: &FieldSpec, code: &EvaluationCode) -> usize {
    let n = code.n();
    let h = linalg::nullspace(field, &code.generator, n);
    let directions = (0..n).filter(|&j| h.iter().all(|row| row[j].is_zero())).count();
    directions * (field.q() as usize - 1)
}
