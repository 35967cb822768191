pub mod casebound;
pub mod codes;
pub mod error;
pub mod gf;
pub mod groebner;
pub mod klein;
pub mod param;
pub mod poly;
pub mod ring;
pub mod rng;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use param::{ParamCoef, ParamRing};
pub use poly::{Monomial, MonomialOrder, Polynomial, ReductionMode};
pub use ring::Ring;

/// Polynomials over a concrete finite field.
pub type FieldPoly = Polynomial<FieldElement>;
/// Polynomials whose coefficients are functions of the parameters.
pub type ParamPoly = Polynomial<ParamCoef>;
