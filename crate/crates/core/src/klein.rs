//! The Klein quartic over GF(8) and the objects derived from it.

use crate::casebound::{parse_trace, verify_trace, BoundReport};
use crate::codes::{enumerate_variety, Variety};
use crate::error::Result;
use crate::gf::FieldSpec;
use crate::groebner::{buchberger, footprint, Footprint, GroebnerBasis};
use crate::poly::text::{parse, parse_monomial};
use crate::poly::{Monomial, MonomialOrder};
use crate::{FieldPoly, Polynomial};

/// `Y^3 + X^3*Y + X`.
pub const KLEIN_CURVE: &str = "Y^3 + X^3*Y + X";

/// Field, order, ideal and everything computed from them once.
#[derive(Clone, Debug)]
pub struct Setup {
    pub field: FieldSpec,
    pub order: MonomialOrder,
    /// Reduced basis of the curve ideal alone.
    pub curve: GroebnerBasis,
    /// Reduced basis of the curve ideal plus the field equations.
    pub closure: GroebnerBasis,
    pub footprint: Footprint,
    pub variety: Variety,
}

impl Setup {
    pub fn new(field: FieldSpec, order: MonomialOrder, curve_gens: &[FieldPoly]) -> Result<Setup> {
        let arity = curve_gens.first().map_or(2, |g| g.arity());
        let mut gens = curve_gens.to_vec();
        gens.extend((0..arity).map(|i| field_equation(&field, arity, i)));
        let curve = buchberger(&field, curve_gens, &order)?;
        let closure = buchberger(&field, &gens, &order)?;
        let footprint = footprint(&closure)?;
        let variety = enumerate_variety(&field, &gens, arity)?;
        Ok(Setup {
            field,
            order,
            curve,
            closure,
            footprint,
            variety,
        })
    }

    /// GF(8) with `x^3 + x + 1`, weights (2, 3), the Klein quartic.
    pub fn klein() -> Result<Setup> {
        let field = FieldSpec::gf8();
        let curve = parse(&field, KLEIN_CURVE, 2)?;
        Setup::new(field, MonomialOrder::klein(), &[curve])
    }

    pub fn arity(&self) -> usize {
        self.closure.arity()
    }

    pub fn n(&self) -> usize {
        self.variety.len()
    }
}

/// `x_i^q + x_i`.
pub fn field_equation(field: &FieldSpec, arity: usize, i: usize) -> FieldPoly {
    let q = field.q();
    Polynomial::monomial(field, Monomial::var(arity, i, q)).add(field, &Polynomial::monomial(field, Monomial::var(arity, i, 1)))
}

/// Largest known minimum distances of `[22, k]_8` codes for the dimensions
/// of the improved table, from the public tables at codetables.de.
pub const BEST_KNOWN: [(usize, usize); 15] = [
    (1, 22),
    (2, 19),
    (3, 18),
    (4, 17),
    (5, 15),
    (7, 13),
    (8, 12),
    (10, 10),
    (11, 9),
    (13, 7),
    (14, 7),
    (15, 6),
    (17, 4),
    (18, 4),
    (20, 2),
];

/// Trace files for the nine analysed classes, keyed by leading monomial.
pub const TRACES: [(&str, &str); 9] = [
    ("Y", include_str!("../../../traces/y.trace")),
    ("Y^2", include_str!("../../../traces/y2.trace")),
    ("X*Y", include_str!("../../../traces/xy.trace")),
    ("X^2*Y", include_str!("../../../traces/x2y.trace")),
    ("X*Y^2", include_str!("../../../traces/xy2.trace")),
    ("X^3*Y", include_str!("../../../traces/x3y.trace")),
    ("X^2*Y^2", include_str!("../../../traces/x2y2.trace")),
    ("X^3*Y^2", include_str!("../../../traces/x3y2.trace")),
    ("X^7", include_str!("../../../traces/x7.trace")),
];

/// Verifies the built-in traces against `setup`.
pub fn shipped_reports(setup: &Setup) -> Result<Vec<BoundReport>> {
    TRACES
        .iter()
        .map(|(lm, src)| {
            let lm = parse_monomial(lm, setup.arity())?;
            verify_trace(setup, &lm, &parse_trace(src, setup.arity())?)
        })
        .collect()
}
