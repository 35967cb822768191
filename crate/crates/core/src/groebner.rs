//! Buchberger's algorithm, normal forms and footprints of zero-dimensional
//! ideals.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{divide, Monomial, MonomialOrder, ReductionMode};
use crate::FieldPoly;

/// A monic Gröbner basis, sorted ascending by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    arity: usize,
    gens: Vec<FieldPoly>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn gens(&self) -> &[FieldPoly] {
        &self.gens
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn heads(&self) -> Vec<Monomial> {
        self.gens
            .iter()
            .map(|g| g.leading_monomial(&self.order).expect("basis elements are nonzero").clone())
            .collect()
    }

    /// Re-checks Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn verify(&self, field: &FieldSpec) -> Result<bool> {
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let s = s_polynomial(field, &self.gens[i], &self.gens[j], &self.order)?;
                if !divide(field, &s, &self.gens, &self.order, ReductionMode::Full)?.remainder.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn monic(field: &FieldSpec, p: &FieldPoly, ord: &MonomialOrder) -> Result<FieldPoly> {
    let (_, &c) = p.leading_term(ord)?;
    Ok(p.scale(field, &field.inv(c)?))
}

/// `lcm/lm(f)·f/lc(f) − lcm/lm(g)·g/lc(g)`.
pub fn s_polynomial(field: &FieldSpec, f: &FieldPoly, g: &FieldPoly, ord: &MonomialOrder) -> Result<FieldPoly> {
    let (mf, &cf) = f.leading_term(ord)?;
    let (mg, &cg) = g.leading_term(ord)?;
    let l = mf.lcm(mg);
    let a = f.mul_term(field, &l.checked_div(mf).expect("lcm"), &field.inv(cf)?)?;
    let b = g.mul_term(field, &l.checked_div(mg).expect("lcm"), &field.inv(cg)?)?;
    Ok(a.sub(field, &b))
}

/// The reduced monic Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(field: &FieldSpec, gens: &[FieldPoly], ord: &MonomialOrder) -> Result<GroebnerBasis> {
    let arity = gens.first().map_or(0, |g| g.arity());
    let mut basis: Vec<FieldPoly> = Vec::new();
    for g in gens {
        if g.arity() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: g.arity(),
            });
        }
        if !g.is_zero() {
            basis.push(monic(field, g, ord)?);
        }
    }
    let head = |p: &FieldPoly| p.leading_monomial(ord).expect("nonzero").clone();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while !pairs.is_empty() {
        // Normal strategy: the pair with the smallest lcm of heads.
        let (k, _) = pairs
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| (k, head(&basis[i]).lcm(&head(&basis[j]))))
            .min_by(|a, b| ord.cmp(&a.1, &b.1))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(k);
        if head(&basis[i]).coprime(&head(&basis[j])) {
            continue;
        }
        let s = s_polynomial(field, &basis[i], &basis[j], ord)?;
        let r = divide(field, &s, &basis, ord, ReductionMode::Full)?.remainder;
        if !r.is_zero() {
            let n = basis.len();
            basis.push(monic(field, &r, ord)?);
            pairs.extend((0..n).map(|i| (i, n)));
        }
    }
    reduce_basis(field, basis, ord, arity)
}

fn reduce_basis(field: &FieldSpec, mut basis: Vec<FieldPoly>, ord: &MonomialOrder, arity: usize) -> Result<GroebnerBasis> {
    basis.sort_by(|a, b| {
        ord.cmp(
            a.leading_monomial(ord).expect("nonzero"),
            b.leading_monomial(ord).expect("nonzero"),
        )
    });
    // Minimal basis: drop elements whose head is divisible by an earlier
    // (hence smaller or equal) head.
    let mut minimal: Vec<FieldPoly> = Vec::new();
    for g in basis {
        let h = g.leading_monomial(ord).expect("nonzero");
        if minimal.iter().all(|m| !m.leading_monomial(ord).expect("nonzero").divides(h)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<FieldPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (h, &c) = minimal[i].leading_term(ord)?;
        let mut tail = minimal[i].clone();
        tail.retain(|m, _| m != h);
        let r = divide(field, &tail, &others, ord, ReductionMode::Full)?.remainder;
        let mut g = r;
        g.add_term(field, h.clone(), &c);
        reduced.push(monic(field, &g, ord)?);
    }
    Ok(GroebnerBasis {
        order: ord.clone(),
        arity,
        gens: reduced,
        reduced: true,
    })
}

/// The full-mode remainder of `p` modulo `gb`.
pub fn normal_form(field: &FieldSpec, p: &FieldPoly, gb: &GroebnerBasis) -> Result<FieldPoly> {
    Ok(divide(field, p, &gb.gens, &gb.order, ReductionMode::Full)?.remainder)
}

/// The monomials divisible by no leading monomial of a basis, sorted
/// ascending under its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Footprint {
    monomials: Vec<Monomial>,
    #[serde(skip)]
    order: MonomialOrder,
}

impl Footprint {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.index_of(m).is_some()
    }

    /// Position of `m` in ascending order.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search_by(|x| self.order.cmp(x, m)).ok()
    }

    /// Footprint monomials strictly below `m`, ascending.
    pub fn below(&self, m: &Monomial) -> &[Monomial] {
        let k = self.monomials.partition_point(|x| self.order.cmp(x, m) == Ordering::Less);
        &self.monomials[..k]
    }

    /// Footprint monomials divisible by `m`.
    pub fn upset(&self, m: &Monomial) -> Result<Vec<Monomial>> {
        if !self.contains(m) {
            return Err(Error::NotInFootprint(m.to_string()));
        }
        Ok(self.monomials.iter().filter(|x| m.divides(x)).cloned().collect())
    }
}

/// Walks the box bounded by the pure-power heads.
pub fn footprint(gb: &GroebnerBasis) -> Result<Footprint> {
    let heads = gb.heads();
    let arity = gb.arity;
    let mut bounds = Vec::with_capacity(arity);
    for var in 0..arity {
        let pure = heads
            .iter()
            .filter(|h| (0..arity).all(|i| i == var || h.exp(i) == 0))
            .map(|h| h.exp(var))
            .min();
        bounds.push(pure.ok_or(Error::InfiniteFootprint { var })?);
    }
    let mut monomials = Vec::new();
    let mut exps = vec![0u32; arity];
    if bounds.iter().all(|&b| b > 0) {
        loop {
            let m = Monomial::new(&exps)?;
            if heads.iter().all(|h| !h.divides(&m)) {
                monomials.push(m);
            }
            let mut i = 0;
            while i < arity {
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == arity {
                break;
            }
        }
    }
    if arity == 0 && heads.is_empty() {
        monomials.push(Monomial::one(0));
    }
    monomials.sort_by(|a, b| gb.order.cmp(a, b));
    Ok(Footprint {
        monomials,
        order: gb.order.clone(),
    })
}

/// The three order-domain conditions for a weighted order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderDomainConditions {
    /// The order is a weighted degree order.
    pub weighted_order: bool,
    /// Every generator of the curve ideal has exactly two monomials of top
    /// weight.
    pub two_top_weight_terms: bool,
    /// No two footprint monomials of the closure share a weight.
    pub distinct_footprint_weights: bool,
}

impl OrderDomainConditions {
    pub fn as_tuple(&self) -> (bool, bool, bool) {
        (self.weighted_order, self.two_top_weight_terms, self.distinct_footprint_weights)
    }
}

/// Checks the conditions with the generator condition taken on `curve` (the
/// ideal before the field equations are added) and the weight condition on
/// the footprint of `closure`. For a single ideal pass it twice.
pub fn order_domain_check(curve: &GroebnerBasis, closure: &GroebnerBasis) -> Result<OrderDomainConditions> {
    let Some(weights) = curve.order.weights() else {
        footprint(closure)?;
        return Ok(OrderDomainConditions {
            weighted_order: false,
            two_top_weight_terms: false,
            distinct_footprint_weights: false,
        });
    };
    let two_top = curve.gens.iter().all(|g| {
        let ws: Vec<u64> = g.support().map(|m| m.weight(weights)).collect();
        let top = ws.iter().copied().max().unwrap_or(0);
        ws.iter().filter(|&&w| w == top).count() == 2
    });
    let fp = footprint(closure)?;
    let cw = closure.order.weights().unwrap_or(weights);
    let mut ws: Vec<u64> = fp.monomials.iter().map(|m| m.weight(cw)).collect();
    ws.sort_unstable();
    let distinct = ws.windows(2).all(|w| w[0] != w[1]);
    Ok(OrderDomainConditions {
        weighted_order: true,
        two_top_weight_terms: two_top,
        distinct_footprint_weights: distinct,
    })
}

/// Number of common zeros in `GF(q)^arity`, by brute force.
pub fn count_zeros(field: &FieldSpec, gens: &[FieldPoly], arity: usize) -> Result<usize> {
    let q = field.q() as usize;
    let total = q.pow(arity as u32);
    let mut count = 0;
    let mut point = vec![FieldElement::ZERO; arity];
    for idx in 0..total {
        let mut r = idx;
        for x in point.iter_mut() {
            *x = field.elem((r % q) as u32)?;
            r /= q;
        }
        let mut all = true;
        for g in gens {
            if !g.eval(field, &point)?.is_zero() {
                all = false;
                break;
            }
        }
        count += all as usize;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse;
    use proptest::prelude::*;

    fn p(s: &str) -> FieldPoly {
        parse(&FieldSpec::gf8(), s, 2).unwrap()
    }

    fn i8_gens() -> Vec<FieldPoly> {
        vec![p("Y^3 + X^3*Y + X"), p("X^8 + X"), p("Y^8 + Y")]
    }

    #[test]
    fn klein_basis() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let gb = buchberger(&f, &i8_gens(), &o).unwrap();
        assert_eq!(gb.gens(), &[p("Y^3 + X^3*Y + X"), p("X^8 + X"), p("X^7*Y + Y")]);
        assert!(gb.verify(&f).unwrap());
        for g in gb.gens() {
            assert!(normal_form(&f, g, &gb).unwrap().is_zero());
        }
        assert_eq!(normal_form(&f, &p("Y^3"), &gb).unwrap(), p("X^3*Y + X"));
        assert_eq!(normal_form(&f, &p("X^8"), &gb).unwrap(), p("X"));
    }

    #[test]
    fn s_polynomials() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let k = p("Y^3 + X^3*Y + X");
        assert!(s_polynomial(&f, &k, &k, &o).unwrap().is_zero());
        assert!(s_polynomial(&f, &p("X^2*Y"), &p("Y^3"), &o).unwrap().is_zero());
        let gb = buchberger(&f, &i8_gens(), &o).unwrap();
        let s = s_polynomial(&f, &k, &p("X^8 + X"), &o).unwrap();
        assert!(normal_form(&f, &s, &gb).unwrap().is_zero());
    }

    #[test]
    fn small_bases_and_footprints() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let xy = buchberger(&f, &[p("X"), p("Y")], &o).unwrap();
        assert_eq!(xy.gens(), &[p("X"), p("Y")]);
        assert_eq!(footprint(&xy).unwrap().monomials(), &[Monomial::one(2)]);
        let uni = buchberger(&f, &[p("X^2 + X")], &o).unwrap();
        assert_eq!(uni.gens(), &[p("X^2 + X")]);
        assert_eq!(footprint(&uni), Err(Error::InfiniteFootprint { var: 1 }));
        let unit = buchberger(&f, &[p("X + 1"), p("X")], &o).unwrap();
        assert_eq!(unit.gens(), &[p("1")]);
        assert!(footprint(&unit).unwrap().is_empty());
    }

    #[test]
    fn klein_footprint() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let gb = buchberger(&f, &i8_gens(), &o).unwrap();
        let fp = footprint(&gb).unwrap();
        let mut expected: Vec<Monomial> = (0..=6).flat_map(|a| (0..=2).map(move |b| Monomial::xy(a, b))).collect();
        expected.push(Monomial::xy(7, 0));
        expected.sort_by(|a, b| o.cmp(a, b));
        assert_eq!(fp.monomials(), expected.as_slice());
        assert_eq!(fp.len(), count_zeros(&f, &i8_gens(), 2).unwrap());
        assert_eq!(fp.upset(&Monomial::xy(4, 0)).unwrap().len(), 10);
        assert_eq!(fp.upset(&Monomial::xy(0, 0)).unwrap().len(), 22);
        assert!(fp.upset(&Monomial::xy(0, 3)).is_err());
        assert_eq!(fp.below(&Monomial::xy(0, 1)), &[Monomial::xy(0, 0), Monomial::xy(1, 0)]);
    }

    #[test]
    fn order_domain_conditions() {
        let f = FieldSpec::gf8();
        let o = MonomialOrder::klein();
        let curve = buchberger(&f, &[p("Y^3 + X^3*Y + X")], &o).unwrap();
        let closure = buchberger(&f, &i8_gens(), &o).unwrap();
        assert_eq!(order_domain_check(&curve, &closure).unwrap().as_tuple(), (true, true, false));

        let o1 = MonomialOrder::weighted(vec![1], 0).unwrap();
        let x8 = parse(&f, "X^8 + X", 1).unwrap();
        let gb = buchberger(&f, &[x8], &o1).unwrap();
        assert_eq!(order_domain_check(&gb, &gb).unwrap().as_tuple(), (true, false, true));

        let sq = buchberger(&f, &[p("X^2"), p("Y^8 + Y")], &o).unwrap();
        assert!(!order_domain_check(&sq, &sq).unwrap().two_top_weight_terms);
    }

    fn arb_extra() -> impl Strategy<Value = Vec<FieldPoly>> {
        let poly = proptest::collection::vec((0u32..8, 0u32..8, 1u16..8), 1..5).prop_map(|ts| {
            let f = FieldSpec::gf8();
            FieldPoly::from_terms(
                &f,
                2,
                ts.into_iter().map(|(a, b, c)| (Monomial::xy(a, b), f.elem(c as u32).unwrap())),
            )
            .unwrap()
        });
        proptest::collection::vec(poly, 1..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn footprint_counts_zeros(extra in arb_extra()) {
            let f = FieldSpec::gf8();
            let o = MonomialOrder::klein();
            let mut gens = vec![p("X^8 + X"), p("Y^8 + Y")];
            gens.extend(extra);
            let gb = buchberger(&f, &gens, &o).unwrap();
            prop_assert!(gb.verify(&f).unwrap());
            let fp = footprint(&gb).unwrap();
            prop_assert_eq!(fp.len(), count_zeros(&f, &gens, 2).unwrap());
            let heads = gb.heads();
            for (i, h) in heads.iter().enumerate() {
                for (j, g) in gb.gens().iter().enumerate() {
                    if i != j {
                        prop_assert!(g.support().all(|m| !h.divides(m)));
                    }
                }
            }
        }

        #[test]
        fn normal_form_is_linear_and_idempotent(a in arb_extra(), b in arb_extra()) {
            let f = FieldSpec::gf8();
            let o = MonomialOrder::klein();
            let gb = buchberger(&f, &i8_gens(), &o).unwrap();
            let fp = footprint(&gb).unwrap();
            let (a, b) = (&a[0], &b[0]);
            let na = normal_form(&f, a, &gb).unwrap();
            let nb = normal_form(&f, b, &gb).unwrap();
            prop_assert_eq!(normal_form(&f, &a.add(&f, b), &gb).unwrap(), na.add(&f, &nb));
            prop_assert_eq!(normal_form(&f, &na, &gb).unwrap(), na.clone());
            prop_assert!(na.support().all(|m| fp.contains(m)));
        }
    }
}
