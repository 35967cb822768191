use std::collections::BTreeSet;

use serde::Serialize;

use super::constraints::{ConstraintStore, Satisfiability};
use super::trace::{divisor_name, Action, Divisor, Step, Trace};
use crate::codes::DeltaMap;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, footprint, Footprint};
use crate::klein::Setup;
use crate::param::{ParamCoef, ParamRing};
use crate::poly::text::parse;
use crate::poly::{divide, Monomial, MonomialOrder, ReductionMode};
use crate::ring::Ring;
use crate::{FieldElement, ParamPoly, Polynomial};

/// Seed for the satisfiability searches, which only need to be repeatable.
const SAT_SEED: u64 = 0x6b6c_6569_6e38;

/// Footprint monomials divisible by `m`.
pub fn upset_in_footprint(m: &Monomial, fp: &Footprint) -> Result<Vec<Monomial>> {
    fp.upset(m)
}

/// The count every class gets for free: its own upset.
pub fn divisibility_bound(m: &Monomial, fp: &Footprint) -> Result<usize> {
    Ok(fp.upset(m)?.len())
}

/// One class: the generic polynomial `F = M + Σ a_i N_i` over the footprint
/// monomials `N_i ≺ M`, largest first, and the basis as divisors.
#[derive(Clone, Debug)]
pub struct ClassContext<'a> {
    pub setup: &'a Setup,
    pub lm: Monomial,
    pub ring: ParamRing,
    pub root: ParamPoly,
    pub basis: Vec<ParamPoly>,
    pub baseline: usize,
}

impl<'a> ClassContext<'a> {
    pub fn new(setup: &'a Setup, lm: &Monomial) -> Result<Self> {
        let fp = &setup.footprint;
        let baseline = divisibility_bound(lm, fp)?;
        let below = fp.below(lm);
        let ring = ParamRing::new(setup.field.clone(), below.len())?;
        let mut root = Polynomial::monomial(&ring, lm.clone());
        for (i, n) in below.iter().rev().enumerate() {
            root.add_term(&ring, n.clone(), &ring.var(i));
        }
        let basis = setup.closure.gens().iter().map(|g| g.to_param()).collect();
        Ok(ClassContext {
            setup,
            lm: lm.clone(),
            ring,
            root,
            basis,
            baseline,
        })
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.setup.order
    }

    /// `#(upset(M) ∪ ⋃ upset(claims))`.
    pub fn established(&self, claims: &[Monomial]) -> usize {
        let fp = &self.setup.footprint;
        fp.monomials()
            .iter()
            .filter(|n| self.lm.divides(n) || claims.iter().any(|c| c.divides(n)))
            .count()
    }

    /// Rewrites coefficients under the store and drops the vanishing ones.
    pub fn normalize(&self, store: &ConstraintStore, p: &ParamPoly) -> ParamPoly {
        let check_locus = !store.zeros().is_empty();
        p.map_coeffs(|c| {
            let r = store.reduce(&self.ring, c);
            let gone = r.is_zero() || (check_locus && store.certified_zero(&self.ring, &r));
            (!gone).then_some(r)
        })
    }

    fn divisor(&self, d: &Divisor, f: &ParamPoly, line: usize) -> Result<ParamPoly> {
        match d {
            Divisor::F => Ok(f.clone()),
            Divisor::Basis(i) => self
                .basis
                .get(*i)
                .cloned()
                .ok_or_else(|| invalid(line, format!("the basis has no element {}", divisor_name(d)))),
        }
    }

    /// Parses a branch condition: a polynomial in the parameters only.
    pub fn parse_condition(&self, expr: &str, line: usize) -> Result<ParamCoef> {
        let p = parse(&self.ring, expr, self.setup.arity()).map_err(|e| invalid(line, e.to_string()))?;
        if p.is_zero() {
            return Ok(ParamCoef::zero());
        }
        match p.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if m.is_one() => Ok((*c).clone()),
            _ => Err(invalid(line, format!("condition `{expr}` mentions the variables"))),
        }
    }
}

fn invalid(line: usize, msg: impl Into<String>) -> Error {
    Error::InvalidStep { line, msg: msg.into() }
}

/// One division step `s = q·d + r` with parametric coefficients, checked by
/// multiplying back.
pub fn param_reduce_step(
    ring: &ParamRing,
    ord: &MonomialOrder,
    s: &ParamPoly,
    d: &ParamPoly,
    mode: ReductionMode,
    store: &ConstraintStore,
) -> Result<(ParamPoly, ParamPoly)> {
    let (_, lc) = d.leading_term(ord)?;
    if lc.as_constant().is_none() {
        return Err(Error::UncertifiedLeadingCoefficient);
    }
    let div = divide(ring, s, std::slice::from_ref(d), ord, mode)?;
    let q = div.quotients.into_iter().next().expect("one divisor");
    let r = div.remainder;
    let back = q.mul(ring, d)?.add(ring, &r);
    let reduce = |p: &ParamPoly| p.map_coeffs(|c| Some(store.reduce(ring, c)).filter(|x| !x.is_zero()));
    if reduce(&back) != reduce(s) {
        return Err(Error::InvalidStep {
            line: 0,
            msg: "division identity does not hold".into(),
        });
    }
    Ok((q, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafStatus {
    /// A satisfying parameter assignment was found.
    Satisfiable,
    /// Satisfiability was not decided; the leaf counts towards the bound.
    Unknown,
    /// No parameter assignment reaches this leaf.
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafReport {
    /// Branch conditions from the root, as written.
    pub path: Vec<String>,
    pub claims: Vec<Monomial>,
    pub established: usize,
    pub status: LeafStatus,
    #[serde(skip)]
    pub store: ConstraintStore,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lm: Monomial,
    pub params: usize,
    pub baseline: usize,
    pub leaves: Vec<LeafReport>,
    /// Minimum of `established` over the non-vacuous leaves.
    pub bound: usize,
    /// Reduction steps replayed across all leaves.
    pub steps_checked: usize,
}

impl BoundReport {
    pub fn live_leaves(&self) -> impl Iterator<Item = &LeafReport> {
        self.leaves.iter().filter(|l| l.status != LeafStatus::Vacuous)
    }
}

#[derive(Clone)]
struct State {
    store: ConstraintStore,
    f: ParamPoly,
    w: ParamPoly,
    claims: Vec<Monomial>,
}

struct Walker<'c, 'a> {
    ctx: &'c ClassContext<'a>,
    leaves: Vec<LeafReport>,
    steps_checked: usize,
}

impl Walker<'_, '_> {
    fn leaf(&mut self, st: State, status: LeafStatus) {
        let established = self.ctx.established(&st.claims);
        self.leaves.push(LeafReport {
            path: st.store.path().to_vec(),
            claims: st.claims,
            established,
            status,
            store: st.store,
        });
    }

    fn block(&mut self, mut st: State, steps: &[Step]) -> Result<()> {
        let ctx = self.ctx;
        let ord = ctx.order();
        for (k, step) in steps.iter().enumerate() {
            let line = step.line;
            match &step.action {
                Action::Mul(m) => {
                    st.w = st.w.mul_term(&ctx.ring, m, &ctx.ring.one())?;
                }
                Action::Restart => st.w = st.f.clone(),
                Action::Reduce { divisor, mode } => {
                    let d = ctx.divisor(divisor, &st.f, line)?;
                    let (_, r) = param_reduce_step(&ctx.ring, ord, &st.w, &d, *mode, &st.store).map_err(|e| match e {
                        Error::InvalidStep { msg, .. } => invalid(line, msg),
                        other => other,
                    })?;
                    let r = ctx.normalize(&st.store, &r);
                    if r == st.w {
                        return Err(invalid(line, format!("no term is divisible by the head of {}", divisor_name(divisor))));
                    }
                    if let (Some(a), Some(b)) = (r.leading_monomial(ord), st.w.leading_monomial(ord)) {
                        if ord.cmp(a, b).is_gt() {
                            return Err(invalid(line, "reduction raised the leading monomial"));
                        }
                    }
                    st.w = r;
                    self.steps_checked += 1;
                }
                Action::Claim(m) => {
                    let unjustified = |reason: String| Error::UnjustifiedClaim {
                        line,
                        claimed: m.to_string(),
                        reason,
                    };
                    if !ctx.setup.footprint.contains(m) {
                        return Err(unjustified("not a footprint monomial".into()));
                    }
                    let (h, c) = st.w.leading_term(ord).map_err(|_| unjustified("the working polynomial is zero".into()))?;
                    if h != m {
                        return Err(unjustified(format!("the leading monomial is {h}")));
                    }
                    if !st.store.certified_nonzero(&ctx.ring, c) {
                        return Err(unjustified(format!(
                            "leading coefficient {} is not certified nonzero",
                            ctx.ring.format(c)
                        )));
                    }
                    if !st.claims.contains(m) {
                        st.claims.push(m.clone());
                    }
                }
                Action::Branch { expr, nonzero, zero } => {
                    if k + 1 != steps.len() {
                        return Err(invalid(line, "a branch must end its block"));
                    }
                    let c = ctx.parse_condition(expr, line)?;
                    let mut nz = st.clone();
                    nz.store.assume_nonzero(&ctx.ring, &c);
                    let mut z = st;
                    z.store.assume_zero(&ctx.ring, &c);
                    for (mut child, block) in [(nz, nonzero), (z, zero)] {
                        if child.store.is_contradictory()
                            || child.store.satisfiability(&ctx.ring, SAT_SEED) == Satisfiability::Unsatisfiable
                        {
                            self.leaf(child, LeafStatus::Vacuous);
                            continue;
                        }
                        child.f = ctx.normalize(&child.store, &child.f);
                        child.w = ctx.normalize(&child.store, &child.w);
                        self.block(child, block)?;
                    }
                    return Ok(());
                }
            }
        }
        let status = match st.store.satisfiability(&ctx.ring, SAT_SEED) {
            Satisfiability::Witness(_) => LeafStatus::Satisfiable,
            Satisfiability::Unknown => LeafStatus::Unknown,
            Satisfiability::Unsatisfiable => LeafStatus::Vacuous,
        };
        self.leaf(st, status);
        Ok(())
    }
}

/// Replays a trace for the class with leading monomial `lm`.
pub fn verify_trace(setup: &Setup, lm: &Monomial, trace: &Trace) -> Result<BoundReport> {
    if let Some(t) = &trace.lm {
        if t != lm {
            return Err(invalid(0, format!("trace is for {t}, not {lm}")));
        }
    }
    let ctx = ClassContext::new(setup, lm)?;
    verify_in(&ctx, &trace.steps)
}

pub(crate) fn verify_in(ctx: &ClassContext<'_>, steps: &[Step]) -> Result<BoundReport> {
    let store = ConstraintStore::new(&ctx.ring);
    let st = State {
        store,
        f: ctx.root.clone(),
        w: ctx.root.clone(),
        claims: Vec::new(),
    };
    let mut walker = Walker {
        ctx,
        leaves: Vec::new(),
        steps_checked: 0,
    };
    walker.block(st, steps)?;
    let bound = walker
        .leaves
        .iter()
        .filter(|l| l.status != LeafStatus::Vacuous)
        .map(|l| l.established)
        .min()
        .ok_or(Error::VacuousEverywhere)?;
    Ok(BoundReport {
        lm: ctx.lm.clone(),
        params: ctx.ring.nparams(),
        baseline: ctx.baseline,
        leaves: walker.leaves,
        bound,
        steps_checked: walker.steps_checked,
    })
}

/// Concrete spot checks of one leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub samples: usize,
    /// `(parameter values, claimed monomial)` pairs where the claim failed.
    pub violations: Vec<(Vec<FieldElement>, Monomial)>,
}

/// Samples parameter values meeting the leaf's constraints and checks that
/// every claimed monomial, and `M` itself, is a leading monomial of the
/// concrete ideal `⟨F⟩ + I`.
pub fn instantiate_and_check(
    setup: &Setup,
    report: &BoundReport,
    leaf: &LeafReport,
    nsamples: usize,
    seed: u64,
) -> Result<InstanceReport> {
    let ctx = ClassContext::new(setup, &report.lm)?;
    let samples = leaf
        .store
        .sample(&ctx.ring, seed, nsamples)
        .ok_or(Error::UnsatisfiableLeaf)?;
    let mut violations = Vec::new();
    let mut expected: BTreeSet<&Monomial> = leaf.claims.iter().collect();
    expected.insert(&report.lm);
    for values in &samples {
        let f = ctx.root.instantiate(&ctx.ring, values);
        let mut gens = setup.closure.gens().to_vec();
        gens.push(f);
        let gb = buchberger(&setup.field, &gens, &setup.order)?;
        let fp = footprint(&gb)?;
        for m in &expected {
            if fp.contains(m) {
                violations.push((values.clone(), (*m).clone()));
            }
        }
    }
    Ok(InstanceReport {
        samples: samples.len(),
        violations,
    })
}

/// `δ(M)` for every footprint monomial: the better of the divisibility count
/// and any verified trace bound.
pub fn figure2_map(setup: &Setup, reports: &[BoundReport]) -> Result<DeltaMap> {
    let fp = &setup.footprint;
    let mut entries = Vec::with_capacity(fp.len());
    for m in fp.monomials() {
        let base = divisibility_bound(m, fp)?;
        let best = reports.iter().filter(|r| &r.lm == m).map(|r| r.bound).fold(base, usize::max);
        entries.push((m.clone(), best));
    }
    Ok(DeltaMap::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casebound::parse_trace;
    use crate::poly::text::parse_monomial;

    fn mono(s: &str) -> Monomial {
        parse_monomial(s, 2).unwrap()
    }

    #[test]
    fn baselines() {
        let s = Setup::klein().unwrap();
        let fp = &s.footprint;
        assert_eq!(upset_in_footprint(&mono("X^4"), fp).unwrap().len(), 10);
        assert_eq!(upset_in_footprint(&mono("X^6*Y^2"), fp).unwrap(), vec![mono("X^6*Y^2")]);
        assert_eq!(upset_in_footprint(&mono("1"), fp).unwrap().len(), 22);
        assert_eq!(divisibility_bound(&mono("Y"), fp).unwrap(), 14);
        assert_eq!(divisibility_bound(&mono("X^2*Y^2"), fp).unwrap(), 5);
        assert_eq!(divisibility_bound(&mono("X^7"), fp).unwrap(), 1);
        assert!(matches!(divisibility_bound(&mono("Y^3"), fp), Err(Error::NotInFootprint(_))));
    }

    #[test]
    fn root_polynomial_numbering() {
        let s = Setup::klein().unwrap();
        let ctx = ClassContext::new(&s, &mono("Y^2")).unwrap();
        assert_eq!(ctx.ring.nparams(), 6);
        assert_eq!(
            crate::poly::text::format(&ctx.ring, &ctx.root, ctx.order()),
            "Y^2 + a1*X^3 + a2*X*Y + a3*X^2 + a4*Y + a5*X + a6"
        );
        assert_eq!(ClassContext::new(&s, &mono("X^6*Y^2")).unwrap().ring.nparams(), 21);
    }

    #[test]
    fn reduce_steps() {
        let s = Setup::klein().unwrap();
        let ctx = ClassContext::new(&s, &mono("Y")).unwrap();
        let store = ConstraintStore::new(&ctx.ring);
        let ord = ctx.order();
        let f = &ctx.root;
        let (q, r) = param_reduce_step(&ctx.ring, ord, f, f, ReductionMode::Full, &store).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::monomial(&ctx.ring, Monomial::one(2)));
        // X^7 is not divisible by Y^3.
        let x7 = Polynomial::monomial(&ctx.ring, mono("X^7"));
        let (q, r) = param_reduce_step(&ctx.ring, ord, &x7, &ctx.basis[0], ReductionMode::Head, &store).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, x7);
        let a1x = Polynomial::term(&ctx.ring, mono("Y"), ctx.ring.var(0));
        assert_eq!(
            param_reduce_step(&ctx.ring, ord, &x7, &a1x, ReductionMode::Head, &store),
            Err(Error::UncertifiedLeadingCoefficient)
        );
    }

    #[test]
    fn empty_trace_gives_the_baseline() {
        let s = Setup::klein().unwrap();
        let r = verify_trace(&s, &mono("X*Y"), &parse_trace("", 2).unwrap()).unwrap();
        assert_eq!(r.bound, 12);
        assert_eq!(r.leaves.len(), 1);
    }

    #[test]
    fn rejected_steps() {
        let s = Setup::klein().unwrap();
        let run = |src: &str| verify_trace(&s, &mono("Y"), &parse_trace(src, 2).unwrap());
        assert!(matches!(run("claim X"), Err(Error::UnjustifiedClaim { line: 1, .. })));
        assert!(matches!(run("red K head"), Err(Error::InvalidStep { line: 1, .. })));
        assert!(matches!(run("mul Y^2\nred K head\nred F full\nclaim X^4"), Err(Error::UnjustifiedClaim { line: 4, .. })));
        assert!(matches!(run("branch a1 { } else { }\nclaim Y"), Err(Error::InvalidStep { .. })));
        assert!(matches!(run("branch X { } else { }"), Err(Error::InvalidStep { .. })));
        assert!(matches!(run("red G9 head"), Err(Error::InvalidStep { .. })));
        // Both children of a constant split: the zero child is vacuous.
        let r = run("branch 1 { } else { }").unwrap();
        assert_eq!(r.live_leaves().count(), 1);
        assert_eq!(r.bound, 14);
        assert!(matches!(
            verify_trace(&s, &mono("X"), &parse_trace("lm Y", 2).unwrap()),
            Err(Error::InvalidStep { .. })
        ));
    }

    #[test]
    fn bound_map_takes_the_max() {
        let s = Setup::klein().unwrap();
        let dm = figure2_map(&s, &[]).unwrap();
        assert_eq!(dm.len(), 22);
        assert_eq!(dm.get(&mono("Y")), Some(14));
        assert_eq!(dm.get(&mono("1")), Some(22));
    }
}
