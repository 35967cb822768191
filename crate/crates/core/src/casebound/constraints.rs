//! Conditions on the parameters collected along one path of a case split.

use rand::RngExt;

use crate::gf::FieldElement;
use crate::param::{ParamCoef, ParamRing};
use crate::rng;

/// Largest number of parameters scanned exhaustively by the certificates.
pub const EXHAUSTIVE_VARS: usize = 6;
const RANDOM_TRIES: usize = 4096;

/// `a_i := expr` substitutions plus the `≠ 0` and nonlinear `= 0` facts.
///
/// Substitutions are kept fully reduced: no right-hand side mentions a
/// substituted parameter, so one pass of substitution normalizes any
/// expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintStore {
    subs: Vec<Option<ParamCoef>>,
    nonzeros: Vec<ParamCoef>,
    zeros: Vec<ParamCoef>,
    /// Set once a contradiction is detected syntactically.
    contradiction: bool,
    /// Human-readable record of the conditions, in the order added.
    path: Vec<String>,
}

/// Outcome of the satisfiability search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfiability {
    /// A full parameter assignment meeting every constraint.
    Witness(Vec<FieldElement>),
    Unsatisfiable,
    /// Too many parameters involved to decide by enumeration.
    Unknown,
}

impl ConstraintStore {
    pub fn new(ring: &ParamRing) -> Self {
        ConstraintStore {
            subs: vec![None; ring.nparams()],
            nonzeros: Vec::new(),
            zeros: Vec::new(),
            contradiction: false,
            path: Vec::new(),
        }
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradiction
    }

    pub fn path(&self) -> &[String] {
        &self.path
    }

    pub fn substitution(&self, i: usize) -> Option<&ParamCoef> {
        self.subs[i].as_ref()
    }

    pub fn nonzeros(&self) -> &[ParamCoef] {
        &self.nonzeros
    }

    pub fn zeros(&self) -> &[ParamCoef] {
        &self.zeros
    }

    /// Applies the substitutions.
    pub fn reduce(&self, ring: &ParamRing, c: &ParamCoef) -> ParamCoef {
        let mut out = c.clone();
        for (i, s) in self.subs.iter().enumerate() {
            if let Some(e) = s {
                out = ring.substitute(&out, i, e);
            }
        }
        out
    }

    /// Records `c ≠ 0`.
    pub fn assume_nonzero(&mut self, ring: &ParamRing, c: &ParamCoef) {
        let r = self.reduce(ring, c);
        self.path.push(format!("{} != 0", ring.format(c)));
        if r.is_zero() {
            self.contradiction = true;
        } else if r.as_constant().is_none() && !self.nonzeros.contains(&r) {
            self.nonzeros.push(r);
        }
    }

    /// Records `c = 0`, turning it into a substitution when `c` is linear
    /// with a constant coefficient in some parameter.
    pub fn assume_zero(&mut self, ring: &ParamRing, c: &ParamCoef) {
        self.path.push(format!("{} = 0", ring.format(c)));
        self.add_zero(ring, c);
    }

    fn add_zero(&mut self, ring: &ParamRing, c: &ParamCoef) {
        let r = self.reduce(ring, c);
        if r.is_zero() {
            return;
        }
        if r.as_constant().is_some() {
            self.contradiction = true;
            return;
        }
        let Some((i, lambda, rest)) = (0..ring.nparams()).find_map(|i| ring.linear_in(&r, i).map(|(l, rest)| (i, l, rest)))
        else {
            if !self.zeros.contains(&r) {
                self.zeros.push(r);
            }
            return;
        };
        // λ a_i + rest = 0, so a_i = λ⁻¹ rest in characteristic 2.
        let inv = ring.field().inv(lambda).expect("λ is a nonzero constant");
        let e = ring.scale(&rest, inv);
        for s in self.subs.iter_mut().flatten() {
            *s = ring.substitute(s, i, &e);
        }
        self.subs[i] = Some(e);
        let nonzeros = std::mem::take(&mut self.nonzeros);
        for n in nonzeros {
            let r = self.reduce(ring, &n);
            if r.is_zero() {
                self.contradiction = true;
            } else if r.as_constant().is_none() && !self.nonzeros.contains(&r) {
                self.nonzeros.push(r);
            }
        }
        // Earlier nonlinear zeros may have become linear.
        for z in std::mem::take(&mut self.zeros) {
            self.add_zero(ring, &z);
        }
    }

    /// Parameters that are not substituted away.
    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.subs.len()).filter(|&i| self.subs[i].is_none()).collect()
    }

    /// Completes an assignment of the free parameters with the substituted
    /// ones.
    pub fn complete(&self, ring: &ParamRing, values: &mut [FieldElement]) {
        for (i, s) in self.subs.iter().enumerate() {
            if let Some(e) = s {
                values[i] = ring.eval(e, values);
            }
        }
    }

    fn holds_at(&self, ring: &ParamRing, values: &[FieldElement]) -> bool {
        self.nonzeros.iter().all(|c| !ring.eval(c, values).is_zero())
            && self.zeros.iter().all(|c| ring.eval(c, values).is_zero())
    }

    /// Whether a completed assignment satisfies every constraint, including
    /// the substitutions.
    pub fn satisfied_by(&self, ring: &ParamRing, values: &[FieldElement]) -> bool {
        self.subs
            .iter()
            .enumerate()
            .all(|(i, s)| s.as_ref().is_none_or(|e| ring.eval(e, values) == values[i]))
            && self.holds_at(ring, values)
    }

    /// Constraints sharing parameters with `seed_vars`, transitively, and the
    /// parameters they involve.
    fn component(&self, ring: &ParamRing, seed_vars: u64) -> (Vec<&ParamCoef>, u64) {
        let all: Vec<(&ParamCoef, u64)> = self
            .nonzeros
            .iter()
            .chain(&self.zeros)
            .map(|c| (c, ring.support_vars(c)))
            .collect();
        let mut vars = seed_vars;
        let mut taken = vec![false; all.len()];
        loop {
            let mut grew = false;
            for (k, (_, v)) in all.iter().enumerate() {
                if !taken[k] && v & vars != 0 {
                    taken[k] = true;
                    vars |= v;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        let cs = all.iter().zip(&taken).filter(|(_, &t)| t).map(|((c, _), _)| *c).collect();
        (cs, vars)
    }

    /// Runs `f` on every assignment of the parameters in `vars` (others 0)
    /// meeting the given constraints; stops early when `f` returns false.
    /// Returns false if stopped early.
    fn scan_locus(
        &self,
        ring: &ParamRing,
        constraints: &[&ParamCoef],
        vars: u64,
        mut f: impl FnMut(&[FieldElement]) -> bool,
    ) -> bool {
        let idx: Vec<usize> = (0..ring.nparams()).filter(|i| vars >> i & 1 == 1).collect();
        let q = ring.field().q() as u64;
        let mut values = vec![FieldElement::ZERO; ring.nparams()];
        let zeros: Vec<&ParamCoef> = constraints.iter().copied().filter(|c| self.zeros.contains(c)).collect();
        let nonzeros: Vec<&ParamCoef> = constraints.iter().copied().filter(|c| !self.zeros.contains(c)).collect();
        for code in 0..q.pow(idx.len() as u32) {
            let mut r = code;
            for &i in &idx {
                values[i] = ring.field().elem((r % q) as u32).expect("in range");
                r /= q;
            }
            let ok = nonzeros.iter().all(|c| !ring.eval(c, &values).is_zero())
                && zeros.iter().all(|c| ring.eval(c, &values).is_zero());
            if ok && !f(&values) {
                return false;
            }
        }
        true
    }

    /// `c` vanishes everywhere on the constrained locus.
    pub fn certified_zero(&self, ring: &ParamRing, c: &ParamCoef) -> bool {
        let r = self.reduce(ring, c);
        if r.is_zero() {
            return true;
        }
        if self.zeros.is_empty() {
            // Reduced forms are functions; only nonlinear zero constraints
            // can make a nonzero function vanish on the locus.
            return false;
        }
        let (cs, vars) = self.component(ring, ring.support_vars(&r));
        if vars.count_ones() as usize > EXHAUSTIVE_VARS {
            return false;
        }
        self.scan_locus(ring, &cs, vars, |v| ring.eval(&r, v).is_zero())
    }

    /// `c` vanishes nowhere on the constrained locus.
    pub fn certified_nonzero(&self, ring: &ParamRing, c: &ParamCoef) -> bool {
        let r = self.reduce(ring, c);
        self.certified_nonzero_reduced(ring, &r, 0)
    }

    /// The syntactic part of [`Self::certified_nonzero`]: constants, recorded
    /// facts and products of them, without scanning the locus.
    pub fn known_nonzero(&self, ring: &ParamRing, c: &ParamCoef) -> bool {
        self.known_nonzero_reduced(ring, &self.reduce(ring, c), 0)
    }

    fn known_nonzero_reduced(&self, ring: &ParamRing, r: &ParamCoef, depth: usize) -> bool {
        if r.is_zero() {
            return false;
        }
        if r.as_constant().is_some() || self.nonzeros.contains(r) {
            return true;
        }
        // A product with a known-nonzero factor is nonzero iff the cofactor is.
        depth < 8
            && self.nonzeros.iter().any(|f| {
                ring.exact_div(r, f)
                    .is_some_and(|q| self.known_nonzero_reduced(ring, &q, depth + 1))
            })
    }

    fn certified_nonzero_reduced(&self, ring: &ParamRing, r: &ParamCoef, depth: usize) -> bool {
        if r.is_zero() {
            return false;
        }
        if self.known_nonzero_reduced(ring, r, depth) {
            return true;
        }
        let (cs, vars) = self.component(ring, ring.support_vars(r));
        if vars.count_ones() as usize > EXHAUSTIVE_VARS {
            return false;
        }
        self.scan_locus(ring, &cs, vars, |v| !ring.eval(r, v).is_zero())
    }

    /// Looks for a satisfying assignment: random search first, then an
    /// exhaustive scan when few parameters are constrained.
    pub fn satisfiability(&self, ring: &ParamRing, seed: u64) -> Satisfiability {
        if self.contradiction {
            return Satisfiability::Unsatisfiable;
        }
        let n = ring.nparams();
        let q = ring.field().q();
        let free = self.free_vars();
        if self.nonzeros.is_empty() && self.zeros.is_empty() {
            let mut values = vec![FieldElement::ZERO; n];
            self.complete(ring, &mut values);
            return Satisfiability::Witness(values);
        }
        let mut r = rng::stream(seed, 0x5a7);
        let mut values = vec![FieldElement::ZERO; n];
        for _ in 0..RANDOM_TRIES {
            for &i in &free {
                values[i] = ring.field().elem(r.random_range(0..q)).expect("in range");
            }
            self.complete(ring, &mut values);
            if self.holds_at(ring, &values) {
                return Satisfiability::Witness(values);
            }
        }
        let all_vars = self
            .nonzeros
            .iter()
            .chain(&self.zeros)
            .fold(0u64, |acc, c| acc | ring.support_vars(c));
        if all_vars.count_ones() as usize > EXHAUSTIVE_VARS {
            return Satisfiability::Unknown;
        }
        let all: Vec<&ParamCoef> = self.nonzeros.iter().chain(&self.zeros).collect();
        let mut found = None;
        self.scan_locus(ring, &all, all_vars, |v| {
            found = Some(v.to_vec());
            false
        });
        match found {
            Some(mut v) => {
                self.complete(ring, &mut v);
                Satisfiability::Witness(v)
            }
            None => Satisfiability::Unsatisfiable,
        }
    }

    /// Seeded satisfying assignments, rejection-sampled; falls back to a
    /// uniform choice among all satisfying assignments of the constrained
    /// parameters when rejection keeps failing.
    pub fn sample(&self, ring: &ParamRing, seed: u64, count: usize) -> Option<Vec<Vec<FieldElement>>> {
        if self.contradiction {
            return None;
        }
        let n = ring.nparams();
        let q = ring.field().q();
        let free = self.free_vars();
        let mut r = rng::stream(seed, 0x5a3);
        let mut out = Vec::with_capacity(count);
        let mut misses = 0usize;
        while out.len() < count && misses < RANDOM_TRIES * 4 {
            let mut values = vec![FieldElement::ZERO; n];
            for &i in &free {
                values[i] = ring.field().elem(r.random_range(0..q)).expect("in range");
            }
            self.complete(ring, &mut values);
            if self.holds_at(ring, &values) {
                out.push(values);
            } else {
                misses += 1;
            }
        }
        if out.len() == count {
            return Some(out);
        }
        let vars = self
            .nonzeros
            .iter()
            .chain(&self.zeros)
            .fold(0u64, |acc, c| acc | ring.support_vars(c));
        if vars.count_ones() as usize > EXHAUSTIVE_VARS {
            return (!out.is_empty()).then_some(out);
        }
        let all: Vec<&ParamCoef> = self.nonzeros.iter().chain(&self.zeros).collect();
        let mut locus = Vec::new();
        self.scan_locus(ring, &all, vars, |v| {
            locus.push(v.to_vec());
            true
        });
        if locus.is_empty() {
            return None;
        }
        while out.len() < count {
            let mut values = locus[r.random_range(0..locus.len())].clone();
            for &i in &free {
                if vars >> i & 1 == 0 {
                    values[i] = ring.field().elem(r.random_range(0..q)).expect("in range");
                }
            }
            self.complete(ring, &mut values);
            out.push(values);
        }
        Some(out)
    }
}
