use serde::Serialize;

use crate::poly::Monomial;

/// A weight lower bound `δ(M)` for every footprint monomial `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaMap {
    entries: Vec<(Monomial, usize)>,
}

impl DeltaMap {
    /// Entries keep the given order (normally ascending footprint order).
    pub fn new(entries: Vec<(Monomial, usize)>) -> Self {
        DeltaMap { entries }
    }

    pub fn entries(&self) -> &[(Monomial, usize)] {
        &self.entries
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.entries.iter().find(|(x, _)| x == m).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The monomials with `δ(M) ≥ s`, in map order.
    pub fn at_least(&self, s: usize) -> Vec<Monomial> {
        self.entries.iter().filter(|e| e.1 >= s).map(|e| e.0.clone()).collect()
    }
}

/// One code `C(I, {M : δ(M) ≥ s})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub s: usize,
    pub n: usize,
    pub k: usize,
    /// The designed bound `d ≥ s`.
    pub d: usize,
    /// Whether `d` is a measured minimum distance rather than a bound.
    pub exact: bool,
    /// The `s = 1` row is the whole space and is listed for completeness.
    pub supplementary: bool,
}

/// One row per distinct value of `δ`, in descending order.
pub fn construct_table(dm: &DeltaMap, n: usize) -> Vec<TableRow> {
    let mut thresholds: Vec<usize> = dm.entries.iter().map(|e| e.1).collect();
    thresholds.sort_unstable_by(|a, b| b.cmp(a));
    thresholds.dedup();
    thresholds
        .into_iter()
        .map(|s| TableRow {
            s,
            n,
            k: dm.entries.iter().filter(|e| e.1 >= s).count(),
            d: s,
            exact: false,
            supplementary: s == 1,
        })
        .filter(|r| r.k > 0)
        .collect()
}
