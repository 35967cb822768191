//! Output records. JSON output is these structs serialized with
//! `serde_json`; docs/schemas.md describes each one.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub m: u32,
    pub modulus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialInfo {
    pub monomial: String,
    pub exponents: Vec<u32>,
    pub weight: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintOut {
    pub field: FieldInfo,
    pub weights: Option<Vec<u32>>,
    pub size: usize,
    /// Ascending in the monomial order.
    pub monomials: Vec<MonomialInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyOut {
    pub field: FieldInfo,
    pub n: usize,
    /// Coordinates as element encodings.
    pub points: Vec<Vec<u16>>,
    /// Fano plane structure check; absent off the plane.
    pub fano: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOut {
    pub monomial: String,
    pub exponents: Vec<u32>,
    pub weight: Option<u64>,
    pub params: usize,
    pub baseline: usize,
    /// `max(baseline, proved bound)`.
    pub bound: usize,
    /// `trace`, `auto` or `divisibility`.
    pub source: String,
    pub leaves: usize,
    pub live_leaves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOut {
    pub n: usize,
    pub classes: Vec<ClassOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOut {
    pub s: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// The whole-space row, listed for completeness.
    pub supplementary: bool,
    pub best_known: Option<usize>,
    /// `matches`, `one less`, or `N less`, against `best_known`.
    pub comparison: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOut {
    pub q: u32,
    pub rows: Vec<RowOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOut {
    pub monomial: String,
    /// `exhaustive`, `gray` or `sample`.
    pub mode: String,
    pub seed: Option<u64>,
    pub coefficients: usize,
    pub states: u64,
    pub exact: bool,
    pub min: usize,
    pub count: u64,
    /// Coefficients of the first minimizer, ascending support order.
    pub witness: Vec<u16>,
    pub delta: usize,
    /// `min >= delta`.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafOut {
    pub path: Vec<String>,
    pub claims: Vec<String>,
    pub established: usize,
    /// `satisfiable`, `unknown` or `vacuous`.
    pub status: String,
    pub samples: Option<usize>,
    pub violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceOut {
    pub file: String,
    pub monomial: String,
    pub params: usize,
    pub baseline: usize,
    pub bound: usize,
    pub steps_checked: usize,
    pub leaves: Vec<LeafOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOut>,
}

/// Text and CSV renderings; JSON comes from serde.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv_header(&self) -> Vec<String>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or(String::new(), T::to_string)
}

/// Rows of the exponent grid from the top `Y` power down, `X` ascending.
/// Only for two variables.
fn grid<T>(items: &[(Vec<u32>, T)]) -> Option<Vec<Vec<Option<&T>>>> {
    if items.iter().any(|(e, _)| e.len() != 2) || items.is_empty() {
        return None;
    }
    let ax = items.iter().map(|(e, _)| e[0]).max()?;
    let by = items.iter().map(|(e, _)| e[1]).max()?;
    Some(
        (0..=by)
            .rev()
            .map(|b| {
                let mut row: Vec<Option<&T>> = (0..=ax)
                    .map(|a| items.iter().find(|(e, _)| e[0] == a && e[1] == b).map(|x| &x.1))
                    .collect();
                while matches!(row.last(), Some(None)) {
                    row.pop();
                }
                row
            })
            .collect(),
    )
}

fn write_grid(out: &mut String, rows: &[Vec<String>]) {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(0) + 2;
    for row in rows {
        let line: String = row.iter().map(|c| format!("{c:<width$}")).collect();
        let _ = writeln!(out, "{}", line.trim_end());
    }
}

impl FootprintOut {
    fn cells(&self) -> Vec<(Vec<u32>, &MonomialInfo)> {
        self.monomials.iter().map(|m| (m.exponents.clone(), m)).collect()
    }
}

impl Render for FootprintOut {
    fn text(&self) -> String {
        let mut out = format!("footprint: {} monomials over GF({})\n\n", self.size, 1u32 << self.field.m);
        let cells = self.cells();
        match grid(&cells) {
            Some(g) => {
                let show = |f: &dyn Fn(&MonomialInfo) -> String| -> Vec<Vec<String>> {
                    g.iter().map(|r| r.iter().map(|c| c.map_or(String::new(), |m| f(m))).collect()).collect()
                };
                write_grid(&mut out, &show(&|m| m.monomial.clone()));
                if self.weights.is_some() {
                    out.push('\n');
                    write_grid(&mut out, &show(&|m| opt(&m.weight)));
                }
            }
            None => {
                for m in &self.monomials {
                    let _ = writeln!(out, "{}  {}", m.monomial, opt(&m.weight));
                }
            }
        }
        out
    }

    fn csv_header(&self) -> Vec<String> {
        let arity = self.monomials.first().map_or(0, |m| m.exponents.len());
        let mut h = vec!["monomial".to_string()];
        h.extend((0..arity).map(|i| format!("e{i}")));
        h.push("weight".into());
        h
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.monomials
            .iter()
            .map(|m| {
                let mut r = vec![m.monomial.clone()];
                r.extend(m.exponents.iter().map(u32::to_string));
                r.push(opt(&m.weight));
                r
            })
            .collect()
    }
}

impl Render for VarietyOut {
    fn text(&self) -> String {
        let mut out = format!("variety: {} points over GF({})\n", self.n, 1u32 << self.field.m);
        for p in &self.points {
            let c: Vec<String> = p.iter().map(u16::to_string).collect();
            let _ = writeln!(out, "({})", c.join(", "));
        }
        if let Some(f) = self.fano {
            let _ = writeln!(out, "fano plane: {}", if f { "yes" } else { "no" });
        }
        out
    }

    fn csv_header(&self) -> Vec<String> {
        let arity = self.points.first().map_or(0, Vec::len);
        (0..arity).map(|i| format!("x{i}")).collect()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.points.iter().map(|p| p.iter().map(u16::to_string).collect()).collect()
    }
}

impl Render for BoundOut {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10}{:>7}{:>8}{:>10}{:>7}{:>8}  source", "class", "weight", "params", "baseline", "bound", "leaves");
        for c in &self.classes {
            let _ = writeln!(
                out,
                "{:<10}{:>7}{:>8}{:>10}{:>7}{:>8}  {}",
                c.monomial,
                opt(&c.weight),
                c.params,
                c.baseline,
                c.bound,
                format!("{}/{}", c.live_leaves, c.leaves),
                c.source
            );
        }
        let cells: Vec<(Vec<u32>, usize)> = self.classes.iter().map(|c| (c.exponents.clone(), c.bound)).collect();
        if let Some(g) = grid(&cells) {
            out.push('\n');
            let rows: Vec<Vec<String>> =
                g.iter().map(|r| r.iter().map(|c| c.map_or(String::new(), usize::to_string)).collect()).collect();
            write_grid(&mut out, &rows);
        }
        out
    }

    fn csv_header(&self) -> Vec<String> {
        ["monomial", "weight", "params", "baseline", "bound", "source", "leaves", "live_leaves"]
            .map(String::from)
            .to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| {
                vec![
                    c.monomial.clone(),
                    opt(&c.weight),
                    c.params.to_string(),
                    c.baseline.to_string(),
                    c.bound.to_string(),
                    c.source.clone(),
                    c.leaves.to_string(),
                    c.live_leaves.to_string(),
                ]
            })
            .collect()
    }
}

impl Render for TableOut {
    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let code = format!("[{}, {}, {}]_{}", r.n, r.k, r.d, self.q);
            let mut line = format!("{code:<16}");
            if let (Some(b), Some(c)) = (r.best_known, &r.comparison) {
                let _ = write!(line, "best known {b:<4}{c}");
            }
            if r.supplementary {
                line.push_str("(supplementary)");
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    fn csv_header(&self) -> Vec<String> {
        ["s", "n", "k", "d", "supplementary", "best_known", "comparison"].map(String::from).to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.s.to_string(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.d.to_string(),
                    r.supplementary.to_string(),
                    opt(&r.best_known),
                    opt(&r.comparison),
                ]
            })
            .collect()
    }
}

impl Render for OracleOut {
    fn text(&self) -> String {
        let w: Vec<String> = self.witness.iter().map(u16::to_string).collect();
        let mut out = format!("class {}: {} scan over {} coefficients\n", self.monomial, self.mode, self.coefficients);
        let _ = writeln!(out, "states visited: {}", self.states);
        let _ = writeln!(
            out,
            "minimum weight: {} ({}), reached {} times",
            self.min,
            if self.exact { "exact" } else { "upper bound" },
            self.count
        );
        let _ = writeln!(out, "witness: [{}]", w.join(", "));
        let _ = writeln!(out, "bound: {} ({})", self.delta, if self.ok { "respected" } else { "VIOLATED" });
        out
    }

    fn csv_header(&self) -> Vec<String> {
        ["monomial", "mode", "coefficients", "states", "exact", "min", "count", "witness", "delta", "ok"]
            .map(String::from)
            .to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let w: Vec<String> = self.witness.iter().map(u16::to_string).collect();
        vec![vec![
            self.monomial.clone(),
            self.mode.clone(),
            self.coefficients.to_string(),
            self.states.to_string(),
            self.exact.to_string(),
            self.min.to_string(),
            self.count.to_string(),
            w.join(" "),
            self.delta.to_string(),
            self.ok.to_string(),
        ]]
    }
}

impl Render for TraceOut {
    fn text(&self) -> String {
        let mut out = format!(
            "{}: class {}, {} parameters, {} steps checked\nbaseline {}, bound {}\n",
            self.file, self.monomial, self.params, self.steps_checked, self.baseline, self.bound
        );
        for l in &self.leaves {
            let path = if l.path.is_empty() { "(root)".to_string() } else { l.path.join("; ") };
            let _ = write!(out, "  {:>3}  {:<11} {}", l.established, l.status, path);
            if let (Some(s), Some(v)) = (l.samples, l.violations) {
                let _ = write!(out, "  [{s} samples, {v} violations]");
            }
            out.push('\n');
        }
        out
    }

    fn csv_header(&self) -> Vec<String> {
        ["path", "claims", "established", "status", "samples", "violations"].map(String::from).to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.leaves
            .iter()
            .map(|l| {
                vec![
                    l.path.join("; "),
                    l.claims.join(" "),
                    l.established.to_string(),
                    l.status.clone(),
                    opt(&l.samples),
                    opt(&l.violations),
                ]
            })
            .collect()
    }
}

impl Render for VerifyOut {
    fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{:<4} {}: {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.ok).count();
        let _ = writeln!(out, "{} checks, {failed} failed (seed {})", self.checks.len(), self.seed);
        out
    }

    fn csv_header(&self) -> Vec<String> {
        ["name", "ok", "detail"].map(String::from).to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.checks.iter().map(|c| vec![c.name.clone(), c.ok.to_string(), c.detail.clone()]).collect()
    }
}
