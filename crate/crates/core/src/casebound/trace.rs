//! The line-oriented trace format.
//!
//! ```text
//! # comment
//! lm Y
//! mul Y^2
//! red K head
//! red F full
//! branch a1 {
//!   claim X^4
//! } else {
//!   claim X^3
//! }
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::text::parse_monomial;
use crate::poly::{Monomial, ReductionMode};

/// Which polynomial a reduction divides by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisor {
    /// The class polynomial under the current constraints.
    F,
    /// Element `i` (0-based) of the ideal's reduced basis.
    Basis(usize),
}

/// Names `K`, `FX`, `FXY` for the three Klein basis elements, `G1`.. in
/// general.
pub fn divisor_name(d: &Divisor) -> String {
    match d {
        Divisor::F => "F".into(),
        Divisor::Basis(0) => "K".into(),
        Divisor::Basis(1) => "FX".into(),
        Divisor::Basis(2) => "FXY".into(),
        Divisor::Basis(i) => format!("G{}", i + 1),
    }
}

fn parse_divisor(s: &str) -> Option<Divisor> {
    match s {
        "F" => Some(Divisor::F),
        "K" => Some(Divisor::Basis(0)),
        "FX" => Some(Divisor::Basis(1)),
        "FXY" => Some(Divisor::Basis(2)),
        _ => {
            let i: usize = s.strip_prefix('G')?.parse().ok()?;
            (i >= 1).then(|| Divisor::Basis(i - 1))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Mul(Monomial),
    Reduce { divisor: Divisor, mode: ReductionMode },
    /// Split on whether `expr` vanishes; a branch ends its block.
    Branch {
        expr: String,
        nonzero: Vec<Step>,
        zero: Vec<Step>,
    },
    Claim(Monomial),
    /// Start over from `F`.
    Restart,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// 1-based source line, 0 for generated steps.
    pub line: usize,
    pub action: Action,
}

impl Step {
    pub fn new(action: Action) -> Self {
        Step { line: 0, action }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Leading monomial of the class, from the `lm` header.
    pub lm: Option<Monomial>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Item {
    Stmt(String),
    Open,
    Close,
    Else,
}

fn lex(src: &str) -> Vec<(usize, Item)> {
    let mut out = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut cur = String::new();
        let flush = |cur: &mut String, out: &mut Vec<(usize, Item)>| {
            let t = cur.trim();
            if t == "else" {
                out.push((line, Item::Else));
            } else if !t.is_empty() {
                out.push((line, Item::Stmt(t.to_string())));
            }
            cur.clear();
        };
        for ch in text.chars() {
            match ch {
                '{' | '}' => {
                    flush(&mut cur, &mut out);
                    out.push((line, if ch == '{' { Item::Open } else { Item::Close }));
                }
                _ => cur.push(ch),
            }
        }
        flush(&mut cur, &mut out);
    }
    out
}

fn invalid(line: usize, msg: impl Into<String>) -> Error {
    Error::InvalidStep { line, msg: msg.into() }
}

struct Parser {
    items: Vec<(usize, Item)>,
    pos: usize,
    arity: usize,
}

impl Parser {
    fn block(&mut self, nested: bool) -> Result<Vec<Step>> {
        let mut steps = Vec::new();
        while let Some((line, item)) = self.items.get(self.pos).cloned() {
            match item {
                Item::Close if nested => return Ok(steps),
                Item::Close => return Err(invalid(line, "unmatched `}`")),
                Item::Open | Item::Else => return Err(invalid(line, "unexpected brace or `else`")),
                Item::Stmt(s) => {
                    self.pos += 1;
                    steps.push(self.statement(line, &s)?);
                }
            }
        }
        if nested {
            let line = self.items.last().map_or(0, |i| i.0);
            return Err(invalid(line, "missing `}`"));
        }
        Ok(steps)
    }

    fn expect(&mut self, want: Item, line: usize) -> Result<()> {
        match self.items.get(self.pos) {
            Some((_, it)) if *it == want => {
                self.pos += 1;
                Ok(())
            }
            Some((l, it)) => Err(invalid(*l, format!("expected {want:?}, found {it:?}"))),
            None => Err(invalid(line, format!("expected {want:?}"))),
        }
    }

    fn statement(&mut self, line: usize, s: &str) -> Result<Step> {
        let (word, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        let mono = |r: &str| parse_monomial(r, self.arity).map_err(|e| invalid(line, e.to_string()));
        let action = match word {
            "mul" => Action::Mul(mono(rest)?),
            "claim" => Action::Claim(mono(rest)?),
            "restart" if rest.is_empty() => Action::Restart,
            "red" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [d, m] = parts.as_slice() else {
                    return Err(invalid(line, "expected `red <divisor> <head|full>`"));
                };
                let divisor = parse_divisor(d).ok_or_else(|| invalid(line, format!("unknown divisor `{d}`")))?;
                let mode = match *m {
                    "head" => ReductionMode::Head,
                    "full" => ReductionMode::Full,
                    _ => return Err(invalid(line, format!("unknown mode `{m}`"))),
                };
                Action::Reduce { divisor, mode }
            }
            "branch" if !rest.is_empty() => {
                self.expect(Item::Open, line)?;
                let nonzero = self.block(true)?;
                self.expect(Item::Close, line)?;
                self.expect(Item::Else, line)?;
                self.expect(Item::Open, line)?;
                let zero = self.block(true)?;
                self.expect(Item::Close, line)?;
                Action::Branch {
                    expr: rest.to_string(),
                    nonzero,
                    zero,
                }
            }
            "lm" => return Err(invalid(line, "`lm` must be the first statement")),
            _ => return Err(invalid(line, format!("unknown statement `{s}`"))),
        };
        Ok(Step { line, action })
    }
}

/// Parses a trace over `arity` variables.
pub fn parse_trace(src: &str, arity: usize) -> Result<Trace> {
    let mut items = lex(src);
    let mut lm = None;
    if let Some((line, Item::Stmt(s))) = items.first() {
        if let Some(m) = s.strip_prefix("lm ") {
            lm = Some(parse_monomial(m.trim(), arity).map_err(|e| invalid(*line, e.to_string()))?);
            items.remove(0);
        }
    }
    let mut p = Parser { items, pos: 0, arity };
    let steps = p.block(false)?;
    Ok(Trace { lm, steps })
}

fn write_block(f: &mut fmt::Formatter<'_>, steps: &[Step], depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    for s in steps {
        match &s.action {
            Action::Mul(m) => writeln!(f, "{pad}mul {m}")?,
            Action::Claim(m) => writeln!(f, "{pad}claim {m}")?,
            Action::Restart => writeln!(f, "{pad}restart")?,
            Action::Reduce { divisor, mode } => {
                let m = match mode {
                    ReductionMode::Head => "head",
                    ReductionMode::Full => "full",
                };
                writeln!(f, "{pad}red {} {m}", divisor_name(divisor))?
            }
            Action::Branch { expr, nonzero, zero } => {
                writeln!(f, "{pad}branch {expr} {{")?;
                write_block(f, nonzero, depth + 1)?;
                writeln!(f, "{pad}}} else {{")?;
                write_block(f, zero, depth + 1)?;
                writeln!(f, "{pad}}}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(m) = &self.lm {
            writeln!(f, "lm {m}")?;
        }
        write_block(f, &self.steps, 0)
    }
}
