use std::path::Path;

use rayon::prelude::*;

use klein_core::casebound::{
    auto_search, divisibility_bound, figure2_map, instantiate_and_check, parse_trace, verify_trace, BoundReport,
    Budget, LeafStatus,
};
use klein_core::codes::{construct_table, coset_min_weight, verify_fano, DeltaMap, OracleLimits, OracleMode};
use klein_core::klein::{shipped_reports, Setup, BEST_KNOWN};
use klein_core::poly::text::parse_monomial;
use klein_core::{Error, Monomial};

use crate::schema::{
    BoundOut, ClassOut, FieldInfo, FootprintOut, LeafOut, MonomialInfo, OracleOut, RowOut, TableOut, TraceOut,
    VarietyOut,
};
use crate::{Ctx, Failure, Mode, Outcome, Source};

pub(crate) fn field_info(s: &Setup) -> FieldInfo {
    FieldInfo {
        m: s.field.m(),
        modulus: s.field.modulus(),
    }
}

pub(crate) fn monomial_arg(s: &Setup, text: &str, flag: &str) -> Result<Monomial, Failure> {
    let m = parse_monomial(text, s.arity()).map_err(|e| Failure::Usage(format!("{flag} `{text}`: {e}")))?;
    if !s.footprint.contains(&m) {
        return Err(Failure::Usage(format!("{flag} `{text}`: not in the footprint")));
    }
    Ok(m)
}

pub(crate) fn leaf_status(s: LeafStatus) -> &'static str {
    match s {
        LeafStatus::Satisfiable => "satisfiable",
        LeafStatus::Unknown => "unknown",
        LeafStatus::Vacuous => "vacuous",
    }
}

/// Verifies every `.trace` file in `dir`, in file name order.
pub(crate) fn trace_dir(s: &Setup, dir: &Path) -> Result<Vec<BoundReport>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Usage(format!("--traces {}: {e}", dir.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "trace"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::Usage(format!("--traces {}: no .trace files", dir.display())));
    }
    files.iter().map(|f| verify_file(s, f, None)).collect()
}

fn verify_file(s: &Setup, file: &Path, lm: Option<&str>) -> Result<BoundReport, Failure> {
    let name = file.display();
    let src = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{name}: {e}")))?;
    let trace = parse_trace(&src, s.arity()).map_err(|e| Failure::Verify(format!("{name}: {e}")))?;
    let lm = match (lm, &trace.lm) {
        (Some(t), _) => monomial_arg(s, t, "--lm")?,
        (None, Some(m)) => m.clone(),
        (None, None) => return Err(Failure::Usage(format!("{name}: no `lm` line; pass --lm"))),
    };
    verify_trace(s, &lm, &trace).map_err(|e| match e {
        Error::NotInFootprint(_) => Failure::Usage(format!("{name}: {e}")),
        _ => Failure::Verify(format!("{name}: {e}")),
    })
}

/// Proved reports from the chosen source, and the source's name.
fn reports(ctx: &Ctx, s: &Setup, src: &Source) -> Result<(Vec<BoundReport>, &'static str), Failure> {
    if src.auto {
        let d = Budget::default();
        let budget = Budget {
            max_depth: src.depth.unwrap_or(d.max_depth),
            max_nodes: src.nodes.unwrap_or(d.max_nodes),
            ..d
        };
        let found: Result<Vec<BoundReport>, Error> = s
            .footprint
            .monomials()
            .par_iter()
            .map(|m| auto_search(s, m, &budget).map(|r| r.0))
            .collect();
        return Ok((found.map_err(|e| Failure::Verify(e.to_string()))?, "auto"));
    }
    if let Some(dir) = &src.traces {
        return Ok((trace_dir(s, dir)?, "trace"));
    }
    if ctx.cfg.is_klein() {
        let r = shipped_reports(s).map_err(|e| Failure::Verify(format!("built-in traces: {e}")))?;
        return Ok((r, "trace"));
    }
    Ok((Vec::new(), "trace"))
}

pub(crate) fn delta_map(s: &Setup, reports: &[BoundReport]) -> Result<DeltaMap, Failure> {
    figure2_map(s, reports).map_err(|e| Failure::Verify(e.to_string()))
}

pub(crate) fn footprint(ctx: &mut Ctx, s: &Setup) -> Outcome {
    let out = FootprintOut {
        field: field_info(s),
        weights: s.order.weights().map(<[u32]>::to_vec),
        size: s.footprint.len(),
        monomials: s
            .footprint
            .monomials()
            .iter()
            .map(|m| MonomialInfo {
                monomial: m.to_string(),
                exponents: m.exps().to_vec(),
                weight: s.order.weight(m),
            })
            .collect(),
    };
    ctx.emit(&out)
}

pub(crate) fn variety(ctx: &mut Ctx, s: &Setup) -> Outcome {
    let out = VarietyOut {
        field: field_info(s),
        n: s.n(),
        points: s.variety.points().iter().map(|p| p.coords().iter().map(|c| c.enc()).collect()).collect(),
        fano: ctx.cfg.is_klein().then(|| verify_fano(&s.field, &s.variety)),
    };
    ctx.emit(&out)
}

pub(crate) fn bound(ctx: &mut Ctx, s: &Setup, src: &Source) -> Outcome {
    let (reports, source) = reports(ctx, s, src)?;
    let dm = delta_map(s, &reports)?;
    let mut classes = Vec::new();
    for (m, d) in dm.entries() {
        let baseline = divisibility_bound(m, &s.footprint).map_err(|e| Failure::Verify(e.to_string()))?;
        let proved = reports.iter().filter(|r| r.lm == *m).max_by_key(|r| r.bound);
        classes.push(ClassOut {
            monomial: m.to_string(),
            exponents: m.exps().to_vec(),
            weight: s.order.weight(m),
            params: s.footprint.below(m).len(),
            baseline,
            bound: *d,
            source: if proved.is_some() { source } else { "divisibility" }.to_string(),
            leaves: proved.map_or(0, |r| r.leaves.len()),
            live_leaves: proved.map_or(0, |r| r.live_leaves().count()),
        });
    }
    ctx.emit(&BoundOut { n: s.n(), classes })
}

pub(crate) fn table_rows(ctx: &Ctx, s: &Setup, dm: &DeltaMap) -> Vec<RowOut> {
    let klein = ctx.cfg.is_klein();
    construct_table(dm, s.n())
        .into_iter()
        .map(|r| {
            let best = BEST_KNOWN.iter().find(|b| b.0 == r.k).map(|b| b.1).filter(|_| klein && !r.supplementary);
            let comparison = best.map(|b| match b.checked_sub(r.d) {
                Some(0) => "matches".to_string(),
                Some(1) => "one less".to_string(),
                Some(n) => format!("{n} less"),
                None => "exceeds".to_string(),
            });
            RowOut {
                s: r.s,
                n: r.n,
                k: r.k,
                d: r.d,
                supplementary: r.supplementary,
                best_known: best,
                comparison,
            }
        })
        .collect()
}

pub(crate) fn table(ctx: &mut Ctx, s: &Setup, src: &Source) -> Outcome {
    let (reports, _) = reports(ctx, s, src)?;
    let dm = delta_map(s, &reports)?;
    let rows = table_rows(ctx, s, &dm);
    ctx.emit(&TableOut { q: s.field.q(), rows })
}

pub(crate) fn oracle(ctx: &mut Ctx, s: &Setup, lm: &str, mode: Mode, samples: Option<u64>) -> Outcome {
    let m = monomial_arg(s, lm, "--lm")?;
    if samples.is_some() && !matches!(mode, Mode::Sample) {
        return Err(Failure::Usage("--samples needs --mode sample".into()));
    }
    let seed = ctx.cfg.seed;
    let (omode, name) = match mode {
        Mode::Exhaustive => (OracleMode::Exhaustive, "exhaustive"),
        Mode::Gray => (OracleMode::Gray, "gray"),
        Mode::Sample => (
            OracleMode::Sample {
                seed,
                count: samples.unwrap_or(ctx.cfg.limits.samples),
            },
            "sample",
        ),
    };
    let limits = OracleLimits {
        exhaustive_k: ctx.cfg.limits.exhaustive_k,
        gray_coefficients: ctx.cfg.limits.gray_coefficients,
    };
    let below = s.footprint.below(&m);
    let c = coset_min_weight(&s.field, &s.order, &m, below, &s.variety, omode, limits).map_err(|e| match e {
        Error::DimensionTooLarge { .. } => Failure::Usage(format!("--mode {name}: {e}")),
        _ => Failure::Verify(e.to_string()),
    })?;
    let reports = if ctx.cfg.is_klein() {
        shipped_reports(s).map_err(|e| Failure::Verify(format!("built-in traces: {e}")))?
    } else {
        Vec::new()
    };
    let delta = delta_map(s, &reports)?.get(&m).unwrap_or(0);
    let out = OracleOut {
        monomial: m.to_string(),
        mode: name.into(),
        seed: matches!(mode, Mode::Sample).then_some(seed),
        coefficients: below.len(),
        states: c.states,
        exact: c.exact,
        min: c.min,
        count: c.count,
        witness: c.witness.iter().map(|x| x.enc()).collect(),
        delta,
        ok: c.min >= delta,
    };
    ctx.emit(&out)?;
    if !out.ok {
        return Err(Failure::Verify(format!("class {m}: weight {} below the bound {delta}", c.min)));
    }
    Ok(())
}

pub(crate) fn trace_verify(ctx: &mut Ctx, s: &Setup, file: &Path, lm: Option<&str>, samples: usize) -> Outcome {
    let r = verify_file(s, file, lm)?;
    let mut violations = 0;
    let mut leaves = Vec::new();
    for (j, leaf) in r.leaves.iter().enumerate() {
        let (mut ns, mut nv) = (None, None);
        if samples > 0 && leaf.status != LeafStatus::Vacuous {
            let seed = ctx.cfg.seed.wrapping_add(j as u64);
            let inst = instantiate_and_check(s, &r, leaf, samples, seed).map_err(|e| Failure::Verify(e.to_string()))?;
            violations += inst.violations.len();
            ns = Some(inst.samples);
            nv = Some(inst.violations.len());
        }
        leaves.push(LeafOut {
            path: leaf.path.clone(),
            claims: leaf.claims.iter().map(Monomial::to_string).collect(),
            established: leaf.established,
            status: leaf_status(leaf.status).into(),
            samples: ns,
            violations: nv,
        });
    }
    let out = TraceOut {
        file: file.display().to_string(),
        monomial: r.lm.to_string(),
        params: r.params,
        baseline: r.baseline,
        bound: r.bound,
        steps_checked: r.steps_checked,
        leaves,
    };
    ctx.emit(&out)?;
    if violations > 0 {
        return Err(Failure::Verify(format!(
            "{}: {violations} claimed monomials are in a concrete footprint",
            file.display()
        )));
    }
    Ok(())
}
