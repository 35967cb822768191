//! `verify-all`: every module's invariants, one named check each.

use std::path::Path;

use rand::RngExt;

use klein_core::casebound::{auto_search, instantiate_and_check, BoundReport, Budget};
use klein_core::codes::{
    build_code, coset_min_weight, count_weight_one, evaluation_vector, hamming_weight, linalg, verify_fano,
    weight_via_footprint, DeltaMap, OracleLimits, OracleMode,
};
use klein_core::groebner::order_domain_check;
use klein_core::klein::{shipped_reports, Setup};
use klein_core::{rng, FieldPoly, Monomial, Polynomial};

use crate::commands::{delta_map, table_rows, trace_dir};
use crate::schema::{CheckOut, VerifyOut};
use crate::{Ctx, Failure, Outcome};

/// The bounds and code table the built-in traces must reproduce, rows
/// `Y^2 .. X^6*Y^2`, `Y .. X^6*Y`, `1 .. X^7`.
const REFERENCE_MAP: [&[usize]; 3] = [
    &[13, 10, 7, 5, 3, 2, 1],
    &[18, 15, 12, 9, 6, 4, 2],
    &[22, 19, 16, 13, 10, 7, 4, 1],
];
const REFERENCE_TABLE: [(usize, usize); 15] = [
    (1, 22),
    (2, 19),
    (3, 18),
    (4, 16),
    (5, 15),
    (7, 13),
    (8, 12),
    (10, 10),
    (11, 9),
    (13, 7),
    (14, 6),
    (15, 5),
    (17, 4),
    (18, 3),
    (20, 2),
];

/// Stream ids under the run seed, one per randomized check.
const STREAM_WEIGHTS: u64 = 1;
const STREAM_LEAVES: u64 = 2;
const STREAM_SAMPLES: u64 = 3;

struct Suite {
    checks: Vec<CheckOut>,
}

impl Suite {
    fn add(&mut self, name: &str, r: Result<String, String>) {
        let (ok, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckOut {
            name: name.into(),
            ok,
            detail,
        });
    }
}

fn field_axioms(s: &Setup) -> Result<String, String> {
    let f = &s.field;
    let all: Vec<_> = f.elements().collect();
    for &a in &all {
        if !a.is_zero() && f.mul(a, f.inv(a).map_err(|e| e.to_string())?) != klein_core::FieldElement::ONE {
            return Err(format!("{} has no inverse", a.enc()));
        }
        for &b in &all {
            if f.mul(a, b) != f.mul(b, a) {
                return Err(format!("{} * {} is not commutative", a.enc(), b.enc()));
            }
            for &c in &all {
                if f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)) || f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))
                {
                    return Err(format!("associativity or distributivity fails at {}, {}, {}", a.enc(), b.enc(), c.enc()));
                }
            }
        }
    }
    Ok(format!("GF({}) with modulus {:#b}", f.q(), f.modulus()))
}

fn basis(s: &Setup) -> Result<String, String> {
    let ok = s.closure.is_reduced() && s.closure.verify(&s.field).map_err(|e| e.to_string())?;
    let heads: Vec<String> = s.closure.heads().iter().map(Monomial::to_string).collect();
    if ok {
        Ok(format!("reduced basis with heads {}", heads.join(", ")))
    } else {
        Err("closure basis fails the Buchberger criterion".into())
    }
}

fn footprint_count(s: &Setup) -> Result<String, String> {
    if s.footprint.len() == s.n() {
        Ok(format!("{} monomials, {} points", s.footprint.len(), s.n()))
    } else {
        Err(format!("{} monomials but {} points", s.footprint.len(), s.n()))
    }
}

fn bijection(s: &Setup) -> Result<String, String> {
    let code = build_code(&s.field, s.footprint.monomials(), &s.variety).map_err(|e| e.to_string())?;
    let r = linalg::rank(&s.field, code.generator());
    if r == s.n() {
        Ok(format!("evaluation matrix has rank {r}"))
    } else {
        Err(format!("rank {r}, expected {}", s.n()))
    }
}

fn weight_identity(s: &Setup, seed: u64, count: usize) -> Result<String, String> {
    let mut r = rng::stream(seed, STREAM_WEIGHTS);
    let q = s.field.q();
    let mut done = 0;
    while done < count {
        let mut f: FieldPoly = Polynomial::zero(s.arity());
        for m in s.footprint.monomials() {
            if r.random_bool(0.3) {
                f.add_term(&s.field, m.clone(), &s.field.elem(r.random_range(0..q)).map_err(|e| e.to_string())?);
            }
        }
        if f.is_zero() {
            continue;
        }
        let direct = hamming_weight(&evaluation_vector(&s.field, &f, &s.variety).map_err(|e| e.to_string())?);
        let via = weight_via_footprint(&s.field, &f, &s.closure).map_err(|e| e.to_string())?;
        if via != direct {
            return Err(format!("weight {direct} but footprint deficit {via} for {f:?}"));
        }
        done += 1;
    }
    Ok(format!("{count} random polynomials"))
}

fn weight_one(s: &Setup, klein: bool) -> Result<String, String> {
    let q = s.field.q() as usize;
    let full = build_code(&s.field, s.footprint.monomials(), &s.variety).map_err(|e| e.to_string())?;
    let all = count_weight_one(&s.field, &full);
    if all != s.n() * (q - 1) {
        return Err(format!("full space has {all} weight-one words, expected {}", s.n() * (q - 1)));
    }
    let top = s.footprint.monomials().last().cloned().ok_or("empty footprint")?;
    let rest: Vec<Monomial> = s.footprint.monomials().iter().filter(|m| **m != top).cloned().collect();
    let c = build_code(&s.field, &rest, &s.variety).map_err(|e| e.to_string())?;
    let n1 = count_weight_one(&s.field, &c);
    if klein && n1 != 7 {
        return Err(format!("code without {top} has {n1} weight-one words, expected 7"));
    }
    Ok(format!("{all} in the full space, {n1} without {top}"))
}

fn order_domain(s: &Setup, klein: bool) -> Result<String, String> {
    let t = order_domain_check(&s.curve, &s.closure).map_err(|e| e.to_string())?.as_tuple();
    if klein && t != (true, true, false) {
        return Err(format!("{t:?}, expected (true, true, false)"));
    }
    Ok(format!("{t:?}"))
}

fn traces(reports: &[BoundReport]) -> Result<String, String> {
    let steps: usize = reports.iter().map(|r| r.steps_checked).sum();
    for r in reports {
        if r.bound < r.baseline || r.live_leaves().count() == 0 {
            return Err(format!("class {}: bound {} baseline {}", r.lm, r.bound, r.baseline));
        }
    }
    let list: Vec<String> = reports.iter().map(|r| format!("{}:{}", r.lm, r.bound)).collect();
    Ok(format!("{} traces, {steps} steps; {}", reports.len(), list.join(" ")))
}

fn reference(s: &Setup, dm: &DeltaMap, rows: &[(usize, usize)]) -> Result<String, String> {
    for (b, want) in REFERENCE_MAP.iter().enumerate() {
        let b = 2 - b as u32;
        let got: Vec<usize> = (0..want.len() as u32).map(|a| dm.get(&Monomial::xy(a, b)).unwrap_or(0)).collect();
        if got != *want {
            return Err(format!("row Y^{b}: {got:?}, expected {want:?}"));
        }
    }
    if rows != REFERENCE_TABLE {
        return Err(format!("table {rows:?}"));
    }
    Ok(format!("{} bounds and {} code rows as expected", s.footprint.len(), rows.len()))
}

fn leaves(s: &Setup, reports: &[BoundReport], seed: u64, n: usize) -> Result<String, String> {
    let (mut count, mut total) = (0, 0);
    for (i, r) in reports.iter().enumerate() {
        for (j, leaf) in r.live_leaves().enumerate() {
            let leaf_seed = rng::stream2(seed, STREAM_LEAVES, (i as u64) << 32 | j as u64).random::<u64>();
            let inst = instantiate_and_check(s, r, leaf, n, leaf_seed).map_err(|e| format!("{} {:?}: {e}", r.lm, leaf.path))?;
            if let Some((vals, m)) = inst.violations.first() {
                let v: Vec<u16> = vals.iter().map(|x| x.enc()).collect();
                return Err(format!("class {} leaf {:?}: {m} not a leading monomial at {v:?}", r.lm, leaf.path));
            }
            count += 1;
            total += inst.samples;
        }
    }
    Ok(format!("{count} leaves, {total} instances"))
}

fn coset_minima(ctx: &Ctx, s: &Setup, dm: &DeltaMap) -> Result<String, String> {
    let limits = OracleLimits {
        exhaustive_k: ctx.cfg.limits.exhaustive_k,
        gray_coefficients: ctx.cfg.limits.gray_coefficients.max(ctx.cfg.limits.oracle_coefficients),
    };
    let mut seen = Vec::new();
    for (m, d) in dm.entries() {
        let below = s.footprint.below(m);
        if below.len() > ctx.cfg.limits.oracle_coefficients {
            continue;
        }
        let c = coset_min_weight(&s.field, &s.order, m, below, &s.variety, OracleMode::Gray, limits)
            .map_err(|e| e.to_string())?;
        if c.min < *d {
            return Err(format!("class {m}: weight {} below the bound {d}", c.min));
        }
        seen.push(format!("{m}:{}", c.min));
    }
    Ok(format!("exact minima {}", seen.join(" ")))
}

fn sampled(ctx: &Ctx, s: &Setup, dm: &DeltaMap) -> Result<String, String> {
    let count = ctx.cfg.limits.samples;
    let mut tight = 0;
    for (i, (m, d)) in dm.entries().iter().enumerate() {
        let mode = OracleMode::Sample {
            seed: rng::stream2(ctx.cfg.seed, STREAM_SAMPLES, i as u64).random(),
            count,
        };
        let c = coset_min_weight(&s.field, &s.order, m, s.footprint.below(m), &s.variety, mode, OracleLimits::default())
            .map_err(|e| e.to_string())?;
        if c.min < *d {
            return Err(format!("class {m}: sampled weight {} below the bound {d}", c.min));
        }
        tight += (c.min == *d) as usize;
    }
    Ok(format!("{} classes x {count} samples, {tight} reach their bound", dm.len()))
}

fn search_floor(s: &Setup) -> Result<String, String> {
    let mut out = Vec::new();
    for (m, want) in [(Monomial::xy(0, 1), 18), (Monomial::xy(6, 2), 1)] {
        let (r, _) = auto_search(s, &m, &Budget::default()).map_err(|e| e.to_string())?;
        if r.bound != want {
            return Err(format!("class {m}: search found {}, expected {want}", r.bound));
        }
        out.push(format!("{m}:{}", r.bound));
    }
    Ok(out.join(" "))
}

pub(crate) fn verify_all(ctx: &mut Ctx, s: &Setup, dir: Option<&Path>) -> Outcome {
    let klein = ctx.cfg.is_klein();
    let seed = ctx.cfg.seed;
    let mut suite = Suite { checks: Vec::new() };
    suite.add("gf.field_axioms", field_axioms(s));
    suite.add("groebner.basis", basis(s));
    suite.add("groebner.footprint_count", footprint_count(s));
    suite.add("groebner.order_domain", order_domain(s, klein));
    suite.add("codes.bijection", bijection(s));
    suite.add("codes.weight_identity", weight_identity(s, seed, ctx.cfg.limits.weight_checks));
    suite.add("codes.weight_one", weight_one(s, klein));
    if klein {
        let fano = verify_fano(&s.field, &s.variety);
        suite.add("codes.fano", if fano { Ok("21 points on 7 lines".into()) } else { Err("not a Fano plane".into()) });
    }

    let reports = match dir {
        Some(d) => trace_dir(s, d).map_err(|e| match e {
            Failure::Verify(m) | Failure::Usage(m) => m,
        }),
        None if klein => shipped_reports(s).map_err(|e| format!("built-in traces: {e}")),
        None => Ok(Vec::new()),
    };
    let reports = match reports {
        Ok(r) => {
            suite.add("casebound.traces", traces(&r));
            r
        }
        Err(e) => {
            suite.add("casebound.traces", Err(e));
            Vec::new()
        }
    };
    let dm = delta_map(s, &reports)?;
    if klein && dir.is_none() {
        let rows: Vec<(usize, usize)> =
            table_rows(ctx, s, &dm).iter().filter(|r| !r.supplementary).map(|r| (r.k, r.d)).collect();
        suite.add("casebound.reference_bounds", reference(s, &dm, &rows));
    }
    suite.add("casebound.leaf_instances", leaves(s, &reports, seed, ctx.cfg.limits.leaf_samples));
    if klein {
        suite.add("casebound.search_floor", search_floor(s));
    }
    suite.add("codes.coset_minima", coset_minima(ctx, s, &dm));
    suite.add("codes.sampled_soundness", sampled(ctx, s, &dm));

    let passed = suite.checks.iter().all(|c| c.ok);
    let out = VerifyOut {
        seed,
        passed,
        checks: suite.checks,
    };
    ctx.emit(&out)?;
    if passed {
        Ok(())
    } else {
        let names: Vec<&str> = out.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
        Err(Failure::Verify(names.join(", ")))
    }
}
