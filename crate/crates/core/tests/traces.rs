use klein_core::casebound::{
    divisibility_bound, figure2_map, instantiate_and_check, parse_trace, verify_trace, LeafStatus,
};
use klein_core::klein::{shipped_reports, Setup, TRACES};
use klein_core::poly::text::parse_monomial;
use klein_core::{Error, Monomial};

const CONCLUSIONS: [(&str, usize); 9] = [
    ("Y", 18),
    ("Y^2", 13),
    ("X*Y", 15),
    ("X^2*Y", 12),
    ("X*Y^2", 10),
    ("X^3*Y", 9),
    ("X^2*Y^2", 7),
    ("X^3*Y^2", 5),
    ("X^7", 1),
];

#[test]
fn shipped_traces_reach_the_stated_bounds() {
    let s = Setup::klein().unwrap();
    let reports = shipped_reports(&s).unwrap();
    for ((lm, want), r) in CONCLUSIONS.iter().zip(&reports) {
        assert_eq!(r.lm.to_string(), *lm);
        assert_eq!(r.bound, *want, "{lm}");
        assert!(r.bound >= r.baseline);
        assert_eq!(r.params, s.footprint.below(&r.lm).len());
        for leaf in &r.leaves {
            assert!(leaf.claims.iter().all(|m| s.footprint.contains(m)));
        }
        assert!(r.live_leaves().count() > 0);
    }
}

#[test]
fn leaf_minima_match_the_worked_arithmetic() {
    // Baseline plus the smallest leaf gain, as each worked example sums it.
    let s = Setup::klein().unwrap();
    let reports = shipped_reports(&s).unwrap();
    let gains: Vec<(usize, usize)> = reports
        .iter()
        .map(|r| {
            let g = r.live_leaves().map(|l| l.established - r.baseline).min().unwrap();
            (r.baseline, g)
        })
        .collect();
    assert_eq!(
        gains,
        [(14, 4), (7, 6), (12, 3), (10, 2), (6, 4), (8, 1), (5, 2), (4, 1), (1, 0)]
    );
}

#[test]
fn bound_map_rows() {
    let s = Setup::klein().unwrap();
    let dm = figure2_map(&s, &shipped_reports(&s).unwrap()).unwrap();
    assert_eq!(dm.len(), 22);
    let row = |b: u32| -> Vec<usize> { (0..=6).map(|a| dm.get(&Monomial::xy(a, b)).unwrap()).collect() };
    assert_eq!(row(2), [13, 10, 7, 5, 3, 2, 1]);
    assert_eq!(row(1), [18, 15, 12, 9, 6, 4, 2]);
    assert_eq!(row(0), [22, 19, 16, 13, 10, 7, 4]);
    assert_eq!(dm.get(&Monomial::xy(7, 0)), Some(1));
    // Entries without a trace are the divisibility counts.
    for (m, d) in dm.entries() {
        if !CONCLUSIONS.iter().any(|(lm, _)| *lm == m.to_string()) {
            assert_eq!(*d, divisibility_bound(m, &s.footprint).unwrap(), "{m}");
        }
    }
}

#[test]
fn bound_map_ignores_weaker_reports() {
    let s = Setup::klein().unwrap();
    let empty = parse_trace("", 2).unwrap();
    let weak = verify_trace(&s, &Monomial::xy(0, 1), &empty).unwrap();
    assert_eq!(weak.bound, 14);
    let mut reports = shipped_reports(&s).unwrap();
    let full = figure2_map(&s, &reports).unwrap();
    reports.push(weak);
    assert_eq!(figure2_map(&s, &reports).unwrap(), full);
}

#[test]
fn trace_header_must_match_the_class() {
    let s = Setup::klein().unwrap();
    let (_, src) = TRACES[0];
    let t = parse_trace(src, 2).unwrap();
    assert!(verify_trace(&s, &Monomial::xy(1, 1), &t).is_err());
}

#[test]
fn tampered_claims_are_rejected() {
    let s = Setup::klein().unwrap();
    for (lm, src) in TRACES {
        let lm = parse_monomial(lm, 2).unwrap();
        // Claiming a monomial one step higher than the one justified.
        let bad = src.replacen("claim X^4\n", "claim X^3\n", 1);
        if bad == src {
            continue;
        }
        let t = parse_trace(&bad, 2).unwrap();
        match verify_trace(&s, &lm, &t) {
            Err(Error::UnjustifiedClaim { .. } | Error::InvalidStep { .. }) => {}
            other => panic!("{lm}: {other:?}"),
        }
    }
}

#[test]
fn sampled_leaves_agree_with_concrete_ideals() {
    let s = Setup::klein().unwrap();
    let reports = shipped_reports(&s).unwrap();
    for r in &reports {
        for leaf in r.live_leaves() {
            let inst = instantiate_and_check(&s, r, leaf, 8, 7).unwrap();
            assert!(inst.samples > 0);
            assert!(inst.violations.is_empty(), "{}: {:?} {:?}", r.lm, leaf.path, inst.violations);
        }
    }
}

#[test]
fn instantiation_is_seeded() {
    let s = Setup::klein().unwrap();
    let reports = shipped_reports(&s).unwrap();
    let r = &reports[0];
    let leaf = r.live_leaves().next().unwrap();
    let a = instantiate_and_check(&s, r, leaf, 50, 11).unwrap();
    let b = instantiate_and_check(&s, r, leaf, 50, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples, 50);
}

#[test]
fn vacuous_leaves_cannot_be_instantiated() {
    let s = Setup::klein().unwrap();
    let src = "lm Y\nbranch 1 {\n} else {\n  claim X\n}\n";
    let r = verify_trace(&s, &Monomial::xy(0, 1), &parse_trace(src, 2).unwrap()).unwrap();
    let vac = r.leaves.iter().find(|l| l.status == LeafStatus::Vacuous).unwrap();
    assert!(matches!(
        instantiate_and_check(&s, &r, vac, 5, 0),
        Err(Error::UnsatisfiableLeaf)
    ));
}
