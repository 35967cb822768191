use rand::RngExt;

use klein_core::casebound::figure2_map;
use klein_core::codes::{
    build_code, coset_min_weight, evaluation_vector, hamming_weight, min_distance, weight_via_footprint,
    DistanceStrategy, OracleLimits, OracleMode,
};
use klein_core::klein::{shipped_reports, Setup};
use klein_core::{rng, FieldPoly, Monomial, Polynomial};

fn random_reduced(s: &Setup, r: &mut rng::Rng) -> FieldPoly {
    loop {
        let mut f = Polynomial::zero(2);
        for m in s.footprint.monomials() {
            if r.random_bool(0.3) {
                let c = s.field.elem(r.random_range(0..8)).unwrap();
                f.add_term(&s.field, m.clone(), &c);
            }
        }
        if !f.is_zero() {
            return f;
        }
    }
}

#[test]
fn weight_equals_footprint_deficit() {
    let s = Setup::klein().unwrap();
    let mut r = rng::from_seed(2024);
    for _ in 0..1000 {
        let f = random_reduced(&s, &mut r);
        let direct = hamming_weight(&evaluation_vector(&s.field, &f, &s.variety).unwrap());
        assert_eq!(weight_via_footprint(&s.field, &f, &s.closure).unwrap(), direct, "{f:?}");
    }
}

/// Plain nested loops over the coefficients, evaluating point by point.
fn naive_coset_min(s: &Setup, m: &Monomial, support: &[Monomial]) -> usize {
    let k = support.len();
    let mut best = usize::MAX;
    for idx in 0..8u32.pow(k as u32) {
        let mut f = Polynomial::monomial(&s.field, m.clone());
        let mut r = idx;
        for sm in support {
            f.add_term(&s.field, sm.clone(), &s.field.elem(r % 8).unwrap());
            r /= 8;
        }
        best = best.min(hamming_weight(&evaluation_vector(&s.field, &f, &s.variety).unwrap()));
    }
    best
}

#[test]
fn oracle_modes_agree() {
    let s = Setup::klein().unwrap();
    let limits = OracleLimits::default();
    for (a, b) in [(0, 1), (1, 1), (0, 2)] {
        let m = Monomial::xy(a, b);
        let below = s.footprint.below(&m);
        let ex = coset_min_weight(&s.field, &s.order, &m, below, &s.variety, OracleMode::Exhaustive, limits).unwrap();
        let gr = coset_min_weight(&s.field, &s.order, &m, below, &s.variety, OracleMode::Gray, limits).unwrap();
        assert_eq!((ex.min, ex.count, ex.states), (gr.min, gr.count, gr.states), "{m}");
        assert!(ex.exact);
        let sm = OracleMode::Sample { seed: 3, count: 20_000 };
        let sa = coset_min_weight(&s.field, &s.order, &m, below, &s.variety, sm, limits).unwrap();
        assert!(sa.min >= ex.min && !sa.exact);
        if below.len() <= 4 {
            assert_eq!(ex.min, naive_coset_min(&s, &m, below), "{m}");
        }
    }
}

#[test]
fn small_coset_minima_respect_the_bounds() {
    let s = Setup::klein().unwrap();
    let dm = figure2_map(&s, &shipped_reports(&s).unwrap()).unwrap();
    for m in [Monomial::xy(0, 1), Monomial::xy(1, 1), Monomial::xy(0, 2)] {
        let below = s.footprint.below(&m);
        let c = coset_min_weight(
            &s.field,
            &s.order,
            &m,
            below,
            &s.variety,
            OracleMode::Gray,
            OracleLimits::default(),
        )
        .unwrap();
        assert!(c.min >= dm.get(&m).unwrap(), "{m}: {}", c.min);
    }
}

#[test]
fn sampled_weights_never_undercut_the_map() {
    let s = Setup::klein().unwrap();
    let dm = figure2_map(&s, &shipped_reports(&s).unwrap()).unwrap();
    for (i, (m, d)) in dm.entries().iter().enumerate() {
        let mode = OracleMode::Sample {
            seed: 100 + i as u64,
            count: 10_000,
        };
        let below = s.footprint.below(m);
        let c = coset_min_weight(&s.field, &s.order, m, below, &s.variety, mode, OracleLimits::default()).unwrap();
        assert!(c.min >= *d, "{m}: sampled {} below {d}", c.min);
    }
}

#[test]
fn sampling_is_reproducible() {
    let s = Setup::klein().unwrap();
    let m = Monomial::xy(2, 2);
    let below = s.footprint.below(&m);
    let mode = OracleMode::Sample { seed: 9, count: 50_000 };
    let run = || coset_min_weight(&s.field, &s.order, &m, below, &s.variety, mode, OracleLimits::default()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn x7_class_is_heavy_apart_from_one_word() {
    let s = Setup::klein().unwrap();
    let m = Monomial::xy(7, 0);
    let one = Polynomial::monomial(&s.field, Monomial::one(2));
    let x7 = Polynomial::monomial(&s.field, m.clone());
    let w = hamming_weight(&evaluation_vector(&s.field, &x7.add(&s.field, &one), &s.variety).unwrap());
    assert_eq!(w, 1);
    // Any other member of the class: a random draw hits X^7 + 1 with
    // probability 8^-21.
    let mode = OracleMode::Sample { seed: 39, count: 200_000 };
    let c = coset_min_weight(&s.field, &s.order, &m, s.footprint.below(&m), &s.variety, mode, OracleLimits::default())
        .unwrap();
    assert!(c.min >= 3, "{}", c.min);
}

#[test]
fn small_code_distances() {
    let s = Setup::klein().unwrap();
    let dm = figure2_map(&s, &shipped_reports(&s).unwrap()).unwrap();
    for t in [22, 19, 18, 16, 15] {
        let ms = dm.at_least(t);
        let code = build_code(&s.field, &ms, &s.variety).unwrap();
        let d = min_distance(&s.field, &code, DistanceStrategy::default()).unwrap();
        assert!(d.exact);
        assert!(d.d >= t, "k = {}: {} < {t}", code.k(), d.d);
    }
}
