//! Brute-force weight oracles.
//!
//! Vectors over GF(2^m) are packed as `m` bit planes of `words` 64-bit words
//! each; plane `b` holds bit `b` of every coordinate's encoding. Addition is
//! XOR of planes and the Hamming weight is the popcount of their OR.
//!
//! A coefficient `c = Σ_b β_b α^b` enters linearly, so the sums
//! `v_0 + Σ c_i v_i` over all coefficient tuples are exactly the sums
//! `v_0 + Σ β_{i,b} (α^b v_i)` over all bit vectors `β`. The Gray-code scan
//! walks those bit vectors, adding one packed vector per step; the Gray state
//! read back in groups of `m` bits is the coefficient tuple itself.

use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::code::{monomial_vector, EvaluationCode};
use super::Variety;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{Monomial, MonomialOrder};
use crate::rng;

/// Bits of the Gray state fixed per parallel job.
const PREFIX_BITS: usize = 8;
/// Samples drawn per independent random stream.
const SAMPLE_CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OracleMode {
    /// Every coefficient tuple, each codeword recomputed from scratch.
    Exhaustive,
    /// Every coefficient tuple, one packed-vector update per step.
    Gray,
    /// Seeded random coefficient tuples; gives an upper bound only.
    Sample { seed: u64, count: u64 },
}

/// Size caps on the enumerating oracles, in free coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    pub exhaustive_k: usize,
    pub gray_coefficients: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            exhaustive_k: 8,
            gray_coefficients: 10,
        }
    }
}

/// Minimum weight over a coset `ev(M) + span`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetMin {
    pub min: usize,
    /// True when every coefficient tuple was visited.
    pub exact: bool,
    /// Coefficient tuples visited.
    pub states: u64,
    /// How many visited tuples reach the minimum.
    pub count: u64,
    /// The first minimizing tuple, in support order.
    pub witness: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDistance {
    pub d: usize,
    pub exact: bool,
    /// Number of minimum-weight codewords (exhaustive only).
    pub count: Option<u64>,
    /// A message whose codeword has weight `d`.
    pub witness: Vec<FieldElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum DistanceStrategy {
    Exhaustive { limit_k: usize },
    Sample { seed: u64, count: u64 },
}

impl Default for DistanceStrategy {
    fn default() -> Self {
        DistanceStrategy::Exhaustive { limit_k: 8 }
    }
}

#[derive(Clone, Copy, Debug)]
struct Layout {
    m: usize,
    words: usize,
}

impl Layout {
    fn new(field: &FieldSpec, n: usize) -> Self {
        Layout {
            m: field.m() as usize,
            words: n.div_ceil(64).max(1),
        }
    }

    fn len(&self) -> usize {
        self.m * self.words
    }

    fn pack(&self, v: &[FieldElement]) -> Vec<u64> {
        let mut out = vec![0u64; self.len()];
        for (j, x) in v.iter().enumerate() {
            for b in 0..self.m {
                if x.enc() >> b & 1 == 1 {
                    out[b * self.words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        out
    }

    #[inline]
    fn weight(&self, p: &[u64]) -> usize {
        let mut w = 0;
        for i in 0..self.words {
            let mut acc = 0u64;
            for b in 0..self.m {
                acc |= p[b * self.words + i];
            }
            w += acc.count_ones() as usize;
        }
        w
    }
}

fn scaled(field: &FieldSpec, c: FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().map(|&x| field.mul(c, x)).collect()
}

/// The packed vectors `α^b · v_i`, indexed `i·m + b`.
fn gray_generators(field: &FieldSpec, layout: &Layout, vecs: &[Vec<FieldElement>]) -> Vec<Vec<u64>> {
    vecs.iter()
        .flat_map(|v| (0..field.m()).map(move |b| layout.pack(&scaled(field, field.basis_element(b), v))))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Scan {
    min: usize,
    count: u64,
    witness: u64,
}

impl Scan {
    const EMPTY: Scan = Scan {
        min: usize::MAX,
        count: 0,
        witness: 0,
    };

    #[inline]
    fn see(&mut self, w: usize, state: u64) {
        if w < self.min {
            *self = Scan {
                min: w,
                count: 1,
                witness: state,
            };
        } else if w == self.min {
            self.count += 1;
        }
    }

    /// Merges in scan order, so the witness is the first one in the
    /// sequential order whatever the job layout.
    fn merge(self, later: Scan) -> Scan {
        if later.min < self.min {
            later
        } else if later.min == self.min {
            Scan {
                count: self.count + later.count,
                ..self
            }
        } else {
            self
        }
    }
}

/// Visits `base + Σ_{j∈S} gens[j]` for every subset `S`, optionally
/// skipping the empty one.
fn gray_scan(layout: Layout, base: &[u64], gens: &[Vec<u64>], skip_empty: bool) -> Scan {
    let n = gens.len();
    assert!(n < 64, "gray scan over {n} bits");
    let high = n.min(PREFIX_BITS);
    let low = n - high;
    let scans: Vec<Scan> = (0..1u64 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut cur = base.to_vec();
            for j in 0..high {
                if prefix >> j & 1 == 1 {
                    for (c, g) in cur.iter_mut().zip(&gens[low + j]) {
                        *c ^= g;
                    }
                }
            }
            let mut scan = Scan::EMPTY;
            let mut state = prefix << low;
            if !(skip_empty && state == 0) {
                scan.see(layout.weight(&cur), state);
            }
            for t in 1..1u64 << low {
                let j = t.trailing_zeros() as usize;
                for (c, g) in cur.iter_mut().zip(&gens[j]) {
                    *c ^= g;
                }
                state ^= 1 << j;
                scan.see(layout.weight(&cur), state);
            }
            scan
        })
        .collect();
    scans.into_iter().fold(Scan::EMPTY, Scan::merge)
}

fn decode_state(field: &FieldSpec, state: u64, k: usize) -> Vec<FieldElement> {
    let m = field.m() as u64;
    let mask = (1u64 << m) - 1;
    (0..k)
        .map(|i| field.elem(((state >> (i as u64 * m)) & mask) as u32).expect("masked"))
        .collect()
}

fn check_support(ord: &MonomialOrder, m: &Monomial, support: &[Monomial]) -> Result<()> {
    for s in support {
        if ord.cmp(s, m) != std::cmp::Ordering::Less {
            return Err(Error::SupportNotBelowM(s.to_string()));
        }
    }
    Ok(())
}

/// Least weight of `ev(M + Σ a_i s_i)` over the coefficient tuples `a`.
pub fn coset_min_weight(
    field: &FieldSpec,
    ord: &MonomialOrder,
    m: &Monomial,
    support: &[Monomial],
    v: &Variety,
    mode: OracleMode,
    limits: OracleLimits,
) -> Result<CosetMin> {
    check_support(ord, m, support)?;
    let base = monomial_vector(field, m, v);
    let vecs: Vec<Vec<FieldElement>> = support.iter().map(|s| monomial_vector(field, s, v)).collect();
    coset_scan(field, &base, &vecs, mode, limits, false)
}

fn coset_scan(
    field: &FieldSpec,
    base: &[FieldElement],
    vecs: &[Vec<FieldElement>],
    mode: OracleMode,
    limits: OracleLimits,
    skip_zero: bool,
) -> Result<CosetMin> {
    let k = vecs.len();
    let q = field.q() as u64;
    let layout = Layout::new(field, base.len());
    match mode {
        OracleMode::Exhaustive => {
            if k > limits.exhaustive_k {
                return Err(Error::DimensionTooLarge {
                    k,
                    limit: limits.exhaustive_k,
                });
            }
            let total = q.pow(k as u32);
            // Jobs fix the last coefficient(s); the rest run as an odometer.
            let fixed = k.min(2);
            let inner = q.pow((k - fixed) as u32);
            let scans: Vec<Scan> = (0..q.pow(fixed as u32))
                .into_par_iter()
                .map(|hi| {
                    let mut scan = Scan::EMPTY;
                    let mut digits = vec![0u32; k];
                    let mut r = hi;
                    for d in digits[k - fixed..].iter_mut() {
                        *d = (r % q) as u32;
                        r /= q;
                    }
                    for lo in 0..inner {
                        let mut r = lo;
                        for d in digits[..k - fixed].iter_mut() {
                            *d = (r % q) as u32;
                            r /= q;
                        }
                        let mut w = 0;
                        for (j, &b) in base.iter().enumerate() {
                            let mut x = b;
                            for (i, vec) in vecs.iter().enumerate() {
                                let c = FieldElement::from_enc_unchecked(digits[i] as u16);
                                x = field.add(x, field.mul(c, vec[j]));
                            }
                            w += !x.is_zero() as usize;
                        }
                        let state = digits
                            .iter()
                            .enumerate()
                            .fold(0u64, |acc, (i, &d)| acc | (d as u64) << (i as u32 * field.m()));
                        if !(skip_zero && state == 0) {
                            scan.see(w, state);
                        }
                    }
                    scan
                })
                .collect();
            // The packed state is the odometer position (first coefficient
            // in the low bits), so the smallest one is the first minimiser.
            let best = scans.iter().map(|s| s.min).min().unwrap_or(usize::MAX);
            let count = scans.iter().filter(|s| s.min == best).map(|s| s.count).sum();
            let witness = scans
                .iter()
                .filter(|s| s.min == best)
                .map(|s| s.witness)
                .min()
                .unwrap_or(0);
            Ok(CosetMin {
                min: best,
                exact: true,
                states: total - skip_zero as u64,
                count,
                witness: decode_state(field, witness, k),
            })
        }
        OracleMode::Gray => {
            if k > limits.gray_coefficients {
                return Err(Error::DimensionTooLarge {
                    k,
                    limit: limits.gray_coefficients,
                });
            }
            let gens = gray_generators(field, &layout, vecs);
            let scan = gray_scan(layout, &layout.pack(base), &gens, skip_zero);
            Ok(CosetMin {
                min: scan.min,
                exact: true,
                states: q.pow(k as u32) - skip_zero as u64,
                count: scan.count,
                witness: decode_state(field, scan.witness, k),
            })
        }
        OracleMode::Sample { seed, count } => {
            // table[i][c] = packed c·v_i.
            let table: Vec<Vec<Vec<u64>>> = vecs
                .iter()
                .map(|v| field.elements().map(|c| layout.pack(&scaled(field, c, v))).collect())
                .collect();
            let packed_base = layout.pack(base);
            let packable = k * (field.m() as usize) < 64;
            let chunks = count.div_ceil(SAMPLE_CHUNK);
            let scans: Vec<(Scan, u64)> = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut r = rng::stream(seed, chunk);
                    let mut scan = Scan::EMPTY;
                    let n = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
                    let mut seen = 0;
                    let mut cur = vec![0u64; layout.len()];
                    let mut coeffs = vec![0u32; k];
                    while seen < n {
                        cur.copy_from_slice(&packed_base);
                        for (i, c) in coeffs.iter_mut().enumerate() {
                            *c = r.random_range(0..q as u32);
                            for (x, t) in cur.iter_mut().zip(&table[i][*c as usize]) {
                                *x ^= t;
                            }
                        }
                        if skip_zero && coeffs.iter().all(|&c| c == 0) {
                            continue;
                        }
                        seen += 1;
                        let state = if packable {
                            coeffs
                                .iter()
                                .enumerate()
                                .fold(0u64, |acc, (i, &d)| acc | (d as u64) << (i as u32 * field.m()))
                        } else {
                            0
                        };
                        scan.see(layout.weight(&cur), state);
                    }
                    (scan, n)
                })
                .collect();
            let scan = scans.iter().map(|s| s.0).fold(Scan::EMPTY, Scan::merge);
            Ok(CosetMin {
                min: scan.min,
                exact: false,
                states: count,
                count: scan.count,
                witness: if packable { decode_state(field, scan.witness, k) } else { Vec::new() },
            })
        }
    }
}

/// Minimum distance of a code.
pub fn min_distance(field: &FieldSpec, code: &EvaluationCode, strategy: DistanceStrategy) -> Result<MinDistance> {
    let k = code.k();
    if k == 0 {
        return Err(Error::EmptyCode);
    }
    let zero = vec![FieldElement::ZERO; code.n()];
    let (mode, limits) = match strategy {
        DistanceStrategy::Exhaustive { limit_k } => (
            OracleMode::Gray,
            OracleLimits {
                exhaustive_k: limit_k,
                gray_coefficients: limit_k,
            },
        ),
        DistanceStrategy::Sample { seed, count } => (OracleMode::Sample { seed, count }, OracleLimits::default()),
    };
    let r = coset_scan(field, &zero, code.generator(), mode, limits, true)?;
    Ok(MinDistance {
        d: r.min,
        exact: r.exact,
        count: r.exact.then_some(r.count),
        witness: r.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, enumerate_variety, evaluation_vector, hamming_weight};
    use crate::groebner::{buchberger, footprint};
    use crate::poly::text::parse;
    use crate::FieldPoly;

    fn setup() -> (FieldSpec, Variety, Vec<Monomial>) {
        let f = FieldSpec::gf8();
        let gens: Vec<FieldPoly> = ["Y^3 + X^3*Y + X", "X^8 + X", "Y^8 + Y"]
            .iter()
            .map(|s| parse(&f, s, 2).unwrap())
            .collect();
        let v = enumerate_variety(&f, &gens, 2).unwrap();
        let gb = buchberger(&f, &gens, &MonomialOrder::klein()).unwrap();
        let fp = footprint(&gb).unwrap().monomials().to_vec();
        (f, v, fp)
    }

    #[test]
    fn packing_round_trip() {
        let f = FieldSpec::gf8();
        let layout = Layout::new(&f, 70);
        let v: Vec<FieldElement> = (0..70).map(|i| f.elem((i * 5 % 8) as u32).unwrap()).collect();
        assert_eq!(layout.weight(&layout.pack(&v)), hamming_weight(&v));
    }

    #[test]
    fn coset_modes_agree() {
        let (f, v, fp) = setup();
        let o = MonomialOrder::klein();
        for m in [Monomial::xy(0, 1), Monomial::xy(1, 1)] {
            let below: Vec<Monomial> = fp.iter().filter(|x| o.cmp(x, &m).is_lt()).cloned().collect();
            let lim = OracleLimits::default();
            let a = coset_min_weight(&f, &o, &m, &below, &v, OracleMode::Exhaustive, lim).unwrap();
            let b = coset_min_weight(&f, &o, &m, &below, &v, OracleMode::Gray, lim).unwrap();
            assert_eq!((a.min, a.count, a.states), (b.min, b.count, b.states));
            for r in [&a, &b] {
                let mut p = FieldPoly::monomial(&f, m.clone());
                for (s, &c) in below.iter().zip(&r.witness) {
                    p.add_term(&f, s.clone(), &c);
                }
                assert_eq!(hamming_weight(&evaluation_vector(&f, &p, &v).unwrap()), r.min);
            }
        }
    }

    #[test]
    fn coset_examples() {
        let (f, v, _) = setup();
        let o = MonomialOrder::klein();
        let lim = OracleLimits::default();
        let y = coset_min_weight(
            &f,
            &o,
            &Monomial::xy(0, 1),
            &[Monomial::xy(1, 0), Monomial::xy(0, 0)],
            &v,
            OracleMode::Exhaustive,
            lim,
        )
        .unwrap();
        assert_eq!(y.states, 64);
        assert!(y.min >= 18);
        let corner = coset_min_weight(&f, &o, &Monomial::xy(6, 2), &[], &v, OracleMode::Gray, lim).unwrap();
        assert!(corner.min >= 1);
        assert!(matches!(
            coset_min_weight(&f, &o, &Monomial::xy(1, 0), &[Monomial::xy(0, 1)], &v, OracleMode::Gray, lim),
            Err(Error::SupportNotBelowM(_))
        ));
        let s = OracleMode::Sample { seed: 9, count: 10_000 };
        let r1 = coset_min_weight(&f, &o, &Monomial::xy(0, 2), &[Monomial::xy(1, 0)], &v, s, lim).unwrap();
        let r2 = coset_min_weight(&f, &o, &Monomial::xy(0, 2), &[Monomial::xy(1, 0)], &v, s, lim).unwrap();
        assert_eq!(r1, r2);
        assert!(!r1.exact);
    }

    #[test]
    fn distances() {
        let (f, v, _) = setup();
        let rep = build_code(&f, &[Monomial::xy(0, 0)], &v).unwrap();
        let d = min_distance(&f, &rep, DistanceStrategy::default()).unwrap();
        assert_eq!((d.d, d.exact, d.count), (22, true, Some(7)));
        let two = build_code(&f, &[Monomial::xy(0, 0), Monomial::xy(1, 0)], &v).unwrap();
        let d2 = min_distance(&f, &two, DistanceStrategy::default()).unwrap();
        assert!(d2.d >= 19);
        // Independent check by encoding all 63 messages.
        let brute = (1..64u32)
            .map(|i| {
                let msg = [f.elem(i % 8).unwrap(), f.elem(i / 8).unwrap()];
                hamming_weight(&two.encode(&f, &msg))
            })
            .min()
            .unwrap();
        assert_eq!(d2.d, brute);
        assert_eq!(hamming_weight(&two.encode(&f, &d2.witness)), d2.d);
        let empty = build_code(&f, &[], &v).unwrap();
        assert_eq!(min_distance(&f, &empty, DistanceStrategy::default()), Err(Error::EmptyCode));
    }

    #[test]
    fn scans_independent_of_thread_count() {
        let (f, v, fp) = setup();
        let o = MonomialOrder::klein();
        let m = Monomial::xy(0, 2);
        let below: Vec<Monomial> = fp.iter().filter(|x| o.cmp(x, &m).is_lt()).cloned().collect();
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                let lim = OracleLimits::default();
                let g = coset_min_weight(&f, &o, &m, &below, &v, OracleMode::Gray, lim).unwrap();
                let s = coset_min_weight(&f, &o, &m, &below, &v, OracleMode::Sample { seed: 1, count: 50_000 }, lim)
                    .unwrap();
                (g, s)
            })
        };
        assert_eq!(run(1), run(4));
    }
}
