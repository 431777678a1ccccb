//! Brute-force and accelerated verifiers for the synchronization
//! properties. These are the ground-truth oracles for every
//! construction in the crate.
//!
//! A string `S` of length `n` is an ε-synchronization string when every
//! pair of adjacent intervals `[i, j)`, `[j, k)` (0-based, `k <= n`)
//! satisfies `ED > (1 - eps) * (k - i)`. The f(l)-distance variant
//! extends the requirement to interval pairs whose gap is at most
//! `f(total length)`; the c-long-distance variant takes
//! `f(l) = n` for `l > c log2 n` and `0` otherwise.
//!
//! The exhaustive scans share one edit-distance DP per pair of interval
//! start positions, which makes them O(n^4) overall; they are meant for
//! strings up to about a thousand symbols, with a sampled mode above
//! that.

use crate::error::{Error, Result};
use crate::metrics::{Rational, SymbolString};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    AdjacentPair,
    DistantPair,
}

/// A concrete property violation: intervals `[i1, j1)` and `[i2, j2)`
/// with `i1 < j1 <= i2 < j2`, the measured edit distance between them
/// and the bound it failed to exceed. `measured_ed <= required_ed`
/// exactly when the witness demonstrates a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyWitness {
    pub kind: WitnessKind,
    pub i1: usize,
    pub j1: usize,
    pub i2: usize,
    pub j2: usize,
    pub measured_ed: usize,
    pub required_ed: Rational,
}

impl PropertyWitness {
    pub fn total_length(&self) -> usize {
        (self.j1 - self.i1) + (self.j2 - self.i2)
    }

    pub fn gap(&self) -> usize {
        self.i2 - self.j1
    }

    fn key(&self) -> (usize, usize, usize, usize) {
        (self.i1, self.j1, self.i2, self.j2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation(PropertyWitness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&PropertyWitness> {
        match self {
            Verdict::Pass => None,
            Verdict::Violation(w) => Some(w),
        }
    }
}

/// Allowed gap as a function of the total interval length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistanceFunction {
    /// f(l) = 0: plain ε-synchronization.
    Zero,
    /// f(l) = n for l > c log2 n, else 0.
    Threshold { c: Rational, n: usize },
    /// f(l) = sum of coeffs[i] * l^i.
    Polynomial { coeffs: Vec<Rational> },
    /// f(l) = base^l.
    Exponential { base: Rational },
}

impl DistanceFunction {
    /// Largest gap that still obliges a pair of total length `l` to
    /// satisfy the edit-distance bound, saturated at `cap`.
    pub fn max_gap(&self, l: usize, cap: usize) -> usize {
        match self {
            DistanceFunction::Zero => 0,
            DistanceFunction::Threshold { c, n } => {
                if l >= threshold_len(*c, *n) {
                    cap
                } else {
                    0
                }
            }
            DistanceFunction::Polynomial { coeffs } => {
                let mut f = Rational::zero();
                let mut p = Rational::one();
                let lr = Rational::from_integer(l as i64);
                for c in coeffs {
                    f += *c * p;
                    p *= lr;
                }
                if f.is_negative() {
                    0
                } else {
                    f.floor().to_integer().to_usize().map_or(cap, |g| g.min(cap))
                }
            }
            DistanceFunction::Exponential { base } => {
                let mut f = Rational::one();
                for _ in 0..l {
                    f *= *base;
                    if f > Rational::from_integer(1 << 40) {
                        return cap;
                    }
                }
                if f.is_negative() {
                    0
                } else {
                    f.floor().to_integer().to_usize().map_or(cap, |g| g.min(cap))
                }
            }
        }
    }

    /// Whether a pair with this gap and total length must satisfy the
    /// edit-distance bound, i.e. `gap <= f(l)`.
    pub fn gap_allowed(&self, gap: usize, l: usize) -> bool {
        gap <= self.max_gap(l, gap)
    }
}

/// Smallest integer `l` with `l > c * log2(n)`. The comparison is done
/// exactly: for c = A/B, `l > c log2 n  <=>  2^(lB) > n^A`.
pub fn threshold_len(c: Rational, n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let estimate = (c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap())
        * (n as f64).log2();
    let mut l = (estimate.floor() as i64 - 2).max(1) as usize;
    while !exceeds_c_log_n(l, c, n) {
        l += 1;
    }
    l
}

fn exceeds_c_log_n(l: usize, c: Rational, n: usize) -> bool {
    let a = *c.numer() as u32;
    let b = *c.denom() as u32;
    // 2^(l b) > n^a
    let lhs = BigUint::from(1u8) << (l as u32 * b);
    let rhs = BigUint::from(n).pow(a);
    lhs > rhs
}

fn check_eps(eps: Rational) -> Result<()> {
    if eps <= Rational::zero() || eps >= Rational::one() {
        return Err(Error::InvalidParameter(format!("eps must be in (0,1), got {eps}")));
    }
    Ok(())
}

/// Integer form of `measured <= (1 - eps) * l`.
pub(crate) struct Bound {
    numer: i64,
    denom: i64,
}

impl Bound {
    pub(crate) fn new(eps: Rational) -> Self {
        let one_minus = Rational::one() - eps;
        Bound { numer: *one_minus.numer(), denom: *one_minus.denom() }
    }

    #[inline]
    pub(crate) fn violated(&self, measured: usize, l: usize) -> bool {
        (measured as i64) * self.denom <= self.numer * (l as i64)
    }

    pub(crate) fn required(&self, l: usize) -> Rational {
        Rational::new(self.numer * l as i64, self.denom)
    }
}

fn min_witness(a: Option<PropertyWitness>, b: Option<PropertyWitness>) -> Option<PropertyWitness> {
    match (a, b) {
        (None, w) | (w, None) => w,
        (Some(x), Some(y)) => Some(if x.key() <= y.key() { x } else { y }),
    }
}

/// Which cells of the per-start-pair DP constitute required checks.
#[derive(Clone)]
enum PairRule<'a> {
    /// Adjacent pairs only (gap 0), total length <= max_total if set.
    Adjacent { max_total: Option<usize> },
    /// Positive-gap pairs with total length in [min_total, max_total].
    Distant { min_total: usize, max_total: Option<usize> },
    /// Arbitrary pairs filtered by a gap table: for total length l, a
    /// pair must be checked iff gap <= max_gap[l].
    GapTable { max_gap: &'a [usize] },
}

/// Scans interval pairs `[i1, i1+x)`, `[i2, i2+y)` sharing one
/// prefix-pair DP per `(i1, i2)`. Returns the lexicographically
/// smallest violating witness under the rule.
fn scan_pairs(s: &SymbolString, eps: Rational, rule: PairRule<'_>) -> Option<PropertyWitness> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    let bound = Bound::new(eps);
    let syms = s.symbols();

    (0..n - 1)
        .into_par_iter()
        .map(|i1| {
            let mut best: Option<PropertyWitness> = None;
            let mut row: Vec<u32> = Vec::new();
            let i2_lo = i1 + 1;
            'pairs: for i2 in i2_lo..n {
                let d = i2 - i1;
                // First interval is confined to [i1, i2).
                let (xmax, check_x_only) = match &rule {
                    PairRule::Adjacent { max_total } => {
                        if let Some(m) = max_total {
                            if d >= *m {
                                // Total length would exceed the cap for
                                // every y >= 1; larger i2 only grows d.
                                break 'pairs;
                            }
                        }
                        (d, Some(d))
                    }
                    PairRule::Distant { max_total, .. } => {
                        let cap = max_total.map_or(d - 1, |m| (m - 1).min(d - 1));
                        if d < 2 {
                            continue 'pairs;
                        }
                        (cap, None)
                    }
                    PairRule::GapTable { .. } => (d, None),
                };
                if xmax == 0 {
                    continue 'pairs;
                }
                let ymax_all = n - i2;
                row.clear();
                row.extend(0..=ymax_all as u32);
                for x in 1..=xmax {
                    let ax = syms[i1 + x - 1];
                    let ymax = match &rule {
                        PairRule::Adjacent { max_total } | PairRule::Distant { max_total, .. } => {
                            ymax_all.min(max_total.map_or(usize::MAX, |m| m.saturating_sub(x)))
                        }
                        PairRule::GapTable { .. } => ymax_all,
                    };
                    if ymax == 0 {
                        break;
                    }
                    let check_row = match (&rule, check_x_only) {
                        (_, Some(xt)) => x == xt,
                        _ => true,
                    };
                    let gap = d - x;
                    let mut diag = row[0];
                    row[0] = x as u32;
                    for y in 1..=ymax {
                        let up = row[y];
                        row[y] = if ax == syms[i2 + y - 1] {
                            diag
                        } else {
                            1 + up.min(row[y - 1])
                        };
                        diag = up;
                        if !check_row {
                            continue;
                        }
                        let l = x + y;
                        let required = match &rule {
                            PairRule::Adjacent { .. } => gap == 0,
                            PairRule::Distant { min_total, .. } => gap >= 1 && l >= *min_total,
                            PairRule::GapTable { max_gap } => gap <= max_gap[l],
                        };
                        if required && bound.violated(row[y] as usize, l) {
                            let w = PropertyWitness {
                                kind: if gap == 0 {
                                    WitnessKind::AdjacentPair
                                } else {
                                    WitnessKind::DistantPair
                                },
                                i1,
                                j1: i1 + x,
                                i2,
                                j2: i2 + y,
                                measured_ed: row[y] as usize,
                                required_ed: bound.required(l),
                            };
                            if best.as_ref().map_or(true, |b| w.key() < b.key()) {
                                best = Some(w);
                            }
                        }
                    }
                }
            }
            best
        })
        .reduce(|| None, min_witness)
}

/// Checks the plain ε-synchronization property over every adjacent
/// interval pair, returning the lexicographically smallest violation.
pub fn verify_sync(s: &SymbolString, eps: Rational) -> Result<Verdict> {
    check_eps(eps)?;
    Ok(match scan_pairs(s, eps, PairRule::Adjacent { max_total: None }) {
        None => Verdict::Pass,
        Some(w) => Verdict::Violation(w),
    })
}

/// Checks the f(l)-distance ε-synchronization property. With `f = Zero`
/// this is identical to [`verify_sync`].
pub fn verify_f_distance(s: &SymbolString, eps: Rational, f: &DistanceFunction) -> Result<Verdict> {
    check_eps(eps)?;
    let n = s.len();
    let max_gap: Vec<usize> = (0..=n).map(|l| f.max_gap(l, n)).collect();
    Ok(match scan_pairs(s, eps, PairRule::GapTable { max_gap: &max_gap }) {
        None => Verdict::Pass,
        Some(w) => Verdict::Violation(w),
    })
}

/// Checks the c-long-distance property exhaustively: adjacent pairs of
/// all lengths plus arbitrary-gap pairs of total length `> c log2 n`.
pub fn verify_long_distance(s: &SymbolString, eps: Rational, c: Rational) -> Result<Verdict> {
    check_eps(eps)?;
    let lmin = threshold_len(c, s.len());
    let adj = scan_pairs(s, eps, PairRule::Adjacent { max_total: None });
    let dist = scan_pairs(s, eps, PairRule::Distant { min_total: lmin, max_total: None });
    Ok(match min_witness(adj, dist) {
        None => Verdict::Pass,
        Some(w) => Verdict::Violation(w),
    })
}

/// Accelerated c-long-distance check. Let `L` be the smallest length
/// exceeding `c log2 n`; this examines adjacent pairs of total length
/// `<= 2L` plus arbitrary-gap pairs of total length in `[L, 2L]`. A
/// pass implies a pass of [`verify_long_distance`]: any longer
/// violating pair contains, by repeated interval halving, a violating
/// pair whose total length lands inside the checked octave. A returned
/// witness is always a genuine violation.
pub fn verify_long_distance_fast(s: &SymbolString, eps: Rational, c: Rational) -> Result<Verdict> {
    check_eps(eps)?;
    let lmin = threshold_len(c, s.len());
    let lmax = 2 * lmin;
    let adj = scan_pairs(s, eps, PairRule::Adjacent { max_total: Some(lmax) });
    let dist = scan_pairs(s, eps, PairRule::Distant { min_total: lmin, max_total: Some(lmax) });
    Ok(match min_witness(adj, dist) {
        None => Verdict::Pass,
        Some(w) => Verdict::Violation(w),
    })
}

/// Sampled-pair mode for strings too long for the exhaustive scans:
/// checks `samples` uniformly random pairs under the long-distance gap
/// rule. A pass is only statistical evidence; a witness is genuine.
pub fn verify_long_distance_sampled(
    s: &SymbolString,
    eps: Rational,
    c: Rational,
    samples: usize,
    seed: u64,
) -> Result<Verdict> {
    use rand::{Rng, SeedableRng};
    check_eps(eps)?;
    let n = s.len();
    if n < 2 {
        return Ok(Verdict::Pass);
    }
    let lmin = threshold_len(c, n);
    let bound = Bound::new(eps);
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<PropertyWitness> = None;
    for _ in 0..samples {
        let i1 = rng.gen_range(0..n - 1);
        let j1 = rng.gen_range(i1 + 1..n);
        let i2 = rng.gen_range(j1..n);
        let j2 = rng.gen_range(i2 + 1..=n);
        let l = (j1 - i1) + (j2 - i2);
        let gap = i2 - j1;
        if gap > 0 && l < lmin {
            continue;
        }
        let a = s.substring(i1, j1);
        let b = s.substring(i2, j2);
        let ed = crate::metrics::edit_distance(&a, &b)?;
        if bound.violated(ed, l) {
            let w = PropertyWitness {
                kind: if gap == 0 { WitnessKind::AdjacentPair } else { WitnessKind::DistantPair },
                i1,
                j1,
                i2,
                j2,
                measured_ed: ed,
                required_ed: bound.required(l),
            };
            best = min_witness(best, Some(w));
        }
    }
    Ok(match best {
        None => Verdict::Pass,
        Some(w) => Verdict::Violation(w),
    })
}

/// Collects every violating pair (any gap, any total length) of a small
/// string. Used by the halving-lemma checks and as a test oracle.
pub fn all_violations(s: &SymbolString, eps: Rational) -> Result<Vec<PropertyWitness>> {
    check_eps(eps)?;
    let n = s.len();
    let bound = Bound::new(eps);
    let syms = s.symbols();
    let mut out = Vec::new();
    for i1 in 0..n.saturating_sub(1) {
        for i2 in i1 + 1..n {
            let xmax = i2 - i1;
            let ymax = n - i2;
            let mut row: Vec<u32> = (0..=ymax as u32).collect();
            for x in 1..=xmax {
                let ax = syms[i1 + x - 1];
                let mut diag = row[0];
                row[0] = x as u32;
                for y in 1..=ymax {
                    let up = row[y];
                    row[y] = if ax == syms[i2 + y - 1] {
                        diag
                    } else {
                        1 + up.min(row[y - 1])
                    };
                    diag = up;
                    let l = x + y;
                    if bound.violated(row[y] as usize, l) {
                        out.push(PropertyWitness {
                            kind: if x == xmax {
                                WitnessKind::AdjacentPair
                            } else {
                                WitnessKind::DistantPair
                            },
                            i1,
                            j1: i1 + x,
                            i2,
                            j2: i2 + y,
                            measured_ed: row[y] as usize,
                            required_ed: bound.required(l),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rational;

    fn from_digits(q: u128, digits: &[u128]) -> SymbolString {
        SymbolString::new(q, digits.to_vec()).unwrap()
    }

    fn random_string(rng: &mut impl rand::Rng, n: usize, q: u128) -> SymbolString {
        let syms: Vec<u128> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        SymbolString::new(q, syms).unwrap()
    }

    #[test]
    fn all_distinct_passes() {
        let s = from_digits(4, &[0, 1, 2, 3]);
        assert!(verify_sync(&s, rational(1, 2)).unwrap().is_pass());
    }

    #[test]
    fn repeated_symbol_fails() {
        let s = from_digits(2, &[0, 0]);
        let v = verify_sync(&s, rational(9, 10)).unwrap();
        let w = v.witness().expect("violation");
        assert_eq!((w.i1, w.j1, w.i2, w.j2), (0, 1, 1, 2));
        assert_eq!(w.measured_ed, 0);
    }

    #[test]
    fn abab_fails_at_high_eps() {
        let s = from_digits(2, &[0, 1, 0, 1]);
        let v = verify_sync(&s, rational(9, 10)).unwrap();
        let w = v.witness().expect("violation");
        // ED(S[0,2), S[2,4)) = 0; the lexicographically smallest
        // violating triple is (0, 2, 4) in 0-based indexing.
        assert_eq!((w.i1, w.j1, w.i2, w.j2), (0, 2, 2, 4));
    }

    #[test]
    fn brute_force_cross_check_verify_sync() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rand::Rng::gen_range(&mut rng, 2..20);
            let q = rand::Rng::gen_range(&mut rng, 2..5u128);
            let s = random_string(&mut rng, n, q);
            let eps = rational(rand::Rng::gen_range(&mut rng, 1..10), 10);
            let fast = verify_sync(&s, eps).unwrap();
            // oracle: direct triple enumeration with metrics::edit_distance
            let mut oracle: Option<(usize, usize, usize)> = None;
            'outer: for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..=n {
                        let ed = crate::metrics::edit_distance(
                            &s.substring(i, j),
                            &s.substring(j, k),
                        )
                        .unwrap();
                        let req = (Rational::one() - eps) * Rational::from_integer((k - i) as i64);
                        if Rational::from_integer(ed as i64) <= req {
                            oracle = Some((i, j, k));
                            break 'outer;
                        }
                    }
                }
            }
            match (oracle, fast.witness()) {
                (None, None) => {}
                (Some((i, j, k)), Some(w)) => {
                    assert_eq!((w.i1, w.j1, w.i2, w.j2), (i, j, j, k));
                }
                (a, b) => panic!("oracle {a:?} vs scan {b:?}"),
            }
        }
    }

    #[test]
    fn f_zero_matches_verify_sync() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rand::Rng::gen_range(&mut rng, 2..24);
            let q = rand::Rng::gen_range(&mut rng, 2..6u128);
            let s = random_string(&mut rng, n, q);
            let eps = rational(rand::Rng::gen_range(&mut rng, 1..10), 10);
            let a = verify_sync(&s, eps).unwrap();
            let b = verify_f_distance(&s, eps, &DistanceFunction::Zero).unwrap();
            assert_eq!(a.is_pass(), b.is_pass());
            if let (Some(x), Some(y)) = (a.witness(), b.witness()) {
                assert_eq!((x.i1, x.j1, x.i2, x.j2), (y.i1, y.j1, y.i2, y.j2));
            }
        }
    }

    #[test]
    fn repeated_blocks_fail_f_distance() {
        let s = from_digits(4, &[0, 1, 2, 3, 0, 1, 2, 3]);
        let f = DistanceFunction::Polynomial { coeffs: vec![Rational::from_integer(8)] };
        let v = verify_f_distance(&s, rational(1, 2), &f).unwrap();
        assert!(!v.is_pass());
        let w = v.witness().unwrap();
        let a = s.substring(w.i1, w.j1);
        let b = s.substring(w.i2, w.j2);
        let ed = crate::metrics::edit_distance(&a, &b).unwrap();
        assert_eq!(ed, w.measured_ed);
        assert!(Rational::from_integer(ed as i64) <= w.required_ed);
    }

    #[test]
    fn identical_blocks_fail_long_distance() {
        let mut syms: Vec<u128> = (0..16).collect();
        let mut tail: Vec<u128> = (0..16).collect();
        syms.append(&mut tail);
        let s = SymbolString::new(16, syms).unwrap();
        let v = verify_long_distance(&s, rational(1, 2), rational(2, 1)).unwrap();
        assert!(!v.is_pass());
        let fast = verify_long_distance_fast(&s, rational(1, 2), rational(2, 1)).unwrap();
        assert!(!fast.is_pass());
    }

    #[test]
    fn threshold_len_exact() {
        assert_eq!(threshold_len(Rational::from_integer(1), 8), 4);
        assert_eq!(threshold_len(Rational::from_integer(1), 9), 4);
        assert_eq!(threshold_len(Rational::from_integer(1), 16), 5);
        assert_eq!(threshold_len(rational(3, 2), 16), 7);
        assert_eq!(threshold_len(rational(1, 2), 1), 1);
    }

    #[test]
    fn fast_pass_implies_full_pass_on_randoms() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rand::Rng::gen_range(&mut rng, 8..80);
            let q = rand::Rng::gen_range(&mut rng, 3..8u128);
            let s = random_string(&mut rng, n, q);
            let eps = rational(rand::Rng::gen_range(&mut rng, 2..9), 10);
            let c = rational(rand::Rng::gen_range(&mut rng, 1..4), 1);
            let fast = verify_long_distance_fast(&s, eps, c).unwrap();
            if fast.is_pass() {
                assert!(verify_long_distance(&s, eps, c).unwrap().is_pass());
            }
        }
    }

    #[test]
    fn threshold_f_matches_long_distance() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(13);
        for _ in 0..25 {
            let n = rand::Rng::gen_range(&mut rng, 4..48);
            let q = rand::Rng::gen_range(&mut rng, 2..6u128);
            let s = random_string(&mut rng, n, q);
            let eps = rational(rand::Rng::gen_range(&mut rng, 2..9), 10);
            let c = rational(rand::Rng::gen_range(&mut rng, 1..4), 1);
            let f = DistanceFunction::Threshold { c, n };
            let a = verify_long_distance(&s, eps, c).unwrap();
            let b = verify_f_distance(&s, eps, &f).unwrap();
            assert_eq!(a.is_pass(), b.is_pass(), "n={n} eps={eps} c={c}");
            if let (Some(x), Some(y)) = (a.witness(), b.witness()) {
                assert_eq!((x.i1, x.j1, x.i2, x.j2), (y.i1, y.j1, y.i2, y.j2));
            }
        }
    }
}
