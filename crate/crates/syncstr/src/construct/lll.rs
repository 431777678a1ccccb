//! Randomized local-lemma construction of long-distance
//! ε-synchronization strings.
//!
//! A uniformly random core string is repaired by resampling: a *bad
//! event* is a pair of intervals that violates the c-long-distance
//! edit-distance bound with total length `l` inside the scan band —
//! adjacent pairs with `l >= ceil(2/eps^2)` and arbitrary-gap pairs
//! with `l` above the `c log2 n` threshold, both capped at twice the
//! threshold. Violated events are resampled until none remain.
//!
//! Pairs below the band are handled by pairing the core with a cyclic
//! counter of period `2 ceil(1/eps^2)` (two intervals of total length
//! at most the period share no counter value, so their edit distance
//! is maximal). Pairs above the band are covered by interval halving:
//! any longer violating pair nests a violating pair inside the octave
//! band, so a clean band certifies the whole property.
//!
//! For long strings the quadratic band scan is replaced by an exact
//! match-chain filter: a violated event of total length `l` requires a
//! monotone matching of at least `ceil(eps*l/2)` symbol matches
//! confined to a band-sized box, so the scan looks for long monotone
//! chains among equal-symbol position pairs and resamples them. No
//! chain above threshold means no violated event exists.

use crate::construct::ExplicitSyncString;
use crate::error::{Error, Result};
use crate::metrics::{Rational, Symbol, SymbolString, TupleAlphabet};
use crate::verify::{threshold_len, Bound};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct LllParams {
    pub eps: Rational,
    pub n: usize,
    /// Alphabet size of the random core string.
    pub q_core: Symbol,
    /// Long-distance parameter.
    pub c: Rational,
    pub seed: u64,
    /// Budget of resampled events before giving up.
    pub max_resamples: usize,
    /// Above this length the match-chain filter replaces the band scan.
    pub exact_scan_limit: usize,
}

impl LllParams {
    pub fn new(eps: Rational, n: usize, q_core: Symbol, seed: u64) -> Self {
        LllParams {
            eps,
            n,
            q_core,
            c: super::ConstructConfig::default_c(eps),
            seed,
            max_resamples: 20_000,
            exact_scan_limit: 1024,
        }
    }

    /// Counter period `2 * ceil(1/eps^2)`.
    pub fn counter_period(&self) -> usize {
        let inv = Rational::from_integer(1) / (self.eps * self.eps);
        2 * inv.ceil().to_integer().to_usize().unwrap()
    }

    /// Smallest total length the resampler has to repair:
    /// `ceil(2/eps^2)`.
    pub fn band_floor(&self) -> usize {
        let v = Rational::from_integer(2) / (self.eps * self.eps);
        v.ceil().to_integer().to_usize().unwrap()
    }
}

/// An interval pair `[i1, i1+l1) , [i2, i2+l2)` that violates the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct BadEvent {
    i1: usize,
    l1: usize,
    i2: usize,
    l2: usize,
}

impl BadEvent {
    fn positions(&self) -> impl Iterator<Item = usize> {
        (self.i1..self.i1 + self.l1).chain(self.i2..self.i2 + self.l2)
    }

    fn overlaps(&self, touched: &[bool]) -> bool {
        self.positions().any(|p| touched[p])
    }
}

/// Builds a c-long-distance ε-synchronization string of length `n` by
/// resampling, paired with the cyclic counter component. The output
/// alphabet is `q_core x counter_period` and the result is tagged with
/// the long-distance parameter `c`.
pub fn lll_construct(p: &LllParams) -> Result<ExplicitSyncString> {
    if p.eps <= Rational::from_integer(0) || p.eps >= Rational::from_integer(1) {
        return Err(Error::InvalidParameter("eps must be in (0,1)".into()));
    }
    if p.q_core < 2 {
        return Err(Error::InvalidParameter("q_core must be at least 2".into()));
    }
    let band_floor = p.band_floor();
    if p.n < 2 * band_floor {
        return Err(Error::InvalidParameter(format!(
            "lll_construct needs n >= 2*ceil(2/eps^2) = {}, got {}",
            2 * band_floor,
            p.n
        )));
    }
    let lmin = threshold_len(p.c, p.n);
    let lmax = 2 * lmin;
    let bound = Bound::new(p.eps);

    let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
    let mut core: Vec<Symbol> = (0..p.n).map(|_| rng.gen_range(0..p.q_core)).collect();

    let mut resamples = 0usize;
    loop {
        let events = if p.n <= p.exact_scan_limit {
            scan_band_exact(&core, &bound, band_floor, lmin, lmax)
        } else {
            scan_match_chains(&core, p.eps, band_floor, lmin, lmax)
        };
        if events.is_empty() {
            break;
        }
        // Resample a maximal lex-ordered set of disjoint events, then
        // rescan.
        let mut touched = vec![false; p.n];
        for ev in &events {
            if ev.overlaps(&touched) {
                continue;
            }
            for pos in ev.positions() {
                touched[pos] = true;
                core[pos] = rng.gen_range(0..p.q_core);
            }
            resamples += 1;
            if resamples > p.max_resamples {
                return Err(Error::ConstructionFailed(format!(
                    "resample budget {} exhausted at (eps={}, n={}, q_core={}, seed={})",
                    p.max_resamples, p.eps, p.n, p.q_core, p.seed
                )));
            }
        }
    }

    let period = p.counter_period();
    let alphabet = TupleAlphabet::new(vec![p.q_core, period as Symbol])?;
    let symbols: Vec<Symbol> = core
        .iter()
        .enumerate()
        .map(|(i, &r)| alphabet.pack(&[r, (i % period) as Symbol]).unwrap())
        .collect();
    let out = SymbolString::new(alphabet.total_size(), symbols)?;
    Ok(ExplicitSyncString::materialized(out, p.eps, Some(p.c)))
}

/// Exhaustive scan of the band: adjacent pairs with total length in
/// `[band_floor, lmax]` and positive-gap pairs with total length in
/// `[lmin, lmax]`. Events are returned in lexicographic order.
fn scan_band_exact(
    core: &[Symbol],
    bound: &Bound,
    band_floor: usize,
    lmin: usize,
    lmax: usize,
) -> Vec<BadEvent> {
    use rayon::prelude::*;
    let n = core.len();
    let mut events: Vec<BadEvent> = (0..n.saturating_sub(1))
        .into_par_iter()
        .flat_map_iter(|i1| {
            let mut found = Vec::new();
            let mut row: Vec<u32> = Vec::new();
            for i2 in i1 + 1..n {
                let d = i2 - i1;
                let xmax = d.min(lmax - 1);
                let ymax_all = (n - i2).min(lmax - 1);
                if ymax_all == 0 {
                    continue;
                }
                row.clear();
                row.extend(0..=ymax_all as u32);
                for x in 1..=xmax {
                    let ax = core[i1 + x - 1];
                    let ymax = ymax_all.min(lmax - x);
                    if ymax == 0 {
                        break;
                    }
                    let gap = d - x;
                    let mut diag = row[0];
                    row[0] = x as u32;
                    for y in 1..=ymax {
                        let up = row[y];
                        row[y] = if ax == core[i2 + y - 1] {
                            diag
                        } else {
                            1 + up.min(row[y - 1])
                        };
                        diag = up;
                        let l = x + y;
                        let required = if gap == 0 { l >= band_floor } else { l >= lmin };
                        if required && bound.violated(row[y] as usize, l) {
                            found.push(BadEvent { i1, l1: x, i2, l2: y });
                        }
                    }
                }
            }
            found
        })
        .collect();
    events.sort();
    events
}

/// Match-chain filter for long strings. A violated event in the band
/// needs a monotone chain of at least `ceil(eps * band_floor / 2)`
/// equal-symbol matches with both coordinate spans below `lmax`, so
/// the filter flags exactly those chains (as pseudo-events over the
/// chain's bounding intervals). Finding none certifies the band clean.
fn scan_match_chains(
    core: &[Symbol],
    eps: Rational,
    band_floor: usize,
    lmin: usize,
    lmax: usize,
) -> Vec<BadEvent> {
    let n = core.len();
    let floor = band_floor.min(lmin);
    let m_min = ((eps * Rational::from_integer(floor as i64))
        / Rational::from_integer(2))
    .ceil()
    .to_integer()
    .to_usize()
    .unwrap()
    .max(2);

    // Equal-symbol position pairs (p < p'), sorted by (p, p').
    let mut by_symbol: std::collections::BTreeMap<Symbol, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (pos, &s) in core.iter().enumerate() {
        by_symbol.entry(s).or_default().push(pos);
    }
    let mut matches: Vec<(usize, usize)> = Vec::new();
    for positions in by_symbol.values() {
        for (a, &p) in positions.iter().enumerate() {
            for &q in &positions[a + 1..] {
                matches.push((p, q));
            }
        }
    }
    matches.sort_unstable();

    // Longest monotone chain ending at each match, with both spans
    // bounded by lmax (measured from the chain's endpoint; transitivity
    // holds because predecessors sit inside every later box).
    let m = matches.len();
    let mut depth = vec![1u32; m];
    let mut pred: Vec<Option<usize>> = vec![None; m];
    for e in 0..m {
        let (pe, qe) = matches[e];
        for f in 0..e {
            let (pf, qf) = matches[f];
            if pf < pe && qf < qe && pe - pf < lmax && qe - qf < lmax && depth[f] + 1 > depth[e] {
                depth[e] = depth[f] + 1;
                pred[e] = Some(f);
            }
        }
    }

    let mut events = Vec::new();
    for e in 0..m {
        if depth[e] as usize >= m_min {
            // Walk the chain and report its bounding intervals as the
            // region to resample.
            let mut lo = matches[e];
            let mut hi = matches[e];
            let mut cur = e;
            while let Some(f) = pred[cur] {
                lo = (lo.0.min(matches[f].0), lo.1.min(matches[f].1));
                hi = (hi.0.max(matches[f].0), hi.1.max(matches[f].1));
                cur = f;
            }
            let ev = BadEvent {
                i1: lo.0,
                l1: hi.0 - lo.0 + 1,
                i2: lo.1,
                l2: hi.1 - lo.1 + 1,
            };
            events.push(ev);
        }
    }
    events.sort();
    events.dedup();
    let _ = n;
    events
}
