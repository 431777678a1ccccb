//! Edit-distance kernels and suffix-distance metrics.
//!
//! Everything downstream (verifiers, decoders, codes) is built on the
//! primitives in this module. Edit distance here is insertion/deletion
//! only: substitutions are not atomic operations. All indices are
//! 0-based; the suffix metrics pad short strings with a sentinel `⊥`
//! that matches nothing, not even another `⊥`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Packed symbol value. Tuple alphabets produced by the boosting and
/// interleaving constructions overflow 64 bits, so symbols are 128-bit
/// throughout.
pub type Symbol = u128;

/// Exact rational used for all distances, densities and thresholds.
pub type Rational = Ratio<i64>;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Ratio::new(numer, denom)
}

/// A finite sequence of symbols over a declared finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolString {
    alphabet_size: Symbol,
    symbols: Vec<Symbol>,
}

impl SymbolString {
    pub fn new(alphabet_size: Symbol, symbols: Vec<Symbol>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidParameter("alphabet size must be positive".into()));
        }
        for &s in &symbols {
            if s >= alphabet_size {
                return Err(Error::SymbolOutOfRange { symbol: s, alphabet_size });
            }
        }
        Ok(SymbolString { alphabet_size, symbols })
    }

    pub fn empty(alphabet_size: Symbol) -> Self {
        SymbolString { alphabet_size, symbols: Vec::new() }
    }

    /// Builds a string from ASCII text, mapping 'a'..'z' then other bytes
    /// in order of first appearance. Test and example convenience.
    pub fn from_text(text: &str) -> Self {
        let mut seen: Vec<u8> = Vec::new();
        let mut symbols = Vec::with_capacity(text.len());
        for b in text.bytes() {
            let idx = match seen.iter().position(|&x| x == b) {
                Some(i) => i,
                None => {
                    seen.push(b);
                    seen.len() - 1
                }
            };
            symbols.push(idx as Symbol);
        }
        let q = seen.len().max(1) as Symbol;
        SymbolString { alphabet_size: q, symbols }
    }

    pub fn alphabet_size(&self) -> Symbol {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Symbol {
        self.symbols[i]
    }

    /// Substring `[i, j)`.
    pub fn substring(&self, i: usize, j: usize) -> SymbolString {
        SymbolString {
            alphabet_size: self.alphabet_size,
            symbols: self.symbols[i..j].to_vec(),
        }
    }

    pub fn push(&mut self, s: Symbol) -> Result<()> {
        if s >= self.alphabet_size {
            return Err(Error::SymbolOutOfRange { symbol: s, alphabet_size: self.alphabet_size });
        }
        self.symbols.push(s);
        Ok(())
    }

    /// Relabels symbols to `0..k` in order of first occurrence. Injective
    /// relabeling preserves every edit-distance and synchronization
    /// property while collapsing the huge packed alphabets produced by
    /// boosting to at most the string length.
    pub fn compacted(&self) -> (SymbolString, Vec<Symbol>) {
        let mut table: std::collections::HashMap<Symbol, Symbol> = std::collections::HashMap::new();
        let mut order: Vec<Symbol> = Vec::new();
        let mut out = Vec::with_capacity(self.symbols.len());
        for &s in &self.symbols {
            let next = table.len() as Symbol;
            let v = *table.entry(s).or_insert_with(|| {
                order.push(s);
                next
            });
            out.push(v);
        }
        let q = (order.len() as Symbol).max(1);
        (SymbolString { alphabet_size: q, symbols: out }, order)
    }

    fn check_same_alphabet(&self, other: &SymbolString) -> Result<()> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet_size,
                right: other.alphabet_size,
            });
        }
        Ok(())
    }
}

/// Canonical mixed-radix bijection between tuples and packed integers.
/// Component 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleAlphabet {
    component_sizes: Vec<Symbol>,
}

impl TupleAlphabet {
    pub fn new(component_sizes: Vec<Symbol>) -> Result<Self> {
        if component_sizes.is_empty() {
            return Err(Error::InvalidParameter("tuple alphabet needs at least one component".into()));
        }
        let mut total: Symbol = 1;
        for &c in &component_sizes {
            if c == 0 {
                return Err(Error::InvalidParameter("tuple component size must be positive".into()));
            }
            total = total
                .checked_mul(c)
                .ok_or_else(|| Error::InvalidParameter("tuple alphabet overflows u128".into()))?;
        }
        Ok(TupleAlphabet { component_sizes })
    }

    pub fn component_sizes(&self) -> &[Symbol] {
        &self.component_sizes
    }

    pub fn total_size(&self) -> Symbol {
        self.component_sizes.iter().product()
    }

    pub fn pack(&self, tuple: &[Symbol]) -> Result<Symbol> {
        if tuple.len() != self.component_sizes.len() {
            return Err(Error::InvalidParameter(format!(
                "tuple arity {} does not match alphabet arity {}",
                tuple.len(),
                self.component_sizes.len()
            )));
        }
        let mut packed: Symbol = 0;
        for (&t, &q) in tuple.iter().zip(&self.component_sizes) {
            if t >= q {
                return Err(Error::SymbolOutOfRange { symbol: t, alphabet_size: q });
            }
            packed = packed * q + t;
        }
        Ok(packed)
    }

    pub fn unpack(&self, mut packed: Symbol) -> Vec<Symbol> {
        let mut out = vec![0; self.component_sizes.len()];
        for (slot, &q) in out.iter_mut().zip(&self.component_sizes).rev() {
            *slot = packed % q;
            packed /= q;
        }
        out
    }

    /// Zips component strings into one string over the packed alphabet.
    pub fn zip(&self, parts: &[&SymbolString]) -> Result<SymbolString> {
        if parts.len() != self.component_sizes.len() {
            return Err(Error::InvalidParameter("component count mismatch".into()));
        }
        let n = parts.first().map(|p| p.len()).unwrap_or(0);
        for p in parts {
            if p.len() != n {
                return Err(Error::InvalidParameter("component length mismatch".into()));
            }
        }
        let mut symbols = Vec::with_capacity(n);
        let mut tuple = vec![0; parts.len()];
        for i in 0..n {
            for (t, p) in tuple.iter_mut().zip(parts) {
                *t = p.get(i);
            }
            symbols.push(self.pack(&tuple)?);
        }
        Ok(SymbolString { alphabet_size: self.total_size(), symbols })
    }
}

/// Length of the longest common subsequence. Independent of
/// [`edit_distance`]; the two are cross-checked by the ED–LCS identity
/// in tests.
pub fn lcs_length(a: &SymbolString, b: &SymbolString) -> Result<usize> {
    a.check_same_alphabet(b)?;
    Ok(lcs_len_raw(a.symbols(), b.symbols()))
}

pub(crate) fn lcs_len_raw(a: &[Symbol], b: &[Symbol]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    for &ai in a {
        let mut diag = 0;
        for (j, &bj) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ai == bj { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// Insertion/deletion edit distance. Symmetric, metric, and equal to
/// `|a| + |b| - 2 * lcs_length(a, b)`.
pub fn edit_distance(a: &SymbolString, b: &SymbolString) -> Result<usize> {
    a.check_same_alphabet(b)?;
    Ok(edit_distance_raw(a.symbols(), b.symbols()))
}

pub(crate) fn edit_distance_raw(a: &[Symbol], b: &[Symbol]) -> usize {
    // One-row DP over the insdel recurrence; no substitution case.
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ai) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &bj) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ai == bj {
                diag
            } else {
                1 + up.min(row[j])
            };
            diag = up;
        }
    }
    row[b.len()]
}

/// Padded suffix edit distances `ED_k` for `k = 1..=k_max`, where the
/// shorter string is padded in front with `⊥` symbols that match
/// nothing. `ED_k = (k-|a|)⁺ + (k-|b|)⁺ + ED(a-suffix, b-suffix)`.
fn suffix_edit_distances(a: &[Symbol], b: &[Symbol], k_max: usize) -> Vec<usize> {
    let la = a.len();
    let lb = b.len();
    let xa = la.min(k_max);
    let yb = lb.min(k_max);
    // w[x][y] = ED(last x symbols of a, last y symbols of b)
    let mut w = vec![0u32; (xa + 1) * (yb + 1)];
    let idx = |x: usize, y: usize| x * (yb + 1) + y;
    for x in 0..=xa {
        w[idx(x, 0)] = x as u32;
    }
    for y in 0..=yb {
        w[idx(0, y)] = y as u32;
    }
    for x in 1..=xa {
        let ax = a[la - x];
        for y in 1..=yb {
            let by = b[lb - y];
            w[idx(x, y)] = if ax == by {
                w[idx(x - 1, y - 1)]
            } else {
                1 + w[idx(x - 1, y)].min(w[idx(x, y - 1)])
            };
        }
    }
    (1..=k_max)
        .map(|k| {
            let pad_a = k.saturating_sub(la);
            let pad_b = k.saturating_sub(lb);
            pad_a + pad_b + w[idx(k.min(la), k.min(lb))] as usize
        })
        .collect()
}

fn max_suffix_ratio(a: &SymbolString, b: &SymbolString, k_max: usize) -> Result<Rational> {
    a.check_same_alphabet(b)?;
    if k_max == 0 {
        return Ok(Rational::from_integer(0));
    }
    let eds = suffix_edit_distances(a.symbols(), b.symbols(), k_max);
    let mut best = Rational::from_integer(0);
    for (k, &ed) in eds.iter().enumerate() {
        let r = rational(ed as i64, 2 * (k as i64 + 1));
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

/// Relative suffix distance: `max_{k>0} ED_k / 2k` with `k` ranging up
/// to `max(|a|, |b|)`. A metric on strings with values in `[0, 1]`.
pub fn rsd(a: &SymbolString, b: &SymbolString) -> Result<Rational> {
    max_suffix_ratio(a, b, a.len().max(b.len()))
}

/// Limited relative suffix distance: same as [`rsd`] but the max runs
/// over `0 < k < l` only.
pub fn lrsd(l: usize, a: &SymbolString, b: &SymbolString) -> Result<Rational> {
    if l == 0 {
        return Err(Error::InvalidParameter("lrsd limit l must be at least 1".into()));
    }
    max_suffix_ratio(a, b, (l - 1).min(a.len().max(b.len())))
}

/// One edit operation. Positions are interpreted against the current
/// string state as operations are applied in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    /// Insert `symbol` so that it ends up at index `pos` (0 ≤ pos ≤ len).
    Insert { pos: usize, symbol: Symbol },
    /// Delete the symbol at index `pos`.
    Delete { pos: usize },
}

pub type EditScript = Vec<EditOp>;

/// One event on the wire, in transmission order. `Delivered` and
/// `Deleted` carry the originating sent position; insertions sit between
/// sent symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WireEvent {
    Delivered { sent_pos: usize },
    Deleted { sent_pos: usize },
    Inserted { symbol: Symbol },
}

/// Origin of a received symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// Successfully transmitted: sent at this position and not deleted.
    Sent(usize),
    Inserted,
}

/// Result of applying an edit script: the corrupted string plus the
/// alignment between sent and received positions.
#[derive(Debug, Clone)]
pub struct AppliedScript {
    pub output: SymbolString,
    /// Per received position: where the symbol came from.
    pub alignment: Vec<Origin>,
    /// Canonical wire timeline; replays to `output`.
    pub events: Vec<WireEvent>,
}

/// Applies `script` to `s` in order, recording which received positions
/// are successfully transmitted.
pub fn apply_edit_script(s: &SymbolString, script: &EditScript) -> Result<AppliedScript> {
    #[derive(Clone, Copy)]
    enum Entry {
        Live(Symbol, Origin),
        Tombstone(usize),
    }
    let mut state: Vec<Entry> = s
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, &sym)| Entry::Live(sym, Origin::Sent(i)))
        .collect();

    // Maps a live index to its position in `state`.
    let nth_live = |state: &[Entry], pos: usize| -> Option<usize> {
        let mut count = 0;
        for (i, e) in state.iter().enumerate() {
            if let Entry::Live(..) = e {
                if count == pos {
                    return Some(i);
                }
                count += 1;
            }
        }
        None
    };
    let live_len = |state: &[Entry]| state.iter().filter(|e| matches!(e, Entry::Live(..))).count();

    for &op in script {
        match op {
            EditOp::Delete { pos } => {
                let i = nth_live(&state, pos)
                    .ok_or(Error::OpOutOfRange { pos, len: live_len(&state) })?;
                match state[i] {
                    Entry::Live(_, Origin::Sent(sp)) => state[i] = Entry::Tombstone(sp),
                    Entry::Live(_, Origin::Inserted) => {
                        state.remove(i);
                    }
                    Entry::Tombstone(_) => unreachable!(),
                }
            }
            EditOp::Insert { pos, symbol } => {
                if symbol >= s.alphabet_size() {
                    return Err(Error::SymbolOutOfRange {
                        symbol,
                        alphabet_size: s.alphabet_size(),
                    });
                }
                let len = live_len(&state);
                if pos > len {
                    return Err(Error::OpOutOfRange { pos, len });
                }
                let i = if pos == len {
                    state.len()
                } else {
                    nth_live(&state, pos).unwrap()
                };
                state.insert(i, Entry::Live(symbol, Origin::Inserted));
            }
        }
    }

    let mut events = Vec::with_capacity(state.len());
    let mut symbols = Vec::new();
    let mut alignment = Vec::new();
    for e in &state {
        match *e {
            Entry::Live(sym, origin) => {
                symbols.push(sym);
                alignment.push(origin);
                events.push(match origin {
                    Origin::Sent(sp) => WireEvent::Delivered { sent_pos: sp },
                    Origin::Inserted => WireEvent::Inserted { symbol: sym },
                });
            }
            Entry::Tombstone(sp) => events.push(WireEvent::Deleted { sent_pos: sp }),
        }
    }
    Ok(AppliedScript {
        output: SymbolString { alphabet_size: s.alphabet_size(), symbols },
        alignment,
        events,
    })
}

/// Per-arrival error bookkeeping extracted from a wire timeline.
///
/// For received position `r` (0-based), `sent_progress[r]` is the number
/// of sent symbols dispatched when that symbol arrived, and the error
/// events are attributed to sent times: a deletion of sent position `p`
/// has time `p`, an insertion after `t` sent symbols has time `t`.
#[derive(Debug, Clone)]
pub struct ErrorTimeline {
    pub sent_progress: Vec<usize>,
    /// Sorted sent-times of all error events visible at each arrival:
    /// `errors_by_arrival[r]` = times of errors that occurred at or
    /// before arrival `r`.
    error_times: Vec<usize>,
    errors_seen: Vec<usize>,
}

impl ErrorTimeline {
    pub fn from_events(events: &[WireEvent]) -> Self {
        let mut sent_progress = Vec::new();
        let mut error_times = Vec::new();
        let mut errors_seen = Vec::new();
        let mut sent = 0usize;
        for ev in events {
            match *ev {
                WireEvent::Delivered { .. } => {
                    sent += 1;
                    sent_progress.push(sent);
                    errors_seen.push(error_times.len());
                }
                WireEvent::Deleted { .. } => {
                    sent += 1;
                    error_times.push(sent);
                }
                WireEvent::Inserted { .. } => {
                    // An insertion before any sent symbol still counts
                    // against the first symbol's suffixes.
                    error_times.push(sent.max(1));
                    sent_progress.push(sent);
                    errors_seen.push(error_times.len());
                }
            }
        }
        ErrorTimeline { sent_progress, error_times, errors_seen }
    }

    pub fn received_len(&self) -> usize {
        self.sent_progress.len()
    }

    /// Suffix error density at received position `at` (0-based arrival
    /// index): the max over suffixes of the sent-so-far prefix of the
    /// fraction of edit operations touching that suffix. An error with
    /// sent-time `t` touches the length-`s` suffix of the length-`i`
    /// prefix iff `i - s < t <= i`.
    pub fn suffix_error_density(&self, at: usize) -> Rational {
        let i = self.sent_progress[at];
        let seen = self.errors_seen[at];
        let errs = &self.error_times[..seen];
        if i == 0 {
            return if errs.is_empty() {
                Rational::from_integer(0)
            } else {
                Rational::from_integer(1)
            };
        }
        // Only suffixes starting exactly at an error time can maximize
        // the density, so it suffices to scan error times. Times are
        // non-decreasing in wire order.
        let mut best = Rational::from_integer(0);
        let upto = errs.partition_point(|&x| x <= i);
        for (rank, &t) in errs[..upto].iter().enumerate() {
            // Suffix (t-1, i] of the sent prefix: length i - t + 1,
            // containing the errors with time in (t-1, i].
            let count = upto - rank;
            let s = i - t + 1;
            let r = rational(count as i64, s as i64);
            if r > best {
                best = r;
            }
        }
        best
    }

    /// Max suffix error density over every arrival.
    pub fn max_density(&self) -> Rational {
        (0..self.received_len())
            .map(|r| self.suffix_error_density(r))
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> SymbolString {
        // Shared alphabet for ASCII letters so cross-string ops work.
        let symbols: Vec<Symbol> = text.bytes().map(|b| (b - b'a') as Symbol).collect();
        SymbolString::new(26, symbols).unwrap()
    }

    #[test]
    fn edit_distance_examples() {
        assert_eq!(edit_distance(&s(""), &s("abc")).unwrap(), 3);
        assert_eq!(edit_distance(&s("abc"), &s("abc")).unwrap(), 0);
        assert_eq!(edit_distance(&s("abc"), &s("axc")).unwrap(), 2);
        assert_eq!(edit_distance(&s("abcd"), &s("bcda")).unwrap(), 2);
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(&s("abab"), &s("baba")).unwrap(), 3);
        assert_eq!(lcs_length(&s("abc"), &s("abc")).unwrap(), 3);
        assert_eq!(lcs_length(&s("ab"), &s("cd")).unwrap(), 0);
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = SymbolString::new(4, vec![0, 1]).unwrap();
        let b = SymbolString::new(5, vec![0, 1]).unwrap();
        assert!(edit_distance(&a, &b).is_err());
        assert!(lcs_length(&a, &b).is_err());
        assert!(rsd(&a, &b).is_err());
    }

    #[test]
    fn rsd_examples() {
        let x = s("xayb");
        assert_eq!(rsd(&x, &x).unwrap(), Rational::from_integer(0));
        assert_eq!(rsd(&s("a"), &s("b")).unwrap(), Rational::from_integer(1));
        assert_eq!(rsd(&s("xa"), &s("ya")).unwrap(), rational(1, 2));
        assert_eq!(rsd(&s(""), &s("ab")).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn lrsd_examples() {
        assert_eq!(lrsd(2, &s("xa"), &s("ya")).unwrap(), Rational::from_integer(0));
        assert_eq!(lrsd(3, &s("xa"), &s("ya")).unwrap(), rational(1, 2));
        let t = s("abcabc");
        for l in 1..8 {
            assert_eq!(lrsd(l, &t, &t).unwrap(), Rational::from_integer(0));
        }
        assert!(lrsd(0, &t, &t).is_err());
    }

    #[test]
    fn lrsd_monotone_and_bounded_by_rsd() {
        let a = s("abcabd");
        let b = s("abdabc");
        let mut prev = Rational::from_integer(0);
        for l in 1..10 {
            let v = lrsd(l, &a, &b).unwrap();
            assert!(v >= prev);
            assert!(v <= rsd(&a, &b).unwrap());
            prev = v;
        }
    }

    #[test]
    fn apply_script_examples() {
        let out = apply_edit_script(&s("abc"), &vec![EditOp::Delete { pos: 1 }]).unwrap();
        assert_eq!(out.output, s("ac"));
        assert_eq!(out.alignment, vec![Origin::Sent(0), Origin::Sent(2)]);

        let out = apply_edit_script(&s("abc"), &vec![]).unwrap();
        assert_eq!(out.output, s("abc"));

        let script = vec![
            EditOp::Insert { pos: 2, symbol: 2 },
            EditOp::Delete { pos: 0 },
        ];
        let out = apply_edit_script(&s("ab"), &script).unwrap();
        assert_eq!(out.output, s("bc"));
        assert_eq!(out.alignment, vec![Origin::Sent(1), Origin::Inserted]);
    }

    #[test]
    fn apply_script_out_of_range() {
        assert!(apply_edit_script(&s("ab"), &vec![EditOp::Delete { pos: 2 }]).is_err());
        assert!(apply_edit_script(&s("ab"), &vec![EditOp::Insert { pos: 5, symbol: 0 }]).is_err());
    }

    #[test]
    fn density_error_free_is_zero() {
        let out = apply_edit_script(&s("abcdef"), &vec![]).unwrap();
        let tl = ErrorTimeline::from_events(&out.events);
        for r in 0..tl.received_len() {
            assert_eq!(tl.suffix_error_density(r), Rational::from_integer(0));
        }
    }

    #[test]
    fn density_deleted_tail() {
        // Delete the last 2 of 4: measured just after, the length-1 and
        // length-2 suffix windows are fully erroneous.
        let script = vec![EditOp::Delete { pos: 3 }, EditOp::Delete { pos: 2 }];
        let out = apply_edit_script(&s("abcd"), &script).unwrap();
        let tl = ErrorTimeline::from_events(&out.events);
        // Received = "ab"; at the last arrival no deletions are visible yet
        // (they occur later on the wire), so density is 0 there.
        assert_eq!(out.output, s("ab"));
        assert_eq!(tl.suffix_error_density(1), Rational::from_integer(0));
        // An insertion after them sees both deletions plus itself: the
        // length-1 suffix window holds 2 errors (density has no upper
        // bound), the length-2 window holds all 3.
        let script = vec![
            EditOp::Delete { pos: 3 },
            EditOp::Delete { pos: 2 },
            EditOp::Insert { pos: 2, symbol: 7 },
        ];
        let out = apply_edit_script(&s("abcd"), &script).unwrap();
        let tl = ErrorTimeline::from_events(&out.events);
        let last = tl.received_len() - 1;
        assert_eq!(tl.suffix_error_density(last), Rational::from_integer(2));
    }

    #[test]
    fn tuple_alphabet_roundtrip() {
        let ta = TupleAlphabet::new(vec![4, 3, 5]).unwrap();
        for a in 0..4 {
            for b in 0..3 {
                for c in 0..5 {
                    let packed = ta.pack(&[a, b, c]).unwrap();
                    assert_eq!(ta.unpack(packed), vec![a, b, c]);
                    assert!(packed < ta.total_size());
                }
            }
        }
    }
}
