//! Synchronization-string constructions.
//!
//! The construction ladder mirrors how the guarantees compose: a tiny
//! base string found by [`brute::brute_force_search`] or by randomized
//! local-lemma resampling ([`lll::lll_construct`]), squared up by
//! [`boost::boost_square`] into [`boost::linear_chain_construct`], then
//! made highly explicit by [`interleave::code_interleave`] over an
//! insertion-deletion code, optionally augmented with a block counter
//! for local decoding, and finally stitched into infinite strings by
//! [`infinite`].

pub mod boost;
pub mod brute;
pub mod infinite;
pub mod interleave;
pub mod lll;

use crate::error::{Error, Result};
use crate::metrics::{Rational, Symbol, SymbolString};
use std::sync::Arc;

/// Desk-scale knobs shared by the constructions. The defaults follow
/// the string quality parameter; all of them can be overridden.
#[derive(Debug, Clone)]
pub struct ConstructConfig {
    /// Core alphabet size for the random part of the LLL construction;
    /// `None` derives it from `(eps, n)`.
    pub q_core: Option<Symbol>,
    /// Long-distance parameter; `None` means `c = 2/eps`.
    pub c: Option<Rational>,
    /// Block length for code interleaving.
    pub block_len: usize,
    /// Resampling budget for the LLL construction.
    pub max_resamples: usize,
    /// Lengths up to this are searched directly instead of boosted.
    pub brute_threshold: usize,
    /// Node budget for brute-force search.
    pub brute_budget: u64,
    /// Above this length the LLL violation scan switches from the
    /// exhaustive band scan to the match-chain filter.
    pub exact_scan_limit: usize,
    /// Byte budget for the infinite constructions' segment cache.
    pub segment_cache_bytes: usize,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            q_core: None,
            c: None,
            block_len: 16,
            max_resamples: 20_000,
            brute_threshold: 20,
            brute_budget: 5_000_000,
            exact_scan_limit: 1024,
            segment_cache_bytes: 256 << 20,
        }
    }
}

impl ConstructConfig {
    pub fn default_c(eps: Rational) -> Rational {
        Rational::from_integer(2) / eps
    }

    /// Default core alphabet for the LLL construction. Small instances
    /// use `max(32, eps^-4)` capped at 4096; long instances additionally
    /// need the match density low enough that random monotone chains
    /// stay well below the violation threshold, which requires roughly
    /// `4 L^2 eps^2` symbols for scan windows of length `L`.
    pub fn derive_q_core(&self, eps: Rational, n: usize) -> Symbol {
        if let Some(q) = self.q_core {
            return q;
        }
        let inv_eps4 = (Rational::from_integer(1) / (eps * eps * eps * eps))
            .ceil()
            .to_integer() as u128;
        let table = 32u128.max(inv_eps4.min(4096));
        if n <= self.exact_scan_limit {
            return table;
        }
        let c = self.c.unwrap_or_else(|| Self::default_c(eps));
        let l = 2 * crate::verify::threshold_len(c, n);
        let dens = Rational::from_integer(4 * (l * l) as i64) * eps * eps;
        let need = dens.ceil().to_integer().max(1) as u128;
        table.max(need.next_power_of_two())
    }
}

/// Finite or infinite length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

/// Random access to a (possibly infinite) constructed string.
pub trait SyncSource: Send + Sync {
    fn length(&self) -> Length;

    /// The symbol at position `i`.
    fn symbol_at(&self, i: usize) -> Symbol;

    /// An alphabet size that covers every symbol in `[0, n)`. For
    /// finite strings this is the declared alphabet; infinite strings
    /// grow their packed alphabet with each segment epoch.
    fn alphabet_size_up_to(&self, n: usize) -> Symbol;
}

struct MaterializedSource(SymbolString);

impl SyncSource for MaterializedSource {
    fn length(&self) -> Length {
        Length::Finite(self.0.len())
    }

    fn symbol_at(&self, i: usize) -> Symbol {
        self.0.get(i)
    }

    fn alphabet_size_up_to(&self, _n: usize) -> Symbol {
        self.0.alphabet_size()
    }
}

/// A construction descriptor supporting random access and substring
/// materialization without necessarily building the whole string.
#[derive(Clone)]
pub struct ExplicitSyncString {
    eps: Rational,
    long_distance_c: Option<Rational>,
    source: Arc<dyn SyncSource>,
}

impl std::fmt::Debug for ExplicitSyncString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExplicitSyncString")
            .field("eps", &self.eps)
            .field("long_distance_c", &self.long_distance_c)
            .field("length", &self.source.length())
            .finish()
    }
}

impl ExplicitSyncString {
    pub fn materialized(string: SymbolString, eps: Rational, c: Option<Rational>) -> Self {
        ExplicitSyncString {
            eps,
            long_distance_c: c,
            source: Arc::new(MaterializedSource(string)),
        }
    }

    pub fn from_source(source: Arc<dyn SyncSource>, eps: Rational, c: Option<Rational>) -> Self {
        ExplicitSyncString { eps, long_distance_c: c, source }
    }

    pub fn eps(&self) -> Rational {
        self.eps
    }

    pub fn long_distance_c(&self) -> Option<Rational> {
        self.long_distance_c
    }

    pub fn length(&self) -> Length {
        self.source.length()
    }

    pub fn finite_len(&self) -> Option<usize> {
        match self.source.length() {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        if let Length::Finite(n) = self.source.length() {
            assert!(i < n, "symbol_at({i}) beyond length {n}");
        }
        self.source.symbol_at(i)
    }

    pub fn source(&self) -> &Arc<dyn SyncSource> {
        &self.source
    }

    /// Materializes `[i, j)` as a `SymbolString` over an alphabet large
    /// enough for the whole prefix `[0, j)`.
    pub fn substring(&self, i: usize, j: usize) -> Result<SymbolString> {
        if let Length::Finite(n) = self.source.length() {
            if j > n {
                return Err(Error::InvalidParameter(format!(
                    "substring [{i}, {j}) beyond length {n}"
                )));
            }
        }
        if i > j {
            return Err(Error::InvalidParameter(format!("substring [{i}, {j}) is reversed")));
        }
        let q = self.source.alphabet_size_up_to(j);
        let symbols = (i..j).map(|p| self.source.symbol_at(p)).collect();
        SymbolString::new(q, symbols)
    }

    pub fn materialize_prefix(&self, n: usize) -> Result<SymbolString> {
        self.substring(0, n)
    }
}
