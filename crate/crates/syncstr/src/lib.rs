//! Synchronization strings, end to end: constructions, property
//! verifiers, index decoders, insertion-deletion codes, and an
//! adversarial insdel channel with one-way channel simulation.
//!
//! A synchronization string attached symbol-by-symbol to a data stream
//! lets the receiver of an insertion-deletion channel recover the
//! position of each arriving symbol, turning synchronization errors
//! into ordinary half-errors that any block code can absorb.
//!
//! The crate is organized around that pipeline:
//!
//! - [`metrics`]: edit-distance kernels and the (limited) relative
//!   suffix distance, over exact rationals.
//! - [`verify`]: brute-force and accelerated property verifiers; the
//!   oracles everything else is tested against.
//! - [`construct`]: string constructions, from brute-force search and
//!   randomized local-lemma resampling through boosting, code-block
//!   interleaving, and infinite strings.
//! - [`ecc`]: half-error block codes (Reed-Solomon, random inner codes,
//!   concatenation) and sync-indexed insertion-deletion codes.
//! - [`decode`]: the global streaming index decoder and the windowed
//!   local decoder.
//! - [`channel`]: seeded adversarial channels, block transpositions and
//!   replications, and one-way channel simulation.
//! - [`cli`]: the `syncstr` command-line front end.
//!
//! Indexing convention: everything here is 0-based. Run
//! `cargo run --example` for runnable walkthroughs of each capability.

pub mod channel;
pub mod cli;
pub mod construct;
pub mod decode;
pub mod ecc;
pub mod error;
pub mod format;
pub mod metrics;
pub mod verify;

pub use error::{Error, Result};
pub use metrics::{Rational, Symbol, SymbolString, TupleAlphabet};
