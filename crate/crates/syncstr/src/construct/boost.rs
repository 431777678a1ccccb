//! Quadratic boosting and the chained construction built on it.
//!
//! One boosting step turns an ε-synchronization string of even length
//! `n` into an (ε + 6γ)-synchronization string of length `γn²` over
//! the cubed alphabet.

use crate::construct::{ConstructConfig, ExplicitSyncString};
use crate::error::{Error, Result};
use crate::metrics::{Rational, SymbolString, TupleAlphabet};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Squares an ε-synchronization string: the output has length `γn²`
/// and symbols `(S[i mod n], S[(i + n/2) mod n], S[floor(i / γn)])`
/// over the cubed alphabet (0-based reading of all three components).
/// Requires `n` even and `γn` a positive integer.
pub fn boost_square(s: &SymbolString, gamma: Rational) -> Result<SymbolString> {
    let n = s.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("boost_square needs even positive n, got {n}")));
    }
    let gn = gamma * Rational::from_integer(n as i64);
    if !gn.is_integer() || gn <= Rational::from_integer(0) {
        return Err(Error::InvalidParameter(format!(
            "gamma*n must be a positive integer, got gamma={gamma} n={n}"
        )));
    }
    let gn = gn.to_integer().to_usize().unwrap();
    let q = s.alphabet_size();
    let alphabet = TupleAlphabet::new(vec![q, q, q])?;
    let out_len = gn * n;
    let mut symbols = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let a = s.get(i % n);
        let b = s.get((i + n / 2) % n);
        let c = s.get(i / gn);
        symbols.push(alphabet.pack(&[a, b, c])?);
    }
    SymbolString::new(alphabet.total_size(), symbols)
}

/// Builds an ε-synchronization string of exactly length `n`: short
/// targets are searched directly, longer ones take one boosting step
/// over a local-lemma base and truncate (every substring of an ε-sync
/// string is ε-sync, so truncation is safe). The output alphabet is
/// compacted to the symbols actually used.
pub fn linear_chain_construct(
    eps: Rational,
    n: usize,
    seed: u64,
    config: &ConstructConfig,
) -> Result<ExplicitSyncString> {
    if eps <= Rational::from_integer(0) || eps >= Rational::from_integer(1) {
        return Err(Error::InvalidParameter("eps must be in (0,1)".into()));
    }
    if n <= config.brute_threshold {
        let q = (n.max(1)) as u128;
        let s = super::brute::brute_force_search(eps, n, q, config.brute_budget)?;
        let (compact, _) = s.compacted();
        return Ok(ExplicitSyncString::materialized(compact, eps, None));
    }

    // One boosting step with gamma = 1/g where g = ceil(12/eps); the
    // base is built at eps_base = eps - 6/g >= eps/2 so the boosted
    // string lands exactly at eps.
    let g = (Rational::from_integer(12) / eps).ceil().to_integer().to_usize().unwrap();
    let gamma = Rational::new(1, g as i64);
    let eps_base = eps - Rational::from_integer(6) * gamma;

    let floor2 = {
        let v = Rational::from_integer(2) / (eps_base * eps_base);
        v.ceil().to_integer().to_usize().unwrap()
    };
    let lll_min = 2 * floor2;
    let grid = 2 * g;
    let mut n0 = grid;
    while n0 * n0 / g < n || n0 < lll_min {
        n0 += grid;
    }
    if n0 > 8192 {
        return Err(Error::ConstructionFailed(format!(
            "chain construction would need a base of length {n0}; target n={n} is beyond desk scale"
        )));
    }

    let q_core = config.derive_q_core(eps_base, n0);
    let params = super::lll::LllParams {
        eps: eps_base,
        n: n0,
        q_core,
        c: config.c.unwrap_or_else(|| ConstructConfig::default_c(eps_base)),
        seed,
        max_resamples: config.max_resamples,
        exact_scan_limit: config.exact_scan_limit,
    };
    let base = super::lll::lll_construct(&params)?;
    let base_str = base.materialize_prefix(n0)?;
    let boosted = boost_square(&base_str, gamma)?;
    debug_assert!(boosted.len() >= n);
    let truncated = boosted.substring(0, n);
    let (compact, _) = truncated.compacted();
    Ok(ExplicitSyncString::materialized(compact, eps, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rational;
    use crate::verify::verify_sync;

    #[test]
    fn boost_formula_matches_hand_example() {
        // S = "ab", gamma = 1.
        let s = SymbolString::new(2, vec![0, 1]).unwrap();
        let out = boost_square(&s, Rational::from_integer(1)).unwrap();
        let ta = TupleAlphabet::new(vec![2, 2, 2]).unwrap();
        let tuples: Vec<Vec<u128>> = out.symbols().iter().map(|&x| ta.unpack(x)).collect();
        assert_eq!(
            tuples,
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 1], vec![1, 0, 1]]
        );
    }

    #[test]
    fn boost_length_and_alphabet() {
        let s = SymbolString::new(6, vec![0, 1, 2, 3, 4, 5]).unwrap();
        let gamma = rational(1, 2);
        let out = boost_square(&s, gamma).unwrap();
        assert_eq!(out.len(), 18); // gamma * n^2
        assert_eq!(out.alphabet_size(), 6 * 6 * 6);
    }

    #[test]
    fn boost_rejects_bad_parity() {
        let s = SymbolString::new(3, vec![0, 1, 2]).unwrap();
        assert!(boost_square(&s, Rational::from_integer(1)).is_err());
        let s = SymbolString::new(4, vec![0, 1, 2, 3]).unwrap();
        assert!(boost_square(&s, rational(1, 8)).is_err());
    }

    #[test]
    fn boosted_brute_base_passes_verifier() {
        // A brute-force eps=1/2 base of length 12, boosted with
        // gamma = 1/6 (gamma*n = 2), must be (1/2 + 1)- no: must be
        // checked at eps + 6*gamma; use gamma = 1/12 for +1/2.
        let eps = rational(1, 4);
        let base = super::super::brute::brute_force_search(eps, 12, 12, 1_000_000).unwrap();
        let gamma = rational(1, 12);
        let out = boost_square(&base, gamma).unwrap();
        assert_eq!(out.len(), 12);
        let target = eps + Rational::from_integer(6) * gamma;
        assert!(verify_sync(&out, target).unwrap().is_pass());
    }

    #[test]
    fn tiny_chain_is_brute_forced() {
        let cfg = ConstructConfig::default();
        let s = linear_chain_construct(rational(1, 2), 1, 1, &cfg).unwrap();
        assert_eq!(s.finite_len(), Some(1));
        let s = linear_chain_construct(rational(1, 2), 12, 1, &cfg).unwrap();
        let m = s.materialize_prefix(12).unwrap();
        assert!(verify_sync(&m, rational(1, 2)).unwrap().is_pass());
    }

    #[test]
    fn chain_deterministic_and_correct_at_small_n() {
        let cfg = ConstructConfig::default();
        let a = linear_chain_construct(rational(1, 2), 40, 3, &cfg).unwrap();
        let b = linear_chain_construct(rational(1, 2), 40, 3, &cfg).unwrap();
        let ma = a.materialize_prefix(40).unwrap();
        let mb = b.materialize_prefix(40).unwrap();
        assert_eq!(ma, mb);
        assert!(verify_sync(&ma, rational(1, 2)).unwrap().is_pass());
    }
}
