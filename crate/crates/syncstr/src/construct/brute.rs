//! Depth-first search for short ε-synchronization strings.
//!
//! The ε-synchronization property is prefix-closed, so the search can
//! prune any prefix that already violates it. With an alphabet at
//! least as large as the target length the search always terminates:
//! a valid prefix extended by fresh symbols stays valid.

use crate::error::{Error, Result};
use crate::metrics::{Rational, Symbol, SymbolString};
use crate::verify::Bound;

/// Searches for an ε-synchronization string of length `n` over `q`
/// symbols, depth-first over prefixes with symbols tried in ascending
/// order. Returns `ConstructionFailed` when no string exists at these
/// parameters or the node budget runs out.
pub fn brute_force_search(
    eps: Rational,
    n: usize,
    q: Symbol,
    budget: u64,
) -> Result<SymbolString> {
    if eps <= Rational::from_integer(0) || eps >= Rational::from_integer(1) {
        return Err(Error::InvalidParameter("eps must be in (0,1)".into()));
    }
    if n == 0 {
        return Ok(SymbolString::empty(q));
    }
    let bound = Bound::new(eps);
    let mut prefix: Vec<Symbol> = Vec::with_capacity(n);
    let mut nodes: u64 = 0;
    if dfs(&mut prefix, n, q, &bound, budget, &mut nodes) {
        return SymbolString::new(q, prefix);
    }
    Err(Error::ConstructionFailed(if nodes >= budget {
        format!("brute-force budget of {budget} nodes exhausted at (eps, n, q) = ({eps}, {n}, {q})")
    } else {
        format!("no eps-synchronization string exists at (eps, n, q) = ({eps}, {n}, {q})")
    }))
}

fn dfs(
    prefix: &mut Vec<Symbol>,
    n: usize,
    q: Symbol,
    bound: &Bound,
    budget: u64,
    nodes: &mut u64,
) -> bool {
    if prefix.len() == n {
        return true;
    }
    for v in 0..q {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        prefix.push(v);
        if extension_valid(prefix, bound) && dfs(prefix, n, q, bound, budget, nodes) {
            return true;
        }
        prefix.pop();
        if *nodes > budget {
            return false;
        }
    }
    false
}

/// Checks only the triples `(i, j, k)` with `k` at the new end: by
/// prefix-closedness all earlier triples were checked when shorter
/// prefixes were accepted.
fn extension_valid(prefix: &[Symbol], bound: &Bound) -> bool {
    let k = prefix.len();
    if k < 2 {
        return true;
    }
    // For each split j, one backward suffix-vs-suffix DP gives
    // ED(prefix[i..j], prefix[j..k]) for every i.
    let mut col: Vec<u32> = Vec::new();
    for j in 1..k {
        let b = &prefix[j..k];
        let m = b.len();
        // e[y] = ED(prefix[x..j], b[y..m]) rolled over x descending.
        // Start at x = j: ED("", b[y..m]) = m - y.
        col.clear();
        col.extend((0..=m as u32).rev());
        for x in (0..j).rev() {
            let ax = prefix[x];
            // next[y] for x from col (x+1)
            let mut below = col[m] + 1; // e[x][m] = ED(prefix[x..j], "") = j - x
            for y in (0..m).rev() {
                let cur = if ax == b[y] {
                    col[y + 1]
                } else {
                    1 + col[y].min(below)
                };
                col[y + 1] = below;
                below = cur;
            }
            col[0] = below;
            // check triple (x, j, k): total length k - x
            if bound.violated(col[0] as usize, k - x) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rational;
    use crate::verify::verify_sync;

    #[test]
    fn all_distinct_is_found_for_n_equals_q() {
        let s = brute_force_search(rational(1, 2), 6, 6, 100_000).unwrap();
        assert!(verify_sync(&s, rational(1, 2)).unwrap().is_pass());
    }

    #[test]
    fn single_symbol_alphabet_fails() {
        assert!(brute_force_search(rational(1, 2), 2, 1, 100_000).is_err());
        assert!(brute_force_search(rational(99, 100), 2, 1, 100_000).is_err());
    }

    #[test]
    fn found_string_passes_verifier() {
        let eps = rational(1, 2);
        // Exhaustive enumeration shows no length-8 string exists over
        // q = 4 at eps = 1/2 (any 4 consecutive symbols must be
        // distinct, forcing period 4) and none over q = 5 either;
        // q = 6 is the smallest feasible alphabet.
        assert!(brute_force_search(eps, 8, 4, u64::MAX).is_err());
        assert!(brute_force_search(eps, 8, 5, u64::MAX).is_err());
        let s = brute_force_search(eps, 8, 6, 1_000_000).unwrap();
        assert_eq!(s.len(), 8);
        assert!(verify_sync(&s, eps).unwrap().is_pass());
    }

    #[test]
    fn tight_eps_needs_bigger_alphabet() {
        // eps = 1/4 over q = 2 has no length-4 string.
        assert!(brute_force_search(rational(1, 4), 4, 2, 1_000_000).is_err());
        let s = brute_force_search(rational(1, 4), 12, 12, 1_000_000).unwrap();
        assert!(verify_sync(&s, rational(1, 4)).unwrap().is_pass());
    }
}
