use syncstr::metrics::{rational, SymbolString};
use syncstr::verify::verify_sync;

fn main() {
    for q in [4u128, 5, 6, 7, 8] {
        let eps = rational(1, 2);
        let n = 8usize;
        let mut found = 0u64;
        let mut first: Option<Vec<u128>> = None;
        for code in 0..(q as u64).pow(n as u32) {
            let mut c = code;
            let mut syms = Vec::with_capacity(n);
            for _ in 0..n {
                syms.push((c % q as u64) as u128);
                c /= q as u64;
            }
            let s = SymbolString::new(q, syms.clone()).unwrap();
            if verify_sync(&s, eps).unwrap().is_pass() {
                found += 1;
                if first.is_none() { first = Some(syms); }
            }
        }
        println!("q={q}: found {found}; first = {first:?}");
        if found > 0 { break; }
    }
}
