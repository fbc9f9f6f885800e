use num_bigint::BigUint;
use num_traits::Zero;

use super::{to_u64, PreimageSet};
use crate::error::{Error, Result};

/// Default cap on totient evaluations performed by the oracle.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Calls `visit(x, φ(x))` for every `1 ≤ x ≤ limit`, in increasing order,
/// using a segmented totient sieve.
pub fn for_each_totient(limit: u64, mut visit: impl FnMut(u64, u64)) {
    if limit == 0 {
        return;
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let primes = small_primes(root);
    let mut phi = Vec::with_capacity(SEGMENT as usize);
    let mut rest = Vec::with_capacity(SEGMENT as usize);
    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        phi.clear();
        rest.clear();
        phi.extend(lo..=hi);
        rest.extend(lo..=hi);
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let mut x = lo.div_ceil(p) * p;
            while x <= hi {
                let i = (x - lo) as usize;
                phi[i] = phi[i] / p * (p - 1);
                let mut r = rest[i] / p;
                while r % p == 0 {
                    r /= p;
                }
                rest[i] = r;
                x += p;
            }
        }
        for i in 0..phi.len() {
            let r = rest[i];
            if r > 1 {
                phi[i] = phi[i] / r * (r - 1);
            }
            visit(lo + i as u64, phi[i]);
        }
        lo = hi + 1;
    }
}

fn scan_limit(max_m: u64, budget: u64) -> Result<u64> {
    let limit = 2u128 * max_m as u128 * max_m as u128;
    if limit > budget as u128 {
        return Err(Error::capacity("brute-force scan", limit, budget));
    }
    Ok(limit as u64)
}

/// Brute-force `φ⁻¹(m)`: scans every `x ≤ 2m²` (from `φ(x) ≥ √(x/2)`).
///
/// Fails with a capacity error when `2m²` exceeds `budget`.
pub fn brute_force_inverse(m: &BigUint, budget: u64) -> Result<PreimageSet> {
    if m.is_zero() {
        return Err(Error::domain("brute-force inverse requires m >= 1"));
    }
    let target = to_u64(m, "brute-force target")?;
    let limit = scan_limit(target, budget)?;
    let mut found = Vec::new();
    for_each_totient(limit, |x, phi| {
        if phi == target {
            found.push(BigUint::from(x));
        }
    });
    Ok(PreimageSet::from_sorted_unchecked(m.clone(), found))
}

/// Brute-force preimage lists for every `m` in `1..=max_m` from one scan
/// over `x ≤ 2·max_m²`. Index `m − 1` holds `φ⁻¹(m)`.
pub fn brute_force_table(max_m: u64, budget: u64) -> Result<Vec<Vec<u64>>> {
    if max_m == 0 {
        return Err(Error::domain("brute-force table requires max_m >= 1"));
    }
    let limit = scan_limit(max_m, budget)?;
    let mut table = vec![Vec::new(); max_m as usize];
    for_each_totient(limit, |x, phi| {
        if phi <= max_m {
            table[(phi - 1) as usize].push(x);
        }
    });
    Ok(table)
}
