//! Exact integer primitives: primality, factorization, totient and p-adic
//! valuation.

mod factor;
mod prime;

pub use factor::{factorize, factorize_u64, totient_u64, Factorization};
pub use prime::{first_primes, is_prime, is_prime_u64, primality, Primality};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Euler's totient `φ(n)` for `n ≥ 1`, with `φ(1) = 1`.
pub fn totient(n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::domain("totient requires n >= 1"));
    }
    Ok(factorize(n)?.totient())
}

/// Largest `e` with `p^e | n`.
pub fn valuation(p: &Natural, n: &Natural) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::domain("valuation requires n >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::domain(format!("valuation base {p} is not prime")));
    }
    Ok(valuation_unchecked(p, n))
}

pub(crate) fn valuation_unchecked(p: &Natural, n: &Natural) -> u64 {
    if *p == BigUint::from(2u32) {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn valuation_u64(p: u64, mut n: u64) -> u32 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        e
    }

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    fn gcd_count(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(&nat(1)).unwrap(), nat(1));
        assert_eq!(totient(&nat(12)).unwrap(), nat(4));
        assert_eq!(totient(&nat(2 * 3 * 5 * 7)).unwrap(), nat(48));
        assert!(matches!(totient(&nat(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn totient_matches_gcd_count_up_to_10000() {
        for n in 1..=10_000u64 {
            let expected = gcd_count(n);
            assert_eq!(totient_u64(n), expected, "n = {n}");
            assert_eq!(totient(&nat(n)).unwrap(), nat(expected), "n = {n}");
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&nat(2), &nat(48)).unwrap(), 4);
        assert_eq!(valuation(&nat(3), &nat(48)).unwrap(), 1);
        assert_eq!(valuation(&nat(5), &nat(48)).unwrap(), 0);
        assert!(valuation(&nat(4), &nat(48)).is_err());
        assert!(valuation(&nat(2), &nat(0)).is_err());
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(a in 1u64..=10_000, b in 1u64..=10_000) {
            prop_assume!(a.gcd(&b) == 1);
            let lhs = totient(&nat(a * b)).unwrap();
            let rhs = totient(&nat(a)).unwrap() * totient(&nat(b)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn factorization_reconstructs(n in 1u64..=1_000_000) {
            let f = factorize(&nat(n)).unwrap();
            prop_assert_eq!(f.product(), nat(n));
            for w in f.factors().windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for (p, e) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert!(*e >= 1);
            }
        }

        #[test]
        fn factorization_reconstructs_wide(n in any::<u64>().prop_map(|x| x | 1), m in 1u64..1_000_000) {
            let big = nat(n) * nat(m);
            let f = factorize(&big).unwrap();
            prop_assert_eq!(f.product(), big);
        }

        #[test]
        fn valuation_is_exact(p in prop::sample::select(vec![2u64, 3, 5, 7, 65537]), n in 1u64..=10_000_000) {
            let e = valuation(&nat(p), &nat(n)).unwrap() as u32;
            prop_assert_eq!(n % p.pow(e), 0);
            prop_assert_ne!((n as u128) % (p as u128).pow(e + 1), 0);
            prop_assert_eq!(e, valuation_u64(p, n));
        }
    }
}
