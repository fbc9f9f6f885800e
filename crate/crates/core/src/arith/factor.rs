use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{gcd_u64, is_prime_u64, mul_mod, primality, Primality};
use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 1 << 12;

/// Canonical decomposition `∏ p^e`, strictly increasing by prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
    probable: bool,
}

impl Factorization {
    /// Builds a factorization from arbitrary (prime, exponent) pairs, merging
    /// repeats and dropping zero exponents. Primes are not re-checked here.
    pub(crate) fn from_pairs(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Self {
        let mut factors: Vec<(BigUint, u32)> = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization {
            factors: merged,
            probable: false,
        }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// True when some prime factor above 2^64 was only shown probably prime.
    pub fn has_probable_factor(&self) -> bool {
        self.probable
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Reconstructs the factored number.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Totient of the factored number, `∏ p^(e−1)(p−1)`.
    pub fn totient(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * p.pow(*e - 1) * (p - 1u32)
        })
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let base = divs.len();
            let mut power = BigUint::one();
            for _ in 0..*e {
                power *= p;
                for i in 0..base {
                    divs.push(&divs[i] * &power);
                }
            }
        }
        divs.sort();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

// Brent's variant of Pollard rho; returns a nontrivial factor of composite odd n.
fn rho_u64(n: u64) -> u64 {
    let sqrt = (n as f64).sqrt() as u64;
    for r in [sqrt, sqrt + 1] {
        if r * r == n {
            return r;
        }
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut q) = (2u64, 2u64, 1u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Factorization of a 64-bit value as (prime, exponent) pairs, ascending.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        out.push((2, twos));
        n >>= twos;
    }
    let mut p = 3u64;
    while p <= TRIAL_BOUND && p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 2;
    }
    if n > 1 {
        if p * p > n {
            out.push((n, 1));
        } else {
            let mut primes = Vec::new();
            split_u64(n, &mut primes);
            primes.sort_unstable();
            for q in primes {
                match out.last_mut() {
                    Some((r, e)) if *r == q => *e += 1,
                    _ => out.push((q, 1)),
                }
            }
        }
    }
    out
}

/// Euler's totient of a 64-bit value; `totient_u64(0)` is 0.
pub fn totient_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize_u64(n)
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * p.pow(e - 1) * (p - 1))
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = two.clone();
        let mut y = two.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>, probable: &mut bool) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut primes = Vec::new();
        split_u64(small, &mut primes);
        out.extend(primes.into_iter().map(BigUint::from));
        return;
    }
    match primality(&n) {
        Primality::Prime => out.push(n),
        Primality::ProbablePrime => {
            *probable = true;
            out.push(n);
        }
        Primality::Composite => {
            let d = rho_big(&n);
            let rest = &n / &d;
            split_big(d, out, probable);
            split_big(rest, out, probable);
        }
    }
}

/// Canonical factorization of `n ≥ 1`.
///
/// Small factors are stripped by trial division; the cofactor is split with
/// Pollard rho. The result is re-verified by reconstruction and by primality
/// of each entry before it is returned.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("factorize requires n >= 1"));
    }
    let fact = if let Some(small) = n.to_u64() {
        Factorization::from_pairs(
            factorize_u64(small)
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e)),
        )
    } else {
        let mut rest = n.clone();
        let mut pairs = Vec::new();
        let twos = rest.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            pairs.push((BigUint::from(2u32), twos as u32));
            rest >>= twos;
        }
        let mut p = 3u64;
        while p <= TRIAL_BOUND && rest.to_u64().map_or(true, |r| p * p <= r) {
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&BigUint::from(p));
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                pairs.push((BigUint::from(p), e));
            }
            p += 2;
        }
        let mut primes = Vec::new();
        let mut probable = false;
        split_big(rest, &mut primes, &mut probable);
        pairs.extend(primes.into_iter().map(|q| (q, 1)));
        let mut f = Factorization::from_pairs(pairs);
        f.probable = probable;
        f
    };
    if &fact.product() != n {
        return Err(Error::Contract(format!("factorization of {n} does not reconstruct")));
    }
    if let Some((p, _)) = fact.factors.iter().find(|(p, _)| !primality(p).is_prime()) {
        return Err(Error::Contract(format!("factor {p} of {n} is not prime")));
    }
    Ok(fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn examples() {
        assert!(factorize(&nat(1)).unwrap().is_empty());
        let twelve = factorize(&nat(12)).unwrap();
        assert_eq!(twelve.factors(), &[(nat(2), 2), (nat(3), 1)]);
        assert_eq!(factorize(&nat(65537)).unwrap().factors(), &[(nat(65537), 1)]);
        assert!(matches!(factorize(&nat(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn semiprimes_need_rho() {
        let n = 4294967297u64; // F_5
        assert_eq!(factorize_u64(n), vec![(641, 1), (6700417, 1)]);
        let p = 4294967291u64;
        let q = 4294967279u64;
        assert_eq!(factorize_u64(p * q), vec![(q, 1), (p, 1)]);
        assert_eq!(factorize_u64(p * p), vec![(p, 2)]);
    }

    #[test]
    fn big_inputs() {
        // F_6 = 274177 * 67280421310721
        let f6 = (BigUint::one() << 64u32) + 1u32;
        let f = factorize(&f6).unwrap();
        assert_eq!(f.factors(), &[(nat(274177), 1), (nat(67280421310721), 1)]);
        assert!(!f.has_probable_factor());

        let big = nat(4294967291) * nat(4294967279) * nat(18446744073709551557) * nat(12);
        let f = factorize(&big).unwrap();
        assert_eq!(f.product(), big);
        assert_eq!(f.len(), 5);
        assert_eq!(f.exponent_of(&nat(2)), 2);
    }

    #[test]
    fn divisors_of_twelve() {
        let d = factorize(&nat(12)).unwrap().divisors();
        assert_eq!(d, [1u64, 2, 3, 4, 6, 12].map(nat));
    }

    #[test]
    fn display() {
        assert_eq!(factorize(&nat(360)).unwrap().to_string(), "2^3 * 3^2 * 5");
        assert_eq!(factorize(&nat(1)).unwrap().to_string(), "1");
    }
}
