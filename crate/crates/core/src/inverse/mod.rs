//! General inversion of the totient: `φ⁻¹(m)`, the multiplicity `A(m)`,
//! a brute-force sieve oracle and bounded multiplicity search.

mod oracle;

pub use oracle::{brute_force_inverse, brute_force_table, for_each_totient, DEFAULT_BUDGET};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, primality, Primality};
use crate::error::{Error, Result};

/// Cap on the number of preimages a single inversion may produce.
pub const MAX_PREIMAGES: usize = 1_000_000;

/// Sorted, duplicate-free set of `x` with `φ(x) = target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimageSet {
    #[serde(serialize_with = "ser_decimal")]
    target: BigUint,
    #[serde(serialize_with = "ser_decimal_seq")]
    elements: Vec<BigUint>,
    /// Some prime used to build an element above 2^64 was only probably prime.
    probable: bool,
}

fn ser_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

fn ser_decimal_seq<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_str_radix(10)))
}

impl PreimageSet {
    /// Builds a set from candidates, re-verifying `φ(x) = target` for each one.
    pub fn verified(target: BigUint, candidates: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let mut elements: Vec<BigUint> = candidates.into_iter().collect();
        elements.sort();
        elements.dedup();
        let mut probable = false;
        for x in &elements {
            let f = factorize(x)?;
            probable |= f.has_probable_factor();
            if f.totient() != target {
                return Err(Error::Contract(format!(
                    "candidate {x} has totient {} but target is {target}",
                    f.totient()
                )));
            }
        }
        Ok(PreimageSet {
            target,
            elements,
            probable,
        })
    }

    /// Wraps an already sorted, duplicate-free list without re-verification.
    pub(crate) fn from_sorted_unchecked(target: BigUint, elements: Vec<BigUint>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        PreimageSet {
            target,
            elements,
            probable: false,
        }
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn has_probable_primes(&self) -> bool {
        self.probable
    }

    pub fn into_elements(self) -> Vec<BigUint> {
        self.elements
    }
}

/// Depth-first assembly of preimages from prime powers `p^j` whose totient
/// divides the remaining target.
struct Search {
    // Candidate primes p with (p − 1) | m, ascending.
    primes: Vec<BigUint>,
    found: Vec<BigUint>,
    probable: bool,
    stop_after: usize,
}

impl Search {
    fn new(m: &BigUint, stop_after: usize) -> Result<Self> {
        let divisors = factorize(m)?.divisors();
        let mut probable = false;
        let mut primes = Vec::new();
        for d in divisors {
            let p = d + 1u32;
            match primality(&p) {
                Primality::Composite => {}
                Primality::Prime => primes.push(p),
                Primality::ProbablePrime => {
                    probable = true;
                    primes.push(p);
                }
            }
        }
        Ok(Search {
            primes,
            found: Vec::new(),
            probable,
            stop_after,
        })
    }

    fn full(&self) -> bool {
        self.found.len() >= self.stop_after
    }

    // Extends `product` using primes strictly below index `upper`.
    fn run(&mut self, remaining: &BigUint, upper: usize, product: &BigUint) {
        if remaining.is_one() {
            self.found.push(product.clone());
            if self.full() {
                return;
            }
        }
        let limit = self.primes[..upper].partition_point(|p| p <= &(remaining + 1u32));
        for i in (0..limit).rev() {
            let p = self.primes[i].clone();
            let (mut rest, r) = remaining.div_rem(&(&p - 1u32));
            if !r.is_zero() {
                continue;
            }
            let mut power = &p * product;
            loop {
                self.run(&rest, i, &power);
                if self.full() {
                    return;
                }
                let (q, r) = rest.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                power *= &p;
            }
        }
    }
}

fn search(m: &BigUint, stop_after: usize) -> Result<Search> {
    if m.is_zero() {
        return Err(Error::domain("inverse totient requires m >= 1"));
    }
    let mut s = Search::new(m, stop_after)?;
    if m.is_one() || m.is_even() {
        let upper = s.primes.len();
        s.run(m, upper, &BigUint::one());
    }
    Ok(s)
}

/// The complete set `{x : φ(x) = m}` for `m ≥ 1`.
pub fn inverse_totient(m: &BigUint) -> Result<PreimageSet> {
    let s = search(m, MAX_PREIMAGES + 1)?;
    if s.found.len() > MAX_PREIMAGES {
        return Err(Error::capacity("inverse totient", format!("more than {MAX_PREIMAGES} preimages"), MAX_PREIMAGES));
    }
    let mut set = PreimageSet::verified(m.clone(), s.found)?;
    set.probable |= s.probable;
    Ok(set)
}

/// `A(m) = |φ⁻¹(m)|`.
pub fn multiplicity(m: &BigUint) -> Result<usize> {
    Ok(inverse_totient(m)?.len())
}

/// Counts preimages but stops as soon as the count exceeds `cap`; the
/// returned value is then `cap + 1`.
pub fn multiplicity_capped(m: &BigUint, cap: usize) -> Result<usize> {
    Ok(search(m, cap.saturating_add(1))?.found.len())
}

/// Smallest `m ≤ limit` with `A(m) = k`, if any.
pub fn find_with_multiplicity(k: usize, limit: &BigUint) -> Result<Option<BigUint>> {
    if limit.is_zero() {
        return Err(Error::domain("search limit must be >= 1"));
    }
    let mut m = BigUint::one();
    while &m <= limit {
        let count = if m > BigUint::one() && m.is_odd() {
            0
        } else {
            multiplicity_capped(&m, k)?
        };
        if count == k {
            return Ok(Some(m));
        }
        m += 1u32;
    }
    Ok(None)
}

/// Multiplicities `A(1), …, A(limit)` for machine-sized limits.
pub fn multiplicities_up_to(limit: u64) -> Result<Vec<usize>> {
    (1..=limit)
        .map(|m| multiplicity(&BigUint::from(m)))
        .collect()
}

pub(crate) fn to_u64(n: &BigUint, what: &'static str) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::capacity(what, n, u64::MAX))
}
