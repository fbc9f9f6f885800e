//! Explicit preimages of `Q_n = (p_0 − 1)(p_1 − 1)…(p_n − 1)` over the
//! window of the first `n + 1` primes.
//!
//! Starting from the primorial `p_0 p_1 … p_n`, any subset of the factors
//! may be replaced by `p_k − 1`. A replacement keeps the totient equal to
//! `Q_n` when the primes of `p_k − 1` are already present in the product;
//! each candidate is evaluated exactly rather than predicted.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{factorize_u64, first_primes, totient};
use crate::error::{Error, Result};
use crate::inverse::{multiplicity, PreimageSet, MAX_PREIMAGES};

/// Largest window index for which all `2^(n+1)` substitution subsets are enumerated.
pub const MAX_CONSTRUCTION_INDEX: usize = 24;

/// The first `n + 1` primes `p_0 = 2, p_1 = 3, …, p_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWindow {
    primes: Vec<u64>,
}

impl PrimeWindow {
    pub fn new(n: usize) -> Self {
        PrimeWindow {
            primes: first_primes(n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.primes.len() - 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `∏ p_i`.
    pub fn primorial(&self) -> BigUint {
        self.primes.iter().map(|&p| BigUint::from(p)).product()
    }

    pub fn q_value(&self) -> BigUint {
        self.primes.iter().map(|&p| BigUint::from(p - 1)).product()
    }

    fn position(&self, p: u64) -> usize {
        self.primes.binary_search(&p).expect("factor lies in the window")
    }
}

/// `Q_n = ∏_{i=0}^{n} (p_i − 1)`.
pub fn q_value(n: usize) -> BigUint {
    PrimeWindow::new(n).q_value()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructedPreimage {
    /// Window indices `k` whose prime was replaced by `p_k − 1`, ascending.
    pub substituted: Vec<usize>,
    #[serde(serialize_with = "ser_decimal")]
    pub value: BigUint,
    /// Whether `φ(value) = Q_n`.
    pub admissible: bool,
}

fn ser_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("construction requires n >= 1"));
    }
    if n > MAX_CONSTRUCTION_INDEX {
        return Err(Error::capacity(
            "substitution subsets",
            format!("2^{}", n + 1),
            format!("2^{}", MAX_CONSTRUCTION_INDEX + 1),
        ));
    }
    Ok(())
}

// Exponent vector over the window for the product with `mask` substituted.
fn exponents(window: &PrimeWindow, shifted: &[Vec<(usize, u32)>], mask: u32, out: &mut [u32]) {
    out.fill(0);
    for k in 0..window.primes.len() {
        if mask >> k & 1 == 1 {
            for &(j, e) in &shifted[k] {
                out[j] += e;
            }
        } else {
            out[k] += 1;
        }
    }
}

// φ and value from an exponent vector; both fit u128 for n ≤ 24.
fn evaluate(window: &PrimeWindow, exps: &[u32]) -> (u128, u128) {
    let mut value = 1u128;
    let mut phi = 1u128;
    for (&p, &e) in window.primes.iter().zip(exps) {
        if e > 0 {
            let p = p as u128;
            let pe = p.pow(e - 1);
            value *= pe * p;
            phi *= pe * (p - 1);
        }
    }
    (value, phi)
}

/// Every substitution subset of the window, with its value and admissibility.
///
/// Admissible values are re-checked with the general totient.
pub fn substitution_candidates(n: usize) -> Result<Vec<ConstructedPreimage>> {
    check_index(n)?;
    let window = PrimeWindow::new(n);
    let q = window.q_value();
    let q_small: u128 = window.primes.iter().map(|&p| (p - 1) as u128).product();
    // Factorizations of p_k − 1 as window positions; p_0 − 1 = 1 is empty.
    let shifted: Vec<Vec<(usize, u32)>> = window
        .primes
        .iter()
        .map(|&p| {
            factorize_u64(p - 1)
                .into_iter()
                .map(|(q, e)| (window.position(q), e))
                .collect()
        })
        .collect();
    let mut exps = vec![0u32; window.primes.len()];
    let mut out = Vec::with_capacity(1 << (n + 1));
    for mask in 0u32..(1 << (n + 1)) {
        exponents(&window, &shifted, mask, &mut exps);
        let (value, phi) = evaluate(&window, &exps);
        let value = BigUint::from(value);
        let admissible = phi == q_small;
        if admissible && totient(&value)? != q {
            return Err(Error::Contract(format!("φ({value}) differs from Q_{n}")));
        }
        out.push(ConstructedPreimage {
            substituted: (0..=n).filter(|k| mask >> k & 1 == 1).collect(),
            value,
            admissible,
        });
    }
    Ok(out)
}

/// The distinct admissible values of the substitution scheme, as a
/// preimage set of `Q_n`. Always contains at least `n + 2` elements.
pub fn construct_preimages(n: usize) -> Result<PreimageSet> {
    let candidates = substitution_candidates(n)?;
    PreimageSet::verified(
        q_value(n),
        candidates
            .into_iter()
            .filter(|c| c.admissible)
            .map(|c| c.value),
    )
}

/// Checks `φ(p_0 … p_{k−1} (p_k − 1) p_{k+1} … p_n) = Q_n` by exact evaluation.
pub fn single_substitution_identity_check(n: usize, k: usize) -> Result<bool> {
    if k > n {
        return Err(Error::domain(format!("substitution index {k} exceeds n = {n}")));
    }
    let window = PrimeWindow::new(n);
    let value: BigUint = window
        .primes
        .iter()
        .enumerate()
        .map(|(i, &p)| BigUint::from(if i == k { p - 1 } else { p }))
        .product();
    Ok(totient(&value)? == window.q_value())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundCheck {
    pub n: usize,
    #[serde(serialize_with = "ser_decimal")]
    pub q: BigUint,
    pub constructed: usize,
    /// `A(Q_n)` when the inversion stays within [`MAX_PREIMAGES`].
    pub exact: Option<usize>,
}

impl LowerBoundCheck {
    /// `constructed ≥ n + 2` and, when known, `exact ≥ constructed`.
    pub fn holds(&self) -> bool {
        self.constructed >= self.n + 2 && self.exact.map_or(true, |e| e >= self.constructed)
    }
}

pub fn lower_bound_check(n: usize) -> Result<LowerBoundCheck> {
    let constructed = construct_preimages(n)?.len();
    let q = q_value(n);
    let exact = match multiplicity(&q) {
        Ok(a) => Some(a),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    debug_assert!(exact.map_or(true, |a| a <= MAX_PREIMAGES));
    Ok(LowerBoundCheck {
        n,
        q,
        constructed,
        exact,
    })
}
