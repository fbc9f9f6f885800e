//! Exact enumeration and counting of preimages of Euler's totient function.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: primality, factorization, totient and p-adic valuation on
//!   arbitrary-precision naturals;
//! - [`fermat`]: Fermat numbers and the preimages of powers of two;
//! - [`inverse`]: general inversion `φ⁻¹(m)`, multiplicity and the
//!   brute-force sieve oracle;
//! - [`construction`]: explicit preimages of `Q_n = ∏ (p_i − 1)` over the
//!   first primes;
//! - [`smooth`]: preimages of `2^k·3^n`, their three-class classification and
//!   the binomial counting estimates;
//! - [`metric`]: the logarithmic cross-ratio metric;
//! - [`cli`]: the `phinv` command line front end.

pub mod arith;
pub mod cli;
pub mod construction;
mod error;
pub mod fermat;
pub mod inverse;
pub mod metric;
pub mod smooth;

pub use arith::{factorize, is_prime, totient, valuation, Factorization, Natural};
pub use error::{Error, Result};
pub use inverse::{brute_force_inverse, inverse_totient, multiplicity, PreimageSet};
