//! Fermat numbers `F_n = 2^(2^n) + 1`, their known primality status, and the
//! exact preimages of powers of two.
//!
//! Every odd prime dividing an `x` with `φ(x) = 2^e` is a Fermat prime and
//! appears to the first power, so `x = 2^s · ∏ F_i` over a set of distinct
//! Fermat primes. Enumeration therefore runs over subsets of the known
//! Fermat primes; it only needs the primality status of every `F_i` with
//! `2^i ≤ e`.

use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{is_prime, totient};
use crate::error::{Error, Result};
use crate::inverse::PreimageSet;

/// Largest index for which [`fermat_number`] materialises `F_n`.
pub const DEFAULT_MAX_INDEX: u64 = 20;

/// Largest index a witness file may describe.
pub const MAX_WITNESS_INDEX: u64 = 32;

/// Witnesses shipped with the crate.
pub const BUNDLED_WITNESSES: &str = include_str!("../data/fermat_witnesses.txt");

const PRIME_INDICES: [u64; 5] = [0, 1, 2, 3, 4];
const F5_WITNESS: u64 = 641;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FermatStatus {
    Prime,
    Composite {
        #[serde(serialize_with = "ser_decimal")]
        witness: BigUint,
    },
    Unknown,
}

fn ser_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

impl FermatStatus {
    pub fn is_settled(&self) -> bool {
        !matches!(self, FermatStatus::Unknown)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatEntry {
    pub index: u64,
    #[serde(flatten)]
    pub status: FermatStatus,
}

/// `2^(2^n) + 1`, for `n ≤ DEFAULT_MAX_INDEX`.
pub fn fermat_number(n: u64) -> Result<BigUint> {
    fermat_number_bounded(n, DEFAULT_MAX_INDEX)
}

pub fn fermat_number_bounded(n: u64, max_index: u64) -> Result<BigUint> {
    if n > max_index {
        return Err(Error::capacity("Fermat number index", n, max_index));
    }
    Ok((BigUint::one() << (1u64 << n)) + 1u32)
}

/// Whether `m ≥ 1` is a power of two; `2^m + 1` can only be prime when it is.
pub fn exponent_is_power_of_two_check(m: u64) -> bool {
    m.is_power_of_two()
}

// d | F_n  ⇔  2^(2^n) ≡ −1 (mod d).
fn divides_fermat(d: &BigUint, index: u64) -> bool {
    if d <= &BigUint::one() {
        return false;
    }
    let exponent = BigUint::one() << index;
    BigUint::from(2u32).modpow(&exponent, d) == d - 1u32
}

/// Primality status of the Fermat numbers `F_0 … F_32`.
///
/// Indices 0–4 are prime and index 5 is composite (witness 641); further
/// indices are composite only when a witness divisor has been loaded and
/// verified, otherwise their status is unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatPrimeTable {
    entries: Vec<FermatEntry>,
}

impl FermatPrimeTable {
    /// The internally settled table: F_0..F_4 prime, F_5 composite.
    pub fn builtin() -> Self {
        let mut entries: Vec<FermatEntry> = (0..=MAX_WITNESS_INDEX)
            .map(|index| FermatEntry {
                index,
                status: FermatStatus::Unknown,
            })
            .collect();
        for i in PRIME_INDICES {
            let f = fermat_number(i).expect("small index");
            assert!(is_prime(&f), "F_{i} must be prime");
            entries[i as usize].status = FermatStatus::Prime;
        }
        let witness = BigUint::from(F5_WITNESS);
        let f5 = fermat_number(5).expect("small index");
        assert!((&f5 % &witness).is_zero(), "641 must divide F_5");
        entries[5].status = FermatStatus::Composite { witness };
        FermatPrimeTable { entries }
    }

    /// Builtin table extended with the witnesses shipped with the crate.
    pub fn with_bundled_witnesses() -> Self {
        let mut table = Self::builtin();
        table
            .load_witnesses(BUNDLED_WITNESSES)
            .expect("bundled witnesses verify");
        table
    }

    pub fn from_witness_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Witness {
            line: 0,
            reason: format!("cannot read {}: {e}", path.display()),
        })?;
        let mut table = Self::builtin();
        table.load_witnesses(&text)?;
        Ok(table)
    }

    /// Parses "index divisor" lines and marks each index composite after
    /// checking that the divisor really divides `F_index`. Blank lines and
    /// `#` comments are ignored.
    pub fn load_witnesses(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::Witness {
                line: lineno + 1,
                reason,
            };
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(div), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad(format!("expected \"index divisor\", got {line:?}")));
            };
            let index: u64 = idx.parse().map_err(|_| bad(format!("bad index {idx:?}")))?;
            let divisor: BigUint = div.parse().map_err(|_| bad(format!("bad divisor {div:?}")))?;
            if !(5..=MAX_WITNESS_INDEX).contains(&index) {
                return Err(bad(format!("index {index} outside 5..={MAX_WITNESS_INDEX}")));
            }
            let verified = if index <= DEFAULT_MAX_INDEX {
                let f = fermat_number(index)?;
                divisor > BigUint::one() && divisor < f && (&f % &divisor).is_zero()
            } else {
                divides_fermat(&divisor, index)
            };
            if !verified {
                return Err(bad(format!("{divisor} does not divide F_{index}")));
            }
            self.entries[index as usize].status = FermatStatus::Composite { witness: divisor };
        }
        Ok(())
    }

    pub fn entries(&self) -> &[FermatEntry] {
        &self.entries
    }

    /// Status of `F_index`; indices past the table are unknown.
    pub fn status(&self, index: u64) -> &FermatStatus {
        self.entries
            .get(index as usize)
            .map(|e| &e.status)
            .unwrap_or(&FermatStatus::Unknown)
    }

    /// Largest `i` such that every `F_0 … F_i` is settled.
    pub fn max_settled_index(&self) -> u64 {
        self.first_unknown_index() - 1
    }

    fn first_unknown_index(&self) -> u64 {
        self.entries
            .iter()
            .find(|e| !e.status.is_settled())
            .map(|e| e.index)
            .unwrap_or(self.entries.len() as u64)
    }

    fn unsettled(&self, index: u64) -> Error {
        Error::Unsettled {
            index,
            max_settled_index: self.max_settled_index(),
        }
    }

    pub fn prime_indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries
            .iter()
            .filter(|e| e.status == FermatStatus::Prime)
            .map(|e| e.index)
    }

    /// All Fermat primes strictly below `bound`, ascending.
    ///
    /// The answer is only settled when `bound` does not exceed the first
    /// Fermat number of unknown status.
    pub fn fermat_primes_below(&self, bound: &BigUint) -> Result<Vec<BigUint>> {
        let u = self.first_unknown_index();
        // bound ≤ 2^(2^u) + 1 ?
        let top_bits = 1u64 << u;
        let within = match bound.bits() {
            b if b <= top_bits => true,
            b if b == top_bits + 1 => {
                bound <= &((BigUint::one() << top_bits) + 1u32)
            }
            _ => false,
        };
        if !within {
            return Err(self.unsettled(u));
        }
        Ok(self
            .prime_indices()
            .map(|i| fermat_number(i).expect("prime indices are small"))
            .filter(|f| f < bound)
            .collect())
    }

    // Prime indices usable for targets 2^e, after checking that every F_i
    // with 2^i ≤ e is settled.
    fn usable_prime_indices(&self, e: u64) -> Result<Vec<u64>> {
        let top = 63 - e.leading_zeros() as u64; // floor(log2 e)
        if let Some(i) = (0..=top).find(|&i| !self.status(i).is_settled()) {
            return Err(self.unsettled(i));
        }
        Ok(self.prime_indices().filter(|&i| i <= top).collect())
    }

    /// Structured preimages of `2^e`: one entry per admissible
    /// (power of two, subset of Fermat primes) combination.
    pub fn pow2_preimages(&self, e: u64) -> Result<Vec<Pow2Preimage>> {
        if e == 0 {
            return Err(Error::domain("power-of-two exponent must be >= 1"));
        }
        let indices = self.usable_prime_indices(e)?;
        let mut out = Vec::new();
        for mask in 0u32..(1 << indices.len()) {
            let subset: Vec<u64> = indices
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let weight: u64 = subset.iter().map(|&i| 1u64 << i).sum();
            if weight > e {
                continue;
            }
            let odd = subset
                .iter()
                .fold(BigUint::one(), |acc, &i| acc * fermat_number(i).expect("small"));
            let s = e - weight + 1;
            out.push(Pow2Preimage {
                two_exponent: s,
                fermat_indices: subset.clone(),
                value: &odd << s,
            });
            if weight == e {
                out.push(Pow2Preimage {
                    two_exponent: 0,
                    fermat_indices: subset,
                    value: odd,
                });
            }
        }
        out.sort_by(|a, b| a.value.cmp(&b.value));
        Ok(out)
    }

    /// Exactly the `x` with `φ(x) = 2^e`, each re-verified by its totient.
    pub fn enumerate_pow2_preimages(&self, e: u64) -> Result<PreimageSet> {
        let pre = self.pow2_preimages(e)?;
        PreimageSet::verified(BigUint::one() << e, pre.into_iter().map(|p| p.value))
    }

    /// `A(2^e)`.
    ///
    /// With `e = 2^n + a`, `0 ≤ a < 2^n`, and `F_n` composite the count is
    /// `2^t` where `t` is the number of Fermat primes below `F_n`; the value
    /// is cross-checked against the enumeration. Otherwise the enumerated
    /// count is returned.
    pub fn count_pow2_preimages(&self, e: u64) -> Result<Pow2Count> {
        let enumerated = self.enumerate_pow2_preimages(e)?.len();
        let n = 63 - e.leading_zeros() as u64;
        let a = e - (1u64 << n);
        debug_assert!(a < 1u64 << n);
        match self.status(n) {
            FermatStatus::Composite { .. } => {
                let t = self.fermat_primes_below(&fermat_number(n)?)?.len();
                let count = BigUint::one() << t;
                if count.to_usize() != Some(enumerated) {
                    return Err(Error::Contract(format!(
                        "2^{t} preimages predicted for 2^{e}, {enumerated} enumerated"
                    )));
                }
                Ok(Pow2Count {
                    exponent: e,
                    count,
                    fermat_primes_below: Some(t),
                })
            }
            FermatStatus::Prime => Ok(Pow2Count {
                exponent: e,
                count: BigUint::from(enumerated),
                fermat_primes_below: None,
            }),
            FermatStatus::Unknown => Err(self.unsettled(n)),
        }
    }
}

impl Default for FermatPrimeTable {
    fn default() -> Self {
        Self::with_bundled_witnesses()
    }
}

/// `2^two_exponent · ∏ F_i` over `fermat_indices`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pow2Preimage {
    pub two_exponent: u64,
    pub fermat_indices: Vec<u64>,
    #[serde(serialize_with = "ser_decimal")]
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pow2Count {
    pub exponent: u64,
    #[serde(serialize_with = "ser_decimal")]
    pub count: BigUint,
    /// `t` when the closed form `2^t` applied; `None` when the count came
    /// from enumeration alone (`F_n` prime).
    pub fermat_primes_below: Option<usize>,
}

/// `φ(s) == φ(2s)` for odd `s`.
pub fn double_preserves_totient(s: &BigUint) -> Result<bool> {
    if s.is_zero() || !s.bit(0) {
        return Err(Error::domain(format!("{s} is not odd")));
    }
    Ok(totient(s)? == totient(&(s << 1u32))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn values(set: &PreimageSet) -> Vec<u64> {
        set.elements().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn fermat_numbers() {
        assert_eq!(fermat_number(0).unwrap(), nat(3));
        assert_eq!(fermat_number(2).unwrap(), nat(17));
        assert_eq!(fermat_number(5).unwrap(), nat(4294967297));
        assert!(matches!(fermat_number(21), Err(Error::Capacity { .. })));
    }

    #[test]
    fn recursion_holds_for_every_materialised_index() {
        let mut product = BigUint::one();
        for n in 0..=DEFAULT_MAX_INDEX {
            let f = fermat_number(n).unwrap();
            if n >= 1 {
                assert_eq!(&f - 2u32, product, "F_{n}");
            }
            product *= f;
        }
    }

    #[test]
    fn fermat_numbers_are_pairwise_coprime() {
        use num_integer::Integer;
        let fs: Vec<_> = (0..=10).map(|i| fermat_number(i).unwrap()).collect();
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                assert!(fs[i].gcd(&fs[j]).is_one(), "F_{i}, F_{j}");
            }
        }
    }

    #[test]
    fn exponent_check() {
        assert!(exponent_is_power_of_two_check(4));
        assert!(!exponent_is_power_of_two_check(6));
        assert!(exponent_is_power_of_two_check(1));
        // 2^m + 1 is composite whenever m is not a power of two.
        for m in 1..=62u64 {
            if !exponent_is_power_of_two_check(m) {
                assert!(!crate::arith::is_prime_u64((1 << m) + 1), "m = {m}");
            }
        }
    }

    #[test]
    fn builtin_table() {
        let t = FermatPrimeTable::builtin();
        assert_eq!(t.max_settled_index(), 5);
        assert_eq!(t.prime_indices().collect::<Vec<_>>(), [0, 1, 2, 3, 4]);
        match t.status(5) {
            FermatStatus::Composite { witness } => {
                assert_eq!(witness, &nat(641));
                // Lucas form: divisors of F_n are k·2^(n+2) + 1.
                assert!(((witness - 1u32) % 128u32).is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(t.status(6), &FermatStatus::Unknown);
    }

    #[test]
    fn bundled_witnesses() {
        let t = FermatPrimeTable::with_bundled_witnesses();
        assert_eq!(t.max_settled_index(), 19);
        assert_eq!(t.status(20), &FermatStatus::Unknown);
        assert!(matches!(t.status(32), FermatStatus::Composite { .. }));
        for e in t.entries() {
            if let FermatStatus::Composite { witness } = &e.status {
                let modulus = BigUint::one() << (e.index + 2);
                assert!(((witness - 1u32) % modulus).is_zero(), "F_{}", e.index);
            }
        }
    }

    #[test]
    fn witness_parsing_errors() {
        let mut t = FermatPrimeTable::builtin();
        assert!(matches!(t.load_witnesses("6 274179"), Err(Error::Witness { line: 1, .. })));
        assert!(matches!(t.load_witnesses("\n# c\n3 5"), Err(Error::Witness { line: 3, .. })));
        assert!(matches!(t.load_witnesses("6"), Err(Error::Witness { .. })));
        assert!(matches!(t.load_witnesses("40 3"), Err(Error::Witness { .. })));
        assert!(matches!(t.load_witnesses("25 7"), Err(Error::Witness { .. })));
        t.load_witnesses("6 274177 # comment\n\n").unwrap();
        assert_eq!(t.max_settled_index(), 6);
    }

    #[test]
    fn witness_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        std::fs::write(&path, "6 274177\n7 59649589127497217\n").unwrap();
        let t = FermatPrimeTable::from_witness_file(&path).unwrap();
        assert_eq!(t.max_settled_index(), 7);
        assert!(FermatPrimeTable::from_witness_file(dir.path().join("missing")).is_err());
    }

    #[test]
    fn fermat_primes_below_examples() {
        let t = FermatPrimeTable::builtin();
        assert_eq!(t.fermat_primes_below(&nat(6)).unwrap(), [nat(3), nat(5)]);
        assert_eq!(
            t.fermat_primes_below(&nat((1 << 32) + 1)).unwrap(),
            [3u64, 5, 17, 257, 65537].map(nat)
        );
        assert!(t.fermat_primes_below(&nat(3)).unwrap().is_empty());
        let f6 = fermat_number(6).unwrap();
        assert!(t.fermat_primes_below(&f6).is_ok());
        assert!(matches!(
            t.fermat_primes_below(&(f6 + 1u32)),
            Err(Error::Unsettled { index: 6, max_settled_index: 5 })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let t = FermatPrimeTable::builtin();
        assert_eq!(values(&t.enumerate_pow2_preimages(1).unwrap()), [3, 4, 6]);
        assert_eq!(values(&t.enumerate_pow2_preimages(4).unwrap()), [17, 32, 34, 40, 48, 60]);
        assert_eq!(values(&t.enumerate_pow2_preimages(2).unwrap()), [5, 8, 10, 12]);
        assert!(t.enumerate_pow2_preimages(0).is_err());
        assert!(matches!(t.enumerate_pow2_preimages(64), Err(Error::Unsettled { index: 6, .. })));
        assert_eq!(FermatPrimeTable::default().enumerate_pow2_preimages(64).unwrap().len(), 32);
    }

    #[test]
    fn counts() {
        let t = FermatPrimeTable::builtin();
        let c = t.count_pow2_preimages(33).unwrap();
        assert_eq!(c.count, nat(32));
        assert_eq!(c.fermat_primes_below, Some(5));
        let c = t.count_pow2_preimages(1).unwrap();
        assert_eq!(c.count, nat(3));
        assert_eq!(c.fermat_primes_below, None);
        assert_eq!(t.count_pow2_preimages(4).unwrap().count, nat(6));
    }

    #[test]
    fn count_consistency_up_to_63() {
        let t = FermatPrimeTable::builtin();
        for e in 1..=63u64 {
            let set = t.enumerate_pow2_preimages(e).unwrap();
            assert_eq!(t.count_pow2_preimages(e).unwrap().count, nat(set.len() as u64));
            let target = BigUint::one() << e;
            for x in set.elements() {
                assert_eq!(totient(x).unwrap(), target);
            }
        }
    }

    #[test]
    fn large_exponents_with_bundled_witnesses() {
        let t = FermatPrimeTable::default();
        for e in [64u64, 100, 1000, (1 << 19) + 5] {
            assert_eq!(t.count_pow2_preimages(e).unwrap().count, nat(32), "e = {e}");
        }
        assert!(matches!(t.count_pow2_preimages(1 << 20), Err(Error::Unsettled { index: 20, .. })));
    }

    #[test]
    fn product_of_fermat_primes_has_totient_two_to_31() {
        let p = nat(3 * 5 * 17 * 257 * 65537);
        assert_eq!(totient(&p).unwrap(), BigUint::one() << 31u32);
    }

    #[test]
    fn doubling() {
        assert!(double_preserves_totient(&nat(15)).unwrap());
        assert!(double_preserves_totient(&nat(3)).unwrap());
        assert!(double_preserves_totient(&nat(105)).unwrap());
        assert!(matches!(double_preserves_totient(&nat(4)), Err(Error::Domain(_))));
    }

    #[test]
    fn structure_of_preimages() {
        let t = FermatPrimeTable::builtin();
        for e in 1..=40u64 {
            for p in t.pow2_preimages(e).unwrap() {
                let f = factorize(&p.value).unwrap();
                for (q, k) in f.factors() {
                    if q != &nat(2) {
                        assert_eq!(*k, 1);
                        assert!(p.fermat_indices.iter().any(|&i| &fermat_number(i).unwrap() == q));
                    }
                }
            }
        }
    }
}
