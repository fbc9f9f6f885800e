//! Preimages of `m = 2^k·3^n`.
//!
//! Every preimage `t` splits as `2^x · 3^y · p_1 ⋯ p_L` where the `p_i` are
//! distinct primes with `p_i − 1 = 2^(u_i)·3^(v_i)`. The totient then has
//! 2-exponent `max(x−1, 0) + [y ≥ 1] + Σ u_i` and 3-exponent
//! `max(y−1, 0) + Σ v_i`. Preimages fall into three classes by `L`
//! (0, 1, or more).
//!
//! Besides exact enumeration this module evaluates the binomial counting
//! estimates for the number of such splits, and the exact split counts they
//! approximate.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, totient, valuation_unchecked};
use crate::error::{Error, Result};
use crate::inverse::{inverse_totient, PreimageSet};

/// Largest exponent sum accepted by the split counters.
pub const MAX_SPLIT_SUM: u32 = 64;
/// Largest number of columns accepted by the split counters.
pub const MAX_SPLIT_COLUMNS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ThreeSmoothTarget {
    k: u32,
    n: u32,
}

impl ThreeSmoothTarget {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("exponent of 2 must be >= 1"));
        }
        Ok(ThreeSmoothTarget { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> BigUint {
        (BigUint::one() << self.k) * BigUint::from(3u32).pow(self.n)
    }
}

impl fmt::Display for ThreeSmoothTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}*3^{}", self.k, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PreimageClass {
    PurePower23,
    SingleExtraPrime,
    MultiExtraPrime,
}

impl fmt::Display for PreimageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreimageClass::PurePower23 => "pure-power-2-3",
            PreimageClass::SingleExtraPrime => "single-extra-prime",
            PreimageClass::MultiExtraPrime => "multi-extra-prime",
        })
    }
}

/// A prime `p > 3` with `p − 1 = 2^u·3^v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtraPrime {
    #[serde(serialize_with = "ser_decimal")]
    pub prime: BigUint,
    pub u: u32,
    pub v: u32,
}

impl ExtraPrime {
    /// Primes with `v = 0` are `2^u + 1`, i.e. Fermat primes.
    pub fn is_fermat(&self) -> bool {
        self.v == 0
    }
}

fn ser_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// `p/q`, or `p` for integers.
pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedPreimage {
    #[serde(serialize_with = "ser_decimal")]
    pub value: BigUint,
    pub class: PreimageClass,
    /// Exponent of 2 in `value`.
    pub x: u32,
    /// Exponent of 3 in `value`.
    pub y: u32,
    pub extra_primes: Vec<ExtraPrime>,
}

impl ClassifiedPreimage {
    /// (2-exponent, 3-exponent) of `φ(value)` recomputed from the split.
    pub fn totient_exponents(&self) -> (u32, u32) {
        let mut two = self.x.saturating_sub(1) + u32::from(self.y >= 1);
        let mut three = self.y.saturating_sub(1);
        for p in &self.extra_primes {
            two += p.u;
            three += p.v;
        }
        (two, three)
    }

    /// Number of Fermat primes among the extra primes.
    pub fn fermat_count(&self) -> usize {
        self.extra_primes.iter().filter(|p| p.is_fermat()).count()
    }

    pub fn split_matrix(&self) -> SplitMatrix {
        SplitMatrix {
            leading: (
                i64::from(self.x) + self.fermat_count() as i64,
                i64::from(self.y) - 1,
            ),
            columns: self.extra_primes.iter().map(|p| (p.u, p.v)).collect(),
        }
    }
}

/// Exponent matrix of a preimage: leading column `(x + F, y − 1)` followed
/// by one `(u_i, v_i)` column per extra prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitMatrix {
    pub leading: (i64, i64),
    pub columns: Vec<(u32, u32)>,
}

impl SplitMatrix {
    pub fn columns_distinct(&self) -> bool {
        let mut cols = self.columns.clone();
        cols.sort_unstable();
        cols.windows(2).all(|w| w[0] != w[1])
    }
}

/// Splits `t` into `2^x·3^y·∏ p_i` and assigns its class.
///
/// Fails with a domain error when `φ(t)` is not the target, and with a
/// contract violation when some prime factor above 3 is repeated or has a
/// shift `p − 1` that is not 3-smooth.
pub fn classify_preimage(t: &BigUint, target: ThreeSmoothTarget) -> Result<ClassifiedPreimage> {
    let phi = totient(t)?;
    if phi != target.value() {
        return Err(Error::domain(format!("φ({t}) = {phi}, not {}", target.value())));
    }
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    let mut x = 0;
    let mut y = 0;
    let mut extra_primes = Vec::new();
    for (p, e) in factorize(t)?.factors() {
        if *p == two {
            x = *e;
        } else if *p == three {
            y = *e;
        } else {
            if *e != 1 {
                return Err(Error::Contract(format!("prime {p} divides {t} to power {e}")));
            }
            let shift = p - 1u32;
            let u = valuation_unchecked(&two, &shift) as u32;
            let v = valuation_unchecked(&three, &shift) as u32;
            if (&shift >> u) != three.pow(v) {
                return Err(Error::Contract(format!("{p} − 1 is not 3-smooth")));
            }
            extra_primes.push(ExtraPrime { prime: p.clone(), u, v });
        }
    }
    let class = match extra_primes.len() {
        0 => PreimageClass::PurePower23,
        1 => PreimageClass::SingleExtraPrime,
        _ => PreimageClass::MultiExtraPrime,
    };
    let classified = ClassifiedPreimage {
        value: t.clone(),
        class,
        x,
        y,
        extra_primes,
    };
    if classified.totient_exponents() != (target.k, target.n) {
        return Err(Error::Contract(format!(
            "exponents of {t} give {:?}, target is {target}",
            classified.totient_exponents()
        )));
    }
    Ok(classified)
}

/// `φ⁻¹(2^k·3^n)`, with every element checked by [`classify_preimage`].
pub fn enumerate_three_smooth_preimages(target: ThreeSmoothTarget) -> Result<PreimageSet> {
    let set = inverse_totient(&target.value())?;
    for t in set.elements() {
        classify_preimage(t, target)?;
    }
    Ok(set)
}

/// Classified preimages of `2^k·3^n`, ascending by value.
pub fn classified_preimages(target: ThreeSmoothTarget) -> Result<Vec<ClassifiedPreimage>> {
    inverse_totient(&target.value())?
        .elements()
        .iter()
        .map(|t| classify_preimage(t, target))
        .collect()
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn ratio(n: BigInt, d: BigUint) -> BigRational {
    BigRational::new(n, BigInt::from(d))
}

/// The binomial split estimate `C(k + L − F − y − 1, L − 1) / L!`.
///
/// The exponent `n` does not enter the expression; it is accepted so the
/// signature matches the target being estimated. A negative upper index
/// gives 0. Non-integral results are expected: this is an estimate.
pub fn binomial_split_estimate(k: u32, n: u32, l: u32, f: u32, y: u32) -> Result<BigRational> {
    let _ = n;
    if l == 0 {
        return Err(Error::domain("number of extra primes L must be >= 1"));
    }
    let top = i64::from(k) + i64::from(l) - i64::from(f) - i64::from(y) - 1;
    if top < 0 {
        return Ok(BigRational::zero());
    }
    let c = binomial(top as u64, u64::from(l) - 1);
    Ok(ratio(BigInt::from(c), factorial(u64::from(l))))
}

fn check_split_args(k: u32, n: u32, l: u32) -> Result<()> {
    if k > MAX_SPLIT_SUM || n > MAX_SPLIT_SUM || l > MAX_SPLIT_COLUMNS {
        return Err(Error::capacity(
            "split enumeration",
            format!("sums ({k}, {n}) with {l} columns"),
            format!("sums <= {MAX_SPLIT_SUM}, columns <= {MAX_SPLIT_COLUMNS}"),
        ));
    }
    Ok(())
}

// counts[s] = number of ordered `parts`-tuples of integers ≥ `min` summing to s, s ≤ total.
fn composition_counts(total: u32, parts: u32, min: u32) -> Vec<u128> {
    let total = total as usize;
    let mut counts = vec![0u128; total + 1];
    counts[0] = 1;
    for _ in 0..parts {
        let mut next = vec![0u128; total + 1];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for part in min as usize..=total - s {
                next[s + part] += c;
            }
        }
        counts = next;
    }
    counts
}

/// Ordered splits: `L`-tuples of columns `(u_i ≥ 1, v_i ≥ 0)` with
/// `Σ u_i = k` and `Σ v_i = n`.
pub fn ordered_split_count(k: u32, n: u32, l: u32) -> Result<u128> {
    check_split_args(k, n, l)?;
    Ok(composition_counts(k, l, 1)[k as usize] * composition_counts(n, l, 0)[n as usize])
}

/// `|M_12|`: ordered splits whose first two columns coincide. By symmetry
/// every pair `(i, j)` has the same count.
pub fn coinciding_pair_count(k: u32, n: u32, l: u32) -> Result<u128> {
    check_split_args(k, n, l)?;
    if l < 2 {
        return Ok(0);
    }
    let rest_u = composition_counts(k, l - 2, 1);
    let rest_v = composition_counts(n, l - 2, 0);
    let mut total = 0u128;
    for a in 1..=k / 2 {
        for b in 0..=n / 2 {
            total += rest_u[(k - 2 * a) as usize] * rest_v[(n - 2 * b) as usize];
        }
    }
    Ok(total)
}

/// Unordered sets of `L` pairwise-distinct columns `(u ≥ 1, v ≥ 0)` with
/// `Σ u = k` and `Σ v = n`.
pub fn distinct_column_split_count(k: u32, n: u32, l: u32) -> Result<u128> {
    check_split_args(k, n, l)?;
    let (k, n, l) = (k as usize, n as usize, l as usize);
    // dp[c][a][b]: sets of c distinct columns seen so far with sums (a, b).
    let idx = |c: usize, a: usize, b: usize| (c * (k + 1) + a) * (n + 1) + b;
    let mut dp = vec![0u128; (l + 1) * (k + 1) * (n + 1)];
    dp[idx(0, 0, 0)] = 1;
    for u in 1..=k {
        for v in 0..=n {
            for c in (0..l).rev() {
                for a in (0..=k - u).rev() {
                    for b in (0..=n - v).rev() {
                        let here = dp[idx(c, a, b)];
                        if here != 0 {
                            dp[idx(c + 1, a + u, b + v)] += here;
                        }
                    }
                }
            }
        }
    }
    Ok(dp[idx(l, k, n)])
}

/// `|U| − Σ_{i<j} |M_ij|`: inclusion–exclusion stopped after the first
/// negative term, a lower bound on the ordered splits with distinct columns.
pub fn truncated_inclusion_exclusion_lower(k: u32, n: u32, l: u32) -> Result<i128> {
    let all = ordered_split_count(k, n, l)? as i128;
    let pairs = i128::from(l) * (i128::from(l) - 1) / 2;
    Ok(all - pairs * coinciding_pair_count(k, n, l)? as i128)
}

/// One summand of the upper-bound estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimateTerm {
    pub l: u32,
    /// Admissible 2-exponents `x` of `t` leaving room for `L` extra primes.
    pub x_choices: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub binomial: BigRational,
    /// `Σ_{i<j} |M_ij|`.
    pub correction: u128,
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperBoundEstimate {
    pub target: ThreeSmoothTarget,
    pub label: &'static str,
    pub terms: Vec<EstimateTerm>,
    #[serde(serialize_with = "ser_ratio")]
    pub estimate: BigRational,
    pub exact: Option<usize>,
    /// Whether the estimate is at least the exact multiplicity.
    pub estimate_ge_exact: Option<bool>,
}

/// How the estimate is assembled, for report headers.
pub const ESTIMATE_NOTE: &str = "estimate = sum over L=1..k of X_L*(C(k+L-F-y-1, L-1) - I_L)/L! \
with F=0, y=0, X_L=k-L+2 admissible 2-exponents, I_L=C(L,2)*|M_12|(k,n,L)";

/// Evaluates `X·(C(k+L−F−y−1, L−1) − I)/L!` summed over `L = 1..=k`.
///
/// `F` and `y` are set to 0, `X_L` counts the 2-exponents `x ∈ 0..=k−L+1`
/// of `t` that leave at least `L` for the extra primes, and `I` is the
/// first-order coincidence count `C(L,2)·|M_12|`. The value is an estimate
/// and is reported next to the exact multiplicity, never substituted for it.
pub fn upper_bound_preimages(target: ThreeSmoothTarget) -> Result<UpperBoundEstimate> {
    let (k, n) = (target.k, target.n);
    let mut terms = Vec::new();
    let mut estimate = BigRational::zero();
    for l in 1..=k.min(MAX_SPLIT_COLUMNS) {
        let binomial = binomial_split_estimate(k, n, l, 0, 0)?;
        let pairs = u128::from(l) * u128::from(l - 1) / 2;
        let correction = pairs * coinciding_pair_count(k, n, l)?;
        let x_choices = k - l + 2;
        let corrected = binomial.clone()
            - ratio(BigInt::from(correction), factorial(u64::from(l)));
        let value = corrected * BigRational::from_integer(BigInt::from(x_choices));
        estimate += &value;
        terms.push(EstimateTerm {
            l,
            x_choices,
            binomial,
            correction,
            value,
        });
    }
    let exact = match inverse_totient(&target.value()) {
        Ok(set) => Some(set.len()),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let estimate_ge_exact =
        exact.map(|a| estimate >= BigRational::from_integer(BigInt::from(a)));
    Ok(UpperBoundEstimate {
        target,
        label: "ESTIMATE",
        terms,
        estimate,
        exact,
        estimate_ge_exact,
    })
}

/// One row of the estimate-versus-exact report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub k: u32,
    pub n: u32,
    pub exact: Option<usize>,
    #[serde(serialize_with = "ser_ratio")]
    pub estimate: BigRational,
    /// `Σ_L (|U| − Σ|M_ij|)`.
    pub truncated_lower: i128,
    /// `Σ_L L!·distinct_column_split_count`.
    pub distinct_ordered: u128,
    /// `Σ_L |U|`.
    pub ordered: u128,
    /// `truncated ≤ L!·distinct ≤ |U|` held for every `L`.
    pub chain_holds: bool,
    pub estimate_ge_exact: Option<bool>,
}

impl ReportRow {
    pub const CSV_HEADER: &'static str =
        "k,n,exact,estimate,lower_trunc,distinct_ordered,ordered,chain_holds,estimate_ge_exact";

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            opt(self.exact.map(|e| e.to_string())),
            format_ratio(&self.estimate),
            self.truncated_lower,
            self.distinct_ordered,
            self.ordered,
            self.chain_holds,
            opt(self.estimate_ge_exact.map(|b| b.to_string())),
        )
    }
}

pub fn report_row(target: ThreeSmoothTarget) -> Result<ReportRow> {
    let (k, n) = (target.k, target.n);
    let estimate = upper_bound_preimages(target)?;
    let mut truncated_lower = 0i128;
    let mut distinct_ordered = 0u128;
    let mut ordered = 0u128;
    let mut chain_holds = true;
    for l in 1..=k.min(MAX_SPLIT_COLUMNS) {
        let lower = truncated_inclusion_exclusion_lower(k, n, l)?;
        let distinct = distinct_column_split_count(k, n, l)?
            * factorial(u64::from(l)).to_u128().expect("L <= 8");
        let all = ordered_split_count(k, n, l)?;
        chain_holds &= lower <= distinct as i128 && distinct <= all;
        truncated_lower += lower;
        distinct_ordered += distinct;
        ordered += all;
    }
    Ok(ReportRow {
        k,
        n,
        exact: estimate.exact,
        estimate: estimate.estimate,
        truncated_lower,
        distinct_ordered,
        ordered,
        chain_holds,
        estimate_ge_exact: estimate.estimate_ge_exact,
    })
}

/// Report rows for every `1 ≤ k' ≤ k`, `0 ≤ n' ≤ n`.
pub fn report(k: u32, n: u32) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for kk in 1..=k {
        for nn in 0..=n {
            rows.push(report_row(ThreeSmoothTarget::new(kk, nn)?)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn target(k: u32, n: u32) -> ThreeSmoothTarget {
        ThreeSmoothTarget::new(k, n).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    // Every ordered L-tuple of columns (u ≥ 1, v ≥ 0) with the given sums.
    fn all_ordered(k: u32, n: u32, l: u32) -> Vec<Vec<(u32, u32)>> {
        if l == 0 {
            return if k == 0 && n == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for u in 1..=k {
            for v in 0..=n {
                for mut rest in all_ordered(k - u, n - v, l - 1) {
                    rest.insert(0, (u, v));
                    out.push(rest);
                }
            }
        }
        out
    }

    fn pairwise_distinct(cols: &[(u32, u32)]) -> bool {
        (0..cols.len()).all(|i| (i + 1..cols.len()).all(|j| cols[i] != cols[j]))
    }

    fn binom_u128(n: u64, k: u64) -> u128 {
        binomial(n, k).to_u128().unwrap()
    }

    #[test]
    fn target_requires_even_value() {
        assert!(ThreeSmoothTarget::new(0, 3).is_err());
        assert_eq!(target(1, 2).value(), nat(18));
    }

    #[test]
    fn enumeration_examples() {
        let vals = |k, n| -> Vec<u64> {
            enumerate_three_smooth_preimages(target(k, n))
                .unwrap()
                .elements()
                .iter()
                .map(|x| x.to_u64().unwrap())
                .collect()
        };
        assert_eq!(vals(1, 2), [19, 27, 38, 54]);
        assert_eq!(vals(2, 1), [13, 21, 26, 28, 36, 42]);
        assert_eq!(vals(1, 0), [3, 4, 6]);
    }

    #[test]
    fn classification_examples() {
        let c = classify_preimage(&nat(54), target(1, 2)).unwrap();
        assert_eq!((c.class, c.x, c.y), (PreimageClass::PurePower23, 1, 3));

        let c = classify_preimage(&nat(19), target(1, 2)).unwrap();
        assert_eq!(c.class, PreimageClass::SingleExtraPrime);
        assert_eq!((c.extra_primes[0].u, c.extra_primes[0].v), (1, 2));

        let c = classify_preimage(&nat(420), target(5, 1)).unwrap();
        assert_eq!(c.class, PreimageClass::MultiExtraPrime);
        let extras: Vec<_> = c.extra_primes.iter().map(|p| (p.prime.to_u64().unwrap(), p.u, p.v)).collect();
        assert_eq!(extras, [(5, 2, 0), (7, 1, 1)]);
        assert_eq!(c.fermat_count(), 1);
        let m = c.split_matrix();
        assert_eq!(m.leading, (3, 0));
        assert!(m.columns_distinct());
    }

    #[test]
    fn classification_errors() {
        assert!(matches!(classify_preimage(&nat(20), target(1, 2)), Err(Error::Domain(_))));
        // φ(11) = 10 is not 3-smooth, so it cannot match any target anyway.
        assert!(matches!(classify_preimage(&nat(11), target(1, 0)), Err(Error::Domain(_))));
    }

    #[test]
    fn small_powers_of_two() {
        let classes: Vec<_> = classified_preimages(target(2, 0))
            .unwrap()
            .into_iter()
            .map(|c| (c.value.to_u64().unwrap(), c.class))
            .collect();
        assert_eq!(
            classes,
            [
                (5, PreimageClass::SingleExtraPrime),
                (8, PreimageClass::PurePower23),
                (10, PreimageClass::SingleExtraPrime),
                (12, PreimageClass::PurePower23),
            ]
        );
    }

    #[test]
    fn binomial_split_examples() {
        assert_eq!(binomial_split_estimate(5, 0, 2, 1, 1).unwrap(), rat(2, 1));
        assert_eq!(binomial_split_estimate(9, 4, 1, 2, 3).unwrap(), rat(1, 1));
        assert_eq!(binomial_split_estimate(6, 0, 3, 0, 1).unwrap(), rat(7, 2));
        assert_eq!(binomial_split_estimate(1, 0, 1, 3, 3).unwrap(), rat(0, 1));
        assert!(binomial_split_estimate(3, 0, 0, 0, 0).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(distinct_column_split_count(2, 0, 2).unwrap(), 0);
        assert_eq!(distinct_column_split_count(3, 0, 2).unwrap(), 1);
        for (k, n) in [(1, 0), (4, 3), (7, 0)] {
            assert_eq!(distinct_column_split_count(k, n, 1).unwrap(), 1);
            assert_eq!(truncated_inclusion_exclusion_lower(k, n, 1).unwrap(), 1);
        }
        assert_eq!(ordered_split_count(3, 0, 2).unwrap(), 2);
        assert_eq!(coinciding_pair_count(3, 0, 2).unwrap(), 0);
        assert_eq!(truncated_inclusion_exclusion_lower(3, 0, 2).unwrap(), 2);
        assert_eq!(ordered_split_count(2, 0, 2).unwrap(), 1);
        assert_eq!(coinciding_pair_count(2, 0, 2).unwrap(), 1);
        assert_eq!(truncated_inclusion_exclusion_lower(2, 0, 2).unwrap(), 0);
        assert!(matches!(distinct_column_split_count(65, 0, 2), Err(Error::Capacity { .. })));
        assert!(matches!(ordered_split_count(3, 0, 9), Err(Error::Capacity { .. })));
    }

    #[test]
    fn split_counts_match_enumeration() {
        for k in 0..=7 {
            for n in 0..=5 {
                for l in 0..=4 {
                    let all = all_ordered(k, n, l);
                    assert_eq!(ordered_split_count(k, n, l).unwrap(), all.len() as u128);
                    let distinct = all.iter().filter(|c| pairwise_distinct(c)).count() as u128;
                    let fact: u128 = (1..=l as u128).product();
                    assert_eq!(distinct_column_split_count(k, n, l).unwrap() * fact, distinct, "{k} {n} {l}");
                    if l >= 2 {
                        let m12 = all.iter().filter(|c| c[0] == c[1]).count() as u128;
                        assert_eq!(coinciding_pair_count(k, n, l).unwrap(), m12);
                    }
                }
            }
        }
    }

    #[test]
    fn ordered_count_closed_form() {
        for k in 1..=20u32 {
            for n in 0..=20u32 {
                for l in 1..=8u32 {
                    let expected = binom_u128(u64::from(k - 1), u64::from(l - 1))
                        * binom_u128(u64::from(n + l - 1), u64::from(l - 1));
                    assert_eq!(ordered_split_count(k, n, l).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn exactness_ordering() {
        for k in 0..=12 {
            for n in 0..=12 {
                for l in 1..=6 {
                    let lower = truncated_inclusion_exclusion_lower(k, n, l).unwrap();
                    let fact: u128 = (1..=l as u128).product();
                    let distinct = distinct_column_split_count(k, n, l).unwrap() * fact;
                    let all = ordered_split_count(k, n, l).unwrap();
                    assert!(lower <= distinct as i128 && distinct <= all, "{k} {n} {l}");
                }
            }
        }
    }

    #[test]
    fn estimates_are_reported_with_exact_values() {
        let e = upper_bound_preimages(target(1, 2)).unwrap();
        assert_eq!(e.exact, Some(4));
        assert_eq!(e.label, "ESTIMATE");
        assert_eq!(e.terms.len(), 1);
        let e = upper_bound_preimages(target(1, 0)).unwrap();
        assert_eq!(e.exact, Some(3));
        let e = upper_bound_preimages(target(5, 1)).unwrap();
        assert_eq!(e.exact, Some(crate::inverse::multiplicity(&nat(96)).unwrap()));
        assert!(e.estimate_ge_exact.is_some());
    }

    #[test]
    fn report_rows() {
        let rows = report(2, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.chain_holds));
        assert_eq!(rows[0].exact, Some(3));
        assert!(rows[0].to_csv().starts_with("1,0,3,"));
        assert_eq!(ReportRow::CSV_HEADER.split(',').count(), rows[0].to_csv().split(',').count());
    }
}
