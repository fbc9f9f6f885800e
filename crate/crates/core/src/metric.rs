//! Logarithmic cross-ratio metric
//! `ρ(h, g) = |ln( h(c − g) / (g(c − h)) )|` on one side of a constant `c`.
//!
//! With `f(x) = ln x − ln|c − x|` the metric is `|f(h) − f(g)|`. `f` is
//! strictly monotone on each side of `c`, which gives identity of
//! indiscernibles; symmetry is exact in floating point because the
//! difference is only negated.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::valuation_unchecked;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `h, g > c`.
    Above,
    /// `0 < h, g < c`.
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricDomain {
    c: f64,
    side: Side,
}

impl MetricDomain {
    pub fn new(c: f64, side: Side) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!("metric constant c = {c} must be finite and > 0")));
        }
        Ok(MetricDomain { c, side })
    }

    /// `c = 1`, points above.
    pub fn unit_above() -> Self {
        MetricDomain { c: 1.0, side: Side::Above }
    }

    /// The side of `c` that `x` lies on.
    pub fn containing(c: f64, x: f64) -> Result<Self> {
        let side = if x > c { Side::Above } else { Side::Below };
        let domain = Self::new(c, side)?;
        domain.check(x)?;
        Ok(domain)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite()
            && match self.side {
                Side::Above => x > self.c,
                Side::Below => x > 0.0 && x < self.c,
            }
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{x} is not strictly {} c = {}",
                match self.side {
                    Side::Above => "above",
                    Side::Below => "between 0 and",
                },
                self.c
            )))
        }
    }

    fn coordinate(&self, x: f64) -> f64 {
        x.ln() - (self.c - x).abs().ln()
    }
}

impl Default for MetricDomain {
    fn default() -> Self {
        Self::unit_above()
    }
}

/// `ρ(h, g)` on `domain`; both points must lie strictly on its side of `c`.
pub fn rho(h: f64, g: f64, domain: MetricDomain) -> Result<f64> {
    domain.check(h)?;
    domain.check(g)?;
    Ok((domain.coordinate(h) - domain.coordinate(g)).abs())
}

/// `(2^η₂(m), 3^η₃(m))`; both valuations must be at least 1.
pub fn eta_coordinates(m: &BigUint) -> Result<(f64, f64)> {
    if m.bits() == 0 {
        return Err(Error::domain("m must be >= 1"));
    }
    let two = valuation_unchecked(&BigUint::from(2u32), m);
    let three = valuation_unchecked(&BigUint::from(3u32), m);
    if two == 0 || three == 0 {
        return Err(Error::domain(format!(
            "m = {m} needs positive 2- and 3-adic valuations (got {two}, {three})"
        )));
    }
    let h = (BigUint::from(1u32) << two).to_f64().unwrap_or(f64::INFINITY);
    let g = BigUint::from(3u32).pow(three as u32).to_f64().unwrap_or(f64::INFINITY);
    Ok((h, g))
}
