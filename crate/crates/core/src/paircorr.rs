//! The p-adic pair-correlation statistic
//!
//! ```text
//! F_{N,α,p}(s) = 1/N² · 1/μ(D_p(0, s/N^α)) · #{i ≠ j : |x_i - x_j|_p ≤ s/N^α}
//! ```
//!
//! The ball `D_p(0, s/N^α)` is `p^k Z_p` for the threshold level `k`, so the count
//! reduces to class sizes mod `p^k`. `α = u/v` is kept rational to decide `k` exactly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::discrepancy::serialize_fraction;
use crate::error::{Error, Result};
use crate::padic::{check_prime, prime_power, ExactRational, PAdicApprox};
use crate::sequence::{SequenceSpec, SequenceValues};

/// Exponent `α = u/v` with `0 < α <= 1`, stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    u: u32,
    v: u32,
}

impl Alpha {
    pub fn new(u: u32, v: u32) -> Result<Self> {
        if u == 0 || v == 0 || u > v {
            return Err(Error::Domain(format!("alpha = {u}/{v} must satisfy 0 < alpha <= 1")));
        }
        let g = u.gcd(&v);
        Ok(Self { u: u / g, v: v / g })
    }

    pub fn one() -> Self {
        Self { u: 1, v: 1 }
    }

    pub fn numer(&self) -> u32 {
        self.u
    }

    pub fn denom(&self) -> u32 {
        self.v
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.u, self.v)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("alpha {s:?} is not of the form u/v"));
        let (u, v) = match s.split_once('/') {
            Some((u, v)) => (u.trim(), v.trim()),
            None => (s.trim(), "1"),
        };
        Self::new(u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)
    }
}

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn check_scale(s: &ExactRational) -> Result<()> {
    if !s.is_positive() {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    Ok(())
}

/// Smallest `k >= 0` with `p^-k <= s / N^α`.
///
/// Raising to the `v`-th power and clearing denominators gives the integer test
/// `N^u · den(s)^v <= num(s)^v · p^(k v)`.
pub fn threshold_level(s: &ExactRational, n: usize, alpha: Alpha, p: u64) -> Result<u32> {
    check_prime(p)?;
    check_scale(s)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let lhs = Pow::pow(BigUint::from(n), alpha.u) * Pow::pow(s.denom().magnitude(), alpha.v);
    let sv = Pow::pow(s.numer().magnitude(), alpha.v);
    let step = prime_power(p, alpha.v as usize);
    let mut rhs = sv;
    let mut k = 0;
    while rhs < lhs {
        rhs *= &step;
        k += 1;
    }
    Ok(k)
}

fn ordered_pairs<K: std::hash::Hash + Eq>(classes: impl Iterator<Item = K>) -> u64 {
    let mut sizes: HashMap<K, u64> = HashMap::new();
    for c in classes {
        *sizes.entry(c).or_default() += 1;
    }
    sizes.values().map(|m| m * (m - 1)).sum()
}

/// Ordered pairs `i != j` with `x_i ≡ x_j mod p^k`.
pub fn pair_count(values: &[BigInt], p: u64, k: u32) -> Result<u64> {
    check_prime(p)?;
    let modulus = BigInt::from(prime_power(p, k as usize));
    Ok(ordered_pairs(values.iter().map(|v| v.mod_floor(&modulus))))
}

/// [`pair_count`] for residues known to `K` digits; needs `k <= K`.
pub fn pair_count_truncated(values: &[PAdicApprox], k: u32) -> Result<u64> {
    let Some(first) = values.first() else { return Ok(0) };
    let precision = first.precision();
    if k as usize > precision {
        return Err(Error::InsufficientPrecision { precision, needed: k as usize });
    }
    for v in values {
        if v.p() != first.p() || v.precision() != precision {
            return Err(Error::PrecisionMismatch { p1: first.p(), k1: precision, p2: v.p(), k2: v.precision() });
        }
    }
    Ok(ordered_pairs(values.iter().map(|v| v.digits()[..k as usize].to_vec())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCorrelation {
    pub n: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub s: ExactRational,
    pub level: u32,
    pub pairs: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub value: ExactRational,
}

/// `F_{N,α,p}(s)` for the given values (`N = values.len()`).
pub fn f_statistic(values: &SequenceValues, p: u64, alpha: Alpha, s: &ExactRational) -> Result<PairCorrelation> {
    let n = values.len();
    let level = threshold_level(s, n, alpha, p)?;
    let pairs = match values {
        SequenceValues::Exact(v) => pair_count(v, p, level)?,
        SequenceValues::Truncated(v) => {
            if let Some(bad) = v.iter().find(|x| x.p() != p) {
                return Err(Error::InvalidPrime(bad.p()));
            }
            pair_count_truncated(v, level)?
        }
    };
    let n_big = BigInt::from(n);
    let value = BigRational::new(BigInt::from(pairs) * BigInt::from(prime_power(p, level as usize)), &n_big * &n_big);
    Ok(PairCorrelation { n, s: s.clone(), level, pairs, value })
}

/// `F` at every `(N, s)`, `N` in schedule order and `s` in list order within each `N`.
pub fn ppc_sweep(
    spec: &SequenceSpec,
    alpha: Alpha,
    s_list: &[ExactRational],
    schedule: &[usize],
) -> Result<Vec<PairCorrelation>> {
    if schedule.is_empty() || s_list.is_empty() {
        return Err(Error::Domain("sweep needs at least one N and one s".into()));
    }
    for s in s_list {
        check_scale(s)?;
    }
    let longest = *schedule.iter().max().expect("nonempty");
    let values = spec.values(longest)?;
    let mut rows = Vec::with_capacity(schedule.len() * s_list.len());
    for &n in schedule {
        let prefix = values.prefix(n);
        for s in s_list {
            rows.push(f_statistic(&prefix, spec.p, alpha, s)?);
        }
    }
    Ok(rows)
}

/// `(N² - N)/N²`, the value at threshold level 0.
pub fn trivial_level_value(n: usize) -> ExactRational {
    let n = BigInt::from(n);
    BigRational::new(&n * &n - &n, &n * &n)
}

impl PairCorrelation {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}
