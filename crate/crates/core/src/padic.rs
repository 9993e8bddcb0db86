//! Finite-precision p-adic integers, valuations, ball geometry and the Monna map.
//!
//! Everything here is exact: rationals are compared by cross-multiplying
//! integers and no floating point is involved.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision fraction in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Primes below this bound are verified by trial division; larger ones are trusted.
pub const PRIMALITY_CHECK_LIMIT: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Rejects `p < 2` and composite `p` below [`PRIMALITY_CHECK_LIMIT`].
pub fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (p < PRIMALITY_CHECK_LIMIT && !is_prime(p)) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// `p^k` as a big unsigned integer.
pub fn prime_power(p: u64, k: usize) -> BigUint {
    num_traits::pow(BigUint::from(p), k)
}

/// `p^{-k}` as an exact rational.
pub fn inverse_prime_power(p: u64, k: usize) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::from(prime_power(p, k)))
}

/// Largest `m` with `p^m | x`.
pub fn valuation(x: &BigInt, p: u64) -> Result<u32> {
    check_prime(p)?;
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let p_big = BigInt::from(p);
    let mut m = 0u32;
    let mut rest = x.abs();
    loop {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            return Ok(m);
        }
        rest = q;
        m += 1;
    }
}

/// The p-adic absolute value `p^{-v_p(x)}`, with `|0|_p = 0`.
pub fn abs_p(x: &BigInt, p: u64) -> Result<ExactRational> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(ExactRational::zero());
    }
    let v = valuation(x, p)?;
    Ok(inverse_prime_power(p, v as usize))
}

/// Smallest `k >= 0` with `p^{-k} <= r`.
///
/// The closed ball `{x : |x|_p <= r}` is then `p^k Z_p`, of Haar measure `p^{-k}`.
/// Radii of at least 1 give the whole ring (`k = 0`).
pub fn ball_level(r: &ExactRational, p: u64) -> Result<u32> {
    check_prime(p)?;
    if !r.is_positive() {
        return Err(Error::DegenerateBall);
    }
    // p^{-k} <= num/den  <=>  den <= num * p^k
    let num = r.numer();
    let den = r.denom();
    let p_big = BigInt::from(p);
    let mut scaled = num.clone();
    let mut k = 0u32;
    while &scaled < den {
        scaled *= &p_big;
        k += 1;
    }
    Ok(k)
}

/// Base-`p` expansion of `x mod p^k`, little-endian.
///
/// Negative inputs are reduced into `[0, p^k)` first, which is the truncation
/// of their (infinite) p-adic expansion.
pub fn digits_of(x: &BigInt, p: u64, k: usize) -> Result<PAdicApprox> {
    PAdicApprox::from_integer(x, p, k)
}

/// The Monna map: `sum_i digits[i] * p^{-i-1}`, an exact rational in `[0, 1)`.
pub fn monna_map(x: &PAdicApprox) -> ExactRational {
    let p = BigInt::from(x.p);
    let mut numer = BigInt::zero();
    for &d in &x.digits {
        numer = numer * &p + BigInt::from(d);
    }
    BigRational::new(numer, BigInt::from(prime_power(x.p, x.digits.len())))
}

/// An element of `Z_p` known modulo `p^K`, stored as `K` base-`p` digits.
#[derive(Debug, Clone, Hash, Serialize)]
pub struct PAdicApprox {
    p: u64,
    digits: Vec<u64>,
}

impl PAdicApprox {
    pub fn new(p: u64, digits: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if digits.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidDigit { digit, p });
        }
        Ok(Self { p, digits })
    }

    pub fn from_integer(x: &BigInt, p: u64, precision: usize) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = BigInt::from(prime_power(p, precision));
        let mut rest = x.mod_floor(&modulus);
        let p_big = BigInt::from(p);
        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            let (q, r) = rest.div_rem(&p_big);
            digits.push(r.to_u64().expect("digit below p"));
            rest = q;
        }
        Ok(Self { p, digits })
    }

    pub fn zero(p: u64, precision: usize) -> Result<Self> {
        Self::from_integer(&BigInt::zero(), p, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of known digits `K`.
    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn modulus(&self) -> BigUint {
        prime_power(self.p, self.digits.len())
    }

    /// The represented residue in `[0, p^K)`.
    pub fn residue(&self) -> BigUint {
        let p = BigUint::from(self.p);
        self.digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
    }

    pub fn residue_int(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.residue())
    }

    /// The approximation is a unit iff its lowest digit is nonzero.
    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.digits.len() != other.digits.len() {
            return Err(Error::PrecisionMismatch {
                p1: self.p,
                k1: self.digits.len(),
                p2: other.p,
                k2: other.digits.len(),
            });
        }
        Ok(())
    }

    /// Equality of two approximations; comparing across primes or precisions is an error.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.digits == other.digits)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let sum = self.residue_int() + other.residue_int();
        Self::from_integer(&sum, self.p, self.precision())
    }

    /// `n * self` modulo `p^K`.
    pub fn scale(&self, n: &BigInt) -> Self {
        Self::from_integer(&(self.residue_int() * n), self.p, self.precision())
            .expect("prime and precision already validated")
    }

    /// The first `k` digits, i.e. the residue modulo `p^k`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroPrecision);
        }
        if k > self.precision() {
            return Err(Error::InsufficientPrecision { precision: self.precision(), needed: k });
        }
        Ok(Self { p: self.p, digits: self.digits[..k].to_vec() })
    }
}

impl fmt::Display for PAdicApprox {
    /// Digits most significant first, e.g. `...0121_3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "...")?;
        for d in self.digits.iter().rev() {
            if self.p <= 10 {
                write!(f, "{d}")?;
            } else {
                write!(f, "[{d}]")?;
            }
        }
        write!(f, "_{}", self.p)
    }
}
