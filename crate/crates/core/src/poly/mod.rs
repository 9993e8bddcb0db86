//! Integer polynomials: evaluation modulo `m`, derivatives, affine composition,
//! functional reduction modulo `p` and the associated polynomials `g1`, `g2`.

mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::check_prime;

pub use parse::parse_poly;

/// A polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs()[i]` is the coefficient of `x^i`. Trailing zeros are trimmed, so
/// the zero polynomial has no coefficients at all. Coefficients are never
/// reduced implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds a polynomial from small coefficients in ascending order.
    pub fn from_coeffs<T: Into<BigInt> + Copy>(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| c.into()).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c * x^degree`
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Exact value at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation with every intermediate reduced into `[0, m)`.
    pub fn eval_mod(&self, x: &BigInt, m: &BigUint) -> BigUint {
        assert!(!m.is_zero(), "modulus must be positive");
        let m = BigInt::from_biguint(Sign::Plus, m.clone());
        let x = x.mod_floor(&m);
        let acc = self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| (acc * &x + c).mod_floor(&m));
        acc.to_biguint().expect("reduced value is nonnegative")
    }

    /// Coefficients reduced into `[0, m)` for fast word-sized evaluation.
    pub fn residues(&self, m: u64) -> ResiduePoly {
        ResiduePoly::from_poly(self, m)
    }

    /// Same polynomial with each coefficient reduced into `[0, m)`.
    pub fn reduce_coefficients(&self, m: &BigInt) -> Self {
        assert!(m.is_positive(), "modulus must be positive");
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for IntPolynomial {
    /// Highest degree first, e.g. `x^3 - 2x + 1`; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            if e == 1 {
                write!(f, "x")?;
            } else {
                write!(f, "x^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// A polynomial with coefficients reduced modulo a word-sized `m`.
///
/// This is the hot path for exhaustive enumeration; evaluation uses 128-bit
/// intermediates so any `m < 2^64` is safe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResiduePoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ResiduePoly {
    pub fn from_poly(f: &IntPolynomial, m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let big_m = BigInt::from(m);
        let coeffs = f.coeffs.iter().map(|c| c.mod_floor(&big_m).to_u64().expect("residue below modulus")).collect();
        Self { modulus: m, coeffs }
    }

    /// Coefficients are taken modulo `m`.
    pub fn from_residues(coeffs: &[u64], m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        Self { modulus: m, coeffs: coeffs.iter().map(|c| c % m).collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus as u128;
        let x = x as u128 % m;
        self.coeffs.iter().rev().fold(0u128, |acc, &c| (acc * x + c as u128) % m) as u64
    }

    /// Formal derivative, coefficients reduced modulo the same `m`.
    pub fn derivative(&self) -> Self {
        let m = self.modulus as u128;
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| ((k as u128 % m) * c as u128 % m) as u64).collect();
        Self { modulus: self.modulus, coeffs }
    }

    pub fn to_int_poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// `f(x) mod m`, in `[0, m)`.
pub fn eval_mod(f: &IntPolynomial, x: &BigInt, m: &BigUint) -> BigUint {
    f.eval_mod(x, m)
}

pub fn derivative(f: &IntPolynomial) -> IntPolynomial {
    f.derivative()
}

fn is_unit_mod(a: &BigInt, m: &BigInt) -> bool {
    a.gcd(m).is_one()
}

/// `a * f(c*x + d) + b` with coefficients reduced into `[0, m)`.
///
/// `outer = (a, b)` and `inner = (c, d)` must have unit multipliers modulo `m`.
pub fn affine_compose(
    f: &IntPolynomial,
    outer: (&BigInt, &BigInt),
    inner: (&BigInt, &BigInt),
    m: &BigInt,
) -> Result<IntPolynomial> {
    if !m.is_positive() {
        return Err(Error::Domain(format!("modulus {m} must be positive")));
    }
    let (a, b) = outer;
    let (c, d) = inner;
    for unit in [a, c] {
        if !is_unit_mod(unit, m) {
            return Err(Error::NotAffineEquivalence(unit.to_string(), m.to_string()));
        }
    }
    let linear = IntPolynomial::new(vec![d.clone(), c.clone()]);
    let composed = f.compose(&linear).scale(a);
    Ok((&composed + &IntPolynomial::constant(b.clone())).reduce_coefficients(m))
}

/// The polynomial of degree below `p`, coefficients in `[0, p)`, inducing the
/// same function on `Z/pZ` as `f`.
pub fn reduce_functional(f: &IntPolynomial, p: u64) -> Result<IntPolynomial> {
    check_prime(p)?;
    let p_big = BigInt::from(p);
    let mut out = vec![BigInt::zero(); p as usize];
    for (e, c) in f.coeffs.iter().enumerate() {
        // x^p = x as functions, so x^e = x^{e-(p-1)} while e >= p.
        let target = if e == 0 { 0 } else { 1 + (e - 1) % (p as usize - 1) };
        out[target] += c;
    }
    Ok(IntPolynomial::new(out).reduce_coefficients(&p_big))
}

fn check_associated_prime(p: u64) -> Result<()> {
    check_prime(p)?;
    if p < 3 {
        return Err(Error::Domain("associated polynomials need p >= 3".into()));
    }
    Ok(())
}

/// `g1(x) = sum_{k=0}^{p-2} (sum_j a_{k + j(p-1)}) x^k`, coefficients mod `p`.
///
/// This folds exponents with `x^{p-1} = 1`, which is wrong at `x = 0`:
/// `g1` agrees with `f` only on units.
pub fn associated_g1(f: &IntPolynomial, p: u64) -> Result<IntPolynomial> {
    check_associated_prime(p)?;
    let period = p as usize - 1;
    let mut out = vec![BigInt::zero(); period];
    for (e, c) in f.coeffs.iter().enumerate() {
        out[e % period] += c;
    }
    Ok(IntPolynomial::new(out).reduce_coefficients(&BigInt::from(p)))
}

/// `g2(x) = sum_{k=0}^{p-2} (sum_j (k+1-j) a_{k+1+j(p-1)}) x^k`, coefficients mod `p`.
///
/// Terms whose multiplier `k+1-j` vanishes mod `p` are skipped. `g2` agrees
/// with `f'` on units only.
pub fn associated_g2(f: &IntPolynomial, p: u64) -> Result<IntPolynomial> {
    check_associated_prime(p)?;
    let period = p as usize - 1;
    let p_big = BigInt::from(p);
    let mut out = vec![BigInt::zero(); period];
    for (e, c) in f.coeffs.iter().enumerate().skip(1) {
        let k = (e - 1) % period;
        let j = (e - 1) / period;
        let multiplier = BigInt::from(k as i64 + 1 - j as i64);
        if multiplier.mod_floor(&p_big).is_zero() {
            continue;
        }
        out[k] += multiplier * c;
    }
    Ok(IntPolynomial::new(out).reduce_coefficients(&p_big))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(text: &str) -> IntPolynomial {
        text.parse().unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ubig(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn canonical_form_trims() {
        let f = IntPolynomial::from_coeffs(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert_eq!(IntPolynomial::from_coeffs(&[0, 0]), IntPolynomial::zero());
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn renders_readably() {
        assert_eq!(poly("x^5 + 2*x^3 + x").to_string(), "x^5 + 2x^3 + x");
        assert_eq!(poly("x^3 - 2x").to_string(), "x^3 - 2x");
        assert_eq!(poly("-x^2 - 1").to_string(), "-x^2 - 1");
        assert_eq!(poly("-7").to_string(), "-7");
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(poly("x^3 - 2x").eval_mod(&big(4), &ubig(9)), ubig(2));
        assert_eq!(poly("5x^2 + 3x - 11").eval_mod(&big(0), &ubig(7)), ubig(3));
        assert_eq!(poly("4x^3 + 3").eval_mod(&big(1), &ubig(7)), ubig(0));
        assert_eq!(poly("x").eval_mod(&big(-1), &ubig(5)), ubig(4));
        assert_eq!(poly("x^2 + 1").eval_mod(&big(3), &ubig(1)), ubig(0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(&poly("x^3 + x")), poly("3x^2 + 1"));
        assert_eq!(derivative(&poly("17")), IntPolynomial::zero());
        assert_eq!(derivative(&poly("x^5 + 4x^3 + 4x")), poly("5x^4 + 12x^2 + 4"));
    }

    #[test]
    fn affine_compose_examples() {
        let m5 = big(5);
        let got = affine_compose(&poly("x"), (&big(2), &big(1)), (&big(1), &big(0)), &m5).unwrap();
        assert_eq!(got, poly("2x + 1"));
        let got = affine_compose(&poly("x^2"), (&big(1), &big(0)), (&big(1), &big(1)), &big(7)).unwrap();
        assert_eq!(got, poly("x^2 + 2x + 1"));
        let got = affine_compose(&poly("x^3 - 2x"), (&big(1), &big(0)), (&big(2), &big(0)), &big(3)).unwrap();
        assert_eq!(got, poly("2x^3 + 2x"));
    }

    #[test]
    fn affine_compose_rejects_non_units() {
        let f = poly("x^2");
        let err = affine_compose(&f, (&big(3), &big(0)), (&big(1), &big(0)), &big(9));
        assert!(matches!(err, Err(Error::NotAffineEquivalence(..))));
        let err = affine_compose(&f, (&big(1), &big(0)), (&big(0), &big(1)), &big(5));
        assert!(matches!(err, Err(Error::NotAffineEquivalence(..))));
    }

    #[test]
    fn reduce_functional_examples() {
        assert_eq!(reduce_functional(&poly("x^5"), 3).unwrap(), poly("x"));
        assert_eq!(reduce_functional(&poly("x^3 + x"), 3).unwrap(), poly("2x"));
        assert_eq!(reduce_functional(&poly("x^2 + x"), 3).unwrap(), poly("x^2 + x"));
        assert_eq!(reduce_functional(&poly("-1"), 3).unwrap(), poly("2"));
        assert_eq!(reduce_functional(&poly("x^4"), 3).unwrap(), poly("x^2"));
    }

    #[test]
    fn g1_examples() {
        assert_eq!(associated_g1(&poly("x^5 + x + 1"), 3).unwrap(), poly("2x + 1"));
        assert_eq!(associated_g1(&poly("x^5"), 3).unwrap(), poly("x"));
        assert_eq!(associated_g1(&poly("5"), 7).unwrap(), poly("5"));
        assert!(associated_g1(&poly("x"), 2).is_err());
    }

    #[test]
    fn g2_examples() {
        assert_eq!(associated_g2(&poly("x^5 + x"), 3).unwrap(), IntPolynomial::zero());
        assert_eq!(associated_g2(&poly("x^5"), 3).unwrap(), poly("2"));
        assert_eq!(associated_g2(&poly("x^3 + x"), 3).unwrap(), poly("1"));
    }

    #[test]
    fn g2_matches_the_p3_closed_form() {
        // (a1 + 2a5 + a7 + 2a11) + (2a2 + a4 + 2a8 + a10) x, coefficients mod 3
        let mut coeffs = vec![0i64; 12];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = (i as i64 * 7 + 3) % 5;
        }
        let a = |i: usize| coeffs[i];
        let c0 = (a(1) + 2 * a(5) + a(7) + 2 * a(11)).rem_euclid(3);
        let c1 = (2 * a(2) + a(4) + 2 * a(8) + a(10)).rem_euclid(3);
        let f = IntPolynomial::from_coeffs(&coeffs);
        assert_eq!(associated_g2(&f, 3).unwrap(), IntPolynomial::from_coeffs(&[c0, c1]));
    }

    #[test]
    fn residue_poly_matches_big_evaluation() {
        let f = poly("3x^4 - 7x^3 + 11x - 5");
        for m in [1u64, 2, 9, 25, 1_000_003] {
            let r = f.residues(m);
            for x in 0..50u64 {
                assert_eq!(BigUint::from(r.eval(x)), f.eval_mod(&BigInt::from(x), &ubig(m)));
            }
            assert_eq!(r.derivative().to_int_poly(), f.derivative().reduce_coefficients(&big(m as i64)));
        }
    }

    fn arb_poly(max_degree: usize) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-50i64..50, 0..=max_degree + 1).prop_map(|c| IntPolynomial::from_coeffs(&c))
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(f in arb_poly(12)) {
            prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn reduce_functional_agrees_pointwise(f in arb_poly(25), pi in 0usize..4) {
            let p = [3u64, 5, 7, 11][pi];
            let r = reduce_functional(&f, p).unwrap();
            prop_assert!(r.degree().map_or(true, |d| d < p as usize));
            for x in 0..p {
                let x = BigInt::from(x);
                prop_assert_eq!(r.eval_mod(&x, &ubig(p)), f.eval_mod(&x, &ubig(p)));
            }
        }

        #[test]
        fn associated_polynomials_agree_off_zero(f in arb_poly(25), pi in 0usize..4) {
            let p = [3u64, 5, 7, 11][pi];
            let g1 = associated_g1(&f, p).unwrap();
            let g2 = associated_g2(&f, p).unwrap();
            let df = f.derivative();
            for x in 1..p {
                let x = BigInt::from(x);
                prop_assert_eq!(g1.eval_mod(&x, &ubig(p)), f.eval_mod(&x, &ubig(p)));
                prop_assert_eq!(g2.eval_mod(&x, &ubig(p)), df.eval_mod(&x, &ubig(p)));
            }
        }

        #[test]
        fn derivative_is_linear(f in arb_poly(10), g in arb_poly(10)) {
            prop_assert_eq!((&f + &g).derivative(), &f.derivative() + &g.derivative());
        }
    }
}
