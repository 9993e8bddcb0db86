//! Value streams `f(1), f(2), ...` and `n*a + b`, indexed from `n = 1`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{check_prime, PAdicApprox};
use crate::poly::IntPolynomial;

/// Exact values `f(1), ..., f(n)`.
pub fn poly_sequence(f: &IntPolynomial, n: usize) -> Vec<BigInt> {
    (1..=n).map(|i| f.eval(&BigInt::from(i))).collect()
}

/// `i*a + b` modulo `p^K` for `i = 1..=n`. `a` and `b` must share prime and precision.
pub fn linear_sequence(a: &PAdicApprox, b: &PAdicApprox, n: usize) -> Result<Vec<PAdicApprox>> {
    // surfaces a prime/precision mismatch even for n = 0
    a.try_eq(b)?;
    (1..=n).map(|i| a.scale(&BigInt::from(i)).try_add(b)).collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceKind {
    Polynomial {
        f: IntPolynomial,
    },
    /// `n*a + b` with p-adic `a`, `b` known to a common precision.
    Linear {
        a: PAdicApprox,
        b: PAdicApprox,
    },
}

/// A sequence in `Z_p` together with its prime.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceSpec {
    pub p: u64,
    #[serde(flatten)]
    pub kind: SequenceKind,
}

/// Generated values: exact integers, or residues known to a fixed precision.
#[derive(Debug, Clone)]
pub enum SequenceValues {
    Exact(Vec<BigInt>),
    Truncated(Vec<PAdicApprox>),
}

impl SequenceValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Exact(v) => v.len(),
            Self::Truncated(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The first `n` values.
    pub fn prefix(&self, n: usize) -> Self {
        match self {
            Self::Exact(v) => Self::Exact(v[..n].to_vec()),
            Self::Truncated(v) => Self::Truncated(v[..n].to_vec()),
        }
    }
}

impl SequenceSpec {
    pub fn polynomial(f: IntPolynomial, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self { p, kind: SequenceKind::Polynomial { f } })
    }

    /// `n*a + b` with integer `a`, `b`; generated exactly as the polynomial `a x + b`.
    pub fn linear_integers(a: BigInt, b: BigInt, p: u64) -> Result<Self> {
        Self::polynomial(IntPolynomial::new(vec![b, a]), p)
    }

    pub fn linear(a: PAdicApprox, b: PAdicApprox) -> Result<Self> {
        a.try_eq(&b)?;
        Ok(Self { p: a.p(), kind: SequenceKind::Linear { a, b } })
    }

    pub fn values(&self, n: usize) -> Result<SequenceValues> {
        match &self.kind {
            SequenceKind::Polynomial { f } => Ok(SequenceValues::Exact(poly_sequence(f, n))),
            SequenceKind::Linear { a, b } => {
                if a.p() != self.p {
                    return Err(Error::InvalidPrime(a.p()));
                }
                Ok(SequenceValues::Truncated(linear_sequence(a, b, n)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    fn approx(x: i64, p: u64, k: usize) -> PAdicApprox {
        PAdicApprox::from_integer(&BigInt::from(x), p, k).unwrap()
    }

    #[test]
    fn polynomial_examples() {
        let f: IntPolynomial = "x^3 + x".parse().unwrap();
        assert_eq!(ints(&poly_sequence(&f, 3)), vec![2, 10, 30]);
        assert_eq!(ints(&poly_sequence(&"x".parse().unwrap(), 4)), vec![1, 2, 3, 4]);
        let g: IntPolynomial = "x^3 - 2x".parse().unwrap();
        assert_eq!(ints(&poly_sequence(&g, 5)), vec![-1, 4, 21, 56, 115]);
    }

    #[test]
    fn linear_examples() {
        let xs = linear_sequence(&approx(1, 3, 4), &approx(0, 3, 4), 3).unwrap();
        let residues: Vec<_> = xs.iter().map(|x| x.residue().to_string()).collect();
        assert_eq!(residues, ["1", "2", "3"]);

        let xs = linear_sequence(&approx(2, 3, 2), &approx(1, 3, 2), 4).unwrap();
        let digits: Vec<_> = xs.iter().map(|x| x.digits().to_vec()).collect();
        assert_eq!(digits, vec![vec![0, 1], vec![2, 1], vec![1, 2], vec![0, 0]]);

        let xs = linear_sequence(&approx(3, 3, 3), &approx(0, 3, 3), 3).unwrap();
        let residues: Vec<_> = xs.iter().map(|x| x.residue().to_string()).collect();
        assert_eq!(residues, ["3", "6", "9"]);
    }

    #[test]
    fn linear_rejects_mixed_precision() {
        let err = linear_sequence(&approx(1, 3, 4), &approx(0, 3, 3), 2);
        assert!(matches!(err, Err(Error::PrecisionMismatch { .. })));
        assert!(SequenceSpec::linear(approx(1, 3, 4), approx(0, 5, 4)).is_err());
    }

    #[test]
    fn spec_generates_prefixes() {
        let spec = SequenceSpec::linear_integers(BigInt::from(2), BigInt::from(1), 3).unwrap();
        let values = spec.values(4).unwrap();
        match values.prefix(2) {
            SequenceValues::Exact(v) => assert_eq!(ints(&v), vec![3, 5]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(SequenceSpec::polynomial(IntPolynomial::zero(), 6).is_err());
    }

    proptest! {
        #[test]
        fn values_are_periodic_mod_prime_powers(
            coeffs in prop::collection::vec(-20i64..20, 1..6),
            pi in 0usize..2,
            k in 1u32..=4,
            n in 1i64..50,
        ) {
            let p = [3i64, 5][pi];
            let f = IntPolynomial::from_coeffs(&coeffs);
            let modulus = BigInt::from(p.pow(k));
            let shifted = f.eval(&BigInt::from(n + p.pow(k)));
            let base = f.eval(&BigInt::from(n));
            prop_assert_eq!((shifted - base) % modulus, BigInt::from(0));
        }
    }
}
