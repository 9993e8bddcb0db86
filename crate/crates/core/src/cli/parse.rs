//! Flag value parsers shared by the subcommands.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::padic::{check_prime, prime_power};

pub(crate) fn prime(text: &str) -> Result<u64, String> {
    let p: u64 = text.trim().parse().map_err(|_| format!("{text:?} is not a positive integer"))?;
    check_prime(p).map_err(|e| e.to_string())?;
    Ok(p)
}

pub(crate) fn bigint(text: &str) -> Result<BigInt, String> {
    text.trim().parse().map_err(|_| format!("{text:?} is not an integer"))
}

pub(crate) fn rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (bigint(n)?, bigint(d)?),
        None => (bigint(text)?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return Err(format!("{text:?} has a zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn count(text: &str) -> Result<usize, String> {
    let n: usize = text.trim().parse().map_err(|_| format!("{text:?} is not a nonnegative integer"))?;
    Ok(n)
}

fn range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("{text:?} is not a range a..b"))?;
    let (a, b) = (count(a)?, count(b)?);
    if a > b {
        return Err(format!("empty range {text:?}"));
    }
    Ok((a, b))
}

/// Comma-separated items, each `n`, an inclusive range `a..b`, or the powers
/// `pk:k1..k2` (also `pk:k`) of the working prime.
pub(crate) fn schedule(text: &str, p: u64) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if let Some(exponents) = item.strip_prefix("pk:") {
            let (k1, k2) =
                if exponents.contains("..") { range(exponents)? } else { (count(exponents)?, count(exponents)?) };
            for k in k1..=k2 {
                let n = usize::try_from(prime_power(p, k))
                    .map_err(|_| format!("{p}^{k} is too large for a sequence length"))?;
                out.push(n);
            }
        } else if item.contains("..") {
            let (a, b) = range(item)?;
            out.extend(a..=b);
        } else {
            out.push(count(item)?);
        }
    }
    if out.is_empty() {
        return Err("empty N schedule".into());
    }
    if out.contains(&0) {
        return Err("N must be at least 1".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(schedule("1..4", 3).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(schedule("5,2, 9", 3).unwrap(), vec![5, 2, 9]);
        assert_eq!(schedule("pk:1..3", 3).unwrap(), vec![3, 9, 27]);
        assert_eq!(schedule("pk:2", 5).unwrap(), vec![25]);
        assert_eq!(schedule("1..2,pk:2", 2).unwrap(), vec![1, 2, 4]);
        for bad in ["", "0", "3..1", "a", "pk:x", "1..", "0..3"] {
            assert!(schedule(bad, 3).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(rational("2/4").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert!(rational("1/0").is_err());
        assert!(rational("x").is_err());
    }

    #[test]
    fn primes() {
        assert_eq!(prime("7").unwrap(), 7);
        assert!(prime("9").is_err());
        assert!(prime("-3").is_err());
    }
}
