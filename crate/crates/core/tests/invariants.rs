//! Cross-module invariants on random polynomials.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

use padic_lds::discrepancy::{padic_discrepancy, real_extreme_discrepancy};
use padic_lds::padic::{digits_of, monna_map};
use padic_lds::paircorr::{f_statistic, Alpha};
use padic_lds::permcheck::classify_low_discrepancy;
use padic_lds::sequence::{poly_sequence, SequenceValues};
use padic_lds::IntPolynomial;

fn cubic() -> impl Strategy<Value = (u64, IntPolynomial)> {
    prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| {
        let m = (p * p) as i64;
        (Just(p), prop::collection::vec(0..m, 4)).prop_map(|(p, c)| (p, IntPolynomial::from_coeffs(&c)))
    })
}

/// `x + p*g(x)` is the identity mod `p` with unit derivative, so always qualifies.
fn identity_lift() -> impl Strategy<Value = (u64, IntPolynomial)> {
    cubic().prop_map(|(p, g)| {
        let lifted = &IntPolynomial::from_coeffs(&[0, 1]) + &(&IntPolynomial::from_coeffs(&[p as i64]) * &g);
        (p, lifted)
    })
}

fn distinct_mod(values: &[BigInt], m: u64) -> bool {
    let residues: HashSet<BigInt> = values.iter().map(|v| v.mod_floor(&BigInt::from(m))).collect();
    residues.len() == values.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // The verdict is exactly "the first p^2 terms are distinct mod p^2", and a
    // qualifying sequence then has discrepancy p^-k at N = p^k.
    #[test]
    fn classifier_matches_block_structure((p, f) in cubic()) {
        let verdict = classify_low_discrepancy(&f, p).unwrap();
        let values = poly_sequence(&f, (p * p * p) as usize);
        prop_assert_eq!(verdict.low_discrepancy, distinct_mod(&values[..(p * p) as usize], p * p));
        if verdict.low_discrepancy {
            for k in 1..=3u32 {
                let n = p.pow(k) as usize;
                prop_assert!(distinct_mod(&values[..n], p.pow(k)));
                let d = padic_discrepancy(&values[..n], p).unwrap().value;
                prop_assert_eq!(d, BigRational::new(1.into(), BigInt::from(n)));
            }
        }
    }

    // Truncated Monna images of a permutation of Z/p^kZ are {j/p^k}.
    #[test]
    fn monna_images_of_low_discrepancy_blocks((p, f) in identity_lift()) {
        prop_assert!(classify_low_discrepancy(&f, p).unwrap().low_discrepancy);
        let n = (p * p) as usize;
        let points: Vec<_> = poly_sequence(&f, n)
            .iter()
            .map(|v| monna_map(&digits_of(v, p, 2).unwrap()))
            .collect();
        let d = real_extreme_discrepancy(&points).unwrap();
        prop_assert_eq!(d, BigRational::new(1.into(), BigInt::from(n)));
    }

    // Pair counts only see differences, so a constant shift changes nothing.
    #[test]
    fn pair_correlation_is_translation_invariant((p, f) in cubic(), shift in -50i64..50, len in 1usize..60) {
        let shifted = &f + &IntPolynomial::from_coeffs(&[shift]);
        let s = BigRational::new(2.into(), 1.into());
        let a = f_statistic(&SequenceValues::Exact(poly_sequence(&f, len)), p, Alpha::one(), &s).unwrap();
        let b = f_statistic(&SequenceValues::Exact(poly_sequence(&shifted, len)), p, Alpha::one(), &s).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.pairs, b.pairs);
    }
}
