//! Exact p-adic discrepancy, exact real extreme discrepancy, and Meijer's
//! two-sided comparison between them.
//!
//! The p-adic supremum runs over infinitely many ball levels `k`, but a finite
//! point set only has finitely many interesting ones. Past the separation depth
//! every ball holds copies of a single value, so each term `|c/N - p^-k|` is
//! monotone in `k` and the supremum splits into
//!
//! * occupied balls at levels `1..=k_sep + 1`,
//! * the first level with an empty ball (its `p^-k` dominates deeper empty balls),
//! * the tail limit `c*/N`, where `c*` is the largest exact multiplicity.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{check_prime, monna_map, prime_power, ExactRational, PAdicApprox};
use crate::sequence::{SequenceSpec, SequenceValues};

/// Where the supremum is attained (or approached, for the tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The ball `z + p^level Z_p` holding `count` points.
    Ball { level: u32, residue: BigUint, count: usize },
    /// `c*/N`, approached by shrinking balls around a most repeated value.
    Tail { multiplicity: usize },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match self {
            Witness::Ball { level, residue, count } => {
                map.serialize_entry("level", level)?;
                map.serialize_entry("residue", &residue.to_string())?;
                map.serialize_entry("count", count)?;
            }
            Witness::Tail { multiplicity } => {
                map.serialize_entry("level", "tail")?;
                map.serialize_entry("multiplicity", multiplicity)?;
            }
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyResult {
    #[serde(serialize_with = "serialize_fraction")]
    pub value: ExactRational,
    pub witness: Witness,
    pub separation_depth: u32,
}

pub(crate) fn serialize_fraction<S: Serializer>(
    r: &ExactRational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(&format_fraction(r))
}

/// `num/den` in lowest terms (`0/1` and `n/1` included).
pub fn format_fraction(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `1 + max v_p(x_i - x_j)` over pairs of distinct values; `1` when at most one
/// distinct value is present.
///
/// Equivalently, the smallest `k >= 1` at which distinct values have distinct
/// residues mod `p^k`.
pub fn separation_depth(values: &[BigInt], p: u64) -> Result<u32> {
    check_prime(p)?;
    let mut distinct = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut k = 1u32;
    loop {
        let modulus = BigInt::from(prime_power(p, k as usize));
        let mut residues: Vec<BigInt> = distinct.iter().map(|v| v.mod_floor(&modulus)).collect();
        residues.sort_unstable();
        residues.dedup();
        if residues.len() == distinct.len() {
            return Ok(k);
        }
        k += 1;
    }
}

fn digits_le(value: &BigInt, p: u64, modulus: &BigInt, depth: usize) -> Vec<u32> {
    let r = value.mod_floor(modulus).to_biguint().expect("nonnegative residue");
    let mut digits = if p <= 256 {
        r.to_radix_le(p as u32).into_iter().map(u32::from).collect()
    } else {
        let p_big = BigUint::from(p);
        let mut rest = r;
        let mut out = Vec::with_capacity(depth);
        while !rest.is_zero() {
            let (q, d) = rest.div_rem(&p_big);
            out.push(d.to_u32().expect("digit below p"));
            rest = q;
        }
        out
    };
    digits.resize(depth, 0);
    digits
}

fn residue_of(digits: &[u32], p: u64) -> BigUint {
    let p_big = BigUint::from(p);
    digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * &p_big + BigUint::from(d))
}

struct Candidate {
    value: ExactRational,
    witness: Witness,
}

impl Candidate {
    /// Replaces `self` only when `other` is strictly larger, so earlier (smaller
    /// level, smaller residue) witnesses win ties.
    fn offer(best: &mut Option<Candidate>, other: Candidate) {
        if best.as_ref().map_or(true, |b| other.value > b.value) {
            *best = Some(other);
        }
    }
}

/// Shared core: `values` are integers (or residues), `k_sep` their separation depth.
fn discrepancy_core(values: &[BigInt], p: u64, k_sep: u32) -> DiscrepancyResult {
    let n = values.len();
    let depth = k_sep as usize + 1;
    let modulus = BigInt::from(prime_power(p, depth));
    let mut keys: Vec<Vec<u32>> = values.iter().map(|v| digits_le(v, p, &modulus, depth)).collect();
    // little-endian digit prefixes of length k are the residues mod p^k, so one
    // lexicographic sort makes every level's classes contiguous
    keys.sort_unstable();

    let n_big = BigInt::from(n);
    let mut best: Option<Candidate> = None;
    let mut empty_found = false;
    let mut tail_multiplicity = 0usize;

    for k in 1..=depth {
        let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
        let mut start = 0;
        for i in 1..=n {
            if i == n || keys[i][..k] != keys[start][..k] {
                runs.push((start, i - start));
                start = i;
            }
        }
        let measure_den = BigInt::from(prime_power(p, k));
        let term = |c: usize| -> ExactRational {
            // |c/N - p^-k| = |c p^k - N| / (N p^k)
            let num = (BigInt::from(c) * &measure_den - &n_big).abs();
            BigRational::new(num, &n_big * &measure_den)
        };

        // |c/N - p^-k| is convex in c: the extremes over occupied balls sit at
        // the largest and smallest counts.
        let c_max = runs.iter().map(|r| r.1).max().expect("n >= 1");
        let c_min = runs.iter().map(|r| r.1).min().expect("n >= 1");
        let mut level_best: Option<Candidate> = None;
        for c in [c_max, c_min] {
            let value = term(c);
            let residue =
                runs.iter().filter(|r| r.1 == c).map(|r| residue_of(&keys[r.0][..k], p)).min().expect("count occurs");
            let candidate = Candidate { value, witness: Witness::Ball { level: k as u32, residue, count: c } };
            let replace = match &level_best {
                None => true,
                Some(b) => match candidate.value.cmp(&b.value) {
                    Ordering::Greater => true,
                    Ordering::Equal => ball_residue(&candidate.witness) < ball_residue(&b.witness),
                    Ordering::Less => false,
                },
            };
            if replace {
                level_best = Some(candidate);
            }
        }

        if !empty_found && BigUint::from(runs.len()) < prime_power(p, k) {
            empty_found = true;
            let mut occupied: Vec<BigUint> = runs.iter().map(|r| residue_of(&keys[r.0][..k], p)).collect();
            occupied.sort_unstable();
            let mut gap = BigUint::zero();
            for z in &occupied {
                if *z != gap {
                    break;
                }
                gap += 1u32;
            }
            let candidate = Candidate {
                value: BigRational::new(BigInt::one(), measure_den.clone()),
                witness: Witness::Ball { level: k as u32, residue: gap, count: 0 },
            };
            let b = level_best.as_ref().expect("level has occupied balls");
            let replace = match candidate.value.cmp(&b.value) {
                Ordering::Greater => true,
                Ordering::Equal => ball_residue(&candidate.witness) < ball_residue(&b.witness),
                Ordering::Less => false,
            };
            if replace {
                level_best = Some(candidate);
            }
        }

        Candidate::offer(&mut best, level_best.expect("level candidate"));
        if k == depth {
            tail_multiplicity = c_max;
        }
    }

    Candidate::offer(
        &mut best,
        Candidate {
            value: BigRational::new(BigInt::from(tail_multiplicity), n_big.clone()),
            witness: Witness::Tail { multiplicity: tail_multiplicity },
        },
    );

    let best = best.expect("at least one level");
    let lower = BigRational::new(BigInt::one(), n_big);
    assert!(best.value >= lower && best.value <= BigRational::one(), "discrepancy {} outside [1/N, 1]", best.value);
    DiscrepancyResult { value: best.value, witness: best.witness, separation_depth: k_sep }
}

fn ball_residue(w: &Witness) -> Option<&BigUint> {
    match w {
        Witness::Ball { residue, .. } => Some(residue),
        Witness::Tail { .. } => None,
    }
}

/// Exact p-adic discrepancy `D_N` of the integers `values` (`N = values.len()`).
pub fn padic_discrepancy(values: &[BigInt], p: u64) -> Result<DiscrepancyResult> {
    if values.is_empty() {
        return Err(Error::Domain("discrepancy needs at least one point".into()));
    }
    let k_sep = separation_depth(values, p)?;
    Ok(discrepancy_core(values, p, k_sep))
}

/// Exact discrepancy of finite-precision points.
///
/// The points must already be separated by level `K - 1`; otherwise ball counts
/// at deeper levels are unknown and the call fails.
pub fn padic_discrepancy_truncated(values: &[PAdicApprox], p: u64) -> Result<DiscrepancyResult> {
    check_prime(p)?;
    let first = values.first().ok_or_else(|| Error::Domain("discrepancy needs at least one point".into()))?;
    let precision = first.precision();
    for v in values {
        if v.p() != p || v.precision() != precision {
            return Err(Error::PrecisionMismatch { p1: p, k1: precision, p2: v.p(), k2: v.precision() });
        }
    }
    let residues: Vec<BigInt> = values.iter().map(PAdicApprox::residue_int).collect();
    let k_sep = separation_depth(&residues, p)?;
    if k_sep as usize > precision - 1 {
        return Err(Error::InsufficientPrecision { precision, needed: k_sep as usize + 1 });
    }
    Ok(discrepancy_core(&residues, p, k_sep))
}

/// Extreme discrepancy `sup_{[a,b)} |#([a,b) ∩ P)/N - (b - a)|` of points in `[0, 1)`.
///
/// With the points sorted as `x_1 <= ... <= x_N` this is
/// `1/N + max_i (i/N - x_i) - min_i (i/N - x_i)`.
pub fn real_extreme_discrepancy(points: &[ExactRational]) -> Result<ExactRational> {
    if points.is_empty() {
        return Err(Error::Domain("discrepancy needs at least one point".into()));
    }
    let one = BigRational::one();
    if let Some(bad) = points.iter().find(|x| x.is_negative() || **x >= one) {
        return Err(Error::OutOfUnitInterval(format_fraction(bad)));
    }
    // Work over a common denominator so the sort and the extremes are integer ops.
    let common = points.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut scaled: Vec<BigInt> = points.iter().map(|x| x.numer() * (&common / x.denom())).collect();
    scaled.sort_unstable();
    let n = BigInt::from(points.len());
    let mut hi: Option<BigInt> = None;
    let mut lo: Option<BigInt> = None;
    for (i, u) in scaled.iter().enumerate() {
        // N*L*(i/N - x_i) = i*L - N*u_i
        let t = BigInt::from(i + 1) * &common - &n * u;
        if hi.as_ref().map_or(true, |h| &t > h) {
            hi = Some(t.clone());
        }
        if lo.as_ref().map_or(true, |l| &t < l) {
            lo = Some(t);
        }
    }
    let numer = &common + hi.expect("nonempty") - lo.expect("nonempty");
    Ok(BigRational::new(numer, n * common))
}

/// Outcome of one side of a bound check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Fails,
    /// Within the floating-point tolerance of equality.
    Indeterminate,
}

impl BoundStatus {
    fn and(self, other: Self) -> Self {
        match (self, other) {
            (Self::Fails, _) | (_, Self::Fails) => Self::Fails,
            (Self::Holds, Self::Holds) => Self::Holds,
            _ => Self::Indeterminate,
        }
    }
}

/// Tolerance for comparing `d_N` with the transcendental upper bound.
pub const MEIJER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeijerCheck {
    /// `delta < d`, decided exactly.
    pub lower: BoundStatus,
    /// `d < upper_bound`, decided in floating point with [`MEIJER_TOLERANCE`].
    pub upper: BoundStatus,
    pub upper_bound: f64,
    pub holds: BoundStatus,
}

/// Natural log of a positive big integer without overflowing `f64`.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(r: &ExactRational) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

/// Checks `delta < d < delta * (2 + 2(p-1)/ln p * ln(1/delta))`.
pub fn meijer_bound_check(delta: &ExactRational, d: &ExactRational, p: u64) -> Result<MeijerCheck> {
    check_prime(p)?;
    let one = BigRational::one();
    for (name, x) in [("delta", delta), ("d", d)] {
        if !x.is_positive() || *x > one {
            return Err(Error::Domain(format!("{name} = {} must lie in (0, 1]", format_fraction(x))));
        }
    }
    let lower = if delta < d { BoundStatus::Holds } else { BoundStatus::Fails };

    let ln_delta = ln_rational(delta);
    let pf = p as f64;
    let upper_bound = ln_delta.exp() * (2.0 + 2.0 * (pf - 1.0) / pf.ln() * (-ln_delta));
    let d_f = ln_rational(d).exp();
    let gap = upper_bound - d_f;
    let upper = if gap.abs() <= MEIJER_TOLERANCE {
        BoundStatus::Indeterminate
    } else if gap > 0.0 {
        BoundStatus::Holds
    } else {
        BoundStatus::Fails
    };
    Ok(MeijerCheck { lower, upper, upper_bound, holds: lower.and(upper) })
}

/// `D_N` for every `N` of `schedule`, in schedule order.
pub fn discrepancy_sweep(spec: &SequenceSpec, schedule: &[usize]) -> Result<Vec<(usize, DiscrepancyResult)>> {
    let longest = schedule.iter().copied().max().unwrap_or(0);
    let values = spec.values(longest)?;
    schedule
        .iter()
        .map(|&n| {
            let result = match values.prefix(n) {
                SequenceValues::Exact(v) => padic_discrepancy(&v, spec.p)?,
                SequenceValues::Truncated(v) => padic_discrepancy_truncated(&v, spec.p)?,
            };
            Ok((n, result))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeRow {
    pub n: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub delta: ExactRational,
    #[serde(serialize_with = "serialize_fraction")]
    pub d: ExactRational,
    pub check: MeijerCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeReport {
    /// Digits kept for the Monna images.
    pub precision: usize,
    pub rows: Vec<BridgeRow>,
}

/// p-adic discrepancy `δ_N`, real discrepancy `d_N` of the Monna images, and the
/// two-sided comparison, for each `N` in `schedule`.
///
/// Without an explicit precision the images use enough digits to be exact for
/// nonnegative integer values (and at least the separation depth plus one);
/// negative values have infinite expansions and need `precision`.
pub fn bridge(spec: &SequenceSpec, schedule: &[usize], precision: Option<usize>) -> Result<BridgeReport> {
    let longest = schedule.iter().copied().max().unwrap_or(0);
    let p = spec.p;
    let values = spec.values(longest)?;
    let (precision, images): (usize, Vec<ExactRational>) = match &values {
        SequenceValues::Exact(v) => {
            let k = match precision {
                Some(0) => return Err(Error::ZeroPrecision),
                Some(k) => k,
                None => {
                    if v.iter().any(Signed::is_negative) {
                        return Err(Error::Domain(
                            "negative values have infinite p-adic expansions; give a precision K".into(),
                        ));
                    }
                    let digits = v.iter().map(|x| digit_count(x, p)).max().unwrap_or(1);
                    digits.max(separation_depth(v, p)? as usize + 1)
                }
            };
            let images =
                v.iter().map(|x| PAdicApprox::from_integer(x, p, k).map(|a| monna_map(&a))).collect::<Result<_>>()?;
            (k, images)
        }
        SequenceValues::Truncated(v) => {
            let k = v.first().map_or(1, PAdicApprox::precision);
            if precision.is_some_and(|given| given != k) {
                return Err(Error::Domain("precision is fixed by the p-adic parameters".into()));
            }
            (k, v.iter().map(monna_map).collect())
        }
    };
    let mut rows = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let delta = match values.prefix(n) {
            SequenceValues::Exact(v) => padic_discrepancy(&v, p)?.value,
            SequenceValues::Truncated(v) => padic_discrepancy_truncated(&v, p)?.value,
        };
        let d = real_extreme_discrepancy(&images[..n])?;
        let check = meijer_bound_check(&delta, &d, p)?;
        rows.push(BridgeRow { n, delta, d, check });
    }
    Ok(BridgeReport { precision, rows })
}

/// Number of base-`p` digits of `|x|` (one for zero).
pub fn digit_count(x: &BigInt, p: u64) -> usize {
    let p_big = BigInt::from(p);
    let mut rest = x.abs();
    let mut count = 1;
    while rest >= p_big {
        rest /= &p_big;
        count += 1;
    }
    count
}
