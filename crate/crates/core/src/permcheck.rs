//! Permutation-polynomial decisions and the low-discrepancy classifier.
//!
//! `(f(n))` is low-discrepancy in `Z_p` iff `f` permutes `Z/pZ` and `Z/p^2Z`.
//! The authoritative route enumerates both rings. The Nöbauer route (permutation
//! mod `p` plus a root-free derivative mod `p`) supplies a readable certificate
//! and is used as an internal cross-check. The associated-polynomial route is
//! reported alongside but never trusted.

use std::ops::Range;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::check_prime;
use crate::poly::{associated_g1, associated_g2, IntPolynomial, ResiduePoly};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;
pub const DEFAULT_SCAN_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BruteForce,
    Noebauer,
    AssociatedFormula,
}

/// A residue modulo `p^level` that `f` never attains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MissingResidue {
    pub level: u32,
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub p: u64,
    pub low_discrepancy: bool,
    pub perm_mod_p: bool,
    pub perm_mod_p2: bool,
    /// Smallest root of `f'` mod `p` (of `g2` for the associated formula).
    pub derivative_root: Option<u64>,
    pub missing_residue: Option<MissingResidue>,
    pub method: Method,
}

/// Smallest residue in `[0, m)` not attained by `f`, or `None` for a permutation.
pub fn first_missing_residue(f: &ResiduePoly) -> Option<u64> {
    let m = f.modulus();
    let mut hit = vec![false; m as usize];
    for x in 0..m {
        hit[f.eval(x) as usize] = true;
    }
    hit.iter().position(|&h| !h).map(|r| r as u64)
}

/// First pair `x < y` (in lexicographic order) with `f(x) = f(y)` mod `m`.
pub fn first_collision(f: &ResiduePoly) -> Option<(u64, u64)> {
    let m = f.modulus();
    let mut seen: Vec<Option<u64>> = vec![None; m as usize];
    let mut best: Option<(u64, u64)> = None;
    for y in 0..m {
        let v = f.eval(y) as usize;
        match seen[v] {
            Some(x) => {
                if best.map_or(true, |(bx, _)| x < bx) {
                    best = Some((x, y));
                }
            }
            None => seen[v] = Some(y),
        }
    }
    best
}

/// Smallest root of `f` in `[0, m)`.
pub fn smallest_root(f: &ResiduePoly) -> Option<u64> {
    (0..f.modulus()).find(|&x| f.eval(x) == 0)
}

fn check_cap(m: u64, cap: u64) -> Result<()> {
    if m > cap {
        return Err(Error::EnumerationTooLarge { size: m.to_string(), cap });
    }
    Ok(())
}

fn square_checked(p: u64) -> Result<u64> {
    p.checked_mul(p).ok_or_else(|| Error::EnumerationTooLarge { size: format!("{p}^2"), cap: u64::MAX })
}

/// Whether `f` is a bijection on `Z/mZ`, by exhaustive evaluation.
pub fn is_permutation_mod(f: &IntPolynomial, m: u64) -> Result<bool> {
    is_permutation_mod_capped(f, m, DEFAULT_ENUMERATION_CAP)
}

pub fn is_permutation_mod_capped(f: &IntPolynomial, m: u64, cap: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    check_cap(m, cap)?;
    Ok(first_missing_residue(&f.residues(m)).is_none())
}

/// Nöbauer's criterion: a permutation mod `p^2` iff a permutation mod `p`
/// whose derivative has no root mod `p`.
pub fn noebauer_mod_p2(f: &IntPolynomial, p: u64) -> Result<Verdict> {
    check_prime(p)?;
    check_cap(p, DEFAULT_ENUMERATION_CAP)?;
    let f_p = f.residues(p);
    let missing = first_missing_residue(&f_p);
    let root = smallest_root(&f_p.derivative());
    let perm_mod_p = missing.is_none();
    let perm_mod_p2 = perm_mod_p && root.is_none();
    Ok(Verdict {
        p,
        low_discrepancy: perm_mod_p2,
        perm_mod_p,
        perm_mod_p2,
        derivative_root: root,
        missing_residue: missing.map(|residue| MissingResidue { level: 1, residue }),
        method: Method::Noebauer,
    })
}

/// Ground-truth classification by enumerating `Z/pZ` and `Z/p^2Z`.
///
/// The result is cross-checked against [`noebauer_mod_p2`]; a disagreement is
/// reported as [`Error::CrossCheck`].
pub fn classify_low_discrepancy(f: &IntPolynomial, p: u64) -> Result<Verdict> {
    classify_low_discrepancy_capped(f, p, DEFAULT_ENUMERATION_CAP)
}

pub fn classify_low_discrepancy_capped(f: &IntPolynomial, p: u64, cap: u64) -> Result<Verdict> {
    check_prime(p)?;
    let p2 = square_checked(p)?;
    check_cap(p2, cap)?;
    let f_p = f.residues(p);
    let missing_p = first_missing_residue(&f_p);
    let missing_p2 = first_missing_residue(&f.residues(p2));
    let perm_mod_p = missing_p.is_none();
    let perm_mod_p2 = missing_p2.is_none();
    let missing_residue = match (missing_p, missing_p2) {
        (Some(residue), _) => Some(MissingResidue { level: 1, residue }),
        (None, Some(residue)) => Some(MissingResidue { level: 2, residue }),
        (None, None) => None,
    };
    let verdict = Verdict {
        p,
        low_discrepancy: perm_mod_p && perm_mod_p2,
        perm_mod_p,
        perm_mod_p2,
        derivative_root: smallest_root(&f_p.derivative()),
        missing_residue,
        method: Method::BruteForce,
    };
    let certificate = noebauer_mod_p2(f, p)?;
    if certificate.perm_mod_p != verdict.perm_mod_p || certificate.perm_mod_p2 != verdict.perm_mod_p2 {
        return Err(Error::CrossCheck(format!("enumeration and Nöbauer criterion disagree for {f} at p={p}")));
    }
    Ok(verdict)
}

/// Verdict read off the associated polynomials alone: `g1` must permute
/// `Z/pZ` and `g2` must have no root mod `p`.
pub fn classify_via_associated(f: &IntPolynomial, p: u64) -> Result<Verdict> {
    check_cap(p, DEFAULT_ENUMERATION_CAP)?;
    let g1 = associated_g1(f, p)?.residues(p);
    let g2 = associated_g2(f, p)?.residues(p);
    let missing = first_missing_residue(&g1);
    let root = smallest_root(&g2);
    let perm_mod_p = missing.is_none();
    let perm_mod_p2 = perm_mod_p && root.is_none();
    Ok(Verdict {
        p,
        low_discrepancy: perm_mod_p2,
        perm_mod_p,
        perm_mod_p2,
        derivative_root: root,
        missing_residue: missing.map(|residue| MissingResidue { level: 1, residue }),
        method: Method::AssociatedFormula,
    })
}

/// Two inputs with equal images modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub modulus: u64,
    pub x: u64,
    pub y: u64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceEntry {
    pub polynomial: IntPolynomial,
    pub g1: IntPolynomial,
    pub g2: IntPolynomial,
    pub ground_truth: Verdict,
    pub associated: Verdict,
    /// Witness that the ground-truth verdict is negative, when it is.
    pub collision: Option<Collision>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub p: u64,
    pub max_degree: usize,
    /// Distinct coefficient residues enumerated, ascending.
    pub residues: Vec<u64>,
    pub scanned: u64,
    pub divergences: Vec<DivergenceEntry>,
}

/// Options for [`divergence_scan`].
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub workers: usize,
    pub cap: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { workers: 1, cap: DEFAULT_SCAN_CAP }
    }
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))
}

/// Lists every polynomial of degree at most `max_degree`, coefficients drawn
/// from `coefficient_range` (taken mod `p`), on which the associated-polynomial
/// verdict differs from the enumeration verdict.
///
/// Candidates are visited in lexicographic order of `(a_d, ..., a_1, a_0)`; the
/// report keeps that order for any worker count.
pub fn divergence_scan(
    p: u64,
    max_degree: usize,
    coefficient_range: Range<i64>,
    options: ScanOptions,
) -> Result<DivergenceReport> {
    check_prime(p)?;
    if coefficient_range.is_empty() {
        return Err(Error::Domain("empty coefficient range".into()));
    }
    let mut residues: Vec<u64> = coefficient_range.take(p as usize).map(|c| c.rem_euclid(p as i64) as u64).collect();
    residues.sort_unstable();
    residues.dedup();

    let base = residues.len() as u64;
    let size = u32::try_from(max_degree + 1)
        .ok()
        .and_then(|len| base.checked_pow(len))
        .filter(|&s| s <= options.cap)
        .ok_or_else(|| Error::EnumerationTooLarge {
        size: format!("{base}^{}", max_degree + 1),
        cap: options.cap,
    })?;

    let candidate = |index: u64| -> IntPolynomial {
        let mut coeffs = vec![BigInt::default(); max_degree + 1];
        let mut rest = index;
        for slot in coeffs.iter_mut() {
            *slot = BigInt::from(residues[(rest % base) as usize]);
            rest /= base;
        }
        IntPolynomial::new(coeffs)
    };

    let check = |index: u64| -> Result<Option<DivergenceEntry>> {
        let f = candidate(index);
        let ground_truth = classify_low_discrepancy(&f, p)?;
        let associated = classify_via_associated(&f, p)?;
        if ground_truth.low_discrepancy == associated.low_discrepancy {
            return Ok(None);
        }
        let collision = [p, p * p].into_iter().find_map(|m| {
            let r = f.residues(m);
            first_collision(&r).map(|(x, y)| Collision { modulus: m, x, y, value: r.eval(x) })
        });
        Ok(Some(DivergenceEntry {
            g1: associated_g1(&f, p)?,
            g2: associated_g2(&f, p)?,
            polynomial: f,
            ground_truth,
            associated,
            collision,
        }))
    };

    let found: Vec<Option<DivergenceEntry>> =
        thread_pool(options.workers)?.install(|| (0..size).into_par_iter().map(check).collect::<Result<Vec<_>>>())?;

    Ok(DivergenceReport { p, max_degree, residues, scanned: size, divergences: found.into_iter().flatten().collect() })
}
