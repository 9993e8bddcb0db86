//! Dickson's normalized permutation polynomials of degree at most 6, the
//! low-discrepancy subset, derivative root data, and exhaustive searches that
//! reproduce the low-discrepancy list from scratch.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::check_prime;
use crate::permcheck::{
    classify_low_discrepancy, first_missing_residue, is_permutation_mod, smallest_root, thread_pool, DEFAULT_SCAN_CAP,
};
use crate::poly::{affine_compose, IntPolynomial, ResiduePoly};

/// Primes on which the `5m ± 2` family is checked when no prime is given.
pub const FAMILY_SAMPLE_PRIMES: [u64; 6] = [2, 3, 7, 13, 17, 23];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum PrimeSpec {
    Fixed(u64),
    /// Every prime `p ≡ ±2 mod 5`.
    FiveMPlusMinusTwo,
}

impl PrimeSpec {
    pub fn admits(self, p: u64) -> bool {
        match self {
            Self::Fixed(q) => q == p,
            Self::FiveMPlusMinusTwo => matches!(p % 5, 2 | 3),
        }
    }

    /// The primes verified by default.
    pub fn default_primes(self) -> Vec<u64> {
        match self {
            Self::Fixed(q) => vec![q],
            Self::FiveMPlusMinusTwo => FAMILY_SAMPLE_PRIMES.to_vec(),
        }
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(q) => write!(f, "{q}"),
            Self::FiveMPlusMinusTwo => f.write_str("5m ± 2"),
        }
    }
}

/// Which values of the parameter `a` (mod `p`) a row admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterPredicate {
    /// The row has no parameter.
    None,
    NonSquare,
    NotFourthPower,
    NonZero,
    /// A nonzero square (`a = 0` would drop the row's middle terms).
    NonzeroSquare,
}

impl ParameterPredicate {
    /// Admissible `a` in `[0, p)`; `[0]` stands in for parameterless rows.
    pub fn admissible(self, p: u64) -> Vec<u64> {
        let powers = |e: u32| -> Vec<bool> {
            let mut hit = vec![false; p as usize];
            for y in 1..p {
                let v = (1..=e).fold(1u128, |acc, _| acc * y as u128 % p as u128);
                hit[v as usize] = true;
            }
            hit
        };
        match self {
            Self::None => vec![0],
            Self::NonZero => (1..p).collect(),
            Self::NonSquare => {
                let sq = powers(2);
                (1..p).filter(|&a| !sq[a as usize]).collect()
            }
            Self::NonzeroSquare => {
                let sq = powers(2);
                (1..p).filter(|&a| sq[a as usize]).collect()
            }
            Self::NotFourthPower => {
                let fourth = powers(4);
                (1..p).filter(|&a| !fourth[a as usize]).collect()
            }
        }
    }
}

/// How an entry's signs relate to the ± signs printed in its row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignReading {
    Unsigned,
    /// The row has one ±; each choice is its own entry.
    Single,
    /// Two ± chosen together, `(+,+)` or `(-,-)`.
    Coupled,
    /// Two ± chosen independently with opposite signs.
    Mixed,
}

/// `coeff / den · a^a_power · x^degree`; `den` is inverted mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub degree: usize,
    pub coeff: i64,
    pub den: u64,
    pub a_power: u32,
}

const fn term(degree: usize, coeff: i64, a_power: u32) -> Term {
    Term { degree, coeff, den: 1, a_power }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "roots")]
pub enum ExpectedRoots {
    /// Exactly this root set for every admissible `a` (empty: no root).
    Exact(Vec<u64>),
    /// Some root exists for every admissible `a`, depending on `a`.
    ExistsForAll,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DicksonEntry {
    /// Row number in the permutation-polynomial list (1-based).
    pub row: usize,
    pub label: String,
    pub terms: Vec<Term>,
    pub prime: PrimeSpec,
    pub predicate: ParameterPredicate,
    pub reading: SignReading,
    /// Listed among the low-discrepancy generators as well.
    pub low_discrepancy: bool,
    pub expected_roots: Option<ExpectedRoots>,
}

fn render_terms(terms: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let negative = t.coeff < 0;
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = t.coeff.unsigned_abs();
        let mut body = String::new();
        if magnitude != 1 || (t.a_power == 0 && t.den == 1 && t.degree == 0) {
            body.push_str(&magnitude.to_string());
        }
        if t.den != 1 {
            body.push_str(&format!("{}^-1 ", t.den));
        }
        match t.a_power {
            0 => {}
            1 => body.push('a'),
            e => body.push_str(&format!("a^{e}")),
        }
        match t.degree {
            0 => {}
            1 => body.push('x'),
            d => body.push_str(&format!("x^{d}")),
        }
        out.push_str(&body);
    }
    out
}

impl DicksonEntry {
    fn new(
        row: usize,
        terms: Vec<Term>,
        prime: PrimeSpec,
        predicate: ParameterPredicate,
        reading: SignReading,
    ) -> Self {
        Self {
            row,
            label: render_terms(&terms),
            terms,
            prime,
            predicate,
            reading,
            low_discrepancy: false,
            expected_roots: None,
        }
    }

    fn lds(mut self) -> Self {
        self.low_discrepancy = true;
        self
    }

    fn roots(mut self, roots: ExpectedRoots) -> Self {
        self.expected_roots = Some(roots);
        self
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree).max().unwrap_or(0)
    }

    fn check_prime_compatible(&self, p: u64) -> Result<()> {
        check_prime(p)?;
        let den_ok = self.terms.iter().all(|t| t.den % p != 0);
        if !self.prime.admits(p) || !den_ok {
            return Err(Error::IncompatiblePrime { p, row: self.label.clone() });
        }
        Ok(())
    }

    /// The concrete polynomial for parameter `a` with coefficients in `[0, p)`.
    pub fn instantiate(&self, a: u64, p: u64) -> Result<IntPolynomial> {
        self.check_prime_compatible(p)?;
        let pi = p as i128;
        let mut coeffs = vec![0i128; self.degree() + 1];
        for t in &self.terms {
            let inv = mod_inverse(t.den % p, p).expect("checked compatible");
            let a_part = (0..t.a_power).fold(1i128, |acc, _| acc * a as i128 % pi);
            let c = (t.coeff as i128).rem_euclid(pi) * inv as i128 % pi * a_part % pi;
            coeffs[t.degree] = (coeffs[t.degree] + c) % pi;
        }
        Ok(IntPolynomial::new(coeffs.into_iter().map(BigInt::from).collect()))
    }
}

fn mod_inverse(x: u64, p: u64) -> Option<u64> {
    (1..p).find(|&y| (x as u128 * y as u128) % p as u128 == 1).or((p == 1).then_some(0))
}

/// The encoded permutation-polynomial list; ± rows expand into one entry per sign choice.
pub fn dickson_entries() -> Vec<DicksonEntry> {
    use ParameterPredicate as P;
    use PrimeSpec::{FiveMPlusMinusTwo, Fixed};
    use SignReading as S;

    let mut out = Vec::new();
    out.push(DicksonEntry::new(1, vec![term(3, 1, 0), term(1, -1, 1)], Fixed(3), P::NonSquare, S::Unsigned));
    for (s, roots) in [(1, vec![1, 2, 4]), (-1, vec![3, 5, 6])] {
        out.push(
            DicksonEntry::new(2, vec![term(4, 1, 0), term(1, 3 * s, 0)], Fixed(7), P::None, S::Single)
                .roots(ExpectedRoots::Exact(roots)),
        );
    }
    out.push(DicksonEntry::new(3, vec![term(5, 1, 0), term(1, -1, 1)], Fixed(5), P::NotFourthPower, S::Unsigned));
    for s in [1, -1] {
        out.push(
            DicksonEntry::new(
                4,
                vec![term(5, 1, 0), term(3, 1, 1), term(2, s, 0), term(1, 3, 2)],
                Fixed(7),
                P::NonSquare,
                S::Single,
            )
            .roots(ExpectedRoots::ExistsForAll),
        );
    }
    out.push(
        DicksonEntry::new(
            5,
            vec![term(5, 1, 0), term(3, 1, 1), Term { degree: 1, coeff: 1, den: 5, a_power: 2 }],
            FiveMPlusMinusTwo,
            P::NonZero,
            S::Unsigned,
        )
        .lds(),
    );
    out.push(
        DicksonEntry::new(6, vec![term(5, 1, 0), term(3, 1, 1), term(1, 3, 2)], Fixed(13), P::NonSquare, S::Unsigned)
            .roots(ExpectedRoots::ExistsForAll),
    );
    out.push(
        DicksonEntry::new(7, vec![term(5, 1, 0), term(3, 2, 1), term(1, 1, 2)], Fixed(5), P::NonSquare, S::Unsigned)
            .lds()
            .roots(ExpectedRoots::Exact(vec![])),
    );
    for (row, c) in [(8, 2), (9, 4)] {
        for s in [1, -1] {
            out.push(
                DicksonEntry::new(row, vec![term(6, 1, 0), term(1, c * s, 0)], Fixed(11), P::None, S::Single)
                    .lds()
                    .roots(ExpectedRoots::Exact(vec![])),
            );
        }
    }
    for (row, cubic, linear, predicate) in [(10, 1, 5, P::NonzeroSquare), (11, 4, 4, P::NonSquare)] {
        for (s1, s2) in [(1, 1), (-1, -1), (1, -1), (-1, 1)] {
            let reading = if s1 == s2 { S::Coupled } else { S::Mixed };
            out.push(
                DicksonEntry::new(
                    row,
                    vec![term(6, 1, 0), term(3, cubic * s1, 2), term(2, 1, 1), term(1, linear * s2, 0)],
                    Fixed(11),
                    predicate,
                    reading,
                )
                .roots(ExpectedRoots::ExistsForAll),
            );
        }
    }
    out
}

/// Per-parameter facts about one instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub a: Option<u64>,
    pub polynomial: IntPolynomial,
    pub permutation: bool,
    pub derivative_roots: Vec<u64>,
    pub low_discrepancy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub row: usize,
    pub label: String,
    pub p: u64,
    pub reading: SignReading,
    pub instances: Vec<InstanceReport>,
    /// Every admissible instantiation permutes `Z/pZ`.
    pub permutation_ok: bool,
    /// Recomputed roots match the expectation (`None` when the row lists none).
    pub roots_ok: Option<bool>,
    /// Every instantiation is low-discrepancy (`None` for rows not claimed so).
    pub low_discrepancy_ok: Option<bool>,
}

fn roots_mod_p(f: &IntPolynomial, p: u64) -> Vec<u64> {
    let d = f.residues(p).derivative();
    (0..p).filter(|&x| d.eval(x) == 0).collect()
}

/// Checks every admissible parameter of `entry` at the prime `p`.
pub fn verify_entry(entry: &DicksonEntry, p: u64) -> Result<EntryReport> {
    entry.check_prime_compatible(p)?;
    let mut instances = Vec::new();
    for a in entry.predicate.admissible(p) {
        let polynomial = entry.instantiate(a, p)?;
        instances.push(InstanceReport {
            a: (entry.predicate != ParameterPredicate::None).then_some(a),
            permutation: is_permutation_mod(&polynomial, p)?,
            derivative_roots: roots_mod_p(&polynomial, p),
            low_discrepancy: classify_low_discrepancy(&polynomial, p)?.low_discrepancy,
            polynomial,
        });
    }
    let roots_ok = entry.expected_roots.as_ref().map(|expected| match expected {
        ExpectedRoots::Exact(set) => instances.iter().all(|i| &i.derivative_roots == set),
        ExpectedRoots::ExistsForAll => instances.iter().all(|i| !i.derivative_roots.is_empty()),
    });
    Ok(EntryReport {
        row: entry.row,
        label: entry.label.clone(),
        p,
        reading: entry.reading,
        permutation_ok: instances.iter().all(|i| i.permutation),
        roots_ok,
        low_discrepancy_ok: entry.low_discrepancy.then(|| instances.iter().all(|i| i.low_discrepancy)),
        instances,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TableCheck {
    /// Permutation property of every listed polynomial.
    Dickson,
    /// Root sets of the derivatives.
    Derivatives,
    /// Low-discrepancy property of the listed generators.
    Lds,
}

impl TableCheck {
    fn selects(self, entry: &DicksonEntry) -> bool {
        match self {
            Self::Dickson => true,
            Self::Derivatives => entry.expected_roots.is_some(),
            Self::Lds => entry.low_discrepancy,
        }
    }

    fn passed(self, report: &EntryReport) -> bool {
        match self {
            Self::Dickson => report.permutation_ok,
            Self::Derivatives => report.roots_ok == Some(true),
            Self::Lds => report.low_discrepancy_ok == Some(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedEntry {
    pub passed: bool,
    #[serde(flatten)]
    pub report: EntryReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub row: usize,
    pub p: u64,
    /// Every entry outside the mixed-sign reading passed.
    pub confirmed: bool,
    /// Failing sign pairings, listed but not counted against the row.
    pub failing_mixed_readings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub check: TableCheck,
    pub entries: Vec<CheckedEntry>,
    pub rows: Vec<RowOutcome>,
    pub ok: bool,
}

/// Runs `check` over the encoded rows, at `p` when given (rows not admitting
/// `p` are skipped) and otherwise at each row's default primes.
pub fn verify_tables(check: TableCheck, p: Option<u64>, workers: usize) -> Result<TableReport> {
    if let Some(p) = p {
        check_prime(p)?;
    }
    let mut jobs: Vec<(DicksonEntry, u64)> = Vec::new();
    for entry in dickson_entries().into_iter().filter(|e| check.selects(e)) {
        let primes = match p {
            Some(p) => vec![p],
            None => entry.prime.default_primes(),
        };
        for q in primes {
            if entry.prime.admits(q) {
                jobs.push((entry.clone(), q));
            }
        }
    }
    let reports: Vec<EntryReport> =
        thread_pool(workers)?.install(|| jobs.par_iter().map(|(e, q)| verify_entry(e, *q)).collect::<Result<_>>())?;
    let entries: Vec<CheckedEntry> =
        reports.into_iter().map(|report| CheckedEntry { passed: check.passed(&report), report }).collect();

    let mut rows: Vec<RowOutcome> = Vec::new();
    for e in &entries {
        let key = (e.report.row, e.report.p);
        let pos = match rows.iter().position(|r| (r.row, r.p) == key) {
            Some(pos) => pos,
            None => {
                rows.push(RowOutcome { row: key.0, p: key.1, confirmed: true, failing_mixed_readings: vec![] });
                rows.len() - 1
            }
        };
        if !e.passed {
            if e.report.reading == SignReading::Mixed {
                rows[pos].failing_mixed_readings.push(e.report.label.clone());
            } else {
                rows[pos].confirmed = false;
            }
        }
    }
    let ok = rows.iter().all(|r| r.confirmed);
    Ok(TableReport { check, entries, rows, ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConstraints {
    pub monic: bool,
    pub zero_constant: bool,
    pub nonzero_linear: bool,
}

impl Default for SearchConstraints {
    /// The normalization used for the low-discrepancy list: monic, no constant term.
    fn default() -> Self {
        Self { monic: true, zero_constant: true, nonzero_linear: false }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub workers: usize,
    pub cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { workers: 1, cap: DEFAULT_SCAN_CAP }
    }
}

/// Allowed residues for each coefficient of a degree-`d` candidate, highest degree first.
fn coefficient_choices(p: u64, d: usize, c: SearchConstraints) -> Vec<Vec<u64>> {
    (0..=d)
        .rev()
        .map(|i| {
            if i == d {
                if c.monic {
                    vec![1]
                } else {
                    (1..p).collect()
                }
            } else if i == 0 && c.zero_constant {
                vec![0]
            } else if i == 1 && c.nonzero_linear {
                (1..p).collect()
            } else {
                (0..p).collect()
            }
        })
        .collect()
}

/// Every polynomial of degree `1..=max_degree` with coefficients in `[0, p)`
/// meeting `constraints` whose sequence is low-discrepancy in `Z_p`.
///
/// Candidates pass Nöbauer's test mod `p` first; survivors are confirmed by
/// enumerating `Z/p^2Z`. Output is ordered by degree, then lexicographically
/// by `(a_d, ..., a_0)`, for any worker count.
pub fn exhaustive_search(
    p: u64,
    max_degree: usize,
    constraints: SearchConstraints,
    options: SearchOptions,
) -> Result<Vec<IntPolynomial>> {
    check_prime(p)?;
    let plans: Vec<(usize, Vec<Vec<u64>>)> =
        (1..=max_degree).map(|d| (d, coefficient_choices(p, d, constraints))).collect();
    let mut total: u64 = 0;
    for (_, choices) in &plans {
        let size = choices.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
        total = total.saturating_add(size);
    }
    if total > options.cap {
        return Err(Error::EnumerationTooLarge { size: total.to_string(), cap: options.cap });
    }

    let pool = thread_pool(options.workers)?;
    let mut found = Vec::new();
    for (d, choices) in &plans {
        let size: u64 = choices.iter().map(|c| c.len() as u64).product();
        let candidate = |index: u64| -> Vec<u64> {
            // mixed radix with the constant term least significant
            let mut ascending = vec![0u64; d + 1];
            let mut rest = index;
            for (slot, options) in ascending.iter_mut().zip(choices.iter().rev()) {
                let base = options.len() as u64;
                *slot = options[(rest % base) as usize];
                rest /= base;
            }
            ascending
        };
        let hits: Vec<IntPolynomial> = pool.install(|| {
            (0..size)
                .into_par_iter()
                .filter_map(|index| {
                    let coeffs = candidate(index);
                    let f = ResiduePoly::from_residues(&coeffs, p);
                    let survives = first_missing_residue(&f).is_none() && smallest_root(&f.derivative()).is_none();
                    survives.then(|| IntPolynomial::from_coeffs(&coeffs))
                })
                .collect()
        });
        for f in hits {
            if !is_permutation_mod(&f, p * p)? {
                return Err(Error::CrossCheck(format!(
                    "{f} passes Nöbauer's test at p={p} but is not a permutation mod p^2"
                )));
            }
            found.push(f);
        }
    }
    Ok(found)
}

/// Why a search hit is (or is not) accounted for by the known families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "category")]
pub enum Explanation {
    /// Degree one: `x` after normalization.
    Linear,
    /// An instance of a listed low-discrepancy generator.
    Table {
        source: String,
    },
    /// `x^p + a x` with `a` and `a + 1` units.
    PowerFamily {
        a: u64,
    },
    /// `f(c x + d)`, renormalized, is a known instance.
    AffineEquivalent {
        c: u64,
        d: u64,
        representative: IntPolynomial,
        source: String,
    },
    Unexplained,
}

impl Explanation {
    pub fn category(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Table { .. } => "table",
            Self::PowerFamily { .. } => "power_family",
            Self::AffineEquivalent { .. } => "affine_equivalent",
            Self::Unexplained => "unexplained",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchedPolynomial {
    pub polynomial: IntPolynomial,
    pub explanation: Explanation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub p: u64,
    pub counts: std::collections::BTreeMap<&'static str, usize>,
    pub matches: Vec<MatchedPolynomial>,
    pub unexplained: Vec<IntPolynomial>,
}

/// Monic with zero constant term, coefficients in `[0, p)`, trimmed.
fn normalize(f: &IntPolynomial, p: u64) -> Vec<u64> {
    let r = f.residues(p);
    let mut coeffs = r.coeffs().to_vec();
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let Some(&lead) = coeffs.last() else { return coeffs };
    let inv = mod_inverse(lead, p).expect("p is prime");
    for c in coeffs.iter_mut() {
        *c = (*c as u128 * inv as u128 % p as u128) as u64;
    }
    if let Some(c0) = coeffs.first_mut() {
        *c0 = 0;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

enum Known {
    Table(String),
    Power(u64),
}

fn known_instances(p: u64) -> HashMap<Vec<u64>, Known> {
    let mut known = HashMap::new();
    for entry in dickson_entries().into_iter().filter(|e| e.low_discrepancy && e.prime.admits(p)) {
        for a in entry.predicate.admissible(p) {
            let f = entry.instantiate(a, p).expect("admitted prime");
            known.entry(normalize(&f, p)).or_insert_with(|| Known::Table(entry.label.clone()));
        }
    }
    for a in 1..p {
        if (a + 1) % p != 0 {
            let mut coeffs = vec![0u64; p as usize + 1];
            coeffs[1] = a;
            coeffs[p as usize] = 1;
            known.entry(coeffs).or_insert(Known::Power(a));
        }
    }
    known
}

fn describe(known: &Known) -> String {
    match known {
        Known::Table(label) => label.clone(),
        Known::Power(a) => format!("x^p + {a}x"),
    }
}

/// Sorts search hits into the known families, in input order.
pub fn match_against_table(found: &[IntPolynomial], p: u64) -> Result<MatchReport> {
    check_prime(p)?;
    let known = known_instances(p);
    let p_big = BigInt::from(p);
    let one = BigInt::from(1);
    let zero = BigInt::from(0);
    let mut matches = Vec::with_capacity(found.len());
    for f in found {
        let explanation = if f.degree() == Some(1) {
            Explanation::Linear
        } else if let Some(k) = known.get(&normalize(f, p)) {
            match k {
                Known::Table(label) => Explanation::Table { source: label.clone() },
                Known::Power(a) => Explanation::PowerFamily { a: *a },
            }
        } else {
            let mut hit = Explanation::Unexplained;
            'search: for c in 1..p {
                for d in 0..p {
                    let moved = affine_compose(f, (&one, &zero), (&BigInt::from(c), &BigInt::from(d)), &p_big)?;
                    let key = normalize(&moved, p);
                    if let Some(k) = known.get(&key) {
                        hit = Explanation::AffineEquivalent {
                            c,
                            d,
                            representative: IntPolynomial::from_coeffs(&key),
                            source: describe(k),
                        };
                        break 'search;
                    }
                }
            }
            hit
        };
        matches.push(MatchedPolynomial { polynomial: f.clone(), explanation });
    }
    let mut counts = std::collections::BTreeMap::new();
    for m in &matches {
        *counts.entry(m.explanation.category()).or_insert(0) += 1;
    }
    let unexplained =
        matches.iter().filter(|m| m.explanation == Explanation::Unexplained).map(|m| m.polynomial.clone()).collect();
    Ok(MatchReport { p, counts, matches, unexplained })
}
