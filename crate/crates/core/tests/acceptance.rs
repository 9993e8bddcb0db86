//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion that cannot be met is still computed in full and printed as
//! FAIL. The run only aborts when a failure differs from the documented gap
//! for that criterion, so new regressions are never masked.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use padic_lds::catalog::{
    exhaustive_search, match_against_table, verify_tables, SearchConstraints, SearchOptions, TableCheck,
};
use padic_lds::discrepancy::{
    bridge, padic_discrepancy, padic_discrepancy_truncated, real_extreme_discrepancy, BoundStatus,
};
use padic_lds::paircorr::{f_statistic, ppc_sweep, Alpha};
use padic_lds::permcheck::{divergence_scan, is_permutation_mod, noebauer_mod_p2, ScanOptions};
use padic_lds::sequence::{linear_sequence, poly_sequence, SequenceSpec, SequenceValues};
use padic_lds::{ExactRational, IntPolynomial, PAdicApprox};

struct Check {
    passed: bool,
    detail: String,
    /// For a failing criterion: whether the failure is exactly the documented gap.
    documented_gap: Option<String>,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into(), documented_gap: None }
    }
}

fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(n.into(), d.into())
}

fn poly(text: &str) -> IntPolynomial {
    text.parse().expect("valid polynomial")
}

fn ints(values: &[BigInt]) -> Vec<i128> {
    values.iter().map(|v| i128::try_from(v).expect("fits in i128")).collect()
}

/// Direct supremum over balls: every level up to `levels`, each occupied
/// class, an empty class when one exists, plus the limit `c*/N` of shrinking balls.
fn brute_force_padic(values: &[i128], p: i128, levels: u32) -> ExactRational {
    let n = values.len() as i64;
    let mut best = BigRational::zero();
    for k in 1..=levels {
        let m = p.pow(k);
        let mut counts: HashMap<i128, i64> = HashMap::new();
        for v in values {
            *counts.entry(v.rem_euclid(m)).or_default() += 1;
        }
        let measure = BigRational::new(BigInt::one(), BigInt::from(m));
        for &c in counts.values() {
            best = best.max((rat(c, n) - &measure).abs());
        }
        // any empty class contributes its measure
        if (counts.len() as i128) < m {
            best = best.max(measure);
        }
    }
    let mut exact: HashMap<i128, i64> = HashMap::new();
    for v in values {
        *exact.entry(*v).or_default() += 1;
    }
    best.max(rat(*exact.values().max().expect("nonempty"), n))
}

/// Levels past which every distinct pair is separated: `p^L > max |x - y|`.
fn separating_levels(values: &[i128], p: i128) -> u32 {
    let spread = values.iter().max().unwrap() - values.iter().min().unwrap();
    let mut l = 1;
    while p.pow(l) <= spread {
        l += 1;
    }
    l + 1
}

fn criterion_1_and_2() -> (Check, Check) {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut checked = 0u64;
    let mut permutations_at_3 = Vec::new();
    for p in [2u64, 3, 5] {
        let m = (p * p) as i64;
        for a3 in 0..m {
            for a2 in 0..m {
                for a1 in 0..m {
                    for a0 in 0..m {
                        let f = IntPolynomial::from_coeffs(&[a0, a1, a2, a3]);
                        let certificate = noebauer_mod_p2(&f, p).unwrap().perm_mod_p2;
                        let enumerated = is_permutation_mod(&f, p * p).unwrap();
                        checked += 1;
                        if certificate != enumerated {
                            mismatches.push(format!("{f} at p={p}"));
                        }
                        if p == 3 && enumerated {
                            permutations_at_3.push(f);
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let c1 = Check::new(
        mismatches.is_empty() && elapsed <= Duration::from_secs(60),
        format!("{checked} polynomials, {} mismatches, {:.1}s (limit 60s)", mismatches.len(), elapsed.as_secs_f64()),
    );
    let lift_failures: Vec<String> =
        permutations_at_3.iter().filter(|f| !is_permutation_mod(f, 27).unwrap()).map(|f| f.to_string()).collect();
    let c2 = Check::new(
        lift_failures.is_empty() && !permutations_at_3.is_empty(),
        format!(
            "{} permutations mod 9 at p=3, {} not permutations mod 27",
            permutations_at_3.len(),
            lift_failures.len()
        ),
    );
    (c1, c2)
}

fn criterion_3() -> Check {
    let cases: Vec<(&str, u64, Vec<BigInt>)> = vec![
        ("x^3 + x, p=3", 3, poly_sequence(&poly("x^3 + x"), 500)),
        ("x^5 + 4x^3 + 4x, p=5", 5, poly_sequence(&poly("x^5 + 4x^3 + 4x"), 500)),
        ("n, p=3", 3, poly_sequence(&poly("x"), 500)),
    ];
    let mut failures = Vec::new();
    let mut oracle_checks = 0;
    for (name, p, values) in &cases {
        for n in 1..=500 {
            let computed = padic_discrepancy(&values[..n], *p).unwrap().value;
            if computed != rat(1, n as i64) {
                failures.push(format!("{name} N={n}: {computed}"));
            }
            if n <= 30 {
                let small = ints(&values[..n]);
                let oracle = brute_force_padic(&small, *p as i128, separating_levels(&small, *p as i128));
                oracle_checks += 1;
                if oracle != computed {
                    failures.push(format!("{name} N={n}: oracle {oracle} vs {computed}"));
                }
            }
        }
    }
    Check::new(
        failures.is_empty(),
        format!(
            "3 sequences x N=1..500 equal 1/N exactly; {oracle_checks} brute-force oracle comparisons; {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_4() -> Check {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (text, p) in [("x^2", 3u64), ("x^3", 5)] {
        let f = poly(text);
        let p3 = p.pow(3) as usize;
        let p4 = p.pow(4) as usize;
        let values = poly_sequence(&f, p4.max(500));
        let floor = rat(1, p3 as i64);
        let schedule: Vec<usize> = (1..=500).chain([p3, p4]).collect();
        for n in schedule {
            let d = padic_discrepancy(&values[..n], p).unwrap().value;
            checked += 1;
            if d < floor {
                failures.push(format!("{text} p={p} N={n}: {d}"));
            }
        }
    }
    Check::new(failures.is_empty(), format!("{checked} (f, N) points, {} below p^-3", failures.len()))
}

fn criterion_5() -> Check {
    let unit = SequenceSpec::linear_integers(2.into(), 1.into(), 3).unwrap();
    let non_unit = SequenceSpec::linear_integers(3.into(), 0.into(), 3).unwrap();
    let (SequenceValues::Exact(a), SequenceValues::Exact(b)) =
        (unit.values(2187).unwrap(), non_unit.values(2187).unwrap())
    else {
        unreachable!("integer linear sequences are exact")
    };
    // also run the truncated path on the unit case with enough digits
    let k = 8;
    let two = PAdicApprox::from_integer(&2.into(), 3, k).unwrap();
    let one = PAdicApprox::from_integer(&1.into(), 3, k).unwrap();
    let truncated = linear_sequence(&two, &one, 2187).unwrap();
    let mut worst_unit = BigRational::zero();
    let mut best_non_unit: Option<ExactRational> = None;
    let mut mismatch = 0;
    for n in 1..=2187usize {
        let scaled = padic_discrepancy(&a[..n], 3).unwrap().value * BigRational::from_integer(n.into());
        if n % 97 == 0 || n == 2187 {
            let t = padic_discrepancy_truncated(&truncated[..n], 3).unwrap().value;
            if t * BigRational::from_integer(n.into()) != scaled {
                mismatch += 1;
            }
        }
        worst_unit = worst_unit.max(scaled);
        let d = padic_discrepancy(&b[..n], 3).unwrap().value;
        best_non_unit = Some(best_non_unit.map_or(d.clone(), |m: ExactRational| m.min(d)));
    }
    let best_non_unit = best_non_unit.unwrap();
    Check::new(
        worst_unit <= rat(3, 1) && best_non_unit >= rat(1, 3) && mismatch == 0,
        format!(
            "a=2,b=1: max N*D_N = {worst_unit} (<= 3); a=3,b=0: min D_N = {best_non_unit} (>= 1/3); truncated path mismatches {mismatch}"
        ),
    )
}

fn criterion_6() -> Check {
    let report = verify_tables(TableCheck::Derivatives, None, 2).unwrap();
    let roots = |label: &str, p: u64| -> Vec<u64> {
        report
            .entries
            .iter()
            .find(|e| e.report.label == label && e.report.p == p)
            .map(|e| e.report.instances[0].derivative_roots.clone())
            .unwrap_or_else(|| panic!("missing {label}"))
    };
    let exact = roots("x^4 + 3x", 7) == [1, 2, 4]
        && roots("x^4 - 3x", 7) == [3, 5, 6]
        && ["x^6 + 2x", "x^6 - 2x", "x^6 + 4x", "x^6 - 4x"].iter().all(|l| roots(l, 11).is_empty());
    let status = Command::new(env!("CARGO_BIN_EXE_padic-lds"))
        .args(["verify-tables", "--which", "derivatives"])
        .output()
        .expect("binary runs")
        .status
        .code();
    Check::new(
        exact && report.ok && status == Some(0),
        format!(
            "{} entries, all rows confirmed: {}; 4x^3+3 -> {{1,2,4}}, 4x^3-3 -> {{3,5,6}}, sextic rows rootless: {exact}; verify-tables exit code {status:?}",
            report.entries.len(),
            report.ok
        ),
    )
}

fn criterion_7() -> Check {
    let mut parts = Vec::new();
    let mut unexplained_by_p = Vec::new();
    let mut slow = false;
    for p in [5u64, 7, 11, 13] {
        let start = Instant::now();
        let found =
            exhaustive_search(p, 6, SearchConstraints::default(), SearchOptions { workers: 4, cap: 100_000_000 })
                .unwrap();
        let report = match_against_table(&found, p).unwrap();
        let elapsed = start.elapsed();
        slow |= elapsed > Duration::from_secs(600);
        parts.push(format!(
            "p={p}: {} hits, {} unexplained ({:.2}s)",
            found.len(),
            report.unexplained.len(),
            elapsed.as_secs_f64()
        ));
        unexplained_by_p.push((p, report.unexplained));
    }
    let total: usize = unexplained_by_p.iter().map(|(_, u)| u.len()).sum();
    let mut check = Check::new(total == 0 && !slow, parts.join("; "));
    // The polynomials of degree 6 >= p at p = 5 fall outside the degree range
    // the classification covers; 40 of them are low-discrepancy, e.g.
    // x^6 + 2x^3 + x (a permutation mod 5, 25 and 125).
    let only_p5 = unexplained_by_p.iter().all(|(p, u)| if *p == 5 { u.len() == 40 } else { u.is_empty() });
    let sample = poly("x^6 + 2x^3 + x");
    let p5_sextics = unexplained_by_p[0].1.iter().all(|f| f.degree() == Some(6));
    if !check.passed && only_p5 && p5_sextics && unexplained_by_p[0].1.contains(&sample) && !slow {
        check.documented_gap =
            Some("40 unexplained degree-6 generators at p=5 (degree exceeds p), e.g. x^6 + 2x^3 + x".into());
    }
    check
}

fn criterion_8() -> Check {
    let report = divergence_scan(3, 6, 0..3, ScanOptions { workers: 2, cap: 100_000_000 }).unwrap();
    let x5 = poly("x^5");
    let entry = report.divergences.iter().find(|e| e.polynomial == x5);
    let certified = entry.is_some_and(|e| {
        !e.ground_truth.low_discrepancy
            && e.associated.low_discrepancy
            && e.collision.as_ref().is_some_and(|c| c.modulus == 9 && (c.x, c.y, c.value) == (0, 3, 0))
    });
    Check::new(
        certified && !report.divergences.is_empty(),
        format!(
            "{} scanned, {} divergences; x^5 flagged with 3^5 = 0 = 0^5 mod 9: {certified}",
            report.scanned,
            report.divergences.len()
        ),
    )
}

fn criterion_9() -> Check {
    let cubic = SequenceSpec::polynomial(poly("x^3 + x"), 3).unwrap();
    let ss = [rat(1, 3), rat(1, 2), rat(2, 3)];
    let rows = ppc_sweep(&cubic, Alpha::one(), &ss, &[27, 81, 243]).unwrap();
    let zeros = rows.iter().all(|r| r.value.is_zero());

    let identity = SequenceSpec::polynomial(poly("x"), 3).unwrap();
    let schedule: Vec<usize> = (4..=8).map(|k| 3usize.pow(k)).collect();
    let sweep = ppc_sweep(&identity, Alpha::new(1, 2).unwrap(), &[rat(1, 1)], &schedule).unwrap();
    let last = sweep.last().unwrap().value.clone();
    let monotone = sweep.windows(2).all(|w| w[0].value <= w[1].value) && sweep.iter().all(|r| r.value < rat(1, 1));
    let direct =
        f_statistic(&SequenceValues::Exact(poly_sequence(&poly("x"), 6561)), 3, Alpha::new(1, 2).unwrap(), &rat(1, 1))
            .unwrap()
            .value;
    let trend: Vec<String> = sweep.iter().map(|r| r.value.to_string()).collect();
    Check::new(
        zeros && last == rat(80, 81) && direct == last && monotone,
        format!(
            "(a) {} grid points all 0: {zeros}; (b) F(3^8) = {last}, sweep {} nondecreasing below 1: {monotone}",
            rows.len(),
            trend.join(", ")
        ),
    )
}

fn criterion_10() -> Check {
    let worked = bridge(&SequenceSpec::linear_integers(1.into(), 0.into(), 3).unwrap(), &[3], None).unwrap();
    let w = &worked.rows[0];
    let worked_ok = w.delta == rat(1, 3) && w.d == rat(4, 9) && (w.check.upper_bound - 2.0).abs() < 1e-12;

    let schedule: Vec<usize> = (1..=1000).collect();
    let mut failing: Vec<String> = Vec::new();
    let mut max_growth = 0f64;
    for (name, spec) in [
        ("n", SequenceSpec::linear_integers(1.into(), 0.into(), 3).unwrap()),
        ("x^3 + x", SequenceSpec::polynomial(poly("x^3 + x"), 3).unwrap()),
    ] {
        let report = bridge(&spec, &schedule, None).unwrap();
        for row in &report.rows {
            if row.check.holds != BoundStatus::Holds {
                failing.push(format!(
                    "{name} N={} (delta={}, d={}, lower {:?}, upper {:?})",
                    row.n, row.delta, row.d, row.check.lower, row.check.upper
                ));
            }
            if row.n >= 10 {
                use num_traits::ToPrimitive;
                let growth = row.n as f64 * row.d.to_f64().unwrap() / (row.n as f64).ln();
                max_growth = max_growth.max(growth);
            }
        }
    }
    let mut check = Check::new(
        failing.is_empty() && worked_ok && max_growth <= 6.0,
        format!(
            "worked point N=3 (1/3, 4/9, 2.0): {worked_ok}; rows not holding: {}{}; max N*d_N/ln N on [10,1000] = {max_growth:.4} (<= 6)",
            failing.len(),
            if failing.is_empty() { String::new() } else { format!(" [{}]", failing.join("; ")) }
        ),
    );
    // A single point has delta_1 = d_1 = 1, so the strict lower inequality
    // cannot hold at N = 1 for any sequence.
    let only_n1 = failing.len() == 2 && failing.iter().all(|f| f.contains(" N=1 "));
    if !check.passed && only_n1 && worked_ok && max_growth <= 6.0 {
        check.documented_gap =
            Some("N=1: delta_1 = d_1 = 1 for every one-point set, strict lower bound impossible".into());
    }
    check
}

/// Supremum over intervals with endpoints in the point set or {0, 1}, each
/// endpoint open or closed.
fn brute_force_real(points: &[ExactRational]) -> ExactRational {
    let n = points.len() as i64;
    let mut grid = points.to_vec();
    grid.push(rat(0, 1));
    grid.push(rat(1, 1));
    let mut best = BigRational::zero();
    for a in &grid {
        for b in grid.iter().filter(|b| *b >= a) {
            for (closed_left, closed_right) in [(true, false), (true, true), (false, false), (false, true)] {
                let inside = points
                    .iter()
                    .filter(|x| {
                        (if closed_left { *x >= a } else { *x > a }) && (if closed_right { *x <= b } else { *x < b })
                    })
                    .count() as i64;
                best = best.max((rat(inside, n) - (b - a)).abs());
            }
        }
    }
    best
}

fn criterion_11() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let mut mismatches = 0;
    for _ in 0..500 {
        let size = rng.gen_range(1..=12);
        let points: Vec<ExactRational> = (0..size)
            .map(|_| {
                let den = rng.gen_range(1..=64i64);
                rat(rng.gen_range(0..den), den)
            })
            .collect();
        if real_extreme_discrepancy(&points).unwrap() != brute_force_real(&points) {
            mismatches += 1;
        }
    }
    Check::new(
        mismatches == 0,
        format!("500 random point sets (size <= 12, denominators <= 64), {mismatches} mismatches"),
    )
}

fn main() {
    let mut unexpected = 0;
    let mut report = |number: u32, check: Check| {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!("criterion {number:>2}: {verdict} ({})", check.detail);
        match (&check.passed, &check.documented_gap) {
            (true, _) => {}
            (false, Some(gap)) => println!("              documented gap: {gap}"),
            (false, None) => unexpected += 1,
        }
    };
    let (c1, c2) = criterion_1_and_2();
    report(1, c1);
    report(2, c2);
    report(3, criterion_3());
    report(4, criterion_4());
    report(5, criterion_5());
    report(6, criterion_6());
    report(7, criterion_7());
    report(8, criterion_8());
    report(9, criterion_9());
    report(10, criterion_10());
    report(11, criterion_11());
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed outside their documented gaps");
        std::process::exit(1);
    }
}
