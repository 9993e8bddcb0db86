use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use super::output::{approx, decimal, fraction, Format, Output};
use super::{parse, Cli, Command, CommandResult, GenerateMode, Outcome, SequenceArgs};
use crate::catalog::{self, Explanation, SearchConstraints, SearchOptions, TableCheck};
use crate::discrepancy::{self, digit_count, BoundStatus, Witness};
use crate::padic::{monna_map, PAdicApprox};
use crate::paircorr::{self, Alpha};
use crate::permcheck::{self, ScanOptions};
use crate::poly::{associated_g1, associated_g2, IntPolynomial};
use crate::sequence::{SequenceSpec, SequenceValues};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn io(e: std::io::Error) -> String {
    format!("cannot write output: {e}")
}

fn polynomial(text: &str) -> Result<IntPolynomial, String> {
    text.parse::<IntPolynomial>().map_err(|e| format!("polynomial {text:?}: {e}"))
}

impl SequenceArgs {
    fn spec(&self, p: u64) -> Result<SequenceSpec, String> {
        match (&self.poly, &self.linear) {
            (Some(text), None) => SequenceSpec::polynomial(polynomial(text)?, p).map_err(err),
            (None, Some(ab)) => {
                let (a, b) = (ab[0].clone(), ab[1].clone());
                match self.precision {
                    Some(k) => {
                        let a = PAdicApprox::from_integer(&a, p, k as usize).map_err(err)?;
                        let b = PAdicApprox::from_integer(&b, p, k as usize).map_err(err)?;
                        SequenceSpec::linear(a, b).map_err(err)
                    }
                    None => SequenceSpec::linear_integers(a, b, p).map_err(err),
                }
            }
            _ => Err("give either a polynomial or --linear A B".into()),
        }
    }

    fn describe(&self) -> String {
        match (&self.poly, &self.linear) {
            (Some(text), _) => text.clone(),
            (_, Some(ab)) => format!("n*{} + {}", ab[0], ab[1]),
            _ => String::new(),
        }
    }
}

pub(crate) fn dispatch(cli: &Cli, sink: &mut dyn Write) -> CommandResult {
    let workers = cli.workers as usize;
    let default_format = match cli.command {
        Command::Classify { .. } | Command::VerifyTables { .. } | Command::Scan { .. } => Format::Json,
        _ => Format::Csv,
    };
    let mut out = Output { format: cli.format.unwrap_or(default_format), sink };
    match &cli.command {
        Command::Classify { p, poly } => classify(&mut out, *p, poly),
        Command::Generate { p, sequence, n, mode } => generate(&mut out, *p, sequence, *n, *mode),
        Command::Discrepancy { p, sequence, schedule } => discrepancy(&mut out, *p, sequence, schedule),
        Command::Paircorr { p, sequence, alpha, s, schedule } => paircorr(&mut out, *p, sequence, alpha, s, schedule),
        Command::VerifyTables { which, p, dump } => verify_tables(&mut out, *which, *p, *dump, workers),
        Command::Search { p, degree, no_monic, any_constant, nonzero_linear, cap } => {
            let constraints =
                SearchConstraints { monic: !no_monic, zero_constant: !any_constant, nonzero_linear: *nonzero_linear };
            search(&mut out, *p, *degree, constraints, SearchOptions { workers, cap: *cap })
        }
        Command::Bridge { p, sequence, schedule } => bridge(&mut out, *p, sequence, schedule),
        Command::Scan { p, degree, coefficients, cap } => {
            scan(&mut out, *p, *degree, coefficients.as_deref(), ScanOptions { workers, cap: *cap })
        }
    }
}

fn classify(out: &mut Output, p: u64, text: &str) -> CommandResult {
    let f = polynomial(text)?;
    let verdict = permcheck::classify_low_discrepancy(&f, p).map_err(err)?;
    let certificate = permcheck::noebauer_mod_p2(&f, p).map_err(err)?;
    // the associated polynomials need p >= 3
    let associated = match (associated_g1(&f, p), associated_g2(&f, p)) {
        (Ok(g1), Ok(g2)) => Some((g1, g2, permcheck::classify_via_associated(&f, p).map_err(err)?)),
        _ => None,
    };
    let divergence = associated.as_ref().is_some_and(|(_, _, v)| v.low_discrepancy != verdict.low_discrepancy);
    match out.format {
        Format::Json => out
            .json(
                "classify",
                &json!({
                    "p": p,
                    "polynomial": f,
                    "low_discrepancy": verdict.low_discrepancy,
                    "verdict": verdict,
                    "noebauer": certificate,
                    "g1": associated.as_ref().map(|a| &a.0),
                    "g2": associated.as_ref().map(|a| &a.1),
                    "associated_verdict": associated.as_ref().map(|a| &a.2),
                    "divergence": divergence,
                }),
            )
            .map_err(io)?,
        Format::Csv => {
            let cell = |o: Option<String>| o.unwrap_or_default();
            out.csv(
                &[
                    "p",
                    "polynomial",
                    "low_discrepancy",
                    "perm_mod_p",
                    "perm_mod_p2",
                    "derivative_root",
                    "g1",
                    "g2",
                    "associated_low_discrepancy",
                    "divergence",
                ],
                &[vec![
                    p.to_string(),
                    f.to_string(),
                    verdict.low_discrepancy.to_string(),
                    verdict.perm_mod_p.to_string(),
                    verdict.perm_mod_p2.to_string(),
                    cell(verdict.derivative_root.map(|r| r.to_string())),
                    cell(associated.as_ref().map(|a| a.0.to_string())),
                    cell(associated.as_ref().map(|a| a.1.to_string())),
                    cell(associated.as_ref().map(|a| a.2.low_discrepancy.to_string())),
                    divergence.to_string(),
                ]],
            )
            .map_err(io)?
        }
    }
    Ok(Outcome::Done)
}

fn generate(out: &mut Output, p: u64, sequence: &SequenceArgs, n: usize, mode: GenerateMode) -> CommandResult {
    let spec = sequence.spec(p)?;
    let values = spec.values(n).map_err(err)?;
    let approximations: Vec<PAdicApprox> = match (&values, mode) {
        (_, GenerateMode::Integers) => Vec::new(),
        (SequenceValues::Truncated(v), _) => v.clone(),
        (SequenceValues::Exact(v), _) => {
            let k = match sequence.precision {
                Some(k) => k as usize,
                None if v.iter().any(Signed::is_negative) => {
                    return Err("negative values have infinite p-adic expansions; give --K".into())
                }
                None => v.iter().map(|x| digit_count(x, p)).max().unwrap_or(1),
            };
            v.iter().map(|x| PAdicApprox::from_integer(x, p, k)).collect::<crate::Result<_>>().map_err(err)?
        }
    };
    let integers: Vec<BigInt> = match &values {
        SequenceValues::Exact(v) => v.clone(),
        SequenceValues::Truncated(v) => v.iter().map(PAdicApprox::residue_int).collect(),
    };
    let precision = approximations.first().map_or(0, PAdicApprox::precision);

    match out.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = (0..n)
                .map(|i| match mode {
                    GenerateMode::Integers => json!({ "n": i + 1, "value": integers[i].to_string() }),
                    GenerateMode::Digits => json!({ "n": i + 1, "digits": approximations[i].digits() }),
                    GenerateMode::Monna => {
                        let m = monna_map(&approximations[i]);
                        json!({ "n": i + 1, "monna": fraction(&m), "monna_approx": approx(&m) })
                    }
                })
                .collect();
            let precision = (mode != GenerateMode::Integers).then_some(precision);
            out.json("generate", &json!({ "p": p, "sequence": spec, "precision": precision, "rows": rows }))
                .map_err(io)?;
        }
        Format::Csv => {
            let digit_names: Vec<String> = (0..precision).map(|i| format!("d{i}")).collect();
            let header: Vec<&str> = match mode {
                GenerateMode::Integers => vec!["n", "value"],
                GenerateMode::Digits => std::iter::once("n").chain(digit_names.iter().map(String::as_str)).collect(),
                GenerateMode::Monna => vec!["n", "monna", "monna_approx"],
            };
            let rows: Vec<Vec<String>> = (0..n)
                .map(|i| {
                    let mut row = vec![(i + 1).to_string()];
                    match mode {
                        GenerateMode::Integers => row.push(integers[i].to_string()),
                        GenerateMode::Digits => row.extend(approximations[i].digits().iter().map(u64::to_string)),
                        GenerateMode::Monna => {
                            let m = monna_map(&approximations[i]);
                            row.push(fraction(&m));
                            row.push(approx(&m));
                        }
                    }
                    row
                })
                .collect();
            out.csv(&header, &rows).map_err(io)?;
        }
    }
    Ok(Outcome::Done)
}

fn witness_cells(w: &Witness) -> (String, String) {
    match w {
        Witness::Ball { level, residue, .. } => (level.to_string(), residue.to_string()),
        Witness::Tail { .. } => ("tail".into(), String::new()),
    }
}

fn discrepancy(out: &mut Output, p: u64, sequence: &SequenceArgs, schedule: &str) -> CommandResult {
    let schedule = parse::schedule(schedule, p)?;
    let spec = sequence.spec(p)?;
    let rows = discrepancy::discrepancy_sweep(&spec, &schedule).map_err(err)?;
    match out.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(n, r)| {
                    let scaled = r.value.clone() * BigRational::from_integer(BigInt::from(*n));
                    json!({ "n": n, "d_n": r, "n_times_d_n": fraction(&scaled) })
                })
                .collect();
            out.json("discrepancy", &json!({ "p": p, "sequence": spec, "rows": rows })).map_err(io)?;
        }
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|(n, r)| {
                    let scaled = r.value.clone() * BigRational::from_integer(BigInt::from(*n));
                    let (level, residue) = witness_cells(&r.witness);
                    vec![n.to_string(), fraction(&r.value), fraction(&scaled), level, residue, approx(&r.value)]
                })
                .collect();
            out.csv(&["N", "D_N", "N_times_D_N", "witness_level", "witness_residue", "D_N_approx"], &table)
                .map_err(io)?;
        }
    }
    Ok(Outcome::Done)
}

fn paircorr(
    out: &mut Output,
    p: u64,
    sequence: &SequenceArgs,
    alpha: &str,
    s: &[BigRational],
    schedule: &str,
) -> CommandResult {
    let alpha: Alpha = alpha.parse().map_err(err)?;
    let schedule = parse::schedule(schedule, p)?;
    let spec = sequence.spec(p)?;
    let rows = paircorr::ppc_sweep(&spec, alpha, s, &schedule).map_err(err)?;
    match out.format {
        Format::Json => {
            out.json("paircorr", &json!({ "p": p, "alpha": alpha, "sequence": spec, "rows": rows })).map_err(io)?
        }
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        fraction(&r.s),
                        r.level.to_string(),
                        r.pairs.to_string(),
                        fraction(&r.value),
                        approx(&r.value),
                    ]
                })
                .collect();
            out.csv(&["N", "s", "level", "pairs", "F", "F_approx"], &table).map_err(io)?;
        }
    }
    Ok(Outcome::Done)
}

fn verify_tables(out: &mut Output, which: TableCheck, p: Option<u64>, dump: bool, workers: usize) -> CommandResult {
    if dump {
        out.json("verify-tables", &json!({ "entries": catalog::dickson_entries() })).map_err(io)?;
        return Ok(Outcome::Done);
    }
    let report = catalog::verify_tables(which, p, workers).map_err(err)?;
    match out.format {
        Format::Json => out.json("verify-tables", &report).map_err(io)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|e| {
                    let params: Vec<String> =
                        e.report.instances.iter().filter_map(|i| i.a.map(|a| a.to_string())).collect();
                    vec![
                        e.report.row.to_string(),
                        e.report.p.to_string(),
                        e.report.label.clone(),
                        serde_plain(&e.report.reading),
                        params.join(" "),
                        e.passed.to_string(),
                    ]
                })
                .collect();
            out.csv(&["row", "p", "polynomial", "reading", "parameters", "passed"], &table).map_err(io)?;
        }
    }
    Ok(if report.ok { Outcome::Done } else { Outcome::Unconfirmed })
}

fn serde_plain(value: &impl Serialize) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn search(
    out: &mut Output,
    p: u64,
    degree: usize,
    constraints: SearchConstraints,
    options: SearchOptions,
) -> CommandResult {
    let found = catalog::exhaustive_search(p, degree, constraints, options).map_err(err)?;
    let report = catalog::match_against_table(&found, p).map_err(err)?;
    match out.format {
        Format::Json => out
            .json("search", &json!({ "max_degree": degree, "constraints": constraints, "report": report }))
            .map_err(io)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = report
                .matches
                .iter()
                .map(|m| {
                    let detail = match &m.explanation {
                        Explanation::Table { source } => source.clone(),
                        Explanation::PowerFamily { a } => format!("a={a}"),
                        Explanation::AffineEquivalent { c, d, representative, source } => {
                            format!("x -> {c}x + {d} gives {representative} ({source})")
                        }
                        Explanation::Linear | Explanation::Unexplained => String::new(),
                    };
                    vec![
                        m.polynomial.to_string(),
                        m.polynomial.degree().map_or(String::new(), |d| d.to_string()),
                        m.explanation.category().to_string(),
                        detail,
                    ]
                })
                .collect();
            out.csv(&["polynomial", "degree", "category", "detail"], &table).map_err(io)?;
        }
    }
    Ok(if report.unexplained.is_empty() { Outcome::Done } else { Outcome::Unconfirmed })
}

fn status(s: BoundStatus) -> String {
    serde_plain(&s)
}

fn bridge(out: &mut Output, p: u64, sequence: &SequenceArgs, schedule: &str) -> CommandResult {
    let schedule = parse::schedule(schedule, p)?;
    let spec = sequence.spec(p)?;
    // --K is consumed by the sequence itself for --linear
    let precision = match (&sequence.linear, sequence.precision) {
        (Some(_), _) => None,
        (None, k) => k.map(|k| k as usize),
    };
    let report = discrepancy::bridge(&spec, &schedule, precision).map_err(err)?;
    let growth = |n: usize, d: &BigRational| -> Option<f64> {
        use num_traits::ToPrimitive;
        (n > 1).then(|| n as f64 * d.to_f64().unwrap_or(f64::NAN) / (n as f64).ln())
    };
    let max_growth = report
        .rows
        .iter()
        .filter(|r| r.n >= 10)
        .filter_map(|r| growth(r.n, &r.d))
        .fold(None::<f64>, |m, g| Some(m.map_or(g, |m| m.max(g))));
    match out.format {
        Format::Json => out
            .json(
                "bridge",
                &json!({
                    "p": p,
                    "sequence": sequence.describe(),
                    "precision": report.precision,
                    "rows": report.rows,
                    "max_n_d_over_ln_n_for_n_at_least_10": max_growth,
                }),
            )
            .map_err(io)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        fraction(&r.delta),
                        fraction(&r.d),
                        decimal(r.check.upper_bound),
                        status(r.check.lower),
                        status(r.check.upper),
                        status(r.check.holds),
                        growth(r.n, &r.d).map_or(String::new(), decimal),
                    ]
                })
                .collect();
            out.csv(
                &["N", "delta_N", "d_N", "upper_bound_approx", "lower", "upper", "holds", "N_d_over_ln_N_approx"],
                &table,
            )
            .map_err(io)?;
        }
    }
    Ok(Outcome::Done)
}

fn scan(out: &mut Output, p: u64, degree: usize, coefficients: Option<&str>, options: ScanOptions) -> CommandResult {
    let range = match coefficients {
        None => 0..p as i64,
        Some(text) => {
            let (a, b) = text.split_once("..").ok_or_else(|| format!("{text:?} is not a range a..b"))?;
            let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
            let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
            a..b
        }
    };
    let report = permcheck::divergence_scan(p, degree, range, options).map_err(err)?;
    match out.format {
        Format::Json => out.json("scan", &report).map_err(io)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = report
                .divergences
                .iter()
                .map(|e| {
                    let (modulus, x, y, value) = e.collision.as_ref().map_or_else(Default::default, |c| {
                        (c.modulus.to_string(), c.x.to_string(), c.y.to_string(), c.value.to_string())
                    });
                    vec![
                        e.polynomial.to_string(),
                        e.g1.to_string(),
                        e.g2.to_string(),
                        e.ground_truth.low_discrepancy.to_string(),
                        e.associated.low_discrepancy.to_string(),
                        modulus,
                        x,
                        y,
                        value,
                    ]
                })
                .collect();
            out.csv(&["polynomial", "g1", "g2", "ground_truth", "associated", "modulus", "x", "y", "value"], &table)
                .map_err(io)?;
        }
    }
    Ok(Outcome::Done)
}
