//! Acceptance report: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;

use common::{brute_force_classes, LARGE_BOX, SMALL_BOX};
use selmer3::classgroups::DirectRanks;
use selmer3::constants::to_f64;
use selmer3::forms::{enumerate_classes, ClassEnumerationRequest};
use selmer3::selmer::{sel3_bound_type_i, selmer_bound_type_i, BoundMode};
use selmer3::sieve::{run_experiment, ExperimentKind};
use selmer3::verify::{
    density_checks, isogeny_checks, lemma_identity, oracle_check, sa_empty_on_t, CheckLine,
};
use selmer3::Result;

const ORACLE_LOWER: i64 = -50_000;
const IDENTITY_GRID: [i64; 3] = [1_000, 10_000, 100_000];

const BAND_X: i64 = 1_000_000;
const M_MINUS_BAND: (f64, f64) = (0.97, 1.03);
const V_PRIME_NEG_BAND: (f64, f64) = (0.80, 1.15);
const V_PRIME_NEG_BASE: i64 = 10_000;
const H3_MINUS_GRID: [i64; 3] = [10_000, 100_000, 1_000_000];
const H3_MINUS_BAND: (f64, f64) = (1.4, 2.05);
const H3_PLUS_BAND: (f64, f64) = (1.1, 1.4);

const SIEVE_Y: i64 = 10_000_000;
const S_BAND: (f64, f64) = (0.999, 1.001);
const T_BAND: (f64, f64) = (0.995, 1.005);
const T_OVER_S_TOLERANCE: f64 = 0.01;

const SA_Y: i64 = 1_000_000;
const SELMER_Y: i64 = 100_000;
const ISOGENY_PRIMES: usize = 20;
const COMPLETENESS_BOUND: i64 = 1000;

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

fn ratio_at(kind: ExperimentKind, grid: &[i64]) -> Result<Vec<f64>> {
    Ok(run_experiment(kind, grid)?.iter().map(|r| to_f64(&r.ratio())).collect())
}

fn observed_at(kind: ExperimentKind, grid: &[i64]) -> Result<Vec<BigRational>> {
    Ok(run_experiment(kind, grid)?.into_iter().map(|r| r.observed).collect())
}

fn merge(name: &str, lines: Vec<CheckLine>) -> CheckLine {
    let failed: Vec<String> = lines.iter().filter(|l| !l.passed).map(|l| l.to_string()).collect();
    let detail = if failed.is_empty() {
        format!("{} checks", lines.len())
    } else {
        failed.join(" | ")
    };
    CheckLine::new(name, failed.is_empty() && !lines.is_empty(), detail)
}

fn criterion_1() -> CheckLine {
    merge("1 exact local densities", density_checks())
}

fn criterion_2() -> CheckLine {
    let line = oracle_check(ORACLE_LOWER);
    CheckLine::new("2 oracle equivalence", line.passed, line.detail)
}

fn criterion_3() -> CheckLine {
    merge("3 h3* identity", lemma_identity(&IDENTITY_GRID))
}

fn criterion_4() -> CheckLine {
    CheckLine::from_result(
        "4 counting bands",
        (|| {
            let m = ratio_at(ExperimentKind::MMinus, &[BAND_X])?[0];
            let v = ratio_at(ExperimentKind::VPrimeNeg, &[V_PRIME_NEG_BASE, BAND_X])?;
            let h_minus = observed_at(ExperimentKind::H3AvgMinus, &H3_MINUS_GRID)?;
            let h_plus = to_f64(&observed_at(ExperimentKind::H3AvgPlus, &[BAND_X])?[0]);
            let h_minus_f: Vec<f64> = h_minus.iter().map(to_f64).collect();
            let checks = [
                within(m, M_MINUS_BAND),
                within(v[1], V_PRIME_NEG_BAND),
                (v[1] - 1.0).abs() <= (v[0] - 1.0).abs(),
                within(h_minus_f[2], H3_MINUS_BAND),
                h_minus.windows(2).all(|w| w[0] < w[1]),
                within(h_plus, H3_PLUS_BAND),
            ];
            Ok((
                checks.iter().all(|&c| c),
                format!(
                    "M- {m:.6}; N(V') {:.6} (at 1e4 {:.6}); avg h3* M- {:.6} {:.6} {:.6}; M+ {h_plus:.6}; {checks:?}",
                    v[1], v[0], h_minus_f[0], h_minus_f[1], h_minus_f[2]
                ),
            ))
        })(),
    )
}

fn criterion_5() -> CheckLine {
    CheckLine::from_result(
        "5 sieve densities",
        (|| {
            let s = ratio_at(ExperimentKind::SDensity, &[SIEVE_Y])?[0];
            let t = ratio_at(ExperimentKind::TDensity, &[SIEVE_Y])?[0];
            let ts = ratio_at(ExperimentKind::TOverS, &[SIEVE_Y])?[0];
            Ok((
                within(s, S_BAND) && within(t, T_BAND) && (ts - 1.0).abs() <= T_OVER_S_TOLERANCE,
                format!("S {s:.8}, T {t:.8}, T/S {ts:.8}"),
            ))
        })(),
    )
}

fn criterion_6() -> CheckLine {
    let line = sa_empty_on_t(SA_Y);
    CheckLine::new("6 S_a empty on T", line.passed, line.detail)
}

fn criterion_7() -> CheckLine {
    CheckLine::from_result(
        "7 certified fraction",
        run_experiment(ExperimentKind::SelmerDensity, &[SELMER_Y]).map(|rows| {
            let r = &rows[0];
            (
                r.observed >= r.predicted,
                format!("observed {:.6} vs bound {:.6}", to_f64(&r.observed), to_f64(&r.predicted)),
            )
        }),
    )
}

fn criterion_8() -> CheckLine {
    merge("8 isogeny suite", isogeny_checks(ISOGENY_PRIMES))
}

fn criterion_9() -> CheckLine {
    CheckLine::from_result(
        "9 enumeration completeness",
        (|| {
            let mut ok = true;
            let mut detail = Vec::new();
            for (lo, hi) in [(-COMPLETENESS_BOUND - 1, 0), (0, COMPLETENESS_BOUND + 1)] {
                let listed: Vec<[i64; 4]> = enumerate_classes(&ClassEnumerationRequest::new(lo, hi)?)?
                    .iter()
                    .map(|f| f.to_i64s().expect("small"))
                    .collect();
                let set: BTreeSet<[i64; 4]> = listed.iter().copied().collect();
                let small = brute_force_classes(lo, hi, SMALL_BOX);
                let large = brute_force_classes(lo, hi, LARGE_BOX);
                let dupes = listed.len() - set.len();
                ok &= dupes == 0 && small == large && set == large;
                detail.push(format!(
                    "({lo}, {hi}): {} classes, brute {}, duplicates {dupes}",
                    set.len(),
                    large.len()
                ));
            }
            Ok((ok, detail.join("; ")))
        })(),
    )
}

fn criterion_10() -> CheckLine {
    CheckLine::from_result(
        "10 spot values",
        (|| {
            let src = DirectRanks::new();
            let b80 = selmer_bound_type_i(80, &src)?;
            let b49 = selmer_bound_type_i(49, &src)?;
            let s80 = sel3_bound_type_i(80, &src)?;
            Ok((
                b80.mode == BoundMode::ExactPair
                    && (b80.lower, b80.upper) == (0, 1)
                    && b49.mode == BoundMode::SquareCase
                    && b49.upper == 4
                    && s80 == Some(2),
                format!(
                    "80: {} ({}, {}); 49: {} upper {}; sel3(80) {s80:?}",
                    b80.mode, b80.lower, b80.upper, b49.mode, b49.upper
                ),
            ))
        })(),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> CheckLine; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut all = true;
    for run in criteria {
        let start = Instant::now();
        let line = run();
        all &= line.passed;
        println!("{line} [{:.1}s]", start.elapsed().as_secs_f64());
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILURES");
        ExitCode::FAILURE
    }
}
