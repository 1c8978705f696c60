use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::families::{enumerate_family, m_minus_h3_sums, Family};
use crate::classgroups::{CubicFormTable, DirectRanks, TabulatedRanks};
use crate::constants::{format_decimal, pi, ratio, zeta};
use crate::error::{invalid, Error, Result};

/// Largest accepted grid value.
pub const GRID_MAX: i64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    DhCount,
    DhCountNeg,
    VPrime,
    VPrimeNeg,
    MMinus,
    MPlus,
    H3AvgMinus,
    H3AvgPlus,
    SDensity,
    TDensity,
    TOverS,
    NCount,
    TPrime,
    SelmerDensity,
    C1Count,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 15] = [
        ExperimentKind::DhCount,
        ExperimentKind::DhCountNeg,
        ExperimentKind::VPrime,
        ExperimentKind::VPrimeNeg,
        ExperimentKind::MMinus,
        ExperimentKind::MPlus,
        ExperimentKind::H3AvgMinus,
        ExperimentKind::H3AvgPlus,
        ExperimentKind::SDensity,
        ExperimentKind::TDensity,
        ExperimentKind::TOverS,
        ExperimentKind::NCount,
        ExperimentKind::TPrime,
        ExperimentKind::SelmerDensity,
        ExperimentKind::C1Count,
    ];

    pub fn name(self) -> &'static str {
        use ExperimentKind::*;
        match self {
            DhCount => "dhCount",
            DhCountNeg => "dhCountNeg",
            VPrime => "vPrime",
            VPrimeNeg => "vPrimeNeg",
            MMinus => "mMinus",
            MPlus => "mPlus",
            H3AvgMinus => "h3AvgMinus",
            H3AvgPlus => "h3AvgPlus",
            SDensity => "sDensity",
            TDensity => "tDensity",
            TOverS => "tOverS",
            NCount => "nCount",
            TPrime => "tPrime",
            SelmerDensity => "selmerDensity",
            C1Count => "c1Count",
        }
    }

    /// Predicted value at `x`.
    pub fn predicted(self, x: i64) -> BigRational {
        use ExperimentKind::*;
        let xr = BigRational::from_integer(BigInt::from(x));
        let pi2 = pi() * pi();
        match self {
            DhCount => xr / (zeta(3) * ratio(12, 1)),
            DhCountNeg => xr / (zeta(3) * ratio(4, 1)),
            VPrime => xr / (pi2 * ratio(12, 1)),
            VPrimeNeg | NCount => xr / (pi2 * ratio(4, 1)),
            MMinus | MPlus => xr / (pi2 * ratio(2, 1)),
            H3AvgMinus => ratio(2, 1),
            H3AvgPlus => ratio(4, 3),
            SDensity => xr * ratio(2, 1) / zeta(6),
            TDensity => xr / (zeta(2) * ratio(32, 1)),
            TOverS => zeta(6) / (zeta(2) * ratio(64, 1)),
            TPrime => xr * ratio(3, 64) / pi2,
            SelmerDensity => zeta(6) * ratio(3, 128) / pi2,
            C1Count => sqrt_over_432(x) * ratio(2, 1) / zeta(6),
        }
    }
}

/// `√(x / 432)` to 60 decimal places.
fn sqrt_over_432(x: i64) -> BigRational {
    let scale = BigInt::from(10).pow(60);
    let radicand: BigInt = BigInt::from(x) * 432 * &scale * &scale;
    let root = radicand.sqrt();
    BigRational::new(root, scale * 432)
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRow {
    pub x: i64,
    pub observed: BigRational,
    pub predicted: BigRational,
}

impl ExperimentRow {
    pub fn ratio(&self) -> BigRational {
        &self.observed / &self.predicted
    }

    pub const CSV_HEADER: &'static str = "x,observed,predicted,ratio";

    /// One CSV line without the trailing newline.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.x,
            format_decimal(&self.observed, 12),
            format_decimal(&self.predicted, 12),
            format_decimal(&self.ratio(), 12)
        )
    }
}

/// Comma-separated positive integers, scientific notation allowed
/// (`1e4,2.5e5`), strictly increasing.
pub fn parse_grid(s: &str) -> Result<Vec<i64>> {
    let grid = s
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            let v: f64 = tok.parse().map_err(|_| invalid(format!("bad grid value {tok:?}")))?;
            if !v.is_finite() || v < 1.0 || v > GRID_MAX as f64 || v.fract() != 0.0 {
                return Err(invalid(format!("grid value {tok:?} is not an integer in [1, {GRID_MAX}]")));
            }
            Ok(v as i64)
        })
        .collect::<Result<Vec<i64>>>()?;
    check_grid(&grid)?;
    Ok(grid)
}

fn check_grid(grid: &[i64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("empty grid"));
    }
    if grid.iter().any(|&x| !(1..=GRID_MAX).contains(&x)) {
        return Err(invalid("grid values must lie in [1, 1e12]"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("grid must be strictly increasing"));
    }
    Ok(())
}

fn quotient(num: u64, den: u64, what: &str, x: i64) -> Result<BigRational> {
    if den == 0 {
        return Err(invalid(format!("{what} is empty at {x}")));
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn count_where(values: &[i64], keep: impl Fn(i64) -> bool) -> u64 {
    values.iter().filter(|&&v| keep(v)).count() as u64
}

pub fn run_experiment(kind: ExperimentKind, grid: &[i64]) -> Result<Vec<ExperimentRow>> {
    use ExperimentKind::*;
    check_grid(grid)?;
    let max = *grid.last().expect("nonempty grid");
    let int = |n: u64| BigRational::from_integer(BigInt::from(n));
    let direct = DirectRanks::new();
    let observed: Vec<BigRational> = match kind {
        DhCount | VPrime | DhCountNeg | VPrimeNeg => {
            let neg = matches!(kind, DhCountNeg | VPrimeNeg);
            let table = if neg {
                CubicFormTable::build(max, 0)?
            } else {
                CubicFormTable::build(0, max)?
            };
            grid.iter()
                .map(|&x| {
                    let (lo, hi) = if neg { (-x, 0) } else { (0, x) };
                    let n = if matches!(kind, DhCount | DhCountNeg) {
                        table.count_u(lo, hi)?
                    } else {
                        table.count_v_prime(lo, hi)?
                    };
                    Ok(int(n))
                })
                .collect::<Result<_>>()?
        }
        MMinus | MPlus => {
            let family = if kind == MMinus { Family::MMinus } else { Family::MPlus };
            let m = enumerate_family(family, max, &direct)?;
            grid.iter().map(|&x| int(count_where(&m, |d| d.abs() < x))).collect()
        }
        H3AvgMinus => {
            let sums = m_minus_h3_sums(grid)?;
            let table = CubicFormTable::build(max, 0)?;
            grid.iter()
                .zip(sums)
                .map(|(&x, (n, s))| {
                    let v = table.count_v_prime(-x, 0)?;
                    average_with_identity(x, n, s, v)
                })
                .collect::<Result<_>>()?
        }
        H3AvgPlus => {
            let m = enumerate_family(Family::MPlus, max, &direct)?;
            let table = CubicFormTable::build(0, max)?;
            grid.iter()
                .map(|&x| {
                    let members: Vec<i64> = m.iter().copied().filter(|&d| d < x).collect();
                    let s: u64 = members
                        .iter()
                        .map(|&d| 1 + 2 * table.u_count(d).unwrap_or(0))
                        .sum();
                    let v = table.count_v_prime(0, x)?;
                    average_with_identity(x, members.len() as u64, s, v)
                })
                .collect::<Result<_>>()?
        }
        SDensity | C1Count => {
            let family = if kind == SDensity { Family::S } else { Family::C1 };
            let s = enumerate_family(family, max, &direct)?;
            grid.iter()
                .map(|&x| {
                    int(count_where(&s, |a| {
                        if kind == SDensity {
                            a.abs() <= x
                        } else {
                            432 * (a as i128) * (a as i128) <= x as i128
                        }
                    }))
                })
                .collect()
        }
        TDensity => {
            let t = enumerate_family(Family::T, max, &direct)?;
            grid.iter().map(|&x| int(count_where(&t, |a| a <= x))).collect()
        }
        TOverS => {
            let t = enumerate_family(Family::T, max, &direct)?;
            let s = enumerate_family(Family::S, max, &direct)?;
            grid.iter()
                .map(|&x| {
                    quotient(count_where(&t, |a| a <= x), count_where(&s, |a| a.abs() <= x), "S", x)
                })
                .collect::<Result<_>>()?
        }
        NCount => {
            let ranks = TabulatedRanks::build(max, 0)?;
            let n = enumerate_family(Family::N, max, &ranks)?;
            grid.iter().map(|&x| int(count_where(&n, |d| -d < x))).collect()
        }
        TPrime | SelmerDensity => {
            let ranks = TabulatedRanks::build(3 * max / 4 + 2, max / 16 + 2)?;
            let tp = enumerate_family(Family::TPrime, max, &ranks)?;
            if kind == TPrime {
                grid.iter().map(|&x| int(count_where(&tp, |a| a <= x))).collect()
            } else {
                let s = enumerate_family(Family::S, max, &direct)?;
                grid.iter()
                    .map(|&x| {
                        quotient(count_where(&tp, |a| a <= x), count_where(&s, |a| a.abs() <= x), "S", x)
                    })
                    .collect::<Result<_>>()?
            }
        }
    };
    Ok(grid
        .iter()
        .zip(observed)
        .map(|(&x, observed)| ExperimentRow {
            x,
            observed,
            predicted: kind.predicted(x),
        })
        .collect())
}

/// `s / n`, after checking `s = n + 2 v`: the per-discriminant sum of
/// `h3*` against the form count.
fn average_with_identity(x: i64, n: u64, s: u64, v: u64) -> Result<BigRational> {
    if s != n + 2 * v {
        return Err(Error::Inconsistent(format!(
            "at {x}: sum of h3* is {s} but 1 + 2 N(V') over {n} discriminants gives {}",
            n + 2 * v
        )));
    }
    let avg = quotient(s, n, "M", x)?;
    debug_assert!(!avg.is_zero());
    Ok(avg)
}
