//! Quadratic discriminants, an imaginary class group oracle built on binary
//! quadratic forms, 3-torsion counts through cubic form counting, and the
//! 3-rank of `Q(√-3, √m)` from its two non-trivial quadratic subfields.

mod quadratic;
mod ranks;
mod tables;

use std::fmt;

use crate::arith;
use crate::error::{invalid, Result};

pub use quadratic::{
    class_group_imaginary, h3_star_oracle, h3_star_oracle_batch, reduced_forms, ClassGroup,
    QuadForm, ORACLE_MAX_ABS_DISC,
};
pub use ranks::{
    hergoltz_rank_l, r3, rank_l, scholz_bracket, DirectRanks, RankSource, RankValue,
    TabulatedRanks,
};
pub use tables::{h3_star_via_forms, CubicFormTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadDiscriminant(i64);

impl QuadDiscriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(invalid(format!("{value} is not a quadratic discriminant")));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> i64 {
        self.0
    }

    pub fn is_fundamental(&self) -> bool {
        let d = self.0;
        if d.rem_euclid(4) == 1 {
            d != 1 && arith::is_squarefree(d)
        } else {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && arith::is_squarefree(m)
        }
    }

    pub fn is_odd(&self) -> bool {
        self.0 % 2 != 0
    }
}

impl fmt::Display for QuadDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Discriminant of `Q(√n)`.
pub fn fundamental_discriminant(n: i64) -> Result<QuadDiscriminant> {
    if n == 0 || arith::is_square(n) {
        return Err(invalid(format!("{n} is a square")));
    }
    let m = arith::squarefree_kernel(n);
    QuadDiscriminant::new(if m.rem_euclid(4) == 1 { m } else { 4 * m })
}

/// Fundamental discriminants `Δ` with `0 < ±Δ < bound`, ascending in `|Δ|`.
pub fn fundamental_discriminants(sign: i64, bound: i64) -> Vec<i64> {
    (1..bound)
        .map(|n| sign.signum() * n)
        .filter(|&d| {
            QuadDiscriminant::new(d)
                .map(|q| q.is_fundamental())
                .unwrap_or(false)
        })
        .collect()
}
