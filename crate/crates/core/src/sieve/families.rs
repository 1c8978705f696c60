use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith;
use crate::classgroups::{h3_star_oracle_batch, r3, QuadDiscriminant, RankSource};
use crate::error::{invalid, Result};
use crate::selmer::{in_t, selmer_bound_type_i, BoundMode, SelmerBoundResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Sixth-power-free `a` with `0 < |a| ≤ Y`.
    S,
    T,
    /// Members of `T` whose `φ`-Selmer bound is certified at most 1.
    TPrime,
    /// Odd fundamental `Δ ∈ (-X, 0)` with `3 | Δ`, listed by `|Δ|`.
    MMinus,
    MPlus,
    /// `Δ ∈ M⁻` with `r3(Δ) = 0`.
    N,
    /// Sixth-power-free `a` with `432 a^2 ≤ X`.
    C1,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::S,
        Family::T,
        Family::TPrime,
        Family::MMinus,
        Family::MPlus,
        Family::N,
        Family::C1,
    ];

    fn name(self) -> &'static str {
        match self {
            Family::S => "S",
            Family::T => "T",
            Family::TPrime => "Tprime",
            Family::MMinus => "Mminus",
            Family::MPlus => "Mplus",
            Family::N => "N",
            Family::C1 => "C1",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown family {s:?}")))
    }
}

fn sixth_power_free_up_to(y: i64) -> Vec<i64> {
    let table = arith::power_free_table(y as u64, 6);
    let pos: Vec<i64> = (1..=y).filter(|&a| table[a as usize]).collect();
    pos.iter().rev().map(|a| -a).chain(pos.iter().copied()).collect()
}

fn t_up_to(y: i64) -> Vec<i64> {
    let sf = arith::power_free_table((y / 16).max(0) as u64, 2);
    (1..=y / 16)
        .filter(|&a| a % 2 == 1 && a % 3 != 0 && a != 1 && sf[a as usize])
        .map(|a| 16 * a)
        .collect()
}

/// Odd fundamental discriminants divisible by 3 with `0 < sign · Δ < x`.
fn m_family(sign: i64, x: i64) -> Vec<i64> {
    let sf = arith::power_free_table((x - 1).max(0) as u64, 2);
    (1..x)
        .filter(|&n| n % 3 == 0 && sf[n as usize])
        .map(|n| sign * n)
        .filter(|d| d.rem_euclid(4) == 1)
        .collect()
}

/// `φ`-Selmer bound of `a ∈ T` certified at most 1, i.e. the pair `(0, 1)`.
pub fn is_certified_t_prime(a: i64, ranks: &dyn RankSource) -> Result<bool> {
    if !in_t(a, a) {
        return Ok(false);
    }
    let b = selmer_bound_type_i(a, ranks)?;
    Ok(b.mode == BoundMode::ExactPair && b.upper <= 1)
}

pub fn enumerate_family(family: Family, bound: i64, ranks: &dyn RankSource) -> Result<Vec<i64>> {
    if bound < 1 {
        return Err(invalid(format!("bound {bound} < 1")));
    }
    Ok(match family {
        Family::S => sixth_power_free_up_to(bound),
        Family::T => t_up_to(bound),
        Family::TPrime => {
            let flags = t_up_to(bound)
                .into_par_iter()
                .map(|a| Ok((a, is_certified_t_prime(a, ranks)?)))
                .collect::<Result<Vec<_>>>()?;
            flags.into_iter().filter(|&(_, ok)| ok).map(|(a, _)| a).collect()
        }
        Family::MMinus => m_family(-1, bound),
        Family::MPlus => m_family(1, bound),
        Family::N => {
            let flags = m_family(-1, bound)
                .into_par_iter()
                .map(|d| Ok((d, r3(QuadDiscriminant::new(d)?, ranks)? == 0)))
                .collect::<Result<Vec<_>>>()?;
            flags.into_iter().filter(|&(_, ok)| ok).map(|(d, _)| d).collect()
        }
        Family::C1 => {
            let y = arith::isqrt(bound as u64 / 432) as i64;
            if y == 0 {
                Vec::new()
            } else {
                sixth_power_free_up_to(y)
            }
        }
    })
}

pub fn count_family(family: Family, bound: i64, ranks: &dyn RankSource) -> Result<u64> {
    Ok(enumerate_family(family, bound, ranks)?.len() as u64)
}

/// `(#M⁻(X), Σ_{Δ ∈ M⁻(X)} h3*(Δ))` for each `x` in `grid`, from one batch of
/// class group computations.
pub fn m_minus_h3_sums(grid: &[i64]) -> Result<Vec<(u64, u64)>> {
    let Some(&max) = grid.iter().max() else { return Ok(Vec::new()) };
    let discs = m_family(-1, max);
    let h = h3_star_oracle_batch(&discs)?;
    Ok(grid
        .iter()
        .map(|&x| {
            discs
                .iter()
                .zip(&h)
                .filter(|(d, _)| -**d < x)
                .fold((0, 0), |(n, s), (_, h)| (n + 1, s + h))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IotaImage {
    Certified { a: i64 },
    /// `Δ₂ = -3` lands on `a = 16`, a square in `K` and outside `T`.
    Boundary { a: i64 },
    Uncertified { a: i64, bound: SelmerBoundResult },
}

/// `Δ₂ ↦ 16 |Δ₂| / 3` from `N(3Y/16)` into `T'(Y)`.
pub fn iota_injection(delta2: i64, ranks: &dyn RankSource) -> Result<IotaImage> {
    if delta2 >= 0 || delta2 % 3 != 0 {
        return Err(invalid(format!("{delta2} is not a negative discriminant divisible by 3")));
    }
    let disc = QuadDiscriminant::new(delta2)?;
    if !disc.is_fundamental() || !disc.is_odd() {
        return Err(invalid(format!("{delta2} is not an odd fundamental discriminant")));
    }
    if r3(disc, ranks)? != 0 {
        return Err(invalid(format!("r3({delta2}) > 0")));
    }
    let a = 16 * (-delta2 / 3);
    if a == 16 {
        return Ok(IotaImage::Boundary { a });
    }
    let bound = selmer_bound_type_i(a, ranks)?;
    if in_t(a, a) && bound.mode == BoundMode::ExactPair && (bound.lower, bound.upper) == (0, 1) {
        Ok(IotaImage::Certified { a })
    } else {
        Ok(IotaImage::Uncertified { a, bound })
    }
}
