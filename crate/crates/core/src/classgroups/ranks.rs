//! 3-ranks of quadratic fields and of `L = Q(√-3, √m)`.
//!
//! Imaginary fields go through the class group oracle. Real fields with odd
//! discriminant go through cubic form counts; the rest only get the Scholz
//! bracket `r(Q(√D)) ∈ {t - 1, t}` with `t = r(Q(√-3D))`.

use std::collections::HashMap;
use std::sync::Mutex;

use super::{
    fundamental_discriminant, fundamental_discriminants, h3_star_oracle, h3_star_oracle_batch,
    h3_star_via_forms, CubicFormTable, QuadDiscriminant,
};
use crate::arith;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankValue {
    Exact(u32),
    Bracket { lower: u32, upper: u32 },
}

impl RankValue {
    pub fn lower(&self) -> u32 {
        match *self {
            RankValue::Exact(r) => r,
            RankValue::Bracket { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> u32 {
        match *self {
            RankValue::Exact(r) => r,
            RankValue::Bracket { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        (self.lower() == self.upper()).then_some(self.lower())
    }

    fn plus(self, other: RankValue) -> RankValue {
        let (lower, upper) = (self.lower() + other.lower(), self.upper() + other.upper());
        if lower == upper {
            RankValue::Exact(lower)
        } else {
            RankValue::Bracket { lower, upper }
        }
    }
}

/// Supplies `h3*(Δ)` for fundamental discriminants.
pub trait RankSource: Sync {
    fn h3_star(&self, disc: QuadDiscriminant) -> Result<u64>;
}

fn check_fundamental(disc: QuadDiscriminant) -> Result<()> {
    if disc.is_fundamental() {
        Ok(())
    } else {
        Err(invalid(format!("{disc} is not fundamental")))
    }
}

fn unsupported(disc: QuadDiscriminant) -> Error {
    Error::Unsupported(format!(
        "3-rank of the real quadratic field of even discriminant {disc}"
    ))
}

/// Computes each value on demand and remembers it.
#[derive(Default)]
pub struct DirectRanks {
    memo: Mutex<HashMap<i64, u64>>,
}

impl DirectRanks {
    pub fn new() -> Self {
        Self::default()
    }
}

impl RankSource for DirectRanks {
    fn h3_star(&self, disc: QuadDiscriminant) -> Result<u64> {
        check_fundamental(disc)?;
        if let Some(&h) = self.memo.lock().unwrap().get(&disc.value()) {
            return Ok(h);
        }
        let h = if disc.value() < 0 {
            h3_star_oracle(disc)?
        } else if disc.is_odd() {
            h3_star_via_forms(disc)?
        } else {
            return Err(unsupported(disc));
        };
        self.memo.lock().unwrap().insert(disc.value(), h);
        Ok(h)
    }
}

/// Precomputed tables over `(-neg_bound, 0)` and `(0, pos_bound)`, falling
/// back to direct computation outside them.
pub struct TabulatedRanks {
    neg_bound: i64,
    pos_bound: i64,
    neg: Vec<u32>,
    pos: Option<CubicFormTable>,
    fallback: DirectRanks,
}

impl TabulatedRanks {
    pub fn build(neg_bound: i64, pos_bound: i64) -> Result<Self> {
        let discs = fundamental_discriminants(-1, neg_bound.max(0));
        let values = h3_star_oracle_batch(&discs)?;
        let mut neg = vec![0u32; neg_bound.max(1) as usize];
        for (d, h) in discs.iter().zip(values) {
            neg[(-d) as usize] = h as u32;
        }
        let pos = if pos_bound > 1 {
            Some(CubicFormTable::build(0, pos_bound)?)
        } else {
            None
        };
        Ok(Self {
            neg_bound,
            pos_bound,
            neg,
            pos,
            fallback: DirectRanks::new(),
        })
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.neg_bound, self.pos_bound)
    }
}

impl RankSource for TabulatedRanks {
    fn h3_star(&self, disc: QuadDiscriminant) -> Result<u64> {
        check_fundamental(disc)?;
        let d = disc.value();
        if d < 0 && -d < self.neg_bound {
            return Ok(self.neg[(-d) as usize] as u64);
        }
        if d > 0 && d < self.pos_bound && disc.is_odd() {
            let n = self.pos.as_ref().and_then(|t| t.u_count(d)).unwrap_or(0);
            return Ok(1 + 2 * n);
        }
        self.fallback.h3_star(disc)
    }
}

/// `log_3 h3*(Δ)`; real fields need an odd discriminant.
pub fn r3(disc: QuadDiscriminant, source: &dyn RankSource) -> Result<u32> {
    let h = source.h3_star(disc)?;
    let mut r = 0;
    let mut m = h;
    while m > 1 {
        if m % 3 != 0 {
            return Err(invalid(format!("h3* = {h} at {disc} is not a power of 3")));
        }
        m /= 3;
        r += 1;
    }
    Ok(r)
}

/// `(max(0, t - 1), t)` bracketing `r3(Q(√a'))`, with `t = r3(Q(√-3a'))`.
pub fn scholz_bracket(a_prime: i64, source: &dyn RankSource) -> Result<(u32, u32)> {
    if a_prime <= 0 || !arith::is_squarefree(a_prime) {
        return Err(invalid(format!("{a_prime} is not a positive squarefree integer")));
    }
    let t = r3(fundamental_discriminant(-3 * a_prime)?, source)?;
    Ok((t.saturating_sub(1), t))
}

/// `r3(L)` for `L = Q(√-3, √m)`: the sum over the two quadratic subfields
/// other than `Q(√-3)`.
pub fn rank_l(m: i64, source: &dyn RankSource) -> Result<RankValue> {
    if m == 0 || !arith::is_squarefree(m) {
        return Err(invalid(format!("{m} is not squarefree")));
    }
    if m == 1 || m == -3 {
        return Err(invalid(format!("L = Q(√-3, √{m}) is Q(√-3) itself")));
    }
    let partner = arith::squarefree_kernel(-3 * m);
    let (real, imag) = if m > 0 { (m, partner) } else { (partner, m) };
    let imag_disc = fundamental_discriminant(imag)?;
    let real_disc = fundamental_discriminant(real)?;
    let t = r3(imag_disc, source)?;
    let real_rank = if real_disc.is_odd() {
        RankValue::Exact(r3(real_disc, source)?)
    } else if t == 0 {
        RankValue::Exact(0)
    } else {
        RankValue::Bracket {
            lower: t - 1,
            upper: t,
        }
    };
    Ok(RankValue::Exact(t).plus(real_rank))
}

/// `r3(L_a)` for `a = 16 a'` via `r3(Q(√-3a')) + r3(Q(√a'))`.
pub fn hergoltz_rank_l(a_prime: i64, source: &dyn RankSource) -> Result<RankValue> {
    if a_prime <= 1 || !arith::is_squarefree(a_prime) || a_prime % 2 == 0 || a_prime % 3 == 0 {
        return Err(invalid(format!(
            "{a_prime} is not a squarefree integer > 1 coprime to 6"
        )));
    }
    rank_l(a_prime, source)
}
