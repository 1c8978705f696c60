//! Per-discriminant counts of cubic form classes, the cubic side of the
//! count `h3*(Δ) = 1 + 2 · #{classes in U with discriminant Δ}`.

use super::QuadDiscriminant;
use crate::arith;
use crate::error::{invalid, Result};
use crate::forms::{self, ClassEnumerationRequest};
use crate::localconditions::FormCondition;

/// `#Cl(Q(√Δ))[3]` for odd fundamental `Δ` of either sign.
pub fn h3_star_via_forms(disc: QuadDiscriminant) -> Result<u64> {
    let d = disc.value();
    if !disc.is_fundamental() || !disc.is_odd() {
        return Err(invalid(format!("{d} is not an odd fundamental discriminant")));
    }
    Ok(1 + 2 * forms::count_classes(d - 1, d + 1, Some(FormCondition::U))?)
}

/// Class counts per discriminant over `(-neg_bound, 0) ∪ (0, pos_bound)`.
#[derive(Clone, Debug)]
pub struct CubicFormTable {
    neg_bound: i64,
    pos_bound: i64,
    // Index |D|.
    u_neg: Vec<u16>,
    u_pos: Vec<u16>,
    v_prime_neg: Vec<u16>,
    v_prime_pos: Vec<u16>,
}

impl CubicFormTable {
    pub fn build(neg_bound: i64, pos_bound: i64) -> Result<Self> {
        if neg_bound < 0 || pos_bound < 0 {
            return Err(invalid("table bounds must be nonnegative"));
        }
        let mut table = Self {
            neg_bound,
            pos_bound,
            u_neg: vec![0; neg_bound.max(1) as usize],
            u_pos: vec![0; pos_bound.max(1) as usize],
            v_prime_neg: vec![0; neg_bound.max(1) as usize],
            v_prime_pos: vec![0; pos_bound.max(1) as usize],
        };
        let lo = -neg_bound.max(1);
        let hi = pos_bound.max(1);
        let req = ClassEnumerationRequest::new(lo, hi)?;
        forms::for_each_reduced_quads(&req, |q, disc| {
            let factors = arith::factor(disc.unsigned_abs() as u64);
            let idx = disc.unsigned_abs() as usize;
            let (u, vp) = if disc < 0 {
                (&mut table.u_neg, &mut table.v_prime_neg)
            } else {
                (&mut table.u_pos, &mut table.v_prime_pos)
            };
            if FormCondition::U.holds_small(&q, disc, &factors) {
                u[idx] += 1;
            }
            if FormCondition::VPrime.holds_small(&q, disc, &factors) {
                vp[idx] += 1;
            }
        })?;
        Ok(table)
    }

    fn slot<'a>(&self, d: i64, neg: &'a [u16], pos: &'a [u16]) -> Option<&'a u16> {
        if d < 0 && -d < self.neg_bound {
            neg.get((-d) as usize)
        } else if d > 0 && d < self.pos_bound {
            pos.get(d as usize)
        } else {
            None
        }
    }

    /// Classes in `U` with discriminant exactly `d`, if covered.
    pub fn u_count(&self, d: i64) -> Option<u64> {
        self.slot(d, &self.u_neg, &self.u_pos).map(|&n| n as u64)
    }

    /// Classes in `V'` with discriminant exactly `d`, if covered.
    pub fn v_prime_count(&self, d: i64) -> Option<u64> {
        self.slot(d, &self.v_prime_neg, &self.v_prime_pos).map(|&n| n as u64)
    }

    /// `N(ξ, η, U)` for a window inside the table.
    pub fn count_u(&self, xi: i64, eta: i64) -> Result<u64> {
        self.window_sum(xi, eta, |d| self.u_count(d))
    }

    /// `N(ξ, η, V')` for a window inside the table.
    pub fn count_v_prime(&self, xi: i64, eta: i64) -> Result<u64> {
        self.window_sum(xi, eta, |d| self.v_prime_count(d))
    }

    fn window_sum(&self, xi: i64, eta: i64, get: impl Fn(i64) -> Option<u64>) -> Result<u64> {
        if xi < -self.neg_bound || eta > self.pos_bound || xi >= eta {
            return Err(invalid(format!("window ({xi}, {eta}) not covered by the table")));
        }
        Ok(((xi + 1)..eta).filter(|&d| d != 0).map(|d| get(d).unwrap_or(0)).sum())
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.neg_bound, self.pos_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(d: i64) -> QuadDiscriminant {
        QuadDiscriminant::new(d).unwrap()
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(h3_star_via_forms(qd(-23)).unwrap(), 3);
        assert_eq!(h3_star_via_forms(qd(-3)).unwrap(), 1);
        assert_eq!(h3_star_via_forms(qd(-15)).unwrap(), 1);
        assert_eq!(h3_star_via_forms(qd(5)).unwrap(), 1);
        assert_eq!(h3_star_via_forms(qd(229)).unwrap(), 3);
        assert_eq!(h3_star_via_forms(qd(-3299)).unwrap(), 9);
        assert!(h3_star_via_forms(qd(-20)).is_err());
        assert!(h3_star_via_forms(qd(-27)).is_err());
    }

    #[test]
    fn table_matches_direct_counts() {
        let table = CubicFormTable::build(3000, 3000).unwrap();
        for d in [-23i64, -31, -44, -59, -83, -2999, 49, 81, 148, 229, 257, 2597] {
            let direct = forms::count_classes(d - 1, d + 1, Some(FormCondition::U)).unwrap();
            assert_eq!(table.u_count(d), Some(direct), "{d}");
        }
        assert_eq!(
            table.count_v_prime(-3000, 0).unwrap(),
            forms::count_classes(-3000, 0, Some(FormCondition::VPrime)).unwrap()
        );
        assert_eq!(table.count_u(0, 1000).unwrap(), 27);
        assert_eq!(table.count_u(-1000, 0).unwrap(), 127);
        assert!(table.count_u(-4000, 0).is_err());
    }
}
