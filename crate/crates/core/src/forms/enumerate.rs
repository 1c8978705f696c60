//! One representative per class of irreducible primitive forms with
//! discriminant in an open window.
//!
//! Negative discriminants: the representative has `a > 0`, `0 < Re w < 1/2`
//! and `|w| > 1` for the complex root `w`. This forces
//! `a <= (16 X / 27)^{1/4}` and, with `R = (X / (3 a^4))^{1/4}`,
//! `b` in `[-a(R + 3/2) - 1, aR + 1]`, `c/a` in `[1 - R, R^2 + R + 3/4]`,
//! `|d| <= a (R + 1/2)(R^2 + 1/4)`. The `d` range is then cut by the
//! discriminant quadratic and by `ad > bc`.
//!
//! Positive discriminants: the Hessian `(P, Q, R)` is reduced, so
//! `P <= sqrt(D)`, `a <= (8/27)^{1/2} D^{1/4}`, and with
//! `rho = 1/2 + sqrt(2P)/a`: `|b| <= 3 a rho`, `|c| <= 3 a rho^2`.
//! `b` and `c` then fix `P`, and `|Q| <= P` fixes a short `d` range.

use num_integer::Integer;

use super::reduce::{is_canonical_positive, is_reduced_negative};
use super::small::Quad;
use super::BinaryCubicForm;
use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::localconditions::FormCondition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Largest admissible `|discMin|` and `|discMax|`.
    pub max_abs_disc: i64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_abs_disc: 10_000_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEnumerationRequest {
    pub disc_min: i64,
    pub disc_max: i64,
    pub filter: Option<FormCondition>,
    /// Inclusive range of leading coefficients, for partitioned runs.
    pub leading: Option<(i64, i64)>,
    pub limits: EnumerationLimits,
}

impl ClassEnumerationRequest {
    pub fn new(disc_min: i64, disc_max: i64) -> Result<Self> {
        if disc_min >= disc_max {
            return Err(invalid(format!(
                "empty discriminant window ({disc_min}, {disc_max})"
            )));
        }
        Ok(Self {
            disc_min,
            disc_max,
            filter: None,
            leading: None,
            limits: EnumerationLimits::default(),
        })
    }

    pub fn with_filter(mut self, filter: FormCondition) -> Self {
        self.filter = Some(filter);
        self
    }

    pub fn with_leading(mut self, lo: i64, hi: i64) -> Self {
        self.leading = Some((lo, hi));
        self
    }

    pub fn with_limits(mut self, limits: EnumerationLimits) -> Self {
        self.limits = limits;
        self
    }

    fn check(&self) -> Result<()> {
        if self.disc_min >= self.disc_max {
            return Err(invalid("discMin must be below discMax"));
        }
        let widest = self.disc_min.unsigned_abs().max(self.disc_max.unsigned_abs());
        if widest > self.limits.max_abs_disc as u64 {
            return Err(Error::ResourceLimit(format!(
                "discriminant bound {widest} exceeds the enumeration budget {}",
                self.limits.max_abs_disc
            )));
        }
        Ok(())
    }
}

pub fn for_each_class(
    req: &ClassEnumerationRequest,
    mut visit: impl FnMut(BinaryCubicForm),
) -> Result<()> {
    for_each_quad(req, |q, _| visit(q.to_form()))
}

pub fn enumerate_classes(req: &ClassEnumerationRequest) -> Result<Vec<BinaryCubicForm>> {
    let mut out = Vec::new();
    for_each_class(req, |f| out.push(f))?;
    Ok(out)
}

/// `N(ξ, η, S)`: classes with discriminant in `(ξ, η)` satisfying the filter.
pub fn count_classes(xi: i64, eta: i64, filter: Option<FormCondition>) -> Result<u64> {
    let mut req = ClassEnumerationRequest::new(xi, eta)?;
    req.filter = filter;
    let mut n = 0u64;
    for_each_quad(&req, |_, _| n += 1)?;
    Ok(n)
}

/// Enumeration with the request's filter applied.
pub(crate) fn for_each_quad(
    req: &ClassEnumerationRequest,
    mut visit: impl FnMut(Quad, i128),
) -> Result<()> {
    let filter = req.filter;
    for_each_reduced(req, |q, disc| {
        let keep = match filter {
            None => true,
            Some(cond) => {
                cond.holds_small(&q, disc, &arith::factor(disc.unsigned_abs() as u64))
            }
        };
        if keep {
            visit(q, disc);
        }
    })
}

/// Enumeration ignoring the request's filter.
pub(crate) fn for_each_reduced(
    req: &ClassEnumerationRequest,
    mut visit: impl FnMut(Quad, i128),
) -> Result<()> {
    req.check()?;
    let (a_lo, a_hi) = req.leading.unwrap_or((1, i64::MAX));
    if req.disc_min < 0 {
        let above = (-req.disc_max.min(0)) as i128;
        let below = -(req.disc_min as i128);
        negative(above, below, a_lo, a_hi, &mut visit);
    }
    if req.disc_max > 0 {
        positive(req.disc_min.max(0) as i128, req.disc_max as i128, a_lo, a_hi, &mut visit);
    }
    Ok(())
}

/// Classes with `above < |D| < below`, `D < 0`.
fn negative(above: i128, below: i128, a_lo: i64, a_hi: i64, visit: &mut impl FnMut(Quad, i128)) {
    if below <= above + 1 {
        return;
    }
    let x = below as f64;
    let a_max = (16.0 * x / 27.0).powf(0.25).floor() as i64 + 1;
    for a in a_lo.max(1)..=a_hi.min(a_max) {
        let af = a as f64;
        let r = (x / (3.0 * af.powi(4))).powf(0.25);
        let b_lo = (-(af * (r + 1.5)) - 1.0).floor() as i64 - 1;
        let b_hi = (af * r + 1.0).ceil() as i64 + 1;
        let c_lo = (af * (1.0 - r)).floor() as i64 - 1;
        let c_hi = (af * (r * r + r + 0.75)).ceil() as i64 + 1;
        let d_abs = (af * (r + 0.5) * (r * r + 0.25)).ceil() as i64 + 1;
        let qa = 27.0 * af * af;
        for b in b_lo..=b_hi {
            let bf = b as f64;
            for c in c_lo..=c_hi {
                let cf = c as f64;
                // D(d) = -qa d^2 + qb d + qc0; need D(d) > -below.
                let qb = 18.0 * af * bf * cf - 4.0 * bf * bf * bf;
                let qc = bf * bf * cf * cf - 4.0 * af * cf * cf * cf + x;
                let disc = qb * qb + 4.0 * qa * qc;
                if disc < 0.0 {
                    continue;
                }
                let s = disc.sqrt();
                let slack = 1.0 + 1e-9 * (qb.abs() + s) / qa;
                let lo = ((qb - s) / (2.0 * qa) - slack).floor() as i64;
                let hi = ((qb + s) / (2.0 * qa) + slack).ceil() as i64;
                // Re w > 0 iff ad > bc.
                let d_first = lo.max(-d_abs).max(Integer::div_floor(&(b * c), &a) + 1);
                let d_last = hi.min(d_abs);
                for d in d_first..=d_last {
                    let q = Quad::new(a, b, c, d);
                    let disc = q.disc();
                    if disc >= 0 || -disc >= below || -disc <= above {
                        continue;
                    }
                    if is_reduced_negative(&q) && q.is_primitive() && q.is_irreducible() {
                        visit(q, disc);
                    }
                }
            }
        }
    }
}

/// Classes with `above < D < below`, `D > 0`.
fn positive(above: i128, below: i128, a_lo: i64, a_hi: i64, visit: &mut impl FnMut(Quad, i128)) {
    if below <= above + 1 || below <= 1 {
        return;
    }
    let p_max = arith::isqrt((below - 1) as u64) as i64;
    let a_max = ((8.0f64 / 27.0).sqrt() * (below as f64).powf(0.25)).floor() as i64 + 1;
    for a in a_lo.max(1)..=a_hi.min(a_max) {
        let af = a as f64;
        let rho = 0.5 + (2.0 * p_max as f64).sqrt() / af;
        let b_max = (3.0 * af * rho).ceil() as i64 + 1;
        let c_abs = (3.0 * af * rho * rho).ceil() as i64 + 1;
        for b in -b_max..=b_max {
            // 1 <= P = b^2 - 3ac <= p_max.
            let c_first = Integer::div_ceil(&(b * b - p_max), &(3 * a)).max(-c_abs);
            let c_last = Integer::div_floor(&(b * b - 1), &(3 * a)).min(c_abs);
            for c in c_first..=c_last {
                let p = b * b - 3 * a * c;
                // |Q| = |bc - 9ad| <= P.
                let d_first = Integer::div_ceil(&(b * c - p), &(9 * a));
                let d_last = Integer::div_floor(&(b * c + p), &(9 * a));
                for d in d_first..=d_last {
                    if c * c - 3 * b * d < p {
                        continue;
                    }
                    let q = Quad::new(a, b, c, d);
                    let disc = q.disc();
                    if disc <= above || disc >= below {
                        continue;
                    }
                    if is_canonical_positive(&q) && q.is_primitive() && q.is_irreducible() {
                        visit(q, disc);
                    }
                }
            }
        }
    }
}
