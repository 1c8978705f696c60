//! Congruence densities, the integer families built from them, and the
//! experiment kernels comparing counts with their predicted constants.

mod experiments;
mod families;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use experiments::{parse_grid, run_experiment, ExperimentKind, ExperimentRow, GRID_MAX};
pub use families::{
    count_family, enumerate_family, iota_injection, is_certified_t_prime, m_minus_h3_sums, Family,
    IotaImage,
};

use crate::arith;
use crate::constants::zeta;
use crate::error::{invalid, Error, Result};

/// Allowed residues modulo `p^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConditionSpec {
    p: u64,
    exponent: u32,
    allowed: Vec<u64>,
}

impl LocalConditionSpec {
    pub fn new(p: u64, exponent: u32, allowed: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !arith::is_prime(p) || exponent == 0 {
            return Err(invalid(format!("bad modulus {p}^{exponent}")));
        }
        let m = p.checked_pow(exponent).ok_or_else(|| invalid("modulus overflows"))?;
        let mut allowed: Vec<u64> = allowed.into_iter().collect();
        allowed.sort_unstable();
        allowed.dedup();
        if allowed.is_empty() || allowed.iter().any(|&r| r >= m) {
            return Err(invalid(format!("residues must be a nonempty subset of Z/{m}")));
        }
        Ok(Self { p, exponent, allowed })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.exponent)
    }

    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.allowed.len()), BigInt::from(self.modulus()))
    }

    pub fn admits(&self, n: i64) -> bool {
        let r = n.rem_euclid(self.modulus() as i64) as u64;
        self.allowed.binary_search(&r).is_ok()
    }
}

/// `p^k ∤ n` for every prime `p ≥ from_prime` without an explicit condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerFreeTemplate {
    pub k: u32,
    pub from_prime: u64,
}

/// Integers in `[c X, d X]`, zero excluded, meeting every local condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveSystem {
    c: i64,
    d: i64,
    conditions: Vec<LocalConditionSpec>,
    template: Option<PowerFreeTemplate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityPrediction {
    /// `(d - c) Π_{p ≤ P} 𝔡(Φ_p)`.
    pub truncated: BigRational,
    /// Bracket for the full product.
    pub lower: BigRational,
    pub upper: BigRational,
    /// Full product through `ζ(k)` when a template is present.
    pub closed_form: Option<BigRational>,
}

impl SieveSystem {
    pub fn new(c: i64, d: i64) -> Result<Self> {
        if c >= d {
            return Err(invalid(format!("empty window ({c}, {d})")));
        }
        Ok(Self {
            c,
            d,
            conditions: Vec::new(),
            template: None,
        })
    }

    pub fn with_condition(mut self, cond: LocalConditionSpec) -> Result<Self> {
        if self.conditions.iter().any(|c| c.p == cond.p) {
            return Err(invalid(format!("two conditions at p = {}", cond.p)));
        }
        self.conditions.push(cond);
        self.conditions.sort_by_key(|c| c.p);
        Ok(self)
    }

    pub fn with_template(mut self, template: PowerFreeTemplate) -> Result<Self> {
        if template.k < 2 {
            return Err(Error::Divergent(format!(
                "{}-th power free template has Σ(1 - 𝔡) = Σ 1/p",
                template.k
            )));
        }
        self.template = Some(template);
        Ok(self)
    }

    /// `k`-th power free integers of either sign: the family `S` for `k = 6`.
    pub fn power_free(k: u32, c: i64, d: i64) -> Result<Self> {
        Self::new(c, d)?.with_template(PowerFreeTemplate { k, from_prime: 2 })
    }

    /// `a ≡ 16 (mod 32)`, `3 ∤ a`, and `p^2 ∤ a` for `p ≥ 5`, on `(0, Y)`.
    pub fn t_conditions() -> Self {
        Self::new(0, 1)
            .and_then(|s| s.with_condition(LocalConditionSpec::new(2, 5, [16])?))
            .and_then(|s| s.with_condition(LocalConditionSpec::new(3, 1, [1, 2])?))
            .and_then(|s| s.with_template(PowerFreeTemplate { k: 2, from_prime: 5 }))
            .expect("valid system")
    }

    fn template_applies(&self, p: u64) -> Option<u32> {
        let t = self.template?;
        (p >= t.from_prime && !self.conditions.iter().any(|c| c.p == p)).then_some(t.k)
    }

    pub fn predicted_density(&self, truncation: u64) -> Result<DensityPrediction> {
        let width = BigRational::from_integer(BigInt::from(self.d - self.c));
        let explicit: BigRational = self
            .conditions
            .iter()
            .fold(BigRational::one(), |acc, c| acc * c.density());
        let Some(t) = self.template else {
            let v = width * explicit;
            return Ok(DensityPrediction {
                truncated: v.clone(),
                lower: v.clone(),
                upper: v,
                closed_form: None,
            });
        };
        let local = |p: u64| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p).pow(t.k));
        let mut truncated = &width * &explicit;
        for p in arith::primes_up_to(truncation) {
            if self.template_applies(p).is_some() {
                truncated *= local(p);
            }
        }
        // Π_{p > P} (1 - p^-k) ≥ 1 - Σ_{n > P} n^-k ≥ 1 - P^(1-k) / (k - 1).
        let p = truncation.max(1);
        let tail = BigRational::new(BigInt::one(), BigInt::from(p).pow(t.k - 1) * BigInt::from(t.k - 1));
        let lower = if tail < BigRational::one() {
            &truncated * (BigRational::one() - tail)
        } else {
            BigRational::zero()
        };
        // Π_{p ≥ p0, no explicit condition} (1 - p^-k) = ζ(k)^-1 / Π_{other p} (1 - p^-k).
        let mut excluded = BigRational::one();
        for p in arith::primes_up_to(t.from_prime.saturating_sub(1)) {
            excluded *= local(p);
        }
        for c in &self.conditions {
            if c.p >= t.from_prime {
                excluded *= local(c.p);
            }
        }
        let closed = width * explicit / (zeta(t.k) * excluded);
        Ok(DensityPrediction {
            upper: truncated.clone(),
            truncated,
            lower,
            closed_form: Some(closed),
        })
    }

    pub fn admits(&self, n: i64) -> bool {
        if n == 0 || !self.conditions.iter().all(|c| c.admits(n)) {
            return false;
        }
        let Some(t) = self.template else { return true };
        arith::factor(n.unsigned_abs())
            .iter()
            .all(|&(p, e)| e < t.k || self.template_applies(p).is_none())
    }

    /// Members of `[c x, d x] \ {0}`, sieving template primes by direct
    /// divisibility.
    pub fn count(&self, x: u64) -> Result<u64> {
        let reach = self.c.unsigned_abs().max(self.d.unsigned_abs()) * x;
        if reach > 1 << 31 {
            return Err(Error::ResourceLimit(format!("window of size {reach}")));
        }
        let mut free = vec![true; reach as usize + 1];
        if let Some(t) = self.template {
            let root = (reach as f64).powf(1.0 / t.k as f64) as u64 + 1;
            for p in arith::primes_up_to(root) {
                if self.template_applies(p).is_none() {
                    continue;
                }
                let Some(pk) = p.checked_pow(t.k) else { continue };
                let mut m = pk;
                while m <= reach {
                    free[m as usize] = false;
                    m += pk;
                }
            }
        }
        let lo = self.c * x as i64;
        let hi = self.d * x as i64;
        Ok((lo..=hi)
            .filter(|&n| n != 0 && free[n.unsigned_abs() as usize] && self.conditions.iter().all(|c| c.admits(n)))
            .count() as u64)
    }
}
