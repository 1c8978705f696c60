use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `u + v ζ` with rational `u, v` and `ζ^2 + ζ + 1 = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EisensteinNumber {
    pub u: BigRational,
    pub v: BigRational,
}

impl EisensteinNumber {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        Self { u, v }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ints(u: i64, v: i64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(u)),
            BigRational::from_integer(BigInt::from(v)),
        )
    }

    pub fn zeta() -> Self {
        Self::from_ints(0, 1)
    }

    /// `ϖ = 1 - ζ`.
    pub fn varpi() -> Self {
        Self::from_ints(1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// `u^2 - uv + v^2`.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - &self.u * &self.v + &self.v * &self.v
    }

    /// Complex conjugate `u + v ζ^2 = (u - v) - v ζ`.
    pub fn conjugate(&self) -> Self {
        Self::new(&self.u - &self.v, -&self.v)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self::new(c.u / &n, c.v / &n))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::from_int(1), |acc, _| &acc * self)
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero()
    }
}

impl Add for &EisensteinNumber {
    type Output = EisensteinNumber;
    fn add(self, rhs: Self) -> EisensteinNumber {
        EisensteinNumber::new(&self.u + &rhs.u, &self.v + &rhs.v)
    }
}

impl Sub for &EisensteinNumber {
    type Output = EisensteinNumber;
    fn sub(self, rhs: Self) -> EisensteinNumber {
        EisensteinNumber::new(&self.u - &rhs.u, &self.v - &rhs.v)
    }
}

impl Mul for &EisensteinNumber {
    type Output = EisensteinNumber;
    fn mul(self, rhs: Self) -> EisensteinNumber {
        let uu = &self.u * &rhs.u;
        let vv = &self.v * &rhs.v;
        let uv = &self.u * &rhs.v + &self.v * &rhs.u;
        EisensteinNumber::new(&uu - &vv, uv - vv)
    }
}

impl Neg for &EisensteinNumber {
    type Output = EisensteinNumber;
    fn neg(self) -> EisensteinNumber {
        EisensteinNumber::new(-&self.u, -&self.v)
    }
}

impl fmt::Debug for EisensteinNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ζ", self.u, self.v)
    }
}

impl fmt::Display for EisensteinNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
