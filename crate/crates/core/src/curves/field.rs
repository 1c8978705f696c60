//! Coefficient fields for curve arithmetic.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::eisenstein::EisensteinNumber;
use crate::arith;
use crate::error::{invalid, Result};

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;

    fn zero(&self) -> Self::Elem {
        self.from_int(0)
    }
    fn one(&self) -> Self::Elem {
        self.from_int(1)
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }
    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem> {
        self.inv(y).map(|iy| self.mul(x, &iy))
    }
    fn pow(&self, x: &Self::Elem, e: u32) -> Self::Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }
}

/// Fields containing a primitive cube root of unity `ζ`.
pub trait CubeRootField: Field {
    fn zeta(&self) -> Self::Elem;

    /// `ϖ = 1 - ζ`.
    fn varpi(&self) -> Self::Elem {
        self.sub(&self.one(), &self.zeta())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    zeta: Option<u64>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime(p) || p > u32::MAX as u64 {
            return Err(invalid(format!("{p} is not a supported prime")));
        }
        let zeta = (p % 3 == 1)
            .then(|| (2..p).find(|&z| arith::pow_mod(z, 3, p) == 1))
            .flatten();
        Ok(Self { p, zeta })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The chosen primitive cube root of unity, for `p ≡ 1 (mod 3)`.
    pub fn cube_root_of_unity(&self) -> Option<u64> {
        self.zeta
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        (x + y) % self.p
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        arith::mul_mod(*x, *y, self.p)
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.p - x % self.p) % self.p
    }
    fn inv(&self, x: &u64) -> Option<u64> {
        (*x % self.p != 0).then(|| arith::pow_mod(*x, self.p - 2, self.p))
    }
}

impl CubeRootField for PrimeField {
    /// Panics unless `p ≡ 1 (mod 3)`.
    fn zeta(&self) -> u64 {
        self.zeta.expect("no cube root of unity in this prime field")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn inv(&self, x: &BigRational) -> Option<BigRational> {
        (!x.is_zero()).then(|| BigRational::one() / x)
    }
}

/// `Q(ζ)` with `ζ^2 + ζ + 1 = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Eisenstein;

impl Field for Eisenstein {
    type Elem = EisensteinNumber;

    fn from_int(&self, n: i64) -> EisensteinNumber {
        EisensteinNumber::from_int(n)
    }
    fn add(&self, x: &EisensteinNumber, y: &EisensteinNumber) -> EisensteinNumber {
        x + y
    }
    fn mul(&self, x: &EisensteinNumber, y: &EisensteinNumber) -> EisensteinNumber {
        x * y
    }
    fn neg(&self, x: &EisensteinNumber) -> EisensteinNumber {
        -x
    }
    fn inv(&self, x: &EisensteinNumber) -> Option<EisensteinNumber> {
        x.inverse()
    }
}

impl CubeRootField for Eisenstein {
    fn zeta(&self) -> EisensteinNumber {
        EisensteinNumber::zeta()
    }
}
