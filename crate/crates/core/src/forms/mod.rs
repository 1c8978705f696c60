//! Integral binary cubic forms `a x^3 + b x^2 y + c x y^2 + d y^3` under the
//! action of GL2(Z), with a canonical representative for every class of
//! irreducible forms and an enumerator over discriminant windows.

mod enumerate;
mod reduce;
pub(crate) mod small;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

pub use enumerate::{
    count_classes, enumerate_classes, for_each_class, ClassEnumerationRequest, EnumerationLimits,
};
pub use reduce::canonicalize;
pub(crate) use enumerate::for_each_reduced as for_each_reduced_quads;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryCubicForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl BinaryCubicForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() {
            return Err(invalid("the zero form is not a binary cubic form"));
        }
        Ok(Self { a, b, c, d })
    }

    /// Panics on the zero form; intended for literals.
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into()).expect("zero form")
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn discriminant(&self) -> BigInt {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        b * b * c * c + BigInt::from(18) * a * b * c * d
            - BigInt::from(27) * a * a * d * d
            - BigInt::from(4) * b * b * b * d
            - BigInt::from(4) * c * c * c * a
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }

    pub fn negate(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d).is_one()
    }

    /// No linear factor over Q. A cubic without a linear factor is irreducible.
    pub fn is_irreducible(&self) -> bool {
        if self.a.is_zero() || self.d.is_zero() {
            return false;
        }
        // F(t,1) has a rational root iff the monic
        // g(s) = s^3 + b s^2 + a c s + a^2 d has an integer root (s = a t).
        let g = [
            self.b.clone(),
            &self.a * &self.c,
            &self.a * &self.a * &self.d,
        ];
        !monic_cubic_has_integer_root(&g)
    }

    /// Hessian covariant `(P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd)`,
    /// with `Q^2 - 4PR = -3D`.
    pub fn hessian(&self) -> (BigInt, BigInt, BigInt) {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        (
            b * b - BigInt::from(3) * a * c,
            b * c - BigInt::from(9) * a * d,
            c * c - BigInt::from(3) * b * d,
        )
    }
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[[e, f], [g, h]]` with determinant +-1, acting by
/// `F(x, y) -> F(e x + f y, g x + h y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    e: BigInt,
    f: BigInt,
    g: BigInt,
    h: BigInt,
}

impl UnimodularMatrix {
    pub fn new(e: BigInt, f: BigInt, g: BigInt, h: BigInt) -> Result<Self> {
        let det = &e * &h - &f * &g;
        if det.abs() != BigInt::one() {
            return Err(invalid(format!("matrix determinant {det} is not +-1")));
        }
        Ok(Self { e, f, g, h })
    }

    pub fn from_i64(e: i64, f: i64, g: i64, h: i64) -> Result<Self> {
        Self::new(e.into(), f.into(), g.into(), h.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn determinant(&self) -> BigInt {
        &self.e * &self.h - &self.f * &self.g
    }

    /// Matrix product `self * rhs`; `act(m1 * m2, F) = act(m2, act(m1, F))`.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            e: &self.e * &rhs.e + &self.f * &rhs.g,
            f: &self.e * &rhs.f + &self.f * &rhs.h,
            g: &self.g * &rhs.e + &self.h * &rhs.g,
            h: &self.g * &rhs.f + &self.h * &rhs.h,
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.e, &self.f, &self.g, &self.h]
    }
}

/// `F(e x + f y, g x + h y)`.
pub fn act(m: &UnimodularMatrix, form: &BinaryCubicForm) -> BinaryCubicForm {
    act_raw(&m.e, &m.f, &m.g, &m.h, form)
}

pub(crate) fn act_raw(
    e: &BigInt,
    f: &BigInt,
    g: &BigInt,
    h: &BigInt,
    form: &BinaryCubicForm,
) -> BinaryCubicForm {
    let (a, b, c, d) = (&form.a, &form.b, &form.c, &form.d);
    let three = BigInt::from(3);
    let two = BigInt::from(2);
    let na = form.eval(e, g);
    let nd = form.eval(f, h);
    let nb = a * &three * e * e * f
        + b * (e * e * h + &two * e * f * g)
        + c * (&two * e * g * h + f * g * g)
        + d * &three * g * g * h;
    let nc = a * &three * e * f * f
        + b * (&two * e * f * h + f * f * g)
        + c * (e * h * h + &two * f * g * h)
        + d * &three * g * h * h;
    BinaryCubicForm {
        a: na,
        b: nb,
        c: nc,
        d: nd,
    }
}

fn eval_monic(g: &[BigInt; 3], s: &BigInt) -> BigInt {
    ((s + &g[0]) * s + &g[1]) * s + &g[2]
}

/// Exact integer-root test for `s^3 + g0 s^2 + g1 s + g2`, by bisection on
/// the monotone pieces between the critical points.
fn monic_cubic_has_integer_root(g: &[BigInt; 3]) -> bool {
    if g[2].is_zero() {
        return true;
    }
    // Cauchy bound.
    let bound = g.iter().map(|c| c.abs()).max().unwrap() + BigInt::one();
    let three = BigInt::from(3);
    // g'(s) = 3 s^2 + 2 g0 s + g1; critical points (-g0 +- sqrt(g0^2 - 3 g1)) / 3.
    let disc = &g[0] * &g[0] - &three * &g[1];
    let mut checkpoints: Vec<BigInt> = Vec::new();
    let mut pieces: Vec<(BigInt, BigInt, bool)> = Vec::new(); // (lo, hi, increasing)
    if disc.is_positive() {
        let r = disc.sqrt();
        // floor/ceil brackets for both critical points, widened by 2.
        let c1_lo: BigInt = (-&g[0] - &r - BigInt::one()).div_floor(&three) - 2;
        let c1_hi: BigInt = (-&g[0] - &r).div_ceil(&three) + 2;
        let c2_lo: BigInt = (-&g[0] + &r).div_floor(&three) - 2;
        let c2_hi: BigInt = (-&g[0] + &r + BigInt::one()).div_ceil(&three) + 2;
        let mut s = c1_lo.clone();
        while s <= c1_hi {
            checkpoints.push(s.clone());
            s += 1;
        }
        let mut s = c2_lo.clone();
        while s <= c2_hi {
            checkpoints.push(s.clone());
            s += 1;
        }
        pieces.push((-&bound, c1_lo - 1, true));
        pieces.push((c1_hi + 1, c2_lo - 1, false));
        pieces.push((c2_hi + 1, bound, true));
    } else {
        pieces.push((-&bound, bound, true));
    }
    if checkpoints.iter().any(|s| eval_monic(g, s).is_zero()) {
        return true;
    }
    pieces
        .into_iter()
        .any(|(lo, hi, inc)| monotone_has_root(g, lo, hi, inc))
}

fn monotone_has_root(g: &[BigInt; 3], mut lo: BigInt, mut hi: BigInt, increasing: bool) -> bool {
    if lo > hi {
        return false;
    }
    let sign = |s: &BigInt| {
        let v = eval_monic(g, s);
        if increasing {
            v
        } else {
            -v
        }
    };
    if sign(&lo).is_positive() || sign(&hi).is_negative() {
        return false;
    }
    while lo <= hi {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        let v = sign(&mid);
        if v.is_zero() {
            return true;
        }
        if v.is_negative() {
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    false
}
