//! Fixed-width forms for the enumeration hot path. Coefficients stay small
//! under the enumeration budget; the discriminant is computed in `i128`.

use super::BinaryCubicForm;

const SIEVE_PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Quad {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Quad {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        b * b * c * c + 18 * a * b * c * d - 27 * a * a * d * d - 4 * b * b * b * d - 4 * c * c * c * a
    }

    pub fn hessian(&self) -> (i128, i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    /// `F(p, q)` in `i128`.
    pub fn eval(&self, p: i128, q: i128) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        a * p * p * p + b * p * p * q + c * p * q * q + d * q * q * q
    }

    pub fn act(&self, e: i64, f: i64, g: i64, h: i64) -> Self {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let ev = |x: i64, y: i64| a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y;
        Self {
            a: ev(e, g),
            b: 3 * a * e * e * f
                + b * (e * e * h + 2 * e * f * g)
                + c * (2 * e * g * h + f * g * g)
                + 3 * d * g * g * h,
            c: 3 * a * e * f * f
                + b * (2 * e * f * h + f * f * g)
                + c * (e * h * h + 2 * f * g * h)
                + 3 * d * g * h * h,
            d: ev(f, h),
        }
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn is_primitive(&self) -> bool {
        crate::arith::gcd_i64(
            crate::arith::gcd_i64(self.a, self.b),
            crate::arith::gcd_i64(self.c, self.d),
        ) == 1
    }

    pub fn is_irreducible(&self) -> bool {
        if self.a == 0 || self.d == 0 {
            return false;
        }
        // A rational root u/v in lowest terms has v | a, so it survives
        // reduction modulo any p not dividing a.
        for &p in &SIEVE_PRIMES {
            if self.a % p == 0 {
                continue;
            }
            let (a, b, c, d) = (
                self.a.rem_euclid(p),
                self.b.rem_euclid(p),
                self.c.rem_euclid(p),
                self.d.rem_euclid(p),
            );
            if (0..p).all(|t| (((a * t + b) % p * t + c) % p * t + d) % p != 0) {
                return true;
            }
        }
        self.to_form().is_irreducible()
    }

    pub fn to_form(&self) -> BinaryCubicForm {
        BinaryCubicForm::from_i64(self.a, self.b, self.c, self.d)
    }

    pub fn from_form(form: &BinaryCubicForm) -> Option<Self> {
        form.to_i64s().map(|[a, b, c, d]| Self::new(a, b, c, d))
    }
}
