//! The curves `E_a: y^2 = x^3 + a` and `E_{a,b}: y^2 = x^3 + a(x - b)^2`,
//! their group law over exact and finite fields, and the explicit
//! 3-isogenies between them.

mod eisenstein;
mod field;

use num_bigint::BigInt;

pub use eisenstein::EisensteinNumber;
pub use field::{CubeRootField, Eisenstein, Field, PrimeField, Rationals};

use crate::arith;
use crate::error::{invalid, Result};

/// `y^2 = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass<E> {
    pub a2: E,
    pub a4: E,
    pub a6: E,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint<E> {
    Infinity,
    Affine { x: E, y: E },
}

impl<E> CurvePoint<E> {
    pub fn affine(x: E, y: E) -> Self {
        CurvePoint::Affine { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveTypeI {
    a: i64,
}

impl CurveTypeI {
    pub fn new(a: i64) -> Result<Self> {
        if !arith::is_kth_power_free(a, 6) {
            return Err(invalid(format!("{a} is not a nonzero sixth-power-free integer")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    /// `-432 a^2`.
    pub fn discriminant(&self) -> BigInt {
        BigInt::from(-432) * self.a * self.a
    }

    pub fn model<F: Field>(&self, f: &F) -> Weierstrass<F::Elem> {
        Weierstrass {
            a2: f.zero(),
            a4: f.zero(),
            a6: f.from_int(self.a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveTypeII {
    a: i64,
    b: i64,
}

impl CurveTypeII {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 || b == 0 || 4 * a + 27 * b == 0 {
            return Err(invalid(format!("E_({a},{b}) is singular")));
        }
        if !arith::is_squarefree(num_integer::gcd(a, b)) {
            return Err(invalid(format!("gcd({a}, {b}) is not squarefree")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `d = 4a + 27b`.
    pub fn d(&self) -> i64 {
        4 * self.a + 27 * self.b
    }

    /// `-16 a^2 b^3 d`.
    pub fn discriminant(&self) -> BigInt {
        let b = BigInt::from(self.b);
        BigInt::from(-16) * self.a * self.a * &b * &b * &b * self.d()
    }

    pub fn model<F: Field>(&self, f: &F) -> Weierstrass<F::Elem> {
        type_ii_model(f, self.a, self.b)
    }

    /// Model of the isogenous curve `E_{-27a, d}`.
    pub fn isogenous_model<F: Field>(&self, f: &F) -> Weierstrass<F::Elem> {
        type_ii_model(f, -27 * self.a, self.d())
    }
}

fn type_ii_model<F: Field>(f: &F, a: i64, b: i64) -> Weierstrass<F::Elem> {
    let (a, b) = (f.from_int(a), f.from_int(b));
    let ab = f.mul(&a, &b);
    Weierstrass {
        a4: f.mul(&f.from_int(-2), &ab),
        a6: f.mul(&ab, &b),
        a2: a,
    }
}

fn rhs<F: Field>(f: &F, e: &Weierstrass<F::Elem>, x: &F::Elem) -> F::Elem {
    let x2 = f.mul(x, x);
    let x3 = f.mul(&x2, x);
    let t = f.add(&x3, &f.mul(&e.a2, &x2));
    f.add(&f.add(&t, &f.mul(&e.a4, x)), &e.a6)
}

pub fn on_curve<F: Field>(f: &F, e: &Weierstrass<F::Elem>, p: &CurvePoint<F::Elem>) -> bool {
    match p {
        CurvePoint::Infinity => true,
        CurvePoint::Affine { x, y } => f.mul(y, y) == rhs(f, e, x),
    }
}

pub fn negate<F: Field>(f: &F, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), f.neg(y)),
    }
}

/// Chord-tangent addition.
pub fn add_points<F: Field>(
    f: &F,
    e: &Weierstrass<F::Elem>,
    p: &CurvePoint<F::Elem>,
    q: &CurvePoint<F::Elem>,
) -> CurvePoint<F::Elem> {
    let (x1, y1, x2, y2) = match (p, q) {
        (CurvePoint::Infinity, _) => return q.clone(),
        (_, CurvePoint::Infinity) => return p.clone(),
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            (x1, y1, x2, y2)
        }
    };
    let slope = if x1 == x2 {
        if f.is_zero(&f.add(y1, y2)) {
            return CurvePoint::Infinity;
        }
        // (3x^2 + 2 a2 x + a4) / 2y
        let num = f.add(
            &f.add(&f.mul(&f.from_int(3), &f.mul(x1, x1)), &f.mul(&f.from_int(2), &f.mul(&e.a2, x1))),
            &e.a4,
        );
        f.div(&num, &f.mul(&f.from_int(2), y1)).expect("2y is nonzero")
    } else {
        f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("distinct x")
    };
    let x3 = f.sub(&f.sub(&f.sub(&f.mul(&slope, &slope), &e.a2), x1), x2);
    let y3 = f.sub(&f.mul(&slope, &f.sub(x1, &x3)), y1);
    CurvePoint::affine(x3, y3)
}

pub fn multiply<F: Field>(
    f: &F,
    e: &Weierstrass<F::Elem>,
    p: &CurvePoint<F::Elem>,
    n: u64,
) -> CurvePoint<F::Elem> {
    let mut acc = CurvePoint::Infinity;
    let mut base = p.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = add_points(f, e, &acc, &base);
        }
        base = add_points(f, e, &base, &base);
        n >>= 1;
    }
    acc
}

/// `φ: E_a → E_a`, `(x, y) ↦ ((x^3 + 4a)/(ϖ^2 x^2), y(x^3 - 8a)/(ϖ^3 x^3))`.
/// Points with `x = 0` and `O` map to `O`.
pub fn phi_type_i<F: CubeRootField>(f: &F, a: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
    let CurvePoint::Affine { x, y } = p else {
        return CurvePoint::Infinity;
    };
    if f.is_zero(x) {
        return CurvePoint::Infinity;
    }
    let w = f.varpi();
    let x2 = f.mul(x, x);
    let x3 = f.mul(&x2, x);
    let a = f.from_int(a);
    let nx = f.add(&x3, &f.mul(&f.from_int(4), &a));
    let ny = f.mul(y, &f.sub(&x3, &f.mul(&f.from_int(8), &a)));
    let dx = f.mul(&f.pow(&w, 2), &x2);
    let dy = f.mul(&f.pow(&w, 3), &x3);
    CurvePoint::affine(f.div(&nx, &dx).unwrap(), f.div(&ny, &dy).unwrap())
}

/// `φ: E_{a,b} → E_{-27a, d}`.
pub fn phi_type_ii<F: Field>(f: &F, a: i64, b: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
    let CurvePoint::Affine { x, y } = p else {
        return CurvePoint::Infinity;
    };
    if f.is_zero(x) {
        return CurvePoint::Infinity;
    }
    let c = |n: i64| f.from_int(n);
    let (a, b) = (c(a), c(b));
    let ab = f.mul(&a, &b);
    let ab2 = f.mul(&ab, &b);
    let x2 = f.mul(x, x);
    let x3 = f.mul(&x2, x);
    // 9x^3 + 12 a x^2 - 36 ab x + 36 ab^2
    let nx = [
        f.mul(&c(9), &x3),
        f.mul(&c(12), &f.mul(&a, &x2)),
        f.mul(&c(-36), &f.mul(&ab, x)),
        f.mul(&c(36), &ab2),
    ]
    .iter()
    .fold(f.zero(), |s, t| f.add(&s, t));
    // 27 y (x^3 + 4ab x - 8ab^2)
    let ny = f.mul(
        &f.mul(&c(27), y),
        &f.add(&f.add(&x3, &f.mul(&c(4), &f.mul(&ab, x))), &f.mul(&c(-8), &ab2)),
    );
    CurvePoint::affine(f.div(&nx, &x2).unwrap(), f.div(&ny, &x3).unwrap())
}

/// `φ': E_{-27a, d} → E_{a,b}` with `d = 4a + 27b`.
pub fn phi_dual_type_ii<F: Field>(f: &F, a: i64, b: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
    let CurvePoint::Affine { x, y } = p else {
        return CurvePoint::Infinity;
    };
    if f.is_zero(x) {
        return CurvePoint::Infinity;
    }
    let c = |n: i64| f.from_int(n);
    let d = 4 * a + 27 * b;
    let (a, d) = (c(a), c(d));
    let ad = f.mul(&a, &d);
    let ad2 = f.mul(&ad, &d);
    let x2 = f.mul(x, x);
    let x3 = f.mul(&x2, x);
    // x^3 - 36 a x^2 + 108 ad x - 108 ad^2
    let nx = [
        x3.clone(),
        f.mul(&c(-36), &f.mul(&a, &x2)),
        f.mul(&c(108), &f.mul(&ad, x)),
        f.mul(&c(-108), &ad2),
    ]
    .iter()
    .fold(f.zero(), |s, t| f.add(&s, t));
    // y (x^3 - 108 ad x + 216 ad^2)
    let ny = f.mul(
        y,
        &f.add(&f.add(&x3, &f.mul(&c(-108), &f.mul(&ad, x))), &f.mul(&c(216), &ad2)),
    );
    let dx = f.mul(&c(81), &x2);
    let dy = f.mul(&c(729), &x3);
    CurvePoint::affine(f.div(&nx, &dx).unwrap(), f.div(&ny, &dy).unwrap())
}

/// `θ_c: (x, y) ↦ (x / c^2, y / c^3)`, from `E_{ac^2, bc^2}` to `E_{a,b}`
/// (and from `E_{ac^6}` to `E_a`).
pub fn theta_c<F: Field>(f: &F, c: &F::Elem, p: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
    let Some(ic) = f.inv(c) else {
        return Err(invalid("θ_c needs c ≠ 0"));
    };
    Ok(match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => {
            CurvePoint::affine(f.mul(x, &f.pow(&ic, 2)), f.mul(y, &f.pow(&ic, 3)))
        }
    })
}

/// Every point of `e` over `F_p`, `O` first.
pub fn points_over(f: &PrimeField, e: &Weierstrass<u64>) -> Vec<CurvePoint<u64>> {
    let p = f.modulus();
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
    for y in 0..p {
        roots[f.mul(&y, &y) as usize].push(y);
    }
    let mut out = vec![CurvePoint::Infinity];
    for x in f.elements() {
        for &y in &roots[rhs(f, e, &x) as usize] {
            out.push(CurvePoint::affine(x, y));
        }
    }
    out
}

/// Outcome of the exhaustive isogeny checks over one prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyCheck {
    pub prime: u64,
    pub points: usize,
    pub images_on_curve: bool,
    pub homomorphism: bool,
    /// `#ker φ`; 3 when `a` is a square mod `p` (Type I).
    pub kernel_size: usize,
    pub expected_kernel_size: usize,
    /// `φ' ∘ φ = [3]` (Type II only; `true` for Type I).
    pub dual_composes_to_three: bool,
}

impl IsogenyCheck {
    pub fn passed(&self) -> bool {
        self.images_on_curve
            && self.homomorphism
            && self.kernel_size == self.expected_kernel_size
            && self.dual_composes_to_three
    }
}

fn is_good_prime(p: u64, disc: &BigInt) -> bool {
    p > 3 && (disc % BigInt::from(p)) != BigInt::from(0)
}

pub fn check_type_i(curve: CurveTypeI, p: u64) -> Result<IsogenyCheck> {
    let f = PrimeField::new(p)?;
    if f.cube_root_of_unity().is_none() || !is_good_prime(p, &curve.discriminant()) {
        return Err(invalid(format!("{p} is not a good prime ≡ 1 mod 3 for E_{}", curve.a())));
    }
    let e = curve.model(&f);
    let pts = points_over(&f, &e);
    let images: Vec<_> = pts.iter().map(|q| phi_type_i(&f, curve.a(), q)).collect();
    let images_on_curve = images.iter().all(|q| on_curve(&f, &e, q));
    let homomorphism = all_pairs_homomorphic(&f, &e, &e, &pts, &images, |q| phi_type_i(&f, curve.a(), q));
    let kernel_size = images.iter().filter(|q| **q == CurvePoint::Infinity).count();
    let a_is_square = arith::is_qr_mod(curve.a(), p);
    Ok(IsogenyCheck {
        prime: p,
        points: pts.len(),
        images_on_curve,
        homomorphism,
        kernel_size,
        expected_kernel_size: if a_is_square { 3 } else { 1 },
        dual_composes_to_three: true,
    })
}

pub fn check_type_ii(curve: CurveTypeII, p: u64) -> Result<IsogenyCheck> {
    let f = PrimeField::new(p)?;
    if f.cube_root_of_unity().is_none() || !is_good_prime(p, &curve.discriminant()) {
        return Err(invalid(format!(
            "{p} is not a good prime ≡ 1 mod 3 for E_({},{})",
            curve.a(),
            curve.b()
        )));
    }
    let (a, b) = (curve.a(), curve.b());
    let e = curve.model(&f);
    let target = curve.isogenous_model(&f);
    let pts = points_over(&f, &e);
    let images: Vec<_> = pts.iter().map(|q| phi_type_ii(&f, a, b, q)).collect();
    let images_on_curve = images.iter().all(|q| on_curve(&f, &target, q))
        && points_over(&f, &target)
            .iter()
            .all(|q| on_curve(&f, &e, &phi_dual_type_ii(&f, a, b, q)));
    let homomorphism = all_pairs_homomorphic(&f, &e, &target, &pts, &images, |q| phi_type_ii(&f, a, b, q));
    let kernel_size = images.iter().filter(|q| **q == CurvePoint::Infinity).count();
    // The kernel is {O, (0, ±√(ab^2))}; both points are rational iff a is a square.
    let expected_kernel_size = if arith::is_qr_mod(a, p) { 3 } else { 1 };
    let dual_composes_to_three = pts
        .iter()
        .zip(&images)
        .all(|(q, img)| phi_dual_type_ii(&f, a, b, img) == multiply(&f, &e, q, 3));
    Ok(IsogenyCheck {
        prime: p,
        points: pts.len(),
        images_on_curve,
        homomorphism,
        kernel_size,
        expected_kernel_size,
        dual_composes_to_three,
    })
}

fn all_pairs_homomorphic(
    f: &PrimeField,
    domain: &Weierstrass<u64>,
    target: &Weierstrass<u64>,
    pts: &[CurvePoint<u64>],
    images: &[CurvePoint<u64>],
    map: impl Fn(&CurvePoint<u64>) -> CurvePoint<u64>,
) -> bool {
    pts.iter().enumerate().all(|(i, p)| {
        pts.iter().enumerate().skip(i).all(|(j, q)| {
            map(&add_points(f, domain, p, q)) == add_points(f, target, &images[i], &images[j])
        })
    })
}

/// The first `n` primes `p ≡ 1 (mod 3)` not dividing `disc`.
pub fn good_primes_one_mod_three(disc: &BigInt, n: usize) -> Vec<u64> {
    (5u64..)
        .filter(|&p| p % 3 == 1 && arith::is_prime(p) && is_good_prime(p, disc))
        .take(n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn membership_examples() {
        let f = Rationals;
        let e4 = CurveTypeI::new(4).unwrap().model(&f);
        assert!(on_curve(&f, &e4, &CurvePoint::affine(q(0), q(2))));
        let e1 = CurveTypeI::new(1).unwrap().model(&f);
        assert!(on_curve(&f, &e1, &CurvePoint::affine(q(2), q(3))));
        assert!(!on_curve(&f, &e1, &CurvePoint::affine(q(1), q(1))));
    }

    #[test]
    fn group_law_over_q() {
        let f = Rationals;
        let e1 = CurveTypeI::new(1).unwrap().model(&f);
        let p = CurvePoint::affine(q(2), q(3));
        assert_eq!(add_points(&f, &e1, &p, &CurvePoint::Infinity), p);
        assert_eq!(add_points(&f, &e1, &p, &negate(&f, &p)), CurvePoint::Infinity);
        let double = add_points(&f, &e1, &p, &p);
        assert!(on_curve(&f, &e1, &double));
        // (2, 3) has order 6 on y^2 = x^3 + 1: 2P = (0, 1), 3P = (-1, 0).
        assert_eq!(double, CurvePoint::affine(q(0), q(1)));
        assert_eq!(multiply(&f, &e1, &p, 3), CurvePoint::affine(q(-1), q(0)));
        assert_eq!(multiply(&f, &e1, &p, 6), CurvePoint::Infinity);
    }

    #[test]
    fn discriminants() {
        assert_eq!(CurveTypeI::new(1).unwrap().discriminant(), BigInt::from(-432));
        assert_eq!(CurveTypeI::new(-2).unwrap().discriminant(), BigInt::from(-1728));
        assert_eq!(CurveTypeII::new(1, 1).unwrap().discriminant(), BigInt::from(-496));
        assert!(CurveTypeI::new(64).is_err());
        assert!(CurveTypeI::new(0).is_err());
        assert!(CurveTypeII::new(27, -4).is_err());
        assert!(CurveTypeII::new(4, 4).is_err());
    }

    #[test]
    fn type_i_over_eisenstein_numbers() {
        let f = Eisenstein;
        for a in [1i64, 2, 5, -7] {
            let kernel = CurvePoint::affine(f.zero(), f.zero());
            assert_eq!(phi_type_i(&f, a, &kernel), CurvePoint::Infinity);
            assert_eq!(phi_type_i(&f, a, &CurvePoint::Infinity), CurvePoint::Infinity);
        }
        // (2, 3) on E_1, (2, 1) on E_-7, (1, 3) on E_8, (3, 5) on E_-2.
        for (a, x, y) in [(1i64, 2i64, 3i64), (-7, 2, 1), (8, 1, 3), (-2, 3, 5)] {
            let e = CurveTypeI::new(a).unwrap().model(&f);
            let p = CurvePoint::affine(f.from_int(x), f.from_int(y));
            assert!(on_curve(&f, &e, &p));
            let mut pt = p.clone();
            for _ in 0..3 {
                let img = phi_type_i(&f, a, &pt);
                assert!(on_curve(&f, &e, &img), "a = {a}");
                pt = add_points(&f, &e, &pt, &p);
            }
        }
    }

    #[test]
    fn type_ii_over_q() {
        let f = Rationals;
        for (a, b, x, y) in [(1i64, 1i64, 1i64, 1i64), (2, 1, 1, 1), (-2, 1, 1, 1), (5, 4, 4, 8)] {
            let curve = CurveTypeII::new(a, b).unwrap();
            let e = curve.model(&f);
            let target = curve.isogenous_model(&f);
            let p = CurvePoint::affine(q(x), q(y));
            assert!(on_curve(&f, &e, &p));
            let mut pt = p.clone();
            for _ in 0..3 {
                let img = phi_type_ii(&f, a, b, &pt);
                assert!(on_curve(&f, &target, &img));
                assert_eq!(phi_dual_type_ii(&f, a, b, &img), multiply(&f, &e, &pt, 3));
                pt = add_points(&f, &e, &pt, &p);
            }
        }
    }

    #[test]
    fn theta_examples() {
        let f = Rationals;
        let p = CurvePoint::affine(q(4), q(8));
        assert_eq!(theta_c(&f, &q(1), &p).unwrap(), p);
        // (4, 8) on E_{4,4} ↦ (1, 1) on E_{1,1}.
        let s = 1;
        let (a, b) = (1i64, 1i64);
        let src = type_ii_model(&f, 4 * a, 4 * b);
        let pt = CurvePoint::affine(q(4), q(8 * s));
        assert!(on_curve(&f, &src, &pt));
        let img = theta_c(&f, &q(2), &pt).unwrap();
        assert_eq!(img, CurvePoint::affine(q(1), q(s)));
        assert!(on_curve(&f, &type_ii_model(&f, a, b), &img));
        assert!(theta_c(&f, &q(0), &pt).is_err());
    }

    #[test]
    fn finite_field_suite_small() {
        let p = 7;
        let check = check_type_i(CurveTypeI::new(1).unwrap(), p).unwrap();
        assert!(check.passed(), "{check:?}");
        assert!(check.points <= 13);
        let check = check_type_ii(CurveTypeII::new(1, 1).unwrap(), p).unwrap();
        assert!(check.passed(), "{check:?}");
        assert!(check_type_i(CurveTypeI::new(1).unwrap(), 5).is_err());
    }

    proptest::proptest! {
        #[test]
        fn theta_round_trip(x in -30i64..30, c in 1i64..20, neg in proptest::bool::ANY) {
            let f = Rationals;
            let c = if neg { -c } else { c };
            let p = CurvePoint::affine(q(x), BigRational::new(x.into(), 7.into()));
            let there = theta_c(&f, &q(c), &p).unwrap();
            let back = theta_c(&f, &BigRational::new(1.into(), c.into()), &there).unwrap();
            proptest::prop_assert_eq!(back, p);
        }
    }
}
