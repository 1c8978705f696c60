//! Local behaviour of cubic forms at a prime: the splitting symbol, the
//! Davenport–Heilbronn sets `T_p(α)`, `U_p`, `V_p`, `V'_p`, and their exact
//! densities over the residue spaces `Φ(p^r)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::forms::small::Quad;
use crate::forms::BinaryCubicForm;

/// Largest `p^{4r}` a density enumeration may visit.
pub const DENSITY_BUDGET: u64 = 400_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplittingSymbol {
    /// Three distinct linear factors.
    S111,
    /// A linear factor times an irreducible quadratic.
    S12,
    /// Irreducible.
    S3,
    /// A double and a simple linear factor.
    S121,
    /// A cube of a linear form.
    S13,
}

impl SplittingSymbol {
    pub const ALL: [SplittingSymbol; 5] = [
        SplittingSymbol::S111,
        SplittingSymbol::S12,
        SplittingSymbol::S3,
        SplittingSymbol::S121,
        SplittingSymbol::S13,
    ];
}

impl fmt::Display for SplittingSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingSymbol::S111 => "(111)",
            SplittingSymbol::S12 => "(12)",
            SplittingSymbol::S3 => "(3)",
            SplittingSymbol::S121 => "(1^21)",
            SplittingSymbol::S13 => "(1^3)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalSet {
    T(SplittingSymbol),
    U,
    V,
    VPrime,
}

impl fmt::Display for LocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSet::T(alpha) => write!(f, "T{alpha}"),
            LocalSet::U => f.write_str("U"),
            LocalSet::V => f.write_str("V"),
            LocalSet::VPrime => f.write_str("V'"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalSetId {
    pub set: LocalSet,
    pub p: u64,
}

impl LocalSetId {
    pub fn new(set: LocalSet, p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        Ok(Self { set, p })
    }

    /// Exponent `r` such that membership is decided by coefficients mod `p^r`.
    pub fn exponent(&self) -> u32 {
        match (self.set, self.p) {
            (LocalSet::T(_), _) => 1,
            (_, 2) => 4,
            _ => 2,
        }
    }
}

/// Global conditions: the local condition holds at every prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormCondition {
    U,
    V,
    VPrime,
}

impl FormCondition {
    pub fn holds(&self, form: &BinaryCubicForm) -> Result<bool> {
        let q = Quad::from_form(form)
            .ok_or_else(|| Error::ResourceLimit("coefficients exceed 64 bits".into()))?;
        let disc = q.disc();
        if disc == 0 {
            return Ok(false);
        }
        if disc.unsigned_abs() > u64::MAX as u128 {
            return Err(Error::ResourceLimit("discriminant exceeds 64 bits".into()));
        }
        Ok(self.holds_small(&q, disc, &arith::factor(disc.unsigned_abs() as u64)))
    }

    /// `factors` is the factorization of `|disc|`.
    pub(crate) fn holds_small(&self, q: &Quad, disc: i128, factors: &[(u64, u32)]) -> bool {
        match self {
            FormCondition::V => {
                disc_in_v2(disc) && factors.iter().all(|&(p, e)| p == 2 || e < 2)
            }
            FormCondition::VPrime => {
                disc % 2 != 0
                    && disc % 3 == 0
                    && factors.iter().all(|&(_, e)| e < 2)
            }
            FormCondition::U => {
                let mut ok = disc_in_v2(disc) || u_fails_v(q, 2);
                for &(p, e) in factors {
                    if !ok {
                        break;
                    }
                    if p != 2 && e >= 2 {
                        ok = u_fails_v(q, p);
                    }
                }
                ok
            }
        }
    }
}

fn disc_in_v2(disc: i128) -> bool {
    let m16 = disc.rem_euclid(16);
    disc.rem_euclid(4) == 1 || m16 == 8 || m16 == 12
}

fn disc_in_vp(disc: i128, p: u64) -> bool {
    if p == 2 {
        disc_in_v2(disc)
    } else {
        disc.rem_euclid((p * p) as i128) != 0
    }
}

/// `U_p` membership for a form outside `V_p`: the symbol must be `(1^3)` and
/// `F` must take a value of exact valuation one. With the triple root at
/// `[r : 1]` that value is `F(r, 1)`, independent of the lift of `r`; with the
/// root at `[1 : 0]` it is `a`.
fn u_fails_v(q: &Quad, p: u64) -> bool {
    let pi = p as i128;
    let p2 = pi * pi;
    let [a, b, c, d] = [q.a, q.b, q.c, q.d].map(|x| (x as i128).rem_euclid(pi));
    let root = if p <= 3 {
        match triple_root_small(q, p) {
            Some(r) => r,
            None => return false,
        }
    } else {
        // For p >= 5 a primitive form is a cube mod p iff its Hessian vanishes.
        let (hp, hq, hr) = q.hessian();
        if hp % pi != 0 || hq % pi != 0 || hr % pi != 0 {
            return false;
        }
        if a != 0 {
            // a (t - r)^3 has t^2 coefficient -3 a r.
            let inv = inverse_mod((3 * a) % pi, pi);
            Some((-b * inv).rem_euclid(pi))
        } else {
            debug_assert!(b == 0 && c == 0 && d != 0);
            None
        }
    };
    match root {
        Some(r) => q.eval(r, 1).rem_euclid(p2) != 0,
        None => (q.a as i128).rem_euclid(p2) != 0,
    }
}

/// `Some(Some(r))` for a triple root `[r : 1]`, `Some(None)` for `[1 : 0]`,
/// `None` when the symbol is not `(1^3)`.
fn triple_root_small(q: &Quad, p: u64) -> Option<Option<i128>> {
    let coeffs = [q.a, q.b, q.c, q.d].map(|x| x.rem_euclid(p as i64) as u64);
    let roots = projective_roots(coeffs, p);
    match roots.as_slice() {
        [(root, 3)] => Some(*root),
        _ => None,
    }
}

fn inverse_mod(x: i128, m: i128) -> i128 {
    let (mut a, mut b, mut u, mut v) = (x.rem_euclid(m), m, 1i128, 0i128);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (u, v) = (v, u - t * v);
    }
    assert_eq!(a, 1, "not invertible");
    u.rem_euclid(m)
}

/// Roots of a form mod `p` in `P^1(F_p)` with multiplicities; `None` marks
/// the point `[1 : 0]`. Coefficients are reduced and not all zero.
fn projective_roots(coeffs: [u64; 4], p: u64) -> Vec<(Option<i128>, u32)> {
    let mut out = Vec::new();
    let lead_zeros = coeffs[..3].iter().take_while(|&&c| c == 0).count();
    if lead_zeros > 0 {
        out.push((None, lead_zeros as u32));
    }
    // Dehomogenized polynomial, highest degree first.
    let mut poly: Vec<u64> = coeffs[lead_zeros..].to_vec();
    let mm = |x: u64, y: u64| arith::mul_mod(x, y, p);
    let mut t = 0u64;
    while t < p && poly.len() > 1 {
        let mut mult = 0;
        loop {
            if poly.len() < 2 {
                break;
            }
            // Synthetic division by (x - t).
            let mut quotient = Vec::with_capacity(poly.len() - 1);
            let mut acc = 0u64;
            for &c in &poly {
                acc = (mm(acc, t) + c) % p;
                quotient.push(acc);
            }
            let rem = quotient.pop().unwrap();
            if rem != 0 {
                break;
            }
            poly = quotient;
            mult += 1;
        }
        if mult > 0 {
            out.push((Some(t as i128), mult));
        }
        t += 1;
    }
    out
}

fn symbol_from_roots(roots: &[(Option<i128>, u32)]) -> SplittingSymbol {
    let total: u32 = roots.iter().map(|r| r.1).sum();
    match (total, roots.len()) {
        (0, _) => SplittingSymbol::S3,
        (1, _) => SplittingSymbol::S12,
        (3, 3) => SplittingSymbol::S111,
        (3, 2) => SplittingSymbol::S121,
        (3, 1) => SplittingSymbol::S13,
        _ => unreachable!("a cubic with two roots has a third"),
    }
}

fn reduce_mod(form: &BinaryCubicForm, m: u64) -> [u64; 4] {
    let bm = BigInt::from(m);
    form.coefficients().map(|c| {
        let r = c % &bm;
        let r = if r.is_negative() { r + &bm } else { r };
        r.to_u64().unwrap()
    })
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(invalid(format!("{p} is not prime")))
    }
}

fn check_primitive_at(form: &BinaryCubicForm, p: u64) -> Result<[u64; 4]> {
    check_prime(p)?;
    let red = reduce_mod(form, p);
    if red == [0; 4] {
        return Err(invalid(format!("{form} vanishes modulo {p}")));
    }
    Ok(red)
}

pub fn splitting_symbol(form: &BinaryCubicForm, p: u64) -> Result<SplittingSymbol> {
    let red = check_primitive_at(form, p)?;
    Ok(symbol_from_roots(&projective_roots(red, p)))
}

fn disc_mod(form: &BinaryCubicForm, m: u64) -> i128 {
    (form.discriminant() % BigInt::from(m))
        .to_i128()
        .unwrap()
        .rem_euclid(m as i128)
}

pub fn in_vp(form: &BinaryCubicForm, p: u64) -> Result<bool> {
    check_prime(p)?;
    Ok(disc_in_vp(disc_mod(form, if p == 2 { 16 } else { p * p }), p))
}

pub fn in_up(form: &BinaryCubicForm, p: u64) -> Result<bool> {
    let red = check_primitive_at(form, p)?;
    if in_vp(form, p)? {
        return Ok(true);
    }
    if symbol_from_roots(&projective_roots(red, p)) != SplittingSymbol::S13 {
        return Ok(false);
    }
    Ok(takes_value_of_valuation_one(reduce_mod(form, p * p), p))
}

/// Exhaustive search for `F(x, y) = e p (mod p^2)` with `p ∤ e`.
fn takes_value_of_valuation_one(coeffs: [u64; 4], p: u64) -> bool {
    let m = (p * p) as u128;
    let [a, b, c, d] = coeffs.map(|x| x as u128 % m);
    let pp = p as u128;
    (0..m).any(|x| {
        let x2 = x * x % m;
        let x3 = x2 * x % m;
        (0..m).any(|y| {
            let y2 = y * y % m;
            let v = (a * x3 + b * x2 % m * y + c * x % m * y2 + d * y2 % m * y) % m;
            v % pp == 0 && v / pp % pp != 0
        })
    })
}

pub fn in_vp_prime(form: &BinaryCubicForm, p: u64) -> Result<bool> {
    check_prime(p)?;
    match p {
        2 => Ok(disc_mod(form, 2) != 0),
        3 => Ok(in_vp(form, 3)? && disc_mod(form, 3) == 0),
        _ => in_vp(form, p),
    }
}

pub fn in_set(form: &BinaryCubicForm, id: LocalSetId) -> Result<bool> {
    match id.set {
        LocalSet::T(alpha) => Ok(splitting_symbol(form, id.p)? == alpha),
        LocalSet::U => in_up(form, id.p),
        LocalSet::V => in_vp(form, id.p),
        LocalSet::VPrime => in_vp_prime(form, id.p),
    }
}

/// A congruence-defined subset of `Φ(p^r)`, the coefficient quadruples
/// modulo `p^r` that do not vanish modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueClassSet {
    pub id: LocalSetId,
    pub exponent: u32,
}

impl ResidueClassSet {
    pub fn new(id: LocalSetId) -> Self {
        Self {
            id,
            exponent: id.exponent(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.id.p.pow(self.exponent)
    }

    /// `p^{4r} (1 - p^{-4})`.
    pub fn primitive_total(&self) -> u64 {
        let m = self.modulus();
        let q = m / self.id.p;
        m.pow(4) - q.pow(4)
    }

    pub fn contains(&self, coeffs: [u64; 4]) -> bool {
        let p = self.id.p;
        let m = self.modulus();
        let red = coeffs.map(|c| c % p);
        if red == [0; 4] {
            return false;
        }
        let disc = || {
            let q = Quad::new(
                (coeffs[0] % m) as i64,
                (coeffs[1] % m) as i64,
                (coeffs[2] % m) as i64,
                (coeffs[3] % m) as i64,
            );
            q.disc().rem_euclid(m as i128)
        };
        match self.id.set {
            LocalSet::T(alpha) => symbol_from_roots(&projective_roots(red, p)) == alpha,
            LocalSet::V => disc_in_vp(disc(), p),
            LocalSet::VPrime => match p {
                2 => disc() % 2 != 0,
                3 => {
                    let d = disc();
                    disc_in_vp(d, 3) && d % 3 == 0
                }
                _ => disc_in_vp(disc(), p),
            },
            LocalSet::U => {
                disc_in_vp(disc(), p)
                    || (symbol_from_roots(&projective_roots(red, p)) == SplittingSymbol::S13
                        && takes_value_of_valuation_one(coeffs.map(|c| c % (p * p)), p))
            }
        }
    }

    /// Number of members, by enumerating every quadruple modulo `p^r`.
    pub fn cardinality(&self) -> Result<u64> {
        let m = self.modulus();
        let visits = m.checked_pow(4).filter(|&v| v <= DENSITY_BUDGET);
        if visits.is_none() {
            return Err(Error::ResourceLimit(format!(
                "enumerating quadruples modulo {m} exceeds the density budget"
            )));
        }
        Ok((0..m)
            .into_par_iter()
            .map(|a| {
                let mut n = 0u64;
                for b in 0..m {
                    for c in 0..m {
                        for d in 0..m {
                            if self.contains([a, b, c, d]) {
                                n += 1;
                            }
                        }
                    }
                }
                n
            })
            .sum())
    }
}

/// `#S(p^r) / #Φ(p^r)` by full enumeration.
pub fn local_density(id: LocalSetId) -> Result<BigRational> {
    let set = ResidueClassSet::new(id);
    let members = set.cardinality()?;
    Ok(BigRational::new(members.into(), set.primitive_total().into()))
}

/// The closed forms for `T_p(α)`, `V_p` and `U_p`.
pub fn closed_form_density(set: LocalSet, p: u64) -> Option<BigRational> {
    let p = BigInt::from(p);
    let one = BigInt::from(1);
    let p2 = &p * &p;
    let q = |n: BigInt, d: BigInt| Some(BigRational::new(n, d));
    match set {
        LocalSet::T(SplittingSymbol::S111) => q(&p * (&p - &one), 6 * (&p2 + &one)),
        LocalSet::T(SplittingSymbol::S12) => q(&p * (&p - &one), 2 * (&p2 + &one)),
        LocalSet::T(SplittingSymbol::S3) => q(&p * (&p - &one), 3 * (&p2 + &one)),
        LocalSet::T(SplittingSymbol::S121) => q(p.clone(), &p2 + &one),
        LocalSet::T(SplittingSymbol::S13) => q(one.clone(), &p2 + &one),
        LocalSet::V => q(&p2 - &one, &p2 + &one),
        LocalSet::U => q(&p2 * &p - &one, &p * (&p2 + &one)),
        LocalSet::VPrime => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{act, UnimodularMatrix};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64, d: i64) -> BinaryCubicForm {
        BinaryCubicForm::from_i64(a, b, c, d)
    }

    fn id(set: LocalSet, p: u64) -> LocalSetId {
        LocalSetId::new(set, p).unwrap()
    }

    #[test]
    fn symbols() {
        use SplittingSymbol::*;
        assert_eq!(splitting_symbol(&f(0, 1, 1, 0), 5).unwrap(), S111);
        assert_eq!(splitting_symbol(&f(1, 0, -1, 1), 2).unwrap(), S3);
        assert_eq!(splitting_symbol(&f(1, 0, 0, 0), 7).unwrap(), S13);
        assert_eq!(splitting_symbol(&f(0, 1, 0, 0), 5).unwrap(), S121);
        assert_eq!(splitting_symbol(&f(1, 0, 1, 0), 3).unwrap(), S12);
        assert!(splitting_symbol(&f(5, 10, 0, 5), 5).is_err());
        assert!(splitting_symbol(&f(1, 0, 0, 1), 4).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(in_vp(&f(1, -1, 0, 1), 5).unwrap());
        assert!(!in_vp(&f(1, 0, 0, 1), 3).unwrap());
        assert!(in_vp(&f(1, -1, 0, 1), 2).unwrap());
        assert!(in_up(&f(1, 0, 0, 5), 5).unwrap());
        assert!(!in_vp(&f(1, 0, 0, 5), 5).unwrap());
        assert!(!in_up(&f(1, 0, 0, 25), 5).unwrap());
        assert!(in_vp_prime(&f(1, -1, 0, 1), 2).unwrap());
        assert!(!in_vp_prime(&f(1, -1, 0, 1), 3).unwrap());
    }

    #[test]
    fn closed_forms_at_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let mut sum = BigRational::zero();
            for alpha in SplittingSymbol::ALL {
                let d = local_density(id(LocalSet::T(alpha), p)).unwrap();
                assert_eq!(Some(d.clone()), closed_form_density(LocalSet::T(alpha), p));
                sum += d;
            }
            assert_eq!(sum, BigRational::from_integer(1.into()));
        }
        for p in [2u64, 3, 5] {
            for set in [LocalSet::V, LocalSet::U] {
                assert_eq!(
                    Some(local_density(id(set, p)).unwrap()),
                    closed_form_density(set, p),
                    "{set:?} at {p}"
                );
            }
        }
    }

    #[test]
    fn v_prime_densities() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(local_density(id(LocalSet::VPrime, 2)).unwrap(), r(2, 5));
        assert_eq!(local_density(id(LocalSet::VPrime, 3)).unwrap(), r(1, 5));
    }

    #[test]
    fn density_budget_enforced() {
        assert!(local_density(id(LocalSet::V, 101)).is_err());
    }

    #[test]
    fn primitive_totals_multiply() {
        // Quadruples mod m not vanishing mod any p | m; the last coordinate is
        // tallied per vanishing pattern of the first three.
        for (m, primes) in [
            (4u64, vec![2u64]),
            (36, vec![2, 3]),
            (100, vec![2, 5]),
            (216, vec![2, 3]),
        ] {
            let pattern = |xs: &[u64]| -> usize {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| xs.iter().all(|x| x % p == 0))
                    .map(|(i, _)| 1 << i)
                    .sum()
            };
            let mut last = vec![0u64; 1 << primes.len()];
            for (mask, slot) in last.iter_mut().enumerate() {
                *slot = (0..m)
                    .filter(|d| {
                        primes
                            .iter()
                            .enumerate()
                            .all(|(i, &p)| mask & (1 << i) == 0 || d % p != 0)
                    })
                    .count() as u64;
            }
            let mut n = 0u64;
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        n += last[pattern(&[a, b, c])];
                    }
                }
            }
            let expected: u64 = primes
                .iter()
                .map(|&p| {
                    let pr = p.pow(arith::valuation(m as i64, p));
                    pr.pow(4) - (pr / p).pow(4)
                })
                .product();
            assert_eq!(n, expected, "m = {m}");
        }
    }

    fn small_form() -> impl Strategy<Value = BinaryCubicForm> {
        (-30i64..=30, -30i64..=30, -30i64..=30, -30i64..=30)
            .prop_filter("nonzero", |t| *t != (0, 0, 0, 0))
            .prop_map(|(a, b, c, d)| f(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn v_prime_agrees_with_v_above_three(form in small_form(), p in prop::sample::select(vec![5u64, 7, 11, 13])) {
            prop_assert_eq!(in_vp_prime(&form, p).unwrap(), in_vp(&form, p).unwrap());
        }

        #[test]
        fn predicates_are_class_invariant(form in small_form(), k in -3i64..=3, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assume!(reduce_mod(&form, p) != [0; 4]);
            let moved = act(&UnimodularMatrix::from_i64(1, k, 0, 1).unwrap(), &form);
            let moved = act(&UnimodularMatrix::from_i64(0, 1, 1, 0).unwrap(), &moved);
            prop_assert_eq!(splitting_symbol(&form, p).unwrap(), splitting_symbol(&moved, p).unwrap());
            prop_assert_eq!(in_vp(&form, p).unwrap(), in_vp(&moved, p).unwrap());
            prop_assert_eq!(in_up(&form, p).unwrap(), in_up(&moved, p).unwrap());
            prop_assert_eq!(in_vp_prime(&form, p).unwrap(), in_vp_prime(&moved, p).unwrap());
        }

        #[test]
        fn global_u_matches_local_tests(form in small_form()) {
            let disc = form.discriminant();
            prop_assume!(!disc.is_zero() && form.is_primitive());
            let q = Quad::from_form(&form).unwrap();
            let d = q.disc();
            let factors = arith::factor(d.unsigned_abs() as u64);
            let mut primes: Vec<u64> = factors.iter().map(|f| f.0).collect();
            if !primes.contains(&2) { primes.push(2); }
            let u = primes.iter().all(|&p| in_up(&form, p).unwrap());
            let v = primes.iter().all(|&p| in_vp(&form, p).unwrap());
            prop_assert_eq!(FormCondition::U.holds(&form).unwrap(), u);
            prop_assert_eq!(FormCondition::V.holds(&form).unwrap(), v);
        }

        #[test]
        fn triple_root_shortcut_matches_search(a in 0i64..49, b in 0i64..49, c in 0i64..49, d in 0i64..49, p in prop::sample::select(vec![5u64, 7])) {
            let q = Quad::new(a, b, c, d);
            let red = [a, b, c, d].map(|x| (x as u64) % p);
            prop_assume!(red != [0; 4]);
            let is_cube = symbol_from_roots(&projective_roots(red, p)) == SplittingSymbol::S13;
            let exhaustive = is_cube && takes_value_of_valuation_one([a, b, c, d].map(|x| x as u64), p);
            prop_assert_eq!(u_fails_v(&q, p), exhaustive);
        }

        #[test]
        fn triple_root_shortcut_on_cubes(
            lambda in 1i64..7, r in 0i64..7, at_infinity in any::<bool>(),
            noise in prop::array::uniform4(0i64..7), p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let pi = p as i64;
            prop_assume!(lambda % pi != 0);
            let cube = if at_infinity {
                [0, 0, 0, lambda]
            } else {
                [lambda, -3 * lambda * r, 3 * lambda * r * r, -lambda * r * r * r]
            };
            let c = [0, 1, 2, 3].map(|i| cube[i] + pi * noise[i]);
            let q = Quad::new(c[0], c[1], c[2], c[3]);
            let m = (p * p) as i64;
            let exhaustive = takes_value_of_valuation_one(c.map(|x| x.rem_euclid(m) as u64), p);
            prop_assert_eq!(u_fails_v(&q, p), exhaustive);
        }
    }
}
