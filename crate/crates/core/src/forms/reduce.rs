//! Canonical class representatives.
//!
//! Positive discriminant: the Hessian is positive definite. Gauss-reduce it
//! (`|Q| <= P <= R`), then pick the lexicographically smallest form with
//! `a > 0` among the reduced ones in the class. Any two reduced Hessians in
//! one class differ by a matrix with entries in {-1, 0, 1}, so the search is
//! finite.
//!
//! Negative discriminant: let `w` be the non-real root of `F(t, 1)` with
//! positive imaginary part. With `a > 0` the class has exactly one form with
//! `0 < Re w < 1/2` and `|w| > 1`, and every such test is an exact sign check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::small::Quad;
use super::{act_raw, BinaryCubicForm};
use crate::error::{invalid, Result};

/// Entries in {-1, 0, 1}, determinant +-1.
pub(crate) const SMALL_MATRICES: [[i64; 4]; 40] = small_matrices();

const fn small_matrices() -> [[i64; 4]; 40] {
    let mut out = [[0i64; 4]; 40];
    let mut n = 0;
    let mut i = 0;
    while i < 81 {
        let e = (i % 3) as i64 - 1;
        let f = ((i / 3) % 3) as i64 - 1;
        let g = ((i / 9) % 3) as i64 - 1;
        let h = ((i / 27) % 3) as i64 - 1;
        let det = e * h - f * g;
        if det == 1 || det == -1 {
            out[n] = [e, f, g, h];
            n += 1;
        }
        i += 1;
    }
    assert!(n == 40);
    out
}

pub fn canonicalize(form: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    let disc = form.discriminant();
    if disc.is_zero() {
        return Err(invalid(format!("{form} has zero discriminant")));
    }
    if !form.is_irreducible() {
        return Err(invalid(format!("{form} is reducible")));
    }
    Ok(if disc.is_positive() {
        canonical_positive(form)
    } else {
        canonical_negative(form)
    })
}

fn swap(form: &BinaryCubicForm) -> BinaryCubicForm {
    BinaryCubicForm {
        a: form.d.clone(),
        b: form.c.clone(),
        c: form.b.clone(),
        d: form.a.clone(),
    }
}

fn shift(form: &BinaryCubicForm, k: &BigInt) -> BinaryCubicForm {
    act_raw(&BigInt::one(), k, &BigInt::zero(), &BigInt::one(), form)
}

fn positive_leading(form: BinaryCubicForm) -> BinaryCubicForm {
    if form.a.is_negative() {
        form.negate()
    } else {
        form
    }
}

fn hessian_reduced(form: &BinaryCubicForm) -> bool {
    let (p, q, r) = form.hessian();
    q.abs() <= p && p <= r
}

fn canonical_positive(form: &BinaryCubicForm) -> BinaryCubicForm {
    let mut f = form.clone();
    loop {
        let (p, q, r) = f.hessian();
        if q.abs() > p {
            let k = (&p - &q).div_floor(&(&p * 2));
            f = shift(&f, &k);
        } else if p > r {
            f = swap(&f);
        } else {
            break;
        }
    }
    SMALL_MATRICES
        .iter()
        .map(|m| {
            let [e, g0, g1, h] = m.map(BigInt::from);
            positive_leading(act_raw(&e, &g0, &g1, &h, &f))
        })
        .filter(hessian_reduced)
        .min()
        .expect("the reduced form itself is a candidate")
}

/// `Re w < k + 1/2`, for `a > 0`: the real root sits at `-b/a - 2 Re w`, and
/// `F(t, 1)` changes sign only there.
fn re_below(f: &BinaryCubicForm, k: &BigInt) -> bool {
    let p = -&f.b - (k * 2 + 1) * &f.a;
    f.eval(&p, &f.a).is_negative()
}

/// The unique integer `k` with `Re w` in `(k - 1/2, k + 1/2)`.
fn nearest_real_part(f: &BinaryCubicForm) -> BigInt {
    let (mut lo, mut hi);
    if re_below(f, &BigInt::zero()) {
        hi = BigInt::zero();
        let mut step = BigInt::one();
        lo = -&step;
        while re_below(f, &lo) {
            hi = lo.clone();
            step *= 2;
            lo = -&step;
        }
    } else {
        lo = BigInt::zero();
        let mut step = BigInt::one();
        hi = step.clone();
        while !re_below(f, &hi) {
            lo = hi.clone();
            step *= 2;
            hi = step.clone();
        }
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if re_below(f, &mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `|w| > 1`, for `a > 0`.
fn outside_unit_circle(f: &BinaryCubicForm) -> bool {
    (&f.d * &f.d - &f.a * &f.a + &f.a * &f.c - &f.b * &f.d).is_positive()
}

fn canonical_negative(form: &BinaryCubicForm) -> BinaryCubicForm {
    let mut f = positive_leading(form.clone());
    loop {
        let k = nearest_real_part(&f);
        if !k.is_zero() {
            f = shift(&f, &k);
        }
        // Irreducible forms never have |w| = 1: the real root would be -d/a.
        if outside_unit_circle(&f) {
            break;
        }
        f = positive_leading(swap(&f));
    }
    if (&f.a * &f.d - &f.b * &f.c).is_negative() {
        f = BinaryCubicForm {
            a: f.a.clone(),
            b: -&f.b,
            c: f.c.clone(),
            d: -&f.d,
        };
    }
    f
}

/// Whether an irreducible form with negative discriminant is the canonical
/// representative of its class.
pub(crate) fn is_reduced_negative(q: &Quad) -> bool {
    if q.a <= 0 {
        return false;
    }
    let (a, b, c, d) = (q.a as i128, q.b as i128, q.c as i128, q.d as i128);
    a * d - b * c > 0 && q.eval(-(a + b), a) < 0 && d * d - a * a + a * c - b * d > 0
}

/// Whether an irreducible form with positive discriminant is the canonical
/// representative of its class.
pub(crate) fn is_canonical_positive(q: &Quad) -> bool {
    if q.a <= 0 {
        return false;
    }
    let (p, h, r) = q.hessian();
    if h.abs() > p || p > r {
        return false;
    }
    if h.abs() < p && p < r {
        // Only (x, y) -> (+-x, +-y) keeps the Hessian reduced.
        return q.b < 0 || (q.b == 0 && q.d < 0);
    }
    SMALL_MATRICES
        .iter()
        .map(|&[e, f, g, h]| {
            let m = q.act(e, f, g, h);
            if m.a < 0 {
                m.neg()
            } else {
                m
            }
        })
        .filter(|m| {
            let (p, h, r) = m.hessian();
            h.abs() <= p && p <= r
        })
        .min()
        == Some(*q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{act, UnimodularMatrix};
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64, d: i64) -> BinaryCubicForm {
        BinaryCubicForm::from_i64(a, b, c, d)
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(canonicalize(&f(1, 0, -1, 0)).is_err());
        assert!(canonicalize(&f(1, 3, 3, 1)).is_err());
        // x^3 + y^3 shifted; it has the factor x + 2y.
        assert!(canonicalize(&f(1, 3, 3, 2)).is_err());
    }

    #[test]
    fn shifted_forms_share_a_representative() {
        let base = f(1, 0, 0, 2);
        let shifted = act(&UnimodularMatrix::from_i64(1, 1, 0, 1).unwrap(), &base);
        assert_eq!(shifted, f(1, 3, 3, 3));
        assert_eq!(canonicalize(&shifted).unwrap(), canonicalize(&base).unwrap());
    }

    #[test]
    fn known_representatives() {
        assert_eq!(canonicalize(&f(1, -1, 0, 1)).unwrap().discriminant(), (-23).into());
        let rep = canonicalize(&f(1, -1, -2, 1)).unwrap();
        assert_eq!(rep.discriminant(), 49.into());
        assert!(is_canonical_positive(&Quad::from_form(&rep).unwrap()));
        let rep = canonicalize(&f(1, -1, 0, 1)).unwrap();
        assert!(is_reduced_negative(&Quad::from_form(&rep).unwrap()));
    }

    #[test]
    fn small_matrix_table() {
        assert_eq!(SMALL_MATRICES.len(), 40);
        assert!(SMALL_MATRICES.contains(&[1, 0, 0, 1]));
    }

    fn irreducible_form() -> impl Strategy<Value = BinaryCubicForm> {
        (-12i64..=12, -12i64..=12, -12i64..=12, -12i64..=12)
            .prop_map(|(a, b, c, d)| (a, b, c, d))
            .prop_filter("irreducible", |&(a, b, c, d)| {
                Quad::new(a, b, c, d).is_irreducible()
            })
            .prop_map(|(a, b, c, d)| f(a, b, c, d))
    }

    fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
        prop::collection::vec(0usize..4, 1..12).prop_map(|steps| {
            let gens = [
                UnimodularMatrix::from_i64(1, 1, 0, 1).unwrap(),
                UnimodularMatrix::from_i64(1, -1, 0, 1).unwrap(),
                UnimodularMatrix::from_i64(0, 1, 1, 0).unwrap(),
                UnimodularMatrix::from_i64(-1, 0, 0, 1).unwrap(),
            ];
            steps
                .into_iter()
                .fold(UnimodularMatrix::identity(), |m, i| m.mul(&gens[i]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn invariant_under_the_group(form in irreducible_form(), m in unimodular()) {
            let moved = act(&m, &form);
            prop_assert_eq!(moved.discriminant(), form.discriminant());
            prop_assert_eq!(moved.is_primitive(), form.is_primitive());
            prop_assert_eq!(moved.is_irreducible(), form.is_irreducible());
            prop_assert_eq!(canonicalize(&moved).unwrap(), canonicalize(&form).unwrap());
        }

        #[test]
        fn idempotent(form in irreducible_form()) {
            let rep = canonicalize(&form).unwrap();
            prop_assert_eq!(canonicalize(&rep).unwrap(), rep.clone());
            prop_assert_eq!(rep.discriminant(), form.discriminant());
        }

        #[test]
        fn small_predicates_match(form in irreducible_form()) {
            let rep = canonicalize(&form).unwrap();
            let q = Quad::from_form(&form).unwrap();
            let is_rep = rep == form;
            if q.disc() > 0 {
                prop_assert_eq!(is_canonical_positive(&q), is_rep);
            } else {
                prop_assert_eq!(is_reduced_negative(&q), is_rep);
            }
        }
    }
}
