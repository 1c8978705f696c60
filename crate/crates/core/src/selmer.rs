//! Local data over `K = Q(μ3)` for the curves `E_a: y^2 = x^3 + a` and the
//! resulting bounds on the `φ`-Selmer rank.

use std::fmt;

use crate::arith;
use crate::classgroups::{rank_l, RankSource, RankValue};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// A finite place of `K` above the rational prime `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceK {
    pub q: u64,
    pub split: SplitType,
    /// 0 or 1 for the two places above a split prime, otherwise 0.
    pub index: u8,
}

impl fmt::Display for PlaceK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.split {
            SplitType::Split => write!(f, "{}.{}", self.q, self.index),
            SplitType::Inert => write!(f, "{}", self.q),
            SplitType::Ramified => write!(f, "√-3"),
        }
    }
}

pub fn places_above(q: u64) -> Result<Vec<PlaceK>> {
    if !arith::is_prime(q) {
        return Err(invalid(format!("{q} is not prime")));
    }
    let place = |split, index| PlaceK { q, split, index };
    Ok(match q % 3 {
        0 => vec![place(SplitType::Ramified, 0)],
        1 => vec![place(SplitType::Split, 0), place(SplitType::Split, 1)],
        _ => vec![place(SplitType::Inert, 0)],
    })
}

/// Precision used by the residue searches at 2 and 3.
pub const SQUARE_SEARCH_EXPONENT: u32 = 5;

/// `n = p^v u` with `p ∤ u`.
fn split_off(n: i64, p: u64) -> (u32, i64) {
    let v = arith::valuation(n, p);
    (v, n / (p as i64).pow(v))
}

/// Is the nonzero integer `n` a square in `Q_l`.
pub fn is_square_in_qp(n: i64, l: u64) -> bool {
    let (v, u) = split_off(n, l);
    if v % 2 == 1 {
        return false;
    }
    if l == 2 {
        u.rem_euclid(8) == 1
    } else {
        arith::is_qr_mod(u, l)
    }
}

/// Is the odd integer `u` a square in `Z_2[ζ]` modulo `2^precision`.
pub fn inert_two_unit_is_square(u: i64, precision: u32) -> bool {
    let m = 1i64 << precision;
    let u = u.rem_euclid(m);
    // (s + tζ)^2 = (s^2 - t^2) + (2st - t^2)ζ since ζ^2 = -1 - ζ.
    (0..m).any(|s| {
        (0..m).any(|t| {
            (s * s - t * t - u).rem_euclid(m) == 0 && (2 * s * t - t * t).rem_euclid(m) == 0
        })
    })
}

/// `v_3` of the norm `e^2 - ef + f^2` of `e + fζ`, capped at `cap`.
fn norm_valuation_at_three(e: i64, f: i64, cap: u32) -> u32 {
    let n = e * e - e * f + f * f;
    if n == 0 {
        return cap;
    }
    arith::valuation(n, 3).min(cap)
}

/// Is the unit `w` (`3 ∤ w`) a square in `Z_3[ζ]`, by searching `x` modulo 27
/// with `v_π(x^2 - w) ≥ 5`.
pub fn ramified_unit_is_square(w: i64) -> bool {
    let k = SQUARE_SEARCH_EXPONENT;
    (0..27i64).any(|s| {
        (0..27i64).any(|t| norm_valuation_at_three(s * s - t * t - w, 2 * s * t - t * t, k) >= k)
    })
}

/// Is `a` a square in the completion `K_𝔮`.
pub fn is_local_square_k(a: i64, place: PlaceK) -> bool {
    assert!(a != 0);
    let q = place.q;
    match place.split {
        SplitType::Split => is_square_in_qp(a, q),
        SplitType::Inert if q != 2 => arith::valuation(a, q) % 2 == 0,
        SplitType::Inert => {
            let (v, u) = split_off(a, 2);
            v % 2 == 0 && inert_two_unit_is_square(u, SQUARE_SEARCH_EXPONENT)
        }
        SplitType::Ramified => {
            // 3 = -ϖ^2, so 3^k u = ϖ^{2k} (-1)^k u.
            let (v, u) = split_off(a, 3);
            let w = if v % 2 == 0 { u } else { -u };
            ramified_unit_is_square(w)
        }
    }
}

/// `v_𝔮(n)` for a rational integer `n`.
pub fn place_valuation(n: i64, place: PlaceK) -> u32 {
    let v = arith::valuation(n, place.q);
    match place.split {
        SplitType::Ramified => 2 * v,
        _ => v,
    }
}

/// `a ∈ K*^2`, using `K*^2 ∩ Q* = Q*^2 ∪ -3 Q*^2`.
pub fn is_k_square(a: i64) -> bool {
    arith::is_square(a) || (a % 3 == 0 && arith::is_square(-a / 3))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaData {
    pub a: i64,
    pub places: Vec<PlaceK>,
    pub sa_q: Vec<u64>,
    pub t3: Option<u64>,
}

impl SaData {
    /// `|S_a(L)|`, valid when `a ∉ K*^2`.
    pub fn size_over_l(&self) -> usize {
        2 * self.places.len()
    }
}

fn in_sa(a: i64, place: PlaceK) -> bool {
    place_valuation(4 * a, place) % 6 != 0 && is_local_square_k(a, place)
}

fn check_sixth_power_free(a: i64) -> Result<()> {
    if !arith::is_kth_power_free(a, 6) {
        return Err(invalid(format!("{a} is not a nonzero sixth-power-free integer")));
    }
    Ok(())
}

fn relevant_primes(a: i64) -> Vec<u64> {
    let mut primes: Vec<u64> = arith::factor((4 * a).unsigned_abs()).iter().map(|&(p, _)| p).collect();
    if !primes.contains(&3) {
        primes.push(3);
    }
    primes.sort_unstable();
    primes
}

pub fn compute_sa(a: i64) -> Result<SaData> {
    check_sixth_power_free(a)?;
    let mut places = Vec::new();
    for q in relevant_primes(a) {
        places.extend(places_above(q)?.into_iter().filter(|&pl| in_sa(a, pl)));
    }
    let (sa_q, t3) = compute_sa_q(a)?;
    Ok(SaData { a, places, sa_q, t3 })
}

/// `S_a(Q)` (including `T_3(Q)`) and `T_3(Q)` on its own.
pub fn compute_sa_q(a: i64) -> Result<(Vec<u64>, Option<u64>)> {
    check_sixth_power_free(a)?;
    let t3 = t3_q(a);
    let mut primes: Vec<u64> = relevant_primes(a)
        .into_iter()
        .filter(|&l| {
            l != 3 && arith::valuation(4 * a, l) % 6 != 0 && is_square_in_qp(-3 * a, l)
        })
        .collect();
    primes.extend(t3);
    primes.sort_unstable();
    Ok((primes, t3))
}

pub fn t3_q(a: i64) -> Option<u64> {
    let v = arith::valuation(a, 3);
    ((v == 1 || v == 5) && is_square_in_qp(-3 * a, 3)).then_some(3)
}

/// `a ∈ T(Y)`: `a = 16 a'` with `a'` squarefree, prime to 6 and `> 1`.
pub fn in_t(a: i64, y: i64) -> bool {
    if a <= 0 || a > y || a % 16 != 0 || a % 3 == 0 {
        return false;
    }
    let a_prime = a / 16;
    a_prime % 2 == 1 && a_prime != 1 && arith::is_squarefree(a_prime)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundMode {
    ExactPair,
    SquareCase,
    GeneralBracket,
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::ExactPair => "exactPair",
            BoundMode::SquareCase => "squareCase",
            BoundMode::GeneralBracket => "generalBracket",
        })
    }
}

/// Bounds on `dim Sel^φ(E_a/K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelmerBoundResult {
    pub lower: u32,
    pub upper: u32,
    pub mode: BoundMode,
    pub r3_l: Option<RankValue>,
}

pub fn selmer_bound_type_i(a: i64, ranks: &dyn RankSource) -> Result<SelmerBoundResult> {
    let sa = compute_sa(a)?;
    if is_k_square(a) {
        return Ok(SelmerBoundResult {
            lower: 0,
            upper: sa.places.len() as u32 + 1,
            mode: BoundMode::SquareCase,
            r3_l: None,
        });
    }
    let r = rank_l(arith::squarefree_kernel(a), ranks)?;
    if sa.places.is_empty() {
        // When the real side is only bracketed the pair widens to cover it.
        return Ok(SelmerBoundResult {
            lower: r.lower(),
            upper: r.upper() + 1,
            mode: BoundMode::ExactPair,
            r3_l: Some(r),
        });
    }
    let s = sa.size_over_l() as u32;
    Ok(SelmerBoundResult {
        lower: r.lower().saturating_sub(s),
        upper: r.upper() + s + 2,
        mode: BoundMode::GeneralBracket,
        r3_l: Some(r),
    })
}

/// `dim Sel_3(E_a/K) ≤ 2` whenever the `φ`-bound certifies at most one
/// dimension with `S_a = ∅`; `None` means no certificate.
pub fn sel3_bound_type_i(a: i64, ranks: &dyn RankSource) -> Result<Option<u32>> {
    let bound = selmer_bound_type_i(a, ranks)?;
    Ok((bound.mode == BoundMode::ExactPair && bound.upper <= 1).then_some(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroups::DirectRanks;
    use proptest::prelude::*;

    #[test]
    fn places() {
        assert_eq!(places_above(7).unwrap().len(), 2);
        assert_eq!(places_above(2).unwrap()[0].split, SplitType::Inert);
        assert_eq!(places_above(3).unwrap()[0].split, SplitType::Ramified);
        assert!(places_above(9).is_err());
    }

    #[test]
    fn local_square_examples() {
        let two = places_above(2).unwrap()[0];
        let three = places_above(3).unwrap()[0];
        assert!(is_local_square_k(49, two));
        assert!(!is_local_square_k(5, places_above(5).unwrap()[0]));
        assert!(is_local_square_k(-3, three));
        assert!(!is_local_square_k(-1, three));
        assert!(!is_local_square_k(2, three));
        assert!(is_local_square_k(-27, three));
        // √5 lies in Q_2(√-3), but √3 does not.
        assert!(is_local_square_k(5, two));
        assert!(!is_local_square_k(3, two));
        assert!(is_local_square_k(-3, two));
    }

    #[test]
    fn inert_two_precision_agrees() {
        for u in (1..64).step_by(2) {
            let at = |k| inert_two_unit_is_square(u, k);
            assert_eq!(at(3), at(4), "u = {u}");
            assert_eq!(at(4), at(5), "u = {u}");
        }
        // The unit squares modulo 8 in Z_2[ζ]: 1, 5 (and -3 ≡ 5).
        let squares: Vec<i64> = (1..8).step_by(2).filter(|&u| inert_two_unit_is_square(u, 5)).collect();
        assert_eq!(squares, vec![1, 5]);
    }

    #[test]
    fn ramified_search_matches_residue_test() {
        for w in -40i64..40 {
            if w % 3 != 0 {
                assert_eq!(ramified_unit_is_square(w), w.rem_euclid(3) == 1, "w = {w}");
            }
        }
    }

    #[test]
    fn sa_examples() {
        assert!(compute_sa(80).unwrap().places.is_empty());
        let s49 = compute_sa(49).unwrap();
        assert_eq!(s49.places.len(), 3);
        assert!(s49.places.iter().any(|p| p.q == 2));
        assert_eq!(s49.places.iter().filter(|p| p.q == 7).count(), 2);
        assert!(compute_sa(64).is_err());
        // 5 is a square at the place above 2, where v(20) = 2.
        let s5 = compute_sa(5).unwrap();
        assert_eq!(s5.places, vec![places_above(2).unwrap()[0]]);
        assert_eq!(s5.sa_q, vec![2]);
    }

    #[test]
    fn sa_q_examples() {
        assert_eq!(t3_q(-3), Some(3));
        assert_eq!(compute_sa_q(-3).unwrap().0, vec![2, 3]);
        let (sa_q, t3) = compute_sa_q(-27 * 49).unwrap();
        assert_eq!(sa_q, vec![2, 7]);
        assert_eq!(t3, None);
        assert_eq!(t3_q(2), None);
    }

    #[test]
    fn t_membership() {
        assert!(in_t(80, 100));
        assert!(!in_t(80, 79));
        assert!(!in_t(48, 100));
        assert!(!in_t(32, 100));
        assert!(!in_t(16, 100));
        assert!(!in_t(16 * 25, 1000));
        assert!(!in_t(-80, 100));
    }

    #[test]
    fn k_squares() {
        assert!(is_k_square(49));
        assert!(is_k_square(-3));
        assert!(is_k_square(-27 * 4));
        assert!(!is_k_square(3));
        assert!(!is_k_square(-1));
        assert!(!is_k_square(80));
    }

    #[test]
    fn bound_examples() {
        let src = DirectRanks::new();
        let b80 = selmer_bound_type_i(80, &src).unwrap();
        assert_eq!((b80.mode, b80.lower, b80.upper), (BoundMode::ExactPair, 0, 1));
        let b49 = selmer_bound_type_i(49, &src).unwrap();
        assert_eq!((b49.mode, b49.lower, b49.upper), (BoundMode::SquareCase, 0, 4));
        assert_eq!(sel3_bound_type_i(80, &src).unwrap(), Some(2));
        assert_eq!(sel3_bound_type_i(49, &src).unwrap(), None);
        let b5 = selmer_bound_type_i(5, &src).unwrap();
        assert_eq!(b5.mode, BoundMode::GeneralBracket);
        assert_eq!(sel3_bound_type_i(5, &src).unwrap(), None);
    }

    #[test]
    fn t_elements_have_empty_sa() {
        for a in (16..20000).step_by(16).filter(|&a| in_t(a, i64::MAX)) {
            assert!(compute_sa(a).unwrap().places.is_empty(), "a = {a}");
        }
    }

    proptest! {
        #[test]
        fn bounds_are_ordered(a in -5000i64..5000) {
            prop_assume!(arith::is_kth_power_free(a, 6));
            let b = selmer_bound_type_i(a, &DirectRanks::new()).unwrap();
            prop_assert!(b.lower <= b.upper);
            if b.mode == BoundMode::ExactPair {
                prop_assert!(b.upper > b.lower);
            }
        }

        #[test]
        fn rational_squares_are_local_squares(n in 1i64..1000, neg in any::<bool>()) {
            let a = if neg { -3 * n * n } else { n * n };
            for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 31, 37] {
                for pl in places_above(q).unwrap() {
                    prop_assert!(is_local_square_k(a, pl), "{} at {}", a, pl);
                }
            }
        }

        #[test]
        fn sa_places_are_supported(a in -100000i64..100000) {
            prop_assume!(arith::is_kth_power_free(a, 6));
            let sa = compute_sa(a).unwrap();
            for pl in &sa.places {
                prop_assert!((2 * a) % pl.q as i64 == 0 || pl.q == 3);
                prop_assert!(in_sa(a, *pl));
            }
        }
    }
}
