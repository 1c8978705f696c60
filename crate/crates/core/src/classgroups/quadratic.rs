//! Positive definite binary quadratic forms `(A, B, C)` of discriminant
//! `B^2 - 4AC < 0`: reduction, composition, and class groups.

use std::collections::HashMap;

use num_integer::Integer;

use super::QuadDiscriminant;
use crate::error::{invalid, Error, Result};

/// Largest `|Δ|` accepted by the single-discriminant oracle.
pub const ORACLE_MAX_ABS_DISC: i64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self {
            a: 1,
            b,
            c: (b * b - disc) / 4,
        }
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn reduce(self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b > a || b <= -a {
                // b -> b + 2ka into (-a, a].
                let k = Integer::div_floor(&(a - b), &(2 * a));
                let nb = b + 2 * k * a;
                c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
                b = nb;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Self {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    /// Gauss composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.disc() as i128;
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        debug_assert_eq!((b3 * b3 - disc) % (4 * a3), 0);
        Self {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        }
        .reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.disc());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

/// Reduced primitive forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    let n = -disc;
    let mut a = 1i64;
    while 3 * a * a <= n {
        let start = if disc.rem_euclid(2) == 0 { 0 } else { 1 };
        let mut b = start;
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && a.gcd(&b).gcd(&c) == 1 {
                    out.push(QuadForm { a, b, c });
                    if b != 0 && b != a && a != c {
                        out.push(QuadForm { a, b: -b, c });
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort();
    out
}

/// Class group of an imaginary quadratic order, as invariant factors
/// `d_1 | d_2 | ...` (empty for the trivial group).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub disc: QuadDiscriminant,
    pub elementary_divisors: Vec<u64>,
}

impl ClassGroup {
    pub fn class_number(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }

    /// `#Cl[3]`.
    pub fn h3_star(&self) -> u64 {
        3u64.pow(self.three_rank())
    }

    pub fn three_rank(&self) -> u32 {
        self.elementary_divisors.iter().filter(|&&d| d % 3 == 0).count() as u32
    }
}

pub fn class_group_imaginary(disc: QuadDiscriminant) -> Result<ClassGroup> {
    let d = disc.value();
    if d >= 0 {
        return Err(invalid(format!("{d} is not negative")));
    }
    if !disc.is_fundamental() {
        return Err(invalid(format!("{d} is not a fundamental discriminant")));
    }
    if -d > ORACLE_MAX_ABS_DISC {
        return Err(Error::ResourceLimit(format!(
            "|{d}| exceeds the class group oracle bound {ORACLE_MAX_ABS_DISC}"
        )));
    }
    let forms = reduced_forms(d);
    let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let id = QuadForm::identity(d);
    let orders: Vec<u64> = forms
        .iter()
        .map(|f| {
            let mut g = *f;
            let mut k = 1u64;
            while g != id {
                g = g.compose(f);
                debug_assert!(index.contains_key(&g));
                k += 1;
            }
            k
        })
        .collect();
    Ok(ClassGroup {
        disc,
        elementary_divisors: invariant_factors(&orders),
    })
}

/// Invariant factors of a finite abelian group given the multiset of its
/// element orders, via `#G[l^k] = l^{sum_i min(k, e_i)}`.
pub(crate) fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let h = orders.len() as u64;
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (l, _) in crate::arith::factor(h.max(1)) {
        if h == 1 {
            break;
        }
        let mut exponents = Vec::new();
        let mut prev = 0u32;
        let mut k = 1u32;
        loop {
            let lk = l.pow(k);
            let count = orders.iter().filter(|&&o| lk % o == 0).count() as u64;
            let rank_sum = log_exact(count, l);
            let new_cyclic = rank_sum - prev;
            if new_cyclic == 0 {
                break;
            }
            // new_cyclic = number of cyclic factors with exponent >= k.
            exponents.push(new_cyclic);
            prev = rank_sum;
            k += 1;
        }
        // exponents[k-1] = #{i : e_i >= k}; rebuild the e_i, largest first.
        let n = exponents[0] as usize;
        let mut e = vec![0u32; n];
        for (k, &m) in exponents.iter().enumerate() {
            for slot in e.iter_mut().take(m as usize) {
                *slot = k as u32 + 1;
            }
        }
        per_prime.push((l, e));
    }
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (l, e) in per_prime {
        // Largest exponents go to the last invariant factor.
        for (i, &ei) in e.iter().enumerate() {
            out[len - 1 - i] *= l.pow(ei);
        }
    }
    out
}

fn log_exact(n: u64, l: u64) -> u32 {
    let mut m = n;
    let mut k = 0;
    while m > 1 {
        assert_eq!(m % l, 0, "{n} is not a power of {l}");
        m /= l;
        k += 1;
    }
    k
}

pub fn h3_star_oracle(disc: QuadDiscriminant) -> Result<u64> {
    Ok(class_group_imaginary(disc)?.h3_star())
}

fn cube_is_identity(f: &QuadForm, id: &QuadForm) -> bool {
    f.compose(f).compose(f) == *id
}

/// `#Cl(Δ)[3]` for many negative fundamental discriminants at once, by a
/// windowed sweep over reduced forms. Result is aligned with `discs`.
pub fn h3_star_oracle_batch(discs: &[i64]) -> Result<Vec<u64>> {
    for &d in discs {
        let qd = QuadDiscriminant::new(d)?;
        if d >= 0 || !qd.is_fundamental() {
            return Err(invalid(format!("{d} is not a negative fundamental discriminant")));
        }
    }
    let mut sorted: Vec<i64> = discs.iter().map(|d| -d).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut result: HashMap<i64, u64> = HashMap::with_capacity(sorted.len());
    const WINDOW: i64 = 1 << 16;
    let mut i = 0;
    while i < sorted.len() {
        let lo = sorted[i];
        let hi = lo + WINDOW;
        let mut j = i;
        while j < sorted.len() && sorted[j] < hi {
            j += 1;
        }
        let targets = &sorted[i..j];
        let mut slot = vec![usize::MAX; WINDOW as usize];
        for (k, &t) in targets.iter().enumerate() {
            slot[(t - lo) as usize] = k;
        }
        let mut forms: Vec<Vec<QuadForm>> = vec![Vec::new(); targets.len()];
        sweep_window(lo, hi, |n, f| {
            let k = slot[(n - lo) as usize];
            if k != usize::MAX {
                forms[k].push(f);
            }
        });
        for (k, &t) in targets.iter().enumerate() {
            let id = QuadForm::identity(-t);
            let n = forms[k]
                .iter()
                .filter(|f| f.a.gcd(&f.b).gcd(&f.c) == 1 && cube_is_identity(f, &id))
                .count() as u64;
            result.insert(-t, n);
        }
        i = j;
    }
    Ok(discs.iter().map(|d| result[d]).collect())
}

/// Every reduced form with `lo <= |Δ| < hi`, reported with `|Δ|`.
fn sweep_window(lo: i64, hi: i64, mut visit: impl FnMut(i64, QuadForm)) {
    let mut a = 1i64;
    while 3 * a * a < hi {
        for b in (-a + 1)..=a {
            // |Δ| = 4ac - b^2 in [lo, hi).
            let c_first = Integer::div_ceil(&(lo + b * b), &(4 * a)).max(a);
            let c_last = Integer::div_floor(&(hi - 1 + b * b), &(4 * a));
            for c in c_first..=c_last {
                if b < 0 && c == a {
                    continue;
                }
                visit(4 * a * c - b * b, QuadForm { a, b, c });
            }
        }
        a += 1;
    }
}
