//! Transcendental constants (π, ζ(k)) as rational approximations with
//! absolute error below 2^-240, plus exact-to-decimal rendering.
//!
//! Predicted values in experiment tables are built from these, so rounding
//! to 12 significant digits happens exactly once, at output time.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const PREC: usize = 256;
const GUARD: usize = 32;

fn fixed_to_rational(v: BigInt, bits: usize) -> BigRational {
    BigRational::new(v, BigInt::one() << bits)
}

/// Rounds `x` to the nearest multiple of 2^-PREC.
fn round_to_prec(x: &BigRational) -> BigRational {
    let scaled = x * BigRational::from_integer(BigInt::one() << PREC);
    fixed_to_rational(round_half_even(&scaled), PREC)
}

/// arctan(1/x) in fixed point with `bits` fractional bits.
fn arctan_inv(x: u32, bits: usize) -> BigInt {
    let one = BigInt::one() << bits;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

pub fn pi() -> &'static BigRational {
    static PI: OnceLock<BigRational> = OnceLock::new();
    PI.get_or_init(|| {
        let bits = PREC + GUARD;
        let v = arctan_inv(5, bits) * 16 - arctan_inv(239, bits) * 4;
        round_to_prec(&fixed_to_rational(v, bits))
    })
}

fn bernoulli_even(count: usize) -> Vec<BigRational> {
    // B_0..B_{2*count} via the standard recurrence sum_{j<=m} C(m+1,j) B_j = 0.
    let n = 2 * count;
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    (1..=count).map(|j| b[2 * j].clone()).collect()
}

fn zeta_euler_maclaurin(k: u32) -> BigRational {
    const N: u64 = 64;
    const TERMS: usize = 40;
    let r = |num: i64, den: BigInt| BigRational::new(BigInt::from(num), den);
    let nk = |e: u32| BigInt::from(N).pow(e);
    let mut s = BigRational::zero();
    for n in 1..N {
        s += r(1, BigInt::from(n).pow(k));
    }
    s += BigRational::new(BigInt::from(N), nk(k) * BigInt::from(k - 1));
    s += r(1, nk(k) * 2);
    let bern = bernoulli_even(TERMS);
    let mut rising = BigInt::from(k); // k (k+1) ... (k+2j-2)
    let mut fact = BigInt::from(2); // (2j)!
    for (idx, b2j) in bern.iter().enumerate() {
        let j = idx as u32 + 1;
        let term = b2j * BigRational::new(rising.clone(), fact.clone() * nk(k + 2 * j - 1));
        s += term;
        rising *= BigInt::from(k + 2 * j - 1) * BigInt::from(k + 2 * j);
        fact *= BigInt::from(2 * j + 1) * BigInt::from(2 * j + 2);
    }
    round_to_prec(&s)
}

/// ζ(k) for `k >= 2`. Even arguments up to 6 use the closed forms in π.
pub fn zeta(k: u32) -> BigRational {
    assert!(k >= 2, "zeta({k}) diverges or is out of range");
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<u32, BigRational>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&k) {
        return v.clone();
    }
    let p = pi();
    let v = match k {
        2 => round_to_prec(&(p * p / BigRational::from_integer(6.into()))),
        4 => round_to_prec(&(pow(p, 4) / BigRational::from_integer(90.into()))),
        6 => round_to_prec(&(pow(p, 6) / BigRational::from_integer(945.into()))),
        _ => zeta_euler_maclaurin(k),
    };
    cache.lock().unwrap().insert(k, v.clone());
    v
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn round_half_even(x: &BigRational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    let twice: BigInt = r * 2;
    match twice.cmp(x.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Decimal rendering: integers verbatim, everything else rounded to `sig`
/// significant digits with trailing zeros dropped. No exponent notation.
pub fn format_decimal(x: &BigRational, sig: usize) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // 10^e <= ax < 10^(e+1)
    let mut e: i64 = (ax.numer().bits() as i64 - ax.denom().bits() as i64) * 3 / 10;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::from(10).pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(10).pow((-e) as u32))
        }
    };
    while pow10(e) > ax {
        e -= 1;
    }
    while pow10(e + 1) <= ax {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let mut digits = round_half_even(&(&ax * pow10(shift)));
    if digits >= BigInt::from(10).pow(sig as u32) {
        digits /= 10;
        e += 1;
    }
    let s = digits.to_str_radix(10);
    let point = e + 1; // digits before the decimal point
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&s);
    } else if point as usize >= s.len() {
        out.push_str(&s);
        out.extend(std::iter::repeat_n('0', point as usize - s.len()));
    } else {
        out.push_str(&s[..point as usize]);
        out.push('.');
        out.push_str(&s[point as usize..]);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn to_f64(x: &BigRational) -> f64 {
    match x.to_f64() {
        Some(v) => v,
        None => {
            let sign = if x.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
            sign * f64::INFINITY
        }
    }
}
