//! Small-integer helpers shared by every module: trial-division factoring,
//! power-free tests, valuations and prime sieves. Everything here works on
//! machine integers; the values involved stay far below `u64::MAX`.

use num_integer::Integer;

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n % i == 0 || n % (i + 2) == 0 {
            return false;
        }
        i += 6;
    }
    true
}

/// Prime factorization of `n > 0` as `(prime, exponent)` pairs, ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor(0)");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn valuation(n: i64, p: u64) -> u32 {
    assert!(n != 0);
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// True iff no prime's `k`-th power divides `n` (`n != 0`).
pub fn is_kth_power_free(n: i64, k: u32) -> bool {
    n != 0 && factor(n.unsigned_abs()).iter().all(|&(_, e)| e < k)
}

pub fn is_squarefree(n: i64) -> bool {
    is_kth_power_free(n, 2)
}

/// `n` divided by its largest square divisor, sign preserved.
pub fn squarefree_kernel(n: i64) -> i64 {
    assert!(n != 0);
    let core: u64 = factor(n.unsigned_abs())
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product();
    n.signum() * core as i64
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Legendre symbol test for odd primes: is `n` a nonzero square mod `p`.
pub fn is_qr_mod(n: i64, p: u64) -> bool {
    let r = n.rem_euclid(p as i64) as u64;
    r != 0 && pow_mod(r, (p - 1) / 2, p) == 1
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Marks the integers in `[1, n]` divisible by `p^k` for some prime `p`.
/// Entry `i` of the result is `true` when `i` is `k`-th power free.
pub fn power_free_table(n: u64, k: u32) -> Vec<bool> {
    let mut ok = vec![true; n as usize + 1];
    ok[0] = false;
    let root = (n as f64).powf(1.0 / k as f64) as u64 + 1;
    for p in primes_up_to(root) {
        let pk = p.pow(k);
        if pk > n {
            break;
        }
        let mut m = pk;
        while m <= n {
            ok[m as usize] = false;
            m += pk;
        }
    }
    ok
}
