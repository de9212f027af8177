//! Small-integer number theory used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / a.gcd(&b) * b
    }
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some((x.rem_euclid(m as i128)) as i64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Least positive primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let qs = prime_divisors(p - 1);
    (2..p)
        .find(|&g| qs.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("a prime has a primitive root")
}

/// Discrete logarithm of `x` to base `g` in `(Z/p)^×`, where `g` generates a
/// subgroup of order `order` whose factorization is `order_factors`.
/// Pohlig-Hellman with baby-step giant-step on each prime power.
pub fn discrete_log(g: u64, x: u64, p: u64, order: u64, order_factors: &[(u64, u32)]) -> Option<u64> {
    let x = x % p;
    if x == 0 {
        return None;
    }
    let mut residues = Vec::new();
    for &(q, e) in order_factors {
        let qe = q.pow(e);
        let cofactor = order / qe;
        let gq = mod_pow(g, cofactor, p);
        let xq = mod_pow(x, cofactor, p);
        // gq has order q^e; digits of log base q
        let gamma = mod_pow(gq, q.pow(e - 1), p);
        let mut k = 0u64;
        let mut qk = 1u64;
        for i in 0..e {
            let ginv_k = mod_pow(mod_inv_u64(gq, p), k, p);
            let h = mod_pow(mod_mul(ginv_k, xq, p), q.pow(e - 1 - i), p);
            let d = bsgs(gamma, h, p, q)?;
            k += d * qk;
            qk *= q;
        }
        residues.push((k, qe));
    }
    let mut acc = 0i128;
    let mut modulus = 1i128;
    for (r, m) in residues {
        let (_, s, _) = ext_gcd(modulus, m as i128);
        let diff = (r as i128 - acc).rem_euclid(m as i128);
        acc += modulus * ((diff * s).rem_euclid(m as i128));
        modulus *= m as i128;
        acc = acc.rem_euclid(modulus);
    }
    Some(acc as u64)
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn bsgs(g: u64, h: u64, p: u64, order: u64) -> Option<u64> {
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut e = 1u64;
    for j in 0..m {
        table.entry(e).or_insert(j);
        e = mod_mul(e, g, p);
    }
    let factor = mod_pow(mod_inv_u64(g, p), m, p);
    let mut gamma = h;
    for i in 0..m {
        if let Some(&j) = table.get(&gamma) {
            let v = i * m + j;
            if v < order {
                return Some(v);
            }
        }
        gamma = mod_mul(gamma, factor, p);
    }
    None
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    let mut a = a;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a / n) for odd n > 0
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| mod_pow(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mod_mul(tt, tt, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    Some(r)
}

/// `ℓ`-adic valuation of a nonzero big integer.
pub fn valuation(x: &BigInt, l: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let l = BigInt::from(l);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// Largest power of two dividing `n` (`n > 0`).
pub fn two_part(n: u64) -> u64 {
    1 << n.trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 97] {
            for a in -30i64..30 {
                let brute = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if (1..p).any(|x| (x * x) % p == a.rem_euclid(p as i64) as u64) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p as i64), brute, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        // (d/2) = +1 iff d ≡ ±1 mod 8
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(40, 3), 1);
    }

    #[test]
    fn dlog_roundtrip() {
        let p = 1_000_003u64;
        let fac = factor(p - 1);
        let g = primitive_root(p);
        for k in [0u64, 1, 17, 999_999, 123_456] {
            let x = mod_pow(g, k, p);
            assert_eq!(discrete_log(g, x, p, p - 1, &fac), Some(k));
        }
    }

    #[test]
    fn primitive_roots_small() {
        assert_eq!(primitive_root(11), 2);
        assert_eq!(primitive_root(19), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(3), 2);
    }

    #[test]
    fn sqrt_mod_works() {
        for p in [3u64, 7, 11, 13, 41, 1009] {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }

    #[test]
    fn divisors_and_phi() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(209), 180);
        assert!(is_squarefree(209));
        assert!(!is_squarefree(12));
    }
}
