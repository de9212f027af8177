//! Reduced indefinite binary quadratic forms and the continued-fraction unit.

use num_bigint::BigInt;
use num_integer::Roots;
use std::collections::HashSet;

/// A form `a x^2 + b xy + c y^2`.
pub type Form = (i64, i64, i64);

/// All reduced forms of discriminant `disc`: `0 < b < √D` and
/// `√D - b < 2|a| < √D + b`.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let s = disc.sqrt();
    let mut out = Vec::new();
    for b in 1..=s {
        if (b - disc).rem_euclid(2) != 0 {
            continue;
        }
        let num = b * b - disc;
        for a_abs in 1..=s {
            let two_a = 2 * a_abs;
            if two_a + b <= s || two_a - b > s {
                continue;
            }
            for a in [a_abs, -a_abs] {
                if num % (4 * a) == 0 {
                    let c = num / (4 * a);
                    if gcd3(a, b, c) == 1 {
                        out.push((a, b, c));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    crate::arith::gcd(crate::arith::gcd(a, b), c)
}

/// The reduction operator `ρ` on reduced forms.
pub fn rho(f: Form, disc: i64) -> Form {
    let (_, b, c) = f;
    let s = disc.sqrt();
    let m = 2 * c.abs();
    let b2 = s - (s + b).rem_euclid(m);
    (c, b2, (b2 * b2 - disc) / (4 * c))
}

/// Cycles of reduced forms under `ρ`; their number is the narrow class number.
pub fn cycles(disc: i64) -> Vec<Vec<Form>> {
    let forms = reduced_forms(disc);
    let mut seen: HashSet<Form> = HashSet::new();
    let mut out = Vec::new();
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        let mut cyc = vec![f];
        seen.insert(f);
        let mut g = rho(f, disc);
        while g != f {
            assert!(seen.insert(g), "ρ is not a permutation of reduced forms");
            cyc.push(g);
            g = rho(g, disc);
        }
        out.push(cyc);
    }
    out
}

/// Fundamental unit `(x + y√D)/2 > 1` of the order of discriminant `D`,
/// from the period of the purely periodic expansion of `(P_0 + √D)/2`.
/// Returns `(x, y, norm)`.
pub fn fundamental_unit(disc: i64) -> (BigInt, BigInt, i64) {
    let s = disc.sqrt();
    let mut p0 = s;
    if (p0 - disc).rem_euclid(2) != 0 {
        p0 -= 1;
    }
    let (mut p, mut q) = (p0, 2i64);
    let (mut q_prev2, mut q_prev1) = (BigInt::from(1), BigInt::from(0));
    let mut k = 0usize;
    loop {
        let a = (p + s).div_euclid(q);
        let qn = BigInt::from(a) * &q_prev1 + &q_prev2;
        q_prev2 = q_prev1;
        q_prev1 = qn;
        k += 1;
        let p_next = a * q - p;
        let q_next = (disc - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        if p == p0 && q == 2 {
            break;
        }
    }
    // ε = q_{k-1} x_0 + q_{k-2} with x_0 = (P_0 + √D)/2
    let x = &q_prev1 * p0 + &q_prev2 * 2;
    let y = q_prev1;
    let norm = if k % 2 == 0 { 1 } else { -1 };
    (x, y, norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_unit(disc: i64) -> (i64, i64) {
        for y in 1i64.. {
            for sign in [-4i64, 4] {
                let x2 = disc * y * y + sign;
                let x = x2.sqrt();
                if x2 >= 0 && x * x == x2 {
                    return (x, y);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn unit_matches_pell_search() {
        for disc in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 40, 41, 44, 53, 56, 57, 60, 61, 73, 76, 88, 89, 92, 97] {
            let (x, y, norm) = fundamental_unit(disc);
            let (bx, by) = brute_unit(disc);
            assert_eq!((x.clone(), y.clone()), (BigInt::from(bx), BigInt::from(by)), "D={disc}");
            let n = (&x * &x - BigInt::from(disc) * &y * &y) / 4;
            assert_eq!(n, BigInt::from(norm));
        }
    }

    #[test]
    fn narrow_class_numbers() {
        // h^+ for small fundamental discriminants
        let expect = [(5i64, 1usize), (8, 1), (12, 2), (13, 1), (40, 2), (60, 4), (65, 2), (136, 4), (145, 4)];
        for (disc, h) in expect {
            assert_eq!(cycles(disc).len(), h, "D={disc}");
        }
    }
}
