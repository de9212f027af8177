use kolyvagin_core::arith;
use kolyvagin_core::cyclo::{
    alpha, alpha_unit, base_case_holds, cyclotomic_poly, norm_relation_check, theta_prime, CycloConfig, CycloNum, CycloUnit,
};
use kolyvagin_core::quadfield::make_field;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use std::f64::consts::PI;

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C, b: C) -> C {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

fn zeta(m: u64, k: u64) -> C {
    let t = 2.0 * PI * (k % m) as f64 / m as f64;
    (t.cos(), t.sin())
}

/// Numerical value of a dense cyclotomic number at `ζ_m = e^{2πi/m}`.
fn eval_num(x: &CycloNum) -> C {
    let m = x.modulus();
    let ev = |cs: &[num_bigint::BigInt]| {
        cs.iter().enumerate().fold((0.0, 0.0), |acc, (k, c)| {
            let z = zeta(m, k as u64);
            let c = c.to_f64().unwrap();
            (acc.0 + c * z.0, acc.1 + c * z.1)
        })
    };
    cdiv(ev(x.numerator()), ev(x.denominator()))
}

/// Numerical value of a product form directly from its factors.
fn eval_unit(x: &CycloUnit) -> C {
    let m = x.modulus();
    let mut v = zeta(m, x.zeta_exponent());
    for (&c, &e) in x.factors() {
        let z = zeta(m, c);
        let b = (z.0 - 1.0, z.1);
        for _ in 0..e.unsigned_abs() {
            v = if e > 0 { cmul(v, b) } else { cdiv(v, b) };
        }
    }
    v
}

fn close(a: C, b: C) -> bool {
    let scale = 1.0 + b.0.abs() + b.1.abs();
    (a.0 - b.0).abs() < 1e-7 * scale && (a.1 - b.1).abs() < 1e-7 * scale
}

/// An element of exact order `m` modulo the prime `q ≡ 1 mod m`.
fn root_of_order(m: u64, q: u64) -> u64 {
    let g = arith::primitive_root(q);
    arith::mod_pow(g, (q - 1) / m, q)
}

#[test]
fn cyclotomic_polynomials_have_the_right_roots() {
    for m in [1u64, 5, 8, 12, 15, 40, 44] {
        let p = cyclotomic_poly(m);
        assert_eq!(p.len() as u64 - 1, arith::euler_phi(m));
        for k in (1..=m).filter(|&k| arith::gcd(k as i64, m as i64) == 1) {
            let z = zeta(m, k);
            let v = p.iter().rev().fold((0.0, 0.0), |acc, c| {
                let t = cmul(acc, z);
                (t.0 + c.to_f64().unwrap(), t.1)
            });
            assert!(v.0.abs() < 1e-6 && v.1.abs() < 1e-6, "m = {m}, k = {k}");
        }
    }
}

#[test]
fn alpha_expansion_matches_numerics() {
    let cfg = CycloConfig::default();
    for (d, n) in [(5i64, 1u64), (5, 11), (2, 1), (2, 7), (13, 3)] {
        let f = make_field(d).unwrap();
        let u = alpha_unit(&f, n).unwrap();
        let x = alpha(&f, n, &cfg).unwrap();
        assert!(close(eval_num(&x), eval_unit(&u)), "d = {d}, n = {n}");
    }
}

#[test]
fn alpha_support_is_the_class_of_one_mod_n() {
    for (d, n) in [(5i64, 11u64), (5, 33), (10, 3), (13, 7)] {
        let f = make_field(d).unwrap();
        let u = alpha_unit(&f, n).unwrap();
        let m = n * f.conductor();
        assert!(!u.factors().is_empty());
        for (&c, &e) in u.factors() {
            assert_eq!(c % n, 1 % n);
            assert_eq!(arith::gcd(c as i64, m as i64), 1);
            assert_eq!(e, arith::kronecker(f.disc(), c as i64) as i64);
        }
    }
}

#[test]
fn alpha_is_fixed_by_the_kernel_of_the_character() {
    // γ with γ ≡ 1 mod n and ω_F(γ) = 1 fixes F(μ_n)
    let cfg = CycloConfig::default();
    let f = make_field(5).unwrap();
    let n = 11;
    let m = n * f.conductor();
    let a = alpha(&f, n, &cfg).unwrap();
    for c in (1..m).step_by(n as usize).filter(|&c| arith::gcd(c as i64, m as i64) == 1) {
        let g = a.galois(c).unwrap();
        if arith::kronecker(f.disc(), c as i64) == 1 {
            assert_eq!(g, a, "c = {c}");
        } else {
            assert_eq!(g.mul(&a), CycloNum::one(m), "c = {c}");
        }
    }
}

#[test]
fn base_case_small_fields() {
    let cfg = CycloConfig::default();
    for d in [2i64, 3, 5, 6, 10, 13] {
        assert!(base_case_holds(&make_field(d).unwrap(), &cfg).unwrap(), "d = {d}");
    }
}

#[test]
fn norm_relations() {
    let cfg = CycloConfig::default();
    let f = make_field(5).unwrap();
    assert!(norm_relation_check(&f, 11, 11, &cfg).unwrap());
    assert!(norm_relation_check(&f, 33, 11, &cfg).unwrap());
    assert!(norm_relation_check(&f, 209, 19, &cfg).unwrap());
    let f10 = make_field(10).unwrap();
    assert!(norm_relation_check(&f10, 3, 3, &cfg).unwrap());
    assert!(norm_relation_check(&f, 33, 3, &cfg).is_err());
}

#[test]
fn theta_coefficients_are_galois_conjugates() {
    let f = make_field(5).unwrap();
    let t = theta_prime(&f, 11).unwrap();
    let m = t.modulus();
    let q = (1..).map(|k| k * m + 1).find(|&q| arith::is_prime(q)).unwrap();
    let w = root_of_order(m, q);
    let base = alpha_unit(&f, 11).unwrap();
    for idx in 0..t.group().order() {
        let c = t.lift(idx);
        assert_eq!(c % f.conductor(), 1);
        let lhs = t.coefficient(idx).unwrap().eval_mod(q, w).unwrap();
        let rhs = base.eval_mod(q, arith::mod_pow(w, c, q)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn oversize_expansions_are_resource_errors() {
    let f = make_field(5).unwrap();
    let cfg = CycloConfig { max_phi: 16 };
    assert!(matches!(alpha(&f, 11, &cfg), Err(kolyvagin_core::Error::Resource(_))));
}

proptest! {
    #[test]
    fn galois_commutes_with_reduction(
        factors in prop::collection::vec((1u64..55, -3i64..=3), 1..6),
        k in 0u64..55,
        c_idx in 0usize..40,
    ) {
        let m = 55u64;
        let q = 331u64; // 331 = 6·55 + 1
        let w = root_of_order(m, q);
        let units: Vec<u64> = (1..m).filter(|&c| arith::gcd(c as i64, m as i64) == 1).collect();
        let c = units[c_idx % units.len()];
        let mut x = CycloUnit::zeta(m, k);
        for (a, e) in factors {
            x = x.mul(&CycloUnit::binomial(m, a).pow(e));
        }
        let lhs = x.galois(c).unwrap().eval_mod(q, w).unwrap();
        let rhs = x.eval_mod(q, arith::mod_pow(w, c, q)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_multiplicative(a in 1u64..35, b in 1u64..35, e in -3i64..=3) {
        let m = 35u64;
        let q = 71u64;
        let w = root_of_order(m, q);
        let x = CycloUnit::binomial(m, a).pow(e);
        let y = CycloUnit::binomial(m, b);
        let xy = x.mul(&y).eval_mod(q, w).unwrap();
        prop_assert_eq!(xy, arith::mod_mul(x.eval_mod(q, w).unwrap(), y.eval_mod(q, w).unwrap(), q));
    }
}
