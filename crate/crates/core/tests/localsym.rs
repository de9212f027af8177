use kolyvagin_core::arith;
use kolyvagin_core::groupring::AugQuot;
use kolyvagin_core::localsym::{del, del_class, fin_tr_split, phi_fs, tame_exponent};
use kolyvagin_core::quadfield::{make_field, QuadNum};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// `-log_g(u) mod ℓ-1` by walking the powers of the least primitive root.
fn tame_oracle(l: u64, u: u64) -> i64 {
    let g = (2..l).find(|&g| (1..l - 1).all(|k| arith::mod_pow(g, k, l) != 1)).unwrap();
    let k = (0..l - 1).find(|&k| arith::mod_pow(g, k, l) == u % l).unwrap();
    ((l - 1 - k) % (l - 1)) as i64
}

#[test]
fn tame_exponent_matches_brute_force() {
    for l in [3u64, 5, 7, 11, 19, 29, 31, 41] {
        for u in 1..l {
            assert_eq!(tame_exponent(l, u).unwrap(), tame_oracle(l, u), "ℓ = {l}, u = {u}");
        }
        assert!(tame_exponent(l, l).is_err());
    }
}

#[test]
fn rational_prime_has_trivial_symbol_at_its_own_level() {
    // ℓ = λλ^τ: the unit part at λ is 1 and Fr_λ acts trivially on μ_1
    let f = make_field(5).unwrap();
    for l in [11u64, 19, 29] {
        let ell = f.num(l as i64, 0);
        let lam = f.lambda(l).unwrap();
        assert!(del_class(&f, &ell, &lam, l).unwrap().is_zero(), "ℓ = {l}");
        let dec = fin_tr_split(&f, &ell, l).unwrap();
        assert_eq!((dec.ord_lambda, dec.ord_lambda_tau, dec.unit_residue), (1, 1, 1));
        assert!(!dec.is_minus_type());
    }
}

#[test]
fn symbol_of_a_unit_is_its_tame_exponent() {
    let f = make_field(5).unwrap();
    let l = 11u64;
    let lam = f.lambda(l).unwrap();
    let q = AugQuot::new(l, 1).unwrap();
    for x in [f.num(2, 0), f.num(3, 1), f.fundamental_unit().clone()] {
        let u = f.residue(&x, &lam).unwrap();
        let c = del_class(&f, &x, &lam, l).unwrap();
        let want = tame_oracle(l, u).rem_euclid(10);
        assert_eq!(q.proj_new(&c).unwrap(), want);
    }
}

#[test]
fn generators_of_lambda_powers_are_minus_type_after_twisting() {
    let f = make_field(10).unwrap();
    for l in [3u64, 13, 31] {
        let g = f.lambda_generator(l).unwrap();
        let x = g.g.conj().div(&g.g);
        let dec = fin_tr_split(&f, &x, l).unwrap();
        assert!(dec.is_minus_type(), "ℓ = {l}");
        assert_eq!(dec.ord_lambda, -(g.k as i64));
    }
}

#[test]
fn phi_fs_values_are_reduced() {
    let f = make_field(5).unwrap();
    for l in [11u64, 19, 29, 31] {
        for (a, b) in [(2i64, 0i64), (3, 1), (7, 5), (1, 1)] {
            let x = f.num(a, b);
            if let Ok(p) = phi_fs(&f, &x, l, false) {
                assert!((0..(l - 1) as i64).contains(&p.value()));
            }
        }
    }
}

#[test]
fn level_must_be_divisible_by_the_place() {
    let f = make_field(5).unwrap();
    let lam = f.lambda(11).unwrap();
    assert!(del(&f, &f.num(2, 0), &lam, 19).is_err());
    assert!(fin_tr_split(&f, &f.num(2, 0), 7).is_err());
}

fn nonzero(d: i64, a: i64, b: i64) -> Option<QuadNum> {
    let x = QuadNum::new(d, BigRational::from_integer(BigInt::from(a)), BigRational::from_integer(BigInt::from(b)));
    (!x.is_zero()).then_some(x)
}

proptest! {
    #[test]
    fn del_is_a_homomorphism(a in -30i64..30, b in -30i64..30, c in -30i64..30, e in -30i64..30) {
        let f = make_field(5).unwrap();
        let (Some(x), Some(y)) = (nonzero(5, a, b), nonzero(5, c, e)) else { return Ok(()) };
        for (l, n) in [(11u64, 11u64), (11, 209), (19, 209)] {
            let lam = f.lambda(l).unwrap();
            let lhs = del_class(&f, &x.mul(&y), &lam, n).unwrap();
            let rhs = del_class(&f, &x, &lam, n).unwrap().add(&del_class(&f, &y, &lam, n).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phi_fs_does_not_depend_on_the_place(a in 1i64..60, b in -60i64..60) {
        let f = make_field(5).unwrap();
        let Some(x) = nonzero(5, a, b) else { return Ok(()) };
        let x = x.conj().div(&x);
        for l in [11u64, 19] {
            if let (Ok(p), Ok(q)) = (phi_fs(&f, &x, l, false), phi_fs(&f, &x, l, true)) {
                prop_assert_eq!(p.value(), q.value());
            }
        }
    }
}
