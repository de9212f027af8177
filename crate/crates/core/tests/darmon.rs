use kolyvagin_core::arith;
use kolyvagin_core::darmon::{
    aux_modulus, aux_primes, derived_sides, regulator, sample_primes, verify_darmon, verify_preks_axiom, Axiom, Perturbation,
    ReductionHom, Residual, System, Verdict, VerifyConfig,
};
use kolyvagin_core::quadfield::{make_field, minus_part, QuadField};
use kolyvagin_core::Error;
use proptest::prelude::*;

fn homs(field: &QuadField, n: u64, k: usize) -> Vec<ReductionHom> {
    let m = n * field.conductor();
    sample_primes(aux_modulus(field, n).unwrap(), k, 0, 1 << 40, |q| ReductionHom::new(field, m, q))
        .unwrap()
        .into_iter()
        .map(|(_, h)| h)
        .collect()
}

fn multiplicative_order(x: u64, q: u64) -> u64 {
    let mut y = x % q;
    let mut k = 1;
    while y != 1 {
        y = arith::mod_mul(y, x, q);
        k += 1;
    }
    k
}

#[test]
fn reductions_are_ring_maps_on_the_field() {
    for (d, n) in [(5i64, 11u64), (5, 33), (10, 3), (13, 7)] {
        let f = make_field(d).unwrap();
        let m = n * f.conductor();
        for h in homs(&f, n, 3) {
            let q = h.target_order() + 1;
            let s = h.eval_quad(&f.num(0, 1)).unwrap();
            assert_eq!(arith::mod_mul(s, s, q), d.rem_euclid(q as i64) as u64);
            assert_eq!(multiplicative_order(h.zeta_image(m), q), m);
            let x = f.num(3, 1);
            let y = f.fundamental_unit().clone();
            let lhs = h.log_quad(&x.mul(&y)).unwrap();
            assert_eq!(lhs, (h.log_quad(&x).unwrap() + h.log_quad(&y).unwrap()) % (q - 1));
        }
    }
}

#[test]
fn auxiliary_primes_are_congruent_to_one() {
    let f = make_field(5).unwrap();
    let modulus = aux_modulus(&f, 33).unwrap();
    assert_eq!(modulus % 165, 0);
    let qs = aux_primes(modulus, 6, 0, 1 << 40).unwrap();
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
    for q in qs {
        assert!(arith::is_prime(q));
        assert_eq!(q % modulus, 1);
    }
    assert!(matches!(aux_primes(modulus, 1000, 0, 10_000), Err(Error::Resource(_))));
}

#[test]
fn base_regulator_is_the_minus_unit() {
    let f = make_field(5).unwrap();
    let r = regulator(&f, 1).unwrap();
    assert_eq!(r.terms().len(), 1);
    assert_eq!(r.terms()[0].0, minus_part(f.fundamental_unit()));
}

#[test]
fn congruence_at_composite_levels() {
    let f = make_field(5).unwrap();
    for n in [33u64, 341] {
        let rep = verify_darmon(&f, n, &VerifyConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "n = {n}");
        assert_eq!(rep.primes.len(), 5);
        assert!(rep.primes.iter().all(|p| p.residual.odd_part().is_zero()));
    }
}

#[test]
fn canaries_fail_at_two_levels() {
    let f = make_field(5).unwrap();
    for n in [11u64, 33] {
        for p in [Perturbation::WrongSign, Perturbation::AlphaSquared] {
            let cfg = VerifyConfig { perturbation: p, ..Default::default() };
            assert_eq!(verify_darmon(&f, n, &cfg).unwrap().verdict, Verdict::Fail, "n = {n}, {p:?}");
        }
    }
}

#[test]
fn trivial_odd_part_is_vacuous() {
    // Q(√2), n = 17: the coefficient group is 2-primary
    let f = make_field(2).unwrap();
    let rep = verify_darmon(&f, 17, &VerifyConfig { primes: 3, ..Default::default() }).unwrap();
    assert_eq!(rep.verdict, Verdict::Vacuous);
}

#[test]
fn derivative_identity_under_reductions() {
    let f = make_field(5).unwrap();
    for n in [11u64, 33, 341] {
        for h in homs(&f, n, 3) {
            let (lhs, rhs) = derived_sides(&f, n, &h).unwrap();
            let res = Residual::from_class(&lhs.sub(&rhs), h.target_order()).odd_part();
            assert!(res.is_zero(), "n = {n}: {res:?}");
        }
    }
}

#[test]
fn verification_is_deterministic() {
    let f = make_field(5).unwrap();
    let cfg = VerifyConfig { primes: 4, ..Default::default() };
    let a = verify_darmon(&f, 33, &cfg).unwrap();
    let b = verify_darmon(&f, 33, &cfg).unwrap();
    let qa: Vec<_> = a.primes.iter().map(|p| (p.q, p.residual.clone())).collect();
    let qb: Vec<_> = b.primes.iter().map(|p| (p.q, p.residual.clone())).collect();
    assert_eq!(qa, qb);
}

#[test]
fn axioms_reject_misplaced_primes() {
    let f = make_field(5).unwrap();
    let cfg = VerifyConfig::default();
    assert!(verify_preks_axiom(&f, System::Regulator, Axiom::II, 33, 3, &cfg).is_err());
    assert!(verify_preks_axiom(&f, System::Regulator, Axiom::V, 33, 11, &cfg).is_err());
    assert!(verify_preks_axiom(&f, System::Theta, Axiom::I, 11, 11, &cfg).is_err());
    assert!(matches!(verify_darmon(&f, 10, &cfg), Err(Error::ConductorOverlap { .. })));
    assert!(matches!(verify_darmon(&f, 121, &cfg), Err(Error::NotSquarefree(121))));
}

#[test]
fn finite_axiom_at_an_outside_prime() {
    let f = make_field(5).unwrap();
    let cfg = VerifyConfig { primes: 4, ..Default::default() };
    for s in [System::Regulator, System::Theta] {
        let rep = verify_preks_axiom(&f, s, Axiom::I, 1, 11, &cfg).unwrap();
        assert_ne!(rep.verdict, Verdict::Fail, "{s:?}: {rep:?}");
    }
}

fn verdicts() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::Vacuous)]
}

proptest! {
    #[test]
    fn combining_verdicts(vs in prop::collection::vec(verdicts(), 0..8)) {
        let want = if vs.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if vs.contains(&Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Vacuous
        };
        prop_assert_eq!(Verdict::combine(vs.iter().copied()), want);
    }

    #[test]
    fn odd_part_kills_two_torsion(m in 1u64..500, c in 0u64..500, k in 0u32..4) {
        let r = Residual { moduli: vec![m], coords: vec![c % m] };
        let two = r.scale(1 << k).odd_part();
        let odd = m / arith::two_part(m);
        prop_assert_eq!(two.coords[0], ((c % m) << k) % odd);
        prop_assert!(r.sub(&r).is_zero());
    }
}
