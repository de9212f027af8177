use kolyvagin_core::arith;
use kolyvagin_core::quadfield::{make_field, minus_part, QuadNum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Smallest solution of `x^2 - D y^2 = ±4` with `D` the discriminant, by
/// walking `y` upwards. Returns `(x, y)` so that `ε = (x + y√D)/2`.
fn pell_oracle(d: i64) -> (i128, i128) {
    let disc = if d % 4 == 1 { d } else { 4 * d } as i128;
    for y in 1i128.. {
        for s in [-4i128, 4] {
            if let Some(x) = isqrt(disc * y * y + s) {
                if x > 0 {
                    return (x, y);
                }
            }
        }
    }
    unreachable!()
}

fn rat(x: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(x), BigInt::from(den))
}

#[test]
fn fundamental_units_match_pell_search() {
    for d in [2i64, 3, 5, 6, 7, 10, 13, 14, 19, 21, 22, 46, 61, 94] {
        let f = make_field(d).unwrap();
        let (x, y) = pell_oracle(d);
        let e = f.fundamental_unit();
        let (a, b) = if d % 4 == 1 { (rat(x, 2), rat(y, 2)) } else { (rat(x, 2), rat(y, 1)) };
        assert_eq!(e.a().abs(), a, "d = {d}");
        assert_eq!(e.b().abs(), b, "d = {d}");
        let n = e.norm().to_integer().to_i64().unwrap();
        assert_eq!(n, f.unit_norm(), "d = {d}");
    }
}

#[test]
fn class_numbers_match_tables() {
    let table = [
        (2i64, 1u64),
        (3, 1),
        (5, 1),
        (10, 2),
        (15, 2),
        (26, 2),
        (30, 2),
        (34, 2),
        (35, 2),
        (65, 2),
        (79, 3),
        (82, 4),
        (130, 4),
        (142, 3),
        (145, 4),
        (229, 3),
        (257, 3),
    ];
    for (d, h) in table {
        assert_eq!(make_field(d).unwrap().class_number(), h, "d = {d}");
    }
}

#[test]
fn splitting_matches_root_count() {
    for d in [2i64, 5, 10, 13, 79] {
        let f = make_field(d).unwrap();
        for l in (3u64..200).filter(|&l| arith::is_prime(l) && (f.disc() as u64) % l != 0) {
            let roots = (0..l).filter(|&x| (x * x) % l == d.rem_euclid(l as i64) as u64).count();
            let expected = if roots == 2 { 1 } else { -1 };
            assert_eq!(f.omega(l), expected, "d = {d}, ℓ = {l}");
        }
    }
}

#[test]
fn lambda_generators_have_the_right_norm() {
    let f = make_field(10).unwrap();
    // x^2 - 10 y^2 = ±3 has no solution mod 5
    let g3 = f.lambda_generator(3).unwrap();
    assert_eq!(g3.k, 2);
    assert_eq!(g3.g.norm().abs(), rat(9, 1));
    let f5 = make_field(5).unwrap();
    for l in [11u64, 19, 29, 31, 41] {
        let g = f5.lambda_generator(l).unwrap();
        assert_eq!(g.k, 1);
        assert_eq!(g.g.norm().abs(), rat(l as i128, 1));
        let p = f5.lambda(l).unwrap();
        assert_eq!(f5.ord_at(&g.g, &p).unwrap(), 1);
        assert_eq!(f5.ord_at(&g.g, &p.conj()).unwrap(), 0);
    }
}

/// `ord_{λ_i}(ε_i) = -h_{n_{i-1}}/h_{n_i}` and the ord matrix is triangular.
#[test]
fn nested_basis_valuation_law() {
    for (d, primes) in [(10i64, vec![3u64, 13]), (5, vec![11, 19]), (79, vec![3, 5]), (82, vec![3, 11])] {
        let f = make_field(d).unwrap();
        let n: u64 = primes.iter().product();
        let (places, lat) = f.unit_basis(n).unwrap();
        assert_eq!(places.primes, primes);
        for (i, lam) in places.lambdas.iter().enumerate() {
            let below: u64 = primes[..i].iter().product();
            let k = f.h_n(below).unwrap() / f.h_n(below * primes[i]).unwrap();
            assert_eq!(lat.ks[i], k);
            assert_eq!(f.ord_at(&lat.basis[i + 1], lam).unwrap(), -(k as i64), "d = {d}");
            for j in 0..=i {
                assert_eq!(f.ord_at(&lat.basis[j], lam).unwrap(), 0);
            }
        }
        // every basis element is a minus-type element
        for e in &lat.basis {
            assert!(e.mul(&e.conj()).is_one());
        }
    }
}

#[test]
fn minus_one_is_not_a_quotient() {
    let f = make_field(10).unwrap();
    let (_, lat) = f.unit_basis(39).unwrap();
    let minus_one = QuadNum::one(10).neg();
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                let x = lat.basis[0].pow(a).mul(&lat.basis[1].pow(b)).mul(&lat.basis[2].pow(c));
                assert_ne!(x, minus_one);
            }
        }
    }
}

#[test]
fn class_number_of_inverted_primes_divides() {
    let f = make_field(82).unwrap();
    for n in [1u64, 3, 11, 33] {
        let h = f.h_n(n).unwrap();
        assert_eq!(f.class_number() % h, 0);
    }
    assert_eq!(f.h_n(3 * 11).unwrap(), f.class_number() / f.unit_basis(33).unwrap().1.ks.iter().product::<u64>());
}

#[test]
fn fields_are_shared_across_threads() {
    let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| make_field(229).unwrap())).collect();
    let fields: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for f in &fields {
        assert_eq!(f.class_number(), 3);
        assert_eq!(f.fundamental_unit(), fields[0].fundamental_unit());
    }
}

#[test]
fn rejects_bad_inputs() {
    assert!(make_field(1).is_err());
    assert!(make_field(12).is_err());
    let f = make_field(5).unwrap();
    assert!(f.unit_basis(10).is_err());
    assert!(f.unit_basis(121).is_err());
    assert!(f.lambda(7).is_err());
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50) {
        let x = QuadNum::from_ints(13, a, b);
        let y = QuadNum::from_ints(13, c, e);
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
    }

    #[test]
    fn minus_parts_have_norm_one(a in 1i64..50, b in -50i64..50) {
        let x = QuadNum::from_ints(7, a, b);
        prop_assert!(minus_part(&x).norm() == rat(1, 1));
    }

    #[test]
    fn valuations_add(a in 1i64..40, b in -40i64..40, c in 1i64..40, e in -40i64..40) {
        let f = make_field(5).unwrap();
        let p = f.lambda(11).unwrap();
        let x = f.num(a, b);
        let y = f.num(c, e);
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert_eq!(f.ord_at(&x.mul(&y), &p).unwrap(), f.ord_at(&x, &p).unwrap() + f.ord_at(&y, &p).unwrap());
    }
}
