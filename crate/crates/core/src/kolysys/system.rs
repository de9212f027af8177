//! Pre-Kolyvagin and Kolyvagin systems over a synthetic model, the transform
//! `κ̃_n = Σ_{d|n_+} κ_{n/d} D_{n,d}` and its inverse recursion.

use super::model::{modulus_of, SyntheticLocalModel, Universe};
use crate::arith;
use crate::darmon::mul_class;
use crate::error::{Error, Result};
use crate::groupring::{d_det, frob_form, perm_pi, single_cycles_through, AugClass, AugQuot};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `n ↦ κ_n ∈ A ⊗ I_n^r/I_n^{r+1}`, one class per coordinate of `A = (Z/M)^K`.
pub type PreKs = BTreeMap<u64, Vec<AugClass>>;

/// `n ↦ κ_n ∈ A ⊗ Ĩ_n`, as the `Y_{n_+}` coefficients, one per coordinate.
pub type Ks = BTreeMap<u64, Vec<i64>>;

/// The quotients `I_n^{r(n)}/I_n^{r(n)+1}` for every level of a universe.
#[derive(Clone)]
pub struct Levels {
    pub universe: Universe,
    quots: BTreeMap<u64, Arc<AugQuot>>,
}

impl Levels {
    pub fn new(universe: &Universe) -> Result<Self> {
        let quots = universe
            .levels()
            .into_par_iter()
            .map(|n| universe.quot(n).map(|q| (n, q)))
            .collect::<Result<_>>()?;
        Ok(Levels { universe: universe.clone(), quots })
    }

    pub fn quot(&self, n: u64) -> &Arc<AugQuot> {
        &self.quots[&n]
    }

    pub fn levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.quots.keys().copied()
    }
}

/// `x ≡ 0` in `C/mC`.
pub fn vanishes_mod(x: &AugClass, m: u64) -> bool {
    x.coords().iter().zip(x.moduli()).all(|(&c, &d)| c.rem_euclid(modulus_of(m, d) as i64) == 0)
}

fn combine(c: &[AugClass], weights: &[u64]) -> AugClass {
    let mut acc = c[0].scale(0);
    for (x, &w) in c.iter().zip(weights) {
        if w != 0 {
            acc = acc.add(&x.scale(w as i64));
        }
    }
    acc
}

/// `A ⊗ C_n`-valued `κ̃_n` before projecting to `Ĩ_n`.
pub fn transform_raw(levels: &Levels, pre: &PreKs) -> Result<PreKs> {
    let u = &levels.universe;
    u.levels()
        .into_par_iter()
        .map(|n| {
            let target = levels.quot(n);
            let mut acc: Vec<AugClass> = pre[&n].clone();
            for d in arith::divisors(u.n_plus(n)).into_iter().skip(1) {
                let dd = d_det(n, d)?;
                let src = levels.quot(n / d);
                for (a, c) in acc.iter_mut().zip(&pre[&(n / d)]) {
                    *a = a.add(&mul_class(src, c, &dd, target)?);
                }
            }
            Ok((n, acc))
        })
        .collect()
}

/// `𝒯`: checks that each `κ̃_n` is killed by every `π_{n/ℓ}`, `ℓ | n_+`,
/// and returns its `Y_{n_+}` coordinates.
pub fn transform(model: &SyntheticLocalModel, levels: &Levels, pre: &PreKs) -> Result<Ks> {
    let raw = transform_raw(levels, pre)?;
    let u = &levels.universe;
    let mut out = Ks::new();
    for (&n, vals) in &raw {
        let quot = levels.quot(n);
        for &l in u.split().iter().filter(|&&l| n % l == 0) {
            for v in vals {
                if !vanishes_mod(&quot.pi(v, n / l)?, model.modulus) {
                    return Err(Error::Landing { n, l });
                }
            }
        }
        let m = modulus_of(model.modulus, u.g(n)) as i64;
        out.insert(n, vals.iter().map(|v| quot.proj_new(v).map(|c| c.rem_euclid(m))).collect::<Result<_>>()?);
    }
    Ok(out)
}

/// Undo `transform_raw`: the map is unitriangular in the number of split primes.
pub fn untransform_raw(levels: &Levels, raw: &PreKs) -> Result<PreKs> {
    let u = &levels.universe;
    let mut pre = PreKs::new();
    for n in u.levels() {
        let target = levels.quot(n);
        let mut vals = raw[&n].clone();
        for d in arith::divisors(u.n_plus(n)).into_iter().skip(1) {
            let dd = d_det(n, d)?;
            let src = levels.quot(n / d);
            for (a, c) in vals.iter_mut().zip(&pre[&(n / d)]) {
                *a = a.sub(&mul_class(src, c, &dd, target)?);
            }
        }
        pre.insert(n, vals);
    }
    Ok(pre)
}

/// The unique `κ` with `𝒯(κ) = κ̃`.
pub fn inverse_transform(levels: &Levels, ks: &Ks) -> Result<PreKs> {
    let raw: PreKs = ks
        .iter()
        .map(|(&n, vals)| {
            let y = levels.quot(n).new_class();
            (n, vals.iter().map(|&c| y.scale(c)).collect())
        })
        .collect();
    untransform_raw(levels, &raw)
}

pub fn zero_preks(levels: &Levels, rank: usize) -> PreKs {
    levels.levels().map(|n| (n, vec![levels.quot(n).zero(); rank])).collect()
}

pub fn zero_ks(universe: &Universe, rank: usize) -> Ks {
    universe.levels().into_iter().map(|n| (n, vec![0; rank])).collect()
}

pub fn scale_add_preks(a: i64, x: &PreKs, y: &PreKs) -> PreKs {
    x.iter()
        .map(|(&n, xs)| (n, xs.iter().zip(&y[&n]).map(|(p, q)| p.scale(a).add(q)).collect()))
        .collect()
}

/// `κ ≡ κ'` coordinatewise, each level read mod `gcd(M, |Ĩ_n|)`.
pub fn ks_eq(model: &SyntheticLocalModel, a: &Ks, b: &Ks) -> bool {
    a.iter().all(|(&n, xs)| {
        let m = modulus_of(model.modulus, model.universe.g(n)) as i64;
        xs.iter().zip(&b[&n]).all(|(x, y)| (x - y).rem_euclid(m) == 0)
    })
}

pub fn preks_eq(model: &SyntheticLocalModel, a: &PreKs, b: &PreKs) -> bool {
    a.iter().all(|(n, xs)| xs.iter().zip(&b[n]).all(|(x, y)| vanishes_mod(&x.sub(y), model.modulus)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub axiom: &'static str,
    pub n: u64,
    pub l: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
}

impl AxiomReport {
    fn push(&mut self, axiom: &'static str, n: u64, l: u64, pass: bool) {
        self.checks.push(Check { axiom, n, l, pass });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Whether every check of `axiom` at the prime `l` passed.
    pub fn holds_at(&self, axiom: &str, l: u64) -> bool {
        self.checks.iter().filter(|c| c.axiom == axiom && c.l == l).all(|c| c.pass)
    }
}

/// Axioms (i)–(iii) of a Kolyvagin system.
pub fn check_ks(model: &SyntheticLocalModel, ks: &Ks) -> AxiomReport {
    let u = &model.universe;
    let mut rep = AxiomReport::default();
    for n in u.levels() {
        let g = u.g(n);
        let kn = &ks[&n];
        for &l in u.split() {
            let q = modulus_of(l - 1, g) as i64;
            if n % l != 0 {
                rep.push("i", n, l, model.tr_of(l, kn).rem_euclid(q) == 0);
            } else {
                let below = &ks[&(n / l)];
                let fin_ok = model.fin_of(l, kn).rem_euclid(q) == 0;
                let tr_ok = (model.tr_of(l, kn) - model.fs[&l] as i64 * model.fin_of(l, below)).rem_euclid(q) == 0;
                rep.push("ii", n, l, fin_ok && tr_ok);
            }
        }
        for &l in u.inert().iter().filter(|&&l| n % l == 0) {
            let m = modulus_of(model.modulus, g) as i64;
            let below = &ks[&(n / l)];
            rep.push("iii", n, l, kn.iter().zip(below).all(|(a, b)| (a - b).rem_euclid(m) == 0));
        }
    }
    rep
}

/// `proj_n((κ_n)_{ℓ,f})` reduced mod `gcd(ℓ - 1, |Ĩ_n|)`.
fn proj_fin(model: &SyntheticLocalModel, levels: &Levels, pre: &PreKs, n: u64, l: u64) -> Result<i64> {
    let quot = levels.quot(n);
    let x = combine(&pre[&n], &model.fin[&l]);
    let q = modulus_of(l - 1, model.universe.g(n)) as i64;
    Ok(quot.proj_new(&x)?.rem_euclid(q))
}

/// The `Y_{d}` coefficient of `D_d`, i.e. `Σ_{derangements ρ} sign(ρ) Π(ρ)`.
pub fn d_scalar(d: u64) -> Result<i64> {
    if d == 1 {
        return Ok(1);
    }
    Ok(d_det(d, d)?.proj_new(d))
}

/// `-Σ sign(σ) x_{n/d_σ} Π(σ)` over single cycles `σ` of the primes of `n_+`
/// moving `ℓ`, as an integer combination.
pub fn single_cycle_rhs(x: impl Fn(u64) -> i64, n_plus_primes: &[u64], n: u64, l: u64) -> i128 {
    let pos = n_plus_primes.iter().position(|&p| p == l).expect("ℓ | n_+");
    let mut acc = 0i128;
    for sigma in single_cycles_through(n_plus_primes.len(), pos) {
        let ds: u64 = sigma.support().iter().map(|&i| n_plus_primes[i]).product();
        let c = perm_pi(&sigma, n_plus_primes).proj_new(ds);
        acc -= sigma.sign() as i128 * x(n / ds) as i128 * c as i128;
    }
    acc
}

/// `Σ_{d|n_+} x_{n/d} D_d` as an integer combination.
pub fn derangement_sum(x: impl Fn(u64) -> i64, n_plus: u64, n: u64) -> Result<i128> {
    let mut acc = 0i128;
    for d in arith::divisors(n_plus) {
        acc += x(n / d) as i128 * d_scalar(d)? as i128;
    }
    Ok(acc)
}

/// Axioms (i)–(v) of a pre-Kolyvagin system, and the single-cycle form (iv)'.
pub fn check_preks(model: &SyntheticLocalModel, levels: &Levels, pre: &PreKs) -> Result<AxiomReport> {
    let u = &model.universe;
    let mut rep = AxiomReport::default();
    for n in u.levels() {
        let quot = levels.quot(n);
        let kn = &pre[&n];
        let g = u.g(n);
        let np = u.n_plus(n);
        for &l in u.split() {
            if n % l != 0 {
                let t = combine(kn, &model.tr[&l]);
                rep.push("i", n, l, vanishes_mod(&t, l - 1));
                continue;
            }
            let m = n / l;
            let src = levels.quot(m);
            let step = frob_form(l, m, 0).scale(-1);
            let mut ok = true;
            for (a, b) in kn.iter().zip(&pre[&m]) {
                let lhs = quot.pi(a, m)?;
                let rhs = mul_class(src, b, &step, quot)?;
                ok &= vanishes_mod(&lhs.sub(&rhs), model.modulus);
            }
            rep.push("ii", n, l, ok);

            let gi = g as i64;
            let tr = quot.proj_new(&combine(kn, &model.tr[&l]))?;
            let fin_below = proj_fin(model, levels, pre, m, l)?;
            rep.push("iii", n, l, (tr - model.fs[&l] as i64 * fin_below).rem_euclid(gi) == 0);

            let x = |k: u64| proj_fin(model, levels, pre, k, l).expect("level of the universe");
            rep.push("iv", n, l, derangement_sum(x, np, n)?.rem_euclid(gi as i128) == 0);
            let primes = arith::prime_divisors(np);
            let rhs = single_cycle_rhs(x, &primes, n, l);
            rep.push("iv'", n, l, (x(n) as i128 - rhs).rem_euclid(gi as i128) == 0);
        }
        for &l in u.inert().iter().filter(|&&l| n % l == 0) {
            let below = levels.quot(n / l);
            let mm = modulus_of(model.modulus, g) as i64;
            let mut ok = true;
            for (a, b) in kn.iter().zip(&pre[&(n / l)]) {
                ok &= (quot.proj_new(a)? - below.proj_new(b)?).rem_euclid(mm) == 0;
            }
            rep.push("v", n, l, ok);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(split: Vec<u64>, inert: Vec<u64>, seed: u64) -> (SyntheticLocalModel, Levels, Ks) {
        let u = Universe::new(split, inert).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, ks) = SyntheticLocalModel::random(&u, 1, &mut rng);
        (model, Levels::new(&u).unwrap(), ks)
    }

    #[test]
    fn built_system_is_kolyvagin() {
        let (model, _, ks) = setup(vec![5, 7], vec![3], 1);
        assert!(check_ks(&model, &ks).passed());
    }

    #[test]
    fn inverse_is_pre_kolyvagin_and_round_trips() {
        for (split, inert, seed) in [(vec![5, 7], vec![3], 2u64), (vec![3, 5, 7], vec![], 3), (vec![7], vec![5, 11], 4)] {
            let (model, levels, ks) = setup(split, inert, seed);
            let pre = inverse_transform(&levels, &ks).unwrap();
            let rep = check_preks(&model, &levels, &pre).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
            let back = transform(&model, &levels, &pre).unwrap();
            assert!(ks_eq(&model, &back, &ks));
            assert!(check_ks(&model, &back).passed());
        }
    }

    #[test]
    fn transform_fixes_level_one() {
        let (model, levels, ks) = setup(vec![5, 7], vec![], 5);
        let pre = inverse_transform(&levels, &ks).unwrap();
        let raw = transform_raw(&levels, &pre).unwrap();
        assert_eq!(raw[&1], pre[&1]);
        assert!(transform(&model, &levels, &zero_preks(&levels, model.rank)).unwrap().values().flatten().all(|&c| c == 0));
    }

    #[test]
    fn prime_levels() {
        let (_, levels, ks) = setup(vec![5, 7], vec![], 6);
        let pre = inverse_transform(&levels, &ks).unwrap();
        let raw = transform_raw(&levels, &pre).unwrap();
        // D_{ℓ,ℓ} = π_1(Fr_ℓ - 1) = 0
        assert_eq!(raw[&7], pre[&7]);
        // at n = 35 the d = 5 term is κ_7 π_7(Fr_5 - 1)
        let q = levels.quot(35);
        for k in 0..pre[&1].len() {
            let mut expect = pre[&35][k].clone();
            expect = expect.add(&mul_class(levels.quot(7), &pre[&7][k], &frob_form(5, 7, 0), q).unwrap());
            expect = expect.add(&mul_class(levels.quot(5), &pre[&5][k], &frob_form(7, 5, 0), q).unwrap());
            expect = expect.add(&mul_class(levels.quot(1), &pre[&1][k], &d_det(35, 35).unwrap(), q).unwrap());
            assert_eq!(raw[&35][k], expect);
        }
    }

    #[test]
    fn zero_collections_pass() {
        let (model, levels, _) = setup(vec![5, 7], vec![3], 7);
        assert!(check_ks(&model, &zero_ks(&model.universe, model.rank)).passed());
        assert!(check_preks(&model, &levels, &zero_preks(&levels, model.rank)).unwrap().passed());
    }

    #[test]
    fn perturbed_pre_system_fails_both_forms_of_iv() {
        let (model, levels, ks) = setup(vec![5, 7], vec![], 8);
        let mut pre = inverse_transform(&levels, &ks).unwrap();
        // a unit multiple of Y_5 at level 5 shifts (κ_5)_{5,f} whenever fin_5 of that coordinate is a unit
        let k = (0..model.rank).find(|&k| model.fin[&5][k] % 2 == 1).expect("odd fin value");
        pre.get_mut(&5).unwrap()[k] = pre[&5][k].add(&levels.quot(5).new_class());
        let rep = check_preks(&model, &levels, &pre).unwrap();
        let bad: Vec<_> = rep.failures().iter().map(|c| (c.axiom, c.n, c.l)).collect();
        assert!(bad.contains(&("iv", 5, 5)) && bad.contains(&("iv'", 5, 5)), "{bad:?}");
        match transform(&model, &levels, &pre) {
            Ok(ks2) => assert!(!check_ks(&model, &ks2).passed()),
            Err(e) => assert!(matches!(e, Error::Landing { .. }), "{e}"),
        }
    }

    #[test]
    fn inert_canary_fails_exactly_there() {
        let (mut model, _, ks) = setup(vec![5, 7], vec![3], 9);
        let e = model.rank - 1;
        for v in model.fin.values_mut().chain(model.tr.values_mut()) {
            v[e] = 0;
        }
        let mut bad = ks.clone();
        bad.get_mut(&21).unwrap()[e] += 1;
        let fails: Vec<_> = check_ks(&model, &bad).failures().iter().map(|c| (c.axiom, c.n, c.l)).collect();
        // κ_21 also feeds κ_105 through (ii) at ℓ = 5, but e is invisible locally
        assert_eq!(fails, vec![("iii", 21, 3)]);
    }

    #[test]
    fn four_prime_universe() {
        let (model, levels, ks) = setup(vec![5, 7, 11], vec![3], 10);
        let pre = inverse_transform(&levels, &ks).unwrap();
        assert!(check_preks(&model, &levels, &pre).unwrap().passed());
        assert!(ks_eq(&model, &transform(&model, &levels, &pre).unwrap(), &ks));
    }
}
