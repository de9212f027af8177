//! The pre-Kolyvagin axioms for `{2^{-s(n)} θ̃'_n}` and `{h_n R_n}`.
//!
//! Local axioms need `κ_n` as an element of `(1-τ)E_n ⊗ C`. For the regulator
//! system that is how it is built. For `θ̃'_n` the coordinates over the nested
//! unit basis are recovered from its reductions (a Kummer-style descent that
//! is valid on odd parts prime to `h_F`), and every reduction used must agree.

use super::derived::theta_class;
use super::reduction::{aux_modulus, ReductionHom};
use super::residual::Residual;
use super::tensor::{level_quot, regulator, TensorElt};
use super::verify::{s_of, sample_primes, PrimeResult, Verdict, VerifyConfig, VerifyReport};
use crate::arith;
use crate::cyclo::{norm_relation_check, theta_prime, CycloConfig};
use crate::error::{Error, Result};
use crate::groupring::{d_det, frob_form, perm_pi, AugClass, AugQuot, GradedPoly, Permutation, single_cycles_through};
use crate::localsym::tame_exponent;
use crate::quadfield::{QuadField, QuadNum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Theta,
    Regulator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    I,
    II,
    III,
    IV,
    IVPrime,
    V,
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(System::Theta),
            "regulator" | "R" => Ok(System::Regulator),
            _ => Err(Error::InvalidArgument(format!("unknown system {s:?}"))),
        }
    }
}

impl FromStr for Axiom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Axiom::I),
            "ii" => Ok(Axiom::II),
            "iii" => Ok(Axiom::III),
            "iv" => Ok(Axiom::IV),
            "iv'" | "ivp" | "iv-prime" => Ok(Axiom::IVPrime),
            "v" => Ok(Axiom::V),
            _ => Err(Error::InvalidArgument(format!("unknown axiom {s:?}"))),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::I => "i",
            Axiom::II => "ii",
            Axiom::III => "iii",
            Axiom::IV => "iv",
            Axiom::IVPrime => "iv'",
            Axiom::V => "v",
        };
        f.write_str(s)
    }
}

/// `κ_k = Σ_j ε_j ⊗ c_j` over the nested basis of level `k`.
///
/// For the θ system the `c_j` are only known on odd parts (a `Z` coordinate
/// modulo `odd_z`), which is all the axioms are compared on.
#[derive(Clone, Debug)]
pub struct Kappa {
    pub level: u64,
    pub quot: Arc<AugQuot>,
    pub basis: Vec<QuadNum>,
    pub coords: Vec<AugClass>,
}

impl Kappa {
    /// `Σ_j w(ε_j) c_j` for an integer weight.
    fn weighted(&self, w: impl Fn(&QuadNum) -> Result<i64>) -> Result<AugClass> {
        let mut acc = self.quot.zero();
        for (e, c) in self.basis.iter().zip(&self.coords) {
            acc = acc.add(&c.scale(w(e)?));
        }
        Ok(acc)
    }

    /// `(κ)_{ℓ,tr}` in units of `(ℓ, ℓ^{-1})`.
    pub fn transverse(&self, field: &QuadField, l: u64) -> Result<AugClass> {
        let lam = field.lambda(l)?;
        self.weighted(|e| field.ord_at(e, &lam))
    }

    /// `(κ)_{ℓ,f}` through the tame symbol at `λ`.
    pub fn finite(&self, field: &QuadField, l: u64) -> Result<AugClass> {
        let lam = field.lambda(l)?;
        self.weighted(|e| tame_exponent(l, field.local_data(e, &lam)?.1))
    }

    /// `proj` of a class of this level onto `Y_{k_+}`.
    pub fn proj(&self, c: &AugClass) -> Result<i64> {
        self.quot.proj_new(c)
    }
}

pub fn regulator_kappa(field: &QuadField, k: u64) -> Result<Kappa> {
    let (places, lattice) = field.unit_basis(k)?;
    let hr = regulator(field, k)?.scale(field.h_n(k)? as i64);
    let coords = hr.in_basis(field, &places, &lattice)?;
    Ok(Kappa { level: k, quot: hr.quot().clone(), basis: lattice.basis, coords })
}

const DESCENT_LIMIT: u64 = 2_000_000;

/// Solve `Σ_j a_{h,j} x_j ≡ t_h (mod m)` over all rows; `None` if inconsistent,
/// an error if the rows do not pin `x` down.
fn solve_mod(rows: &[(Vec<u64>, u64)], unknowns: usize, m: u64) -> Result<Option<Vec<u64>>> {
    if m == 1 {
        return Ok(Some(vec![0; unknowns]));
    }
    let space = (m as u128).pow(unknowns as u32);
    if space > DESCENT_LIMIT as u128 {
        return Err(Error::Resource(format!("descent over (Z/{m})^{unknowns} is too large")));
    }
    let mut found: Option<Vec<u64>> = None;
    let mut x = vec![0u64; unknowns];
    for _ in 0..space as u64 {
        let ok = rows.iter().all(|(a, t)| a.iter().zip(&x).fold(0u128, |s, (&ai, &xi)| s + (ai % m) as u128 * xi as u128) % m as u128 == *t as u128 % m as u128);
        if ok {
            if found.is_some() {
                return Err(Error::InvalidArgument(format!("descent mod {m} is underdetermined; use more auxiliary primes")));
            }
            found = Some(x.clone());
        }
        for xi in x.iter_mut() {
            *xi += 1;
            if *xi < m {
                break;
            }
            *xi = 0;
        }
    }
    Ok(found)
}

/// Recover `2^{-s(k)} θ̃'_k` over the nested basis from its reductions.
/// Returns `None` when no element of `(1-τ)E_k ⊗ C` matches every reduction.
pub fn theta_kappa(field: &QuadField, k: u64, homs: &[ReductionHom], odd_z: u64) -> Result<Option<Kappa>> {
    if odd(field.class_number()) > 1 {
        return Err(Error::InvalidArgument("descent needs an odd part prime to h_F".into()));
    }
    let theta = theta_prime(field, k)?;
    let quot = level_quot(field, k)?;
    let (_, lattice) = field.unit_basis(k)?;
    let s = s_of(field, k);
    let mut rows: Vec<(Vec<u64>, AugClass)> = Vec::new();
    for h in homs {
        let logs: Vec<u64> = lattice.basis.iter().map(|e| h.log_quad(e)).collect::<Result<_>>()?;
        rows.push((logs, theta_class(&theta, h, &quot)?));
    }
    let zero = quot.zero();
    let moduli: Vec<u64> = zero.moduli().iter().map(|&d| if d == 0 { odd_z } else { d / arith::two_part(d) }).collect();
    let rank = lattice.basis.len();
    let mut coords = vec![vec![0i64; moduli.len()]; rank];
    for (i, &m) in moduli.iter().enumerate() {
        if m == 1 {
            continue;
        }
        let inv2s = arith::mod_inv(arith::mod_pow(2, s as u64, m) as i64, m as i64).expect("odd modulus") as u64;
        let eqs: Vec<(Vec<u64>, u64)> = rows
            .iter()
            .map(|(a, c)| (a.clone(), arith::mod_mul(c.coords()[i].rem_euclid(m as i64) as u64, inv2s, m)))
            .collect();
        match solve_mod(&eqs, rank, m)? {
            Some(x) => {
                for (j, v) in x.into_iter().enumerate() {
                    coords[j][i] = v as i64;
                }
            }
            None => return Ok(None),
        }
    }
    let coords = coords.into_iter().map(|c| quot.class_from_coords(c)).collect::<Result<_>>()?;
    Ok(Some(Kappa { level: k, quot, basis: lattice.basis, coords }))
}

fn odd(m: u64) -> u64 {
    m / arith::two_part(m)
}

fn report(field: &QuadField, system: System, axiom: Axiom, n: u64, l: u64) -> Result<VerifyReport> {
    let split = field.split_part(n);
    Ok(VerifyReport {
        field: field.d(),
        level: n,
        check: format!("{:?} axiom {axiom} at l = {l}", system).to_lowercase(),
        r: split.len() as u32,
        s: s_of(field, n),
        h_n: field.h_n(n)?,
        primes: Vec::new(),
        verdict: Verdict::Vacuous,
        note: String::new(),
    })
}

fn single_residual(value: i64, modulus: u64) -> Residual {
    let m = modulus.max(1);
    Residual { moduli: vec![m], coords: vec![value.rem_euclid(m as i64) as u64] }
}

/// Levels `n/d` that an axiom at `(n, ℓ)` reads.
fn needed_levels(field: &QuadField, axiom: Axiom, n: u64, l: u64) -> Vec<u64> {
    let np = field.n_plus(n);
    match axiom {
        Axiom::I => vec![n],
        Axiom::III => vec![n, n / l],
        Axiom::IV | Axiom::IVPrime => arith::divisors(np).into_iter().map(|d| n / d).collect(),
        _ => Vec::new(),
    }
}

/// Single-orbit permutations of the primes of `n_+` moving `ℓ`.
fn s1_moving(primes: &[u64], l: u64) -> Vec<Permutation> {
    let pos = primes.iter().position(|&p| p == l).expect("ℓ | n_+");
    single_cycles_through(primes.len(), pos)
}

/// `proj_n((κ_n)_{ℓ,f})` and the right side of (iv)', both mod the odd part
/// of the new order of level `n`.
fn iv_prime_sides(field: &QuadField, kappas: &BTreeMap<u64, Kappa>, n: u64, l: u64) -> Result<(i64, i64, u64)> {
    let kn = &kappas[&n];
    let g = odd(kn.quot.new_order());
    let lhs = kn.proj(&kn.finite(field, l)?)?;
    let np = field.n_plus(n);
    let primes = arith::prime_divisors(np);
    let mut rhs = 0i64;
    for sigma in s1_moving(&primes, l) {
        let ds: u64 = sigma.support().iter().map(|&i| primes[i]).product();
        let k = &kappas[&(n / ds)];
        let b = k.proj(&k.finite(field, l)?)?;
        let poly = perm_pi(&sigma, &primes).mul(&GradedPoly::squarefree_monomial(np / ds, 0));
        let pi = kn.quot.proj_new(&kn.quot.class_of_poly(&poly)?)?;
        rhs -= sigma.sign() * (b.rem_euclid(g as i64) * pi.rem_euclid(g as i64) % g as i64);
    }
    Ok((lhs, rhs, g))
}

/// `Σ_{d|n_+} proj_{n/d}((κ_{n/d})_{ℓ,f}) D_d`, mod the odd new order at `n`.
fn iv_sum(field: &QuadField, kappas: &BTreeMap<u64, Kappa>, n: u64, l: u64) -> Result<(i64, u64)> {
    let kn = &kappas[&n];
    let g = odd(kn.quot.new_order());
    let np = field.n_plus(n);
    let mut acc = 0i64;
    for d in arith::divisors(np) {
        let k = &kappas[&(n / d)];
        let b = k.proj(&k.finite(field, l)?)?;
        let dd = if d == 1 { GradedPoly::constant(1, 0) } else { d_det(d, d)? };
        let poly = dd.mul(&GradedPoly::squarefree_monomial(np / d, 0));
        let c = kn.quot.proj_new(&kn.quot.class_of_poly(&poly)?)?;
        acc = (acc + b.rem_euclid(g as i64) * c.rem_euclid(g as i64)) % g as i64;
    }
    Ok((acc, g))
}

fn local_check(field: &QuadField, axiom: Axiom, kappas: &BTreeMap<u64, Kappa>, n: u64, l: u64) -> Result<Residual> {
    let kn = &kappas[&n];
    match axiom {
        Axiom::I => {
            let tr = kn.transverse(field, l)?;
            let r = Residual::from_class(&tr, 1);
            Ok(r.odd_part())
        }
        Axiom::III => {
            let g = odd(kn.quot.new_order());
            let lhs = kn.proj(&kn.transverse(field, l)?)?;
            let km = &kappas[&(n / l)];
            let lam = field.lambda(l)?;
            let mut rhs = 0i64;
            for (e, c) in km.basis.iter().zip(&km.coords) {
                let f = tame_exponent(l, field.local_data(e, &lam)?.1)?;
                rhs = (rhs + f.rem_euclid(g as i64) * km.proj(c)?.rem_euclid(g as i64)) % g as i64;
            }
            Ok(single_residual(lhs - rhs, g))
        }
        Axiom::IV => {
            let (v, g) = iv_sum(field, kappas, n, l)?;
            Ok(single_residual(v, g))
        }
        Axiom::IVPrime => {
            let (lhs, rhs, g) = iv_prime_sides(field, kappas, n, l)?;
            Ok(single_residual(lhs - rhs, g))
        }
        _ => unreachable!(),
    }
}

fn regulator_tensor(field: &QuadField, k: u64) -> Result<TensorElt> {
    Ok(regulator(field, k)?.scale(field.h_n(k)? as i64))
}

/// Check one axiom of a pre-Kolyvagin system at `(n, ℓ)`.
pub fn verify_preks_axiom(
    field: &QuadField,
    system: System,
    axiom: Axiom,
    n: u64,
    l: u64,
    config: &VerifyConfig,
) -> Result<VerifyReport> {
    field.check_level(n)?;
    let np = field.n_plus(n);
    let need_split = matches!(axiom, Axiom::II | Axiom::III | Axiom::IV | Axiom::IVPrime);
    if need_split && np % l != 0 {
        return Err(Error::InvalidArgument(format!("axiom {axiom} needs ℓ = {l} | n_+ = {np}")));
    }
    if axiom == Axiom::V && (n % l != 0 || np % l == 0) {
        return Err(Error::InvalidArgument(format!("axiom v needs ℓ = {l} | n/n_+")));
    }
    if axiom == Axiom::I && (n % l == 0 || field.omega(l) != 1) {
        return Err(Error::InvalidArgument(format!("axiom i needs a split ℓ = {l} not dividing {n}")));
    }
    let mut rep = report(field, system, axiom, n, l)?;
    match (axiom, system) {
        (Axiom::II, System::Theta) => {
            let ok = norm_relation_check(field, n, l, &CycloConfig::default())?;
            rep.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
            rep.note = "exact norm relation in Q(ζ_nf)".into();
        }
        (Axiom::II, System::Regulator) => {
            let (places, lattice) = field.unit_basis(n)?;
            let quot = level_quot(field, n)?;
            let lhs = regulator_tensor(field, n)?.pi(n / l)?;
            let rhs = regulator_tensor(field, n / l)?.mul_poly(&frob_form(l, n / l, 0).neg(), quot)?;
            let a = lhs.in_basis(field, &places, &lattice)?;
            let b = rhs.in_basis(field, &places, &lattice)?;
            rep.verdict = if a == b { Verdict::Pass } else { Verdict::Fail };
            rep.note = "exact equality over the unit basis".into();
        }
        (Axiom::V, _) => {
            let m = n * field.conductor();
            let (qn, qm) = (level_quot(field, n)?, level_quot(field, n / l)?);
            let (tn, tm) = (theta_prime(field, n)?, theta_prime(field, n / l)?);
            let (rn, rm) = (regulator_tensor(field, n)?, regulator_tensor(field, n / l)?);
            let results = sample_primes(aux_modulus(field, n)?, config.primes, config.start, config.bound, |q| {
                let h = ReductionHom::new(field, m, q)?;
                let (a, b) = match system {
                    System::Theta => (qn.proj_new(&theta_class(&tn, &h, &qn)?)?, 2 * qm.proj_new(&theta_class(&tm, &h, &qm)?)?),
                    System::Regulator => (qn.proj_new(&rn.reduce_class(&h)?)?, qm.proj_new(&rm.reduce_class(&h)?)?),
                };
                let g = if qn.degree() == 0 { h.target_order() } else { qn.new_order() };
                let res = single_residual(a - b, g).odd_part();
                Ok(PrimeResult { q, verdict: Verdict::of_residual(&res), residual: res })
            })?;
            rep.primes = results.into_iter().map(|(_, p)| p).collect();
            rep.verdict = Verdict::combine(rep.primes.iter().map(|p| p.verdict));
            rep.note = format!("verified under {} independent reductions", rep.primes.len());
        }
        (_, System::Regulator) => {
            let mut kappas = BTreeMap::new();
            for k in needed_levels(field, axiom, n, l) {
                kappas.insert(k, regulator_kappa(field, k)?);
            }
            let res = local_check(field, axiom, &kappas, n, l)?;
            rep.verdict = Verdict::of_residual(&res);
            rep.note = "exact local data of the unit basis".into();
            rep.primes.push(PrimeResult { q: 0, residual: res, verdict: rep.verdict });
        }
        (_, System::Theta) => {
            let m = n * field.conductor();
            let top = n * if axiom == Axiom::I { l } else { 1 };
            let mut modulus = aux_modulus(field, n)?;
            let odd_z = odd(crate::groupring::gamma(top)?.exponent());
            modulus = arith::lcm(modulus, odd_z);
            let homs: Vec<ReductionHom> = sample_primes(modulus, config.primes.max(4), config.start, config.bound, |q| {
                let h = ReductionHom::new(field, m, q)?;
                for k in needed_levels(field, axiom, n, l) {
                    let (_, lat) = field.unit_basis(k)?;
                    for e in &lat.basis {
                        h.log_quad(e)?;
                    }
                    let quot = level_quot(field, k)?;
                    theta_class(&theta_prime(field, k)?, &h, &quot)?;
                }
                Ok(h)
            })?
            .into_iter()
            .map(|(_, h)| h)
            .collect();
            let mut kappas = BTreeMap::new();
            for k in needed_levels(field, axiom, n, l) {
                match theta_kappa(field, k, &homs, odd_z)? {
                    Some(kk) => {
                        kappas.insert(k, kk);
                    }
                    None => {
                        rep.verdict = Verdict::Fail;
                        rep.note = format!("θ̃'_{k} matches no element of (1-τ)E_{k} ⊗ C under {} reductions", homs.len());
                        return Ok(rep);
                    }
                }
            }
            let res = local_check(field, axiom, &kappas, n, l)?;
            rep.verdict = Verdict::of_residual(&res);
            rep.note = format!("descended through {} independent reductions", homs.len());
            rep.primes = homs.iter().map(|h| PrimeResult { q: h.q, residual: res.clone(), verdict: rep.verdict }).collect();
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::make_field;

    fn run(system: System, axiom: Axiom, n: u64, l: u64) -> VerifyReport {
        let f = make_field(5).unwrap();
        verify_preks_axiom(&f, system, axiom, n, l, &VerifyConfig { primes: 5, ..Default::default() }).unwrap()
    }

    #[test]
    fn second_axiom_exact() {
        for s in [System::Theta, System::Regulator] {
            assert_eq!(run(s, Axiom::II, 11, 11).verdict, Verdict::Pass, "{s:?}");
            assert_eq!(run(s, Axiom::II, 209, 19).verdict, Verdict::Pass, "{s:?}");
            assert_eq!(run(s, Axiom::II, 209, 11).verdict, Verdict::Pass, "{s:?}");
        }
    }

    #[test]
    fn local_axioms() {
        for s in [System::Theta, System::Regulator] {
            for (ax, n, l) in [(Axiom::III, 11, 11), (Axiom::III, 33, 11), (Axiom::IVPrime, 11, 11), (Axiom::IVPrime, 33, 11), (Axiom::IV, 11, 11), (Axiom::I, 11, 19), (Axiom::III, 341, 31), (Axiom::III, 341, 11), (Axiom::IVPrime, 341, 11), (Axiom::IV, 341, 31)] {
                let rep = run(s, ax, n, l);
                assert_ne!(rep.verdict, Verdict::Fail, "{s:?} {ax} n = {n}: {rep:?}");
            }
        }
    }

    #[test]
    fn inert_axiom() {
        for s in [System::Theta, System::Regulator] {
            assert_eq!(run(s, Axiom::V, 33, 3).verdict, Verdict::Pass, "{s:?}");
        }
    }

    #[test]
    fn scaled_kappa_breaks_local_axioms() {
        let f = make_field(5).unwrap();
        for (ax, n, l) in [(Axiom::III, 11u64, 11u64), (Axiom::III, 341, 31), (Axiom::IVPrime, 341, 11)] {
            let mut kappas = BTreeMap::new();
            for k in needed_levels(&f, ax, n, l) {
                kappas.insert(k, regulator_kappa(&f, k).unwrap());
            }
            assert!(local_check(&f, ax, &kappas, n, l).unwrap().is_zero());
            let k = kappas.get_mut(&n).unwrap();
            k.coords = k.coords.iter().map(|c| c.scale(2)).collect();
            assert!(!local_check(&f, ax, &kappas, n, l).unwrap().is_zero(), "{ax} {n}");
        }
    }
}
