//! Real quadratic fields: discriminant, splitting, fundamental unit, class
//! numbers of `O_F[1/n]`, valuations at split primes and the oriented basis of
//! `(1-τ)E_n`.

pub mod cache;
mod forms;
mod num;
mod units;

pub use forms::{cycles, reduced_forms, Form};
pub use num::QuadNum;
pub use units::{regulator_value, PlaceData, UnitLattice};

use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// A split prime `λ | ℓ` of `F`: the kernel of `√d ↦ s mod ℓ`, with `s` the
/// smaller square root of `d` (for `ℓ = 2`, the root `ω ↦ 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    pub ell: u64,
    /// image of `ω` modulo `ℓ`
    pub root: u64,
    pub conjugate: bool,
}

impl QuadIdeal {
    pub fn conj(&self) -> Self {
        QuadIdeal { conjugate: !self.conjugate, ..self.clone() }
    }
}

/// Data attached to a generator search: `λ^k = (g)`.
#[derive(Clone, Debug)]
pub struct LambdaGenerator {
    pub k: u64,
    pub g: QuadNum,
}

#[derive(Debug)]
pub struct QuadField {
    d: i64,
    disc: i64,
    unit: QuadNum,
    unit_norm: i64,
    narrow_h: u64,
    h: u64,
    search_bound: RwLock<u64>,
    generators: RwLock<HashMap<Vec<(u64, i64)>, Option<QuadNum>>>,
}

fn field_cache() -> &'static RwLock<HashMap<i64, Arc<QuadField>>> {
    static CACHE: OnceLock<RwLock<HashMap<i64, Arc<QuadField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Q(√d)` for squarefree `d > 1`.
pub fn make_field(d: i64) -> Result<Arc<QuadField>> {
    if d <= 1 || !arith::is_squarefree(d as u64) {
        return Err(Error::InvalidArgument(format!("d = {d} must be a squarefree integer > 1")));
    }
    if let Some(f) = field_cache().read().unwrap().get(&d) {
        return Ok(f.clone());
    }
    let field = Arc::new(QuadField::compute(d));
    field_cache().write().unwrap().entry(d).or_insert(field.clone());
    Ok(field)
}

impl QuadField {
    fn compute(d: i64) -> Self {
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let (x, y, unit_norm) = forms::fundamental_unit(disc);
        // (x + y√D)/2 with √D = √d or 2√d
        let unit = if disc == d {
            QuadNum::from_frac(d, x, y, BigInt::from(2))
        } else {
            QuadNum::from_frac(d, x, y * 2, BigInt::from(2))
        };
        let narrow_h = forms::cycles(disc).len() as u64;
        let h = if unit_norm == -1 { narrow_h } else { narrow_h / 2 };
        QuadField {
            d,
            disc,
            unit,
            unit_norm,
            narrow_h,
            h,
            search_bound: RwLock::new(1 << 22),
            generators: RwLock::new(HashMap::new()),
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Conductor of `F/Q`, equal to `|D|`.
    pub fn conductor(&self) -> u64 {
        self.disc as u64
    }

    /// `ω_F(ℓ)`: +1 split, −1 inert, 0 ramified.
    pub fn omega(&self, l: u64) -> i32 {
        arith::kronecker(self.disc, l as i64)
    }

    /// Fundamental unit `> 1` under `√d > 0`.
    pub fn fundamental_unit(&self) -> &QuadNum {
        &self.unit
    }

    pub fn unit_norm(&self) -> i64 {
        self.unit_norm
    }

    pub fn class_number(&self) -> u64 {
        self.h
    }

    pub fn narrow_class_number(&self) -> u64 {
        self.narrow_h
    }

    /// Maximal `|y|` scanned in norm-equation searches.
    pub fn set_search_bound(&self, bound: u64) {
        *self.search_bound.write().unwrap() = bound;
    }

    pub fn num(&self, a: i64, b: i64) -> QuadNum {
        QuadNum::from_ints(self.d, a, b)
    }

    fn omega_poly(&self) -> (i64, i64) {
        // ω^2 = t ω + c
        if self.d.rem_euclid(4) == 1 {
            (1, (self.d - 1) / 4)
        } else {
            (0, self.d)
        }
    }

    /// The fixed prime `λ` above a split `ℓ`.
    pub fn lambda(&self, l: u64) -> Result<QuadIdeal> {
        if self.omega(l) != 1 {
            return Err(Error::InvalidArgument(format!("{l} does not split in Q(√{})", self.d)));
        }
        let root = if l == 2 {
            0
        } else {
            let dm = self.d.rem_euclid(l as i64) as u64;
            let s0 = arith::sqrt_mod(dm, l).expect("split prime has a root");
            let s = s0.min(l - s0);
            if self.d.rem_euclid(4) == 1 {
                // ω = (1 + √d)/2
                (1 + s) * arith::mod_inv(2, l as i64).unwrap() as u64 % l
            } else {
                s
            }
        };
        Ok(QuadIdeal { ell: l, root, conjugate: false })
    }

    /// Hensel lift of the image of `ω` under `λ` to `Z/ℓ^prec`.
    fn root_mod(&self, p: &QuadIdeal, prec: u32) -> (BigInt, BigInt) {
        let (t, c) = self.omega_poly();
        let l = BigInt::from(p.ell);
        let modulus = l.pow(prec);
        let mut x = BigInt::from(p.root);
        if p.conjugate {
            x = BigInt::from(t) - x;
        }
        let f = |x: &BigInt| x * x - BigInt::from(t) * x - BigInt::from(c);
        let mut k = 1;
        while k < prec {
            k = (2 * k).min(prec);
            let mk = l.pow(k);
            let fx = f(&x).mod_floor(&mk);
            let dfx = (BigInt::from(2) * &x - BigInt::from(t)).mod_floor(&mk);
            let inv = mod_inverse(&dfx, &mk).expect("unramified");
            x = (&x - fx * inv).mod_floor(&mk);
        }
        (x.mod_floor(&modulus), modulus)
    }

    /// `ord_λ(x)` for `x ≠ 0`.
    pub fn ord_at(&self, x: &QuadNum, p: &QuadIdeal) -> Result<i64> {
        Ok(self.local_data(x, p)?.0)
    }

    /// `(ord_λ(x), u mod ℓ)` where `x = ℓ^{ord} u` in `F_λ ≅ Q_ℓ`.
    pub fn local_data(&self, x: &QuadNum, p: &QuadIdeal) -> Result<(i64, u64)> {
        if x.is_zero() {
            return Err(Error::InvalidArgument("valuation of zero".into()));
        }
        let (a, b, m) = x.omega_coords();
        let alpha_norm = {
            let (t, c) = self.omega_poly();
            // N(A + Bω) = A^2 + t A B - c B^2
            &a * &a + BigInt::from(t) * &a * &b - BigInt::from(c) * &b * &b
        };
        let vn = arith::valuation(&alpha_norm, p.ell);
        let prec = vn + 2;
        let (rho, modulus) = self.root_mod(p, prec);
        let val = (&a + &b * &rho).mod_floor(&modulus);
        let l = BigInt::from(p.ell);
        let mut v = 0u32;
        let mut y = val;
        while v < vn && (&y % &l).is_zero() {
            y /= &l;
            v += 1;
        }
        debug_assert!(!(&y % &l).is_zero());
        let vm = arith::valuation(&m, p.ell);
        let m_unit = (&m / l.pow(vm)).mod_floor(&l);
        let y = y.mod_floor(&l);
        let inv = mod_inverse(&m_unit, &l).unwrap();
        let u = (y * inv).mod_floor(&l).to_u64().unwrap();
        Ok((v as i64 - vm as i64, u))
    }

    /// Residue of a λ-unit in `F_λ` modulo `λ`.
    pub fn residue(&self, x: &QuadNum, p: &QuadIdeal) -> Result<u64> {
        let (v, u) = self.local_data(x, p)?;
        if v != 0 {
            return Err(Error::InvalidArgument("not a λ-adic unit".into()));
        }
        Ok(u)
    }

    /// Search for a generator of `Π λ_j^{e_j}` (all `e_j ≥ 0`), or `None` if
    /// the ideal is not principal. Fails if the search bound is too small.
    pub fn principal_generator(&self, ideal: &[(u64, i64)]) -> Result<Option<QuadNum>> {
        let key: Vec<(u64, i64)> = ideal.iter().copied().filter(|&(_, e)| e != 0).collect();
        if let Some(g) = self.generators.read().unwrap().get(&key) {
            return Ok(g.clone());
        }
        let g = self.search_generator(&key)?;
        self.generators.write().unwrap().insert(key, g.clone());
        Ok(g)
    }

    pub(crate) fn preload_generator(&self, key: Vec<(u64, i64)>, g: Option<QuadNum>) {
        self.generators.write().unwrap().entry(key).or_insert(g);
    }

    pub(crate) fn known_generators(&self) -> Vec<(Vec<(u64, i64)>, Option<QuadNum>)> {
        self.generators.read().unwrap().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    fn search_generator(&self, ideal: &[(u64, i64)]) -> Result<Option<QuadNum>> {
        let primes: Vec<QuadIdeal> = ideal.iter().map(|&(l, _)| self.lambda(l)).collect::<Result<_>>()?;
        let mut norm = BigInt::from(1);
        for &(l, e) in ideal {
            if e < 0 {
                return Err(Error::InvalidArgument("negative exponent in generator search".into()));
            }
            norm *= BigInt::from(l).pow(e as u32);
        }
        if norm == BigInt::from(1) {
            return Ok(Some(QuadNum::one(self.d)));
        }
        // g = (x + y√D)/2 with x^2 - D y^2 = ±4N; |y| ≤ (ε+1)√N/√D suffices
        let eps = self.unit.to_f64();
        let nf = norm.to_f64().unwrap_or(f64::INFINITY);
        let ybound_f = (eps + 1.0) * nf.sqrt() / (self.disc as f64).sqrt() + 1.0;
        let limit = *self.search_bound.read().unwrap();
        if !(ybound_f < limit as f64) {
            return Err(Error::SearchBound(format!(
                "generator search for norm {norm} needs |y| up to {ybound_f:.0}, bound {limit}"
            )));
        }
        let ybound = ybound_f as i64;
        let disc = BigInt::from(self.disc);
        let four_n = &norm * 4;
        for y in 0..=ybound {
            let dy2 = &disc * BigInt::from(y) * BigInt::from(y);
            for rhs in [&dy2 + &four_n, &dy2 - &four_n] {
                if rhs < BigInt::zero() {
                    continue;
                }
                let x: BigInt = num_integer::Roots::sqrt(&rhs);
                if &x * &x != rhs {
                    continue;
                }
                for (sx, sy) in [(1, 1), (1, -1)] {
                    let xx = &x * sx;
                    let yy = BigInt::from(y * sy);
                    let g = if self.disc == self.d {
                        QuadNum::from_frac(self.d, xx, yy, BigInt::from(2))
                    } else {
                        QuadNum::from_frac(self.d, xx, yy * 2, BigInt::from(2))
                    };
                    let ok = primes
                        .iter()
                        .zip(ideal)
                        .all(|(p, &(_, e))| self.ord_at(&g, p).map_or(false, |v| v == e));
                    if ok {
                        return Ok(Some(g));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `λ_generator`: least `k` with `λ^k` principal and a generator.
    pub fn lambda_generator(&self, l: u64) -> Result<LambdaGenerator> {
        for k in 1..=self.h {
            if let Some(g) = self.principal_generator(&[(l, k as i64)])? {
                return Ok(LambdaGenerator { k, g });
            }
        }
        Err(Error::InvalidArgument(format!("no power of the prime above {l} up to h_F is principal")))
    }

    pub fn check_level(&self, n: u64) -> Result<()> {
        if arith::gcd(n as i64, self.disc) != 1 {
            return Err(Error::ConductorOverlap { level: n, conductor: self.conductor() });
        }
        if !arith::is_squarefree(n) {
            return Err(Error::NotSquarefree(n));
        }
        Ok(())
    }

    /// Split primes of `n` in increasing order.
    pub fn split_part(&self, n: u64) -> Vec<u64> {
        arith::prime_divisors(n).into_iter().filter(|&l| self.omega(l) == 1).collect()
    }

    /// `n_+`.
    pub fn n_plus(&self, n: u64) -> u64 {
        self.split_part(n).iter().product()
    }

    /// Successive orders `k_i` of `[λ_i]` in `Pic(O_F)/⟨[λ_1], …, [λ_{i-1}]⟩`,
    /// with the witnessing generators `(g_i) = λ_i^{k_i} Π_{j<i} λ_j^{a_j}`.
    pub fn successive_generators(&self, primes: &[u64]) -> Result<Vec<(u64, QuadNum)>> {
        let mut out = Vec::new();
        for (i, &l) in primes.iter().enumerate() {
            let prev = &primes[..i];
            let mut found = None;
            'k: for k in 1..=self.h as i64 {
                for exps in exponent_boxes(prev.len(), self.h as i64) {
                    let mut ideal: Vec<(u64, i64)> = prev.iter().copied().zip(exps).collect();
                    ideal.push((l, k));
                    if let Some(g) = self.principal_generator(&ideal)? {
                        found = Some((k as u64, g));
                        break 'k;
                    }
                }
            }
            out.push(found.ok_or_else(|| Error::InvalidArgument(format!("class of the prime above {l} not found")))?);
        }
        Ok(out)
    }

    /// `h_n = |Pic(O_F[1/n])|`.
    pub fn h_n(&self, n: u64) -> Result<u64> {
        self.check_level(n)?;
        let split = self.split_part(n);
        let ks = self.successive_generators(&split)?;
        let prod: u64 = ks.iter().map(|(k, _)| k).product();
        Ok(self.h / prod)
    }

    /// Oriented nested basis of `(1-τ)E_n` with its standard basis of places.
    pub fn unit_basis(&self, n: u64) -> Result<(PlaceData, UnitLattice)> {
        self.check_level(n)?;
        units::unit_basis(self, n)
    }
}

fn exponent_boxes(len: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..h).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd != BigInt::from(1) {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `u/u^τ`.
pub fn minus_part(u: &QuadNum) -> QuadNum {
    u.div(&u.conj())
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn discriminants_and_conductors() {
        assert_eq!(make_field(5).unwrap().conductor(), 5);
        assert_eq!(make_field(2).unwrap().conductor(), 8);
        assert_eq!(make_field(10).unwrap().conductor(), 40);
        assert!(make_field(1).is_err());
        assert!(make_field(12).is_err());
    }

    #[test]
    fn omega_matches_splitting() {
        let f = make_field(5).unwrap();
        assert_eq!(f.omega(11), 1);
        assert_eq!(f.omega(3), -1);
        assert_eq!(f.omega(5), 0);
        for d in [2i64, 3, 5, 6, 7, 10, 13, 17] {
            let f = make_field(d).unwrap();
            for l in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                if f.disc() % l as i64 == 0 {
                    continue;
                }
                let has_root = (0..l).any(|x| (x * x) as i64 % l as i64 == d.rem_euclid(l as i64));
                assert_eq!(f.omega(l) == 1, has_root, "d={d} l={l}");
            }
        }
    }

    #[test]
    fn units_and_class_numbers() {
        let f5 = make_field(5).unwrap();
        assert_eq!(f5.fundamental_unit(), &QuadNum::new(5, BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())));
        assert_eq!(f5.class_number(), 1);
        let f2 = make_field(2).unwrap();
        assert_eq!(f2.fundamental_unit(), &QuadNum::from_ints(2, 1, 1));
        assert_eq!(make_field(10).unwrap().class_number(), 2);
        assert_eq!(make_field(3).unwrap().class_number(), 1);
        assert_eq!(make_field(15).unwrap().class_number(), 2);
    }

    #[test]
    fn valuations() {
        let f = make_field(5).unwrap();
        let lam = f.lambda(11).unwrap();
        let g = f.lambda_generator(11).unwrap();
        assert_eq!(g.k, 1);
        assert_eq!(g.g.norm().abs(), rational(11));
        assert_eq!(f.ord_at(&g.g, &lam).unwrap(), 1);
        assert_eq!(f.ord_at(&g.g, &lam.conj()).unwrap(), 0);
        let e0 = minus_part(f.fundamental_unit());
        assert_eq!(f.ord_at(&e0, &lam).unwrap(), 0);
        let x = f.num(7, 3).mul(&f.num(11, 0));
        let n = x.norm();
        let vn = arith::valuation(n.numer(), 11) as i64;
        assert_eq!(f.ord_at(&x, &lam).unwrap() + f.ord_at(&x, &lam.conj()).unwrap(), vn);
    }

    #[test]
    fn nonprincipal_prime_of_q_sqrt_10() {
        let f = make_field(10).unwrap();
        let g = f.lambda_generator(3).unwrap();
        assert_eq!(g.k, 2);
        assert_eq!(g.g.norm().abs(), rational(9));
        assert_eq!(f.h_n(3).unwrap(), 1);
        assert_eq!(f.h_n(7).unwrap(), 2);
    }
}
