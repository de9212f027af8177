//! `α_n`, `θ'_n`, the Gauss-sum embedding of `F` and the norm relation.

use super::{CycloConfig, CycloNum, CycloUnit};
use crate::arith;
use crate::error::{Error, Result};
use crate::groupring::{gamma, UnitGroupMod};
use crate::quadfield::{QuadField, QuadNum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::sync::Arc;

/// `α_n = Π_c (ζ_{nf}^c - 1)^{ω_F(c)}` over `c ∈ (Z/nf)^×`, `c ≡ 1 mod n`.
pub fn alpha_unit(field: &QuadField, n: u64) -> Result<CycloUnit> {
    field.check_level(n)?;
    let f = field.conductor();
    let m = n * f;
    let mut x = CycloUnit::one(m);
    for c in (1..m).step_by(n as usize) {
        let w = arith::kronecker(field.disc(), c as i64);
        if w != 0 && arith::gcd(c as i64, m as i64) == 1 {
            x = x.mul(&CycloUnit::binomial(m, c).pow(w as i64));
        }
    }
    Ok(x)
}

/// `α_n` expanded in `Q(ζ_{nf})`.
pub fn alpha(field: &QuadField, n: u64, cfg: &CycloConfig) -> Result<CycloNum> {
    alpha_unit(field, n)?.expand(cfg)
}

/// `√d ∈ Q(ζ_m)` via the Gauss sum of `ω_F`; requires `D | m`.
pub fn sqrt_d(field: &QuadField, m: u64) -> Result<CycloNum> {
    let disc = field.disc() as u64;
    if m % disc != 0 {
        return Err(Error::InvalidArgument(format!("Q(ζ_{m}) does not contain Q(√{})", field.d())));
    }
    let step = m / disc;
    let mut g = vec![BigInt::from(0); m as usize];
    for a in 1..disc {
        g[(a * step) as usize] += BigInt::from(arith::kronecker(field.disc(), a as i64));
    }
    let den = if disc as i64 == field.d() { 1 } else { 2 };
    CycloNum::from_coeffs(m, &g, &[BigInt::from(den)])
}

/// Image of `x ∈ F` in `Q(ζ_m)`.
pub fn embed_quad(field: &QuadField, x: &QuadNum, m: u64) -> Result<CycloNum> {
    let s = sqrt_d(field, m)?;
    let z = x.a().denom().lcm(x.b().denom());
    let a = (x.a() * num_rational::BigRational::from_integer(z.clone())).to_integer();
    let b = (x.b() * num_rational::BigRational::from_integer(z.clone())).to_integer();
    let a = CycloNum::from_coeffs(m, &[a], &[BigInt::one()])?;
    let b = CycloNum::from_coeffs(m, &[b], &[BigInt::one()])?;
    let zn = CycloNum::from_coeffs(m, &[z], &[BigInt::one()])?;
    a.add(&b.mul(&s)).div(&zn)
}

/// `θ'_n = Σ_γ γ(α_n) ⊗ γ`, kept as the base `α_n` plus Galois lifts.
#[derive(Clone, Debug)]
pub struct ThetaElt {
    pub d: i64,
    pub level: u64,
    pub conductor: u64,
    pub alpha: CycloUnit,
    /// number of split primes of the level
    pub r: u32,
    /// number of inert primes of the level
    pub s: u32,
    group: Arc<UnitGroupMod>,
}

pub fn theta_prime(field: &QuadField, n: u64) -> Result<ThetaElt> {
    let alpha = alpha_unit(field, n)?;
    let split = field.split_part(n);
    let all = arith::prime_divisors(n);
    Ok(ThetaElt {
        d: field.d(),
        level: n,
        conductor: field.conductor(),
        alpha,
        r: split.len() as u32,
        s: (all.len() - split.len()) as u32,
        group: gamma(n)?,
    })
}

impl ThetaElt {
    pub fn group(&self) -> &Arc<UnitGroupMod> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.level * self.conductor
    }

    /// The lift of `γ ∈ Γ_n` to `Gal(Q(μ_{nf})/F)` that is trivial on `μ_f`.
    pub fn lift(&self, idx: usize) -> u64 {
        crt(self.group.residue(idx), self.level, 1, self.conductor)
    }

    /// The coefficient `γ(α_n)` of `γ`.
    pub fn coefficient(&self, idx: usize) -> Result<CycloUnit> {
        self.alpha.galois(self.lift(idx))
    }
}

/// `x ≡ a mod m`, `x ≡ b mod k` for coprime `m, k`.
pub(crate) fn crt(a: u64, m: u64, b: u64, k: u64) -> u64 {
    let mk = m * k;
    let inv = arith::mod_inv(m as i64, k as i64).expect("coprime moduli") as u64;
    let t = ((b + k - a % k) % k) * inv % k;
    (a % m + m * t) % mk
}

/// Both sides of `N_{F(μ_n)/F(μ_{n/ℓ})} α_n = α_{n/ℓ} / Fr_ℓ^{-1}(α_{n/ℓ})`,
/// as product forms in `Q(ζ_{nf})`.
pub fn norm_relation_sides(field: &QuadField, n: u64, l: u64) -> Result<(CycloUnit, CycloUnit)> {
    field.check_level(n)?;
    if n % l != 0 || field.omega(l) != 1 {
        return Err(Error::InvalidArgument(format!("{l} is not a split prime of {n}")));
    }
    let f = field.conductor();
    let m = n * f;
    let a = alpha_unit(field, n)?;
    let sub = (n / l) * f;
    let mut lhs = CycloUnit::one(m);
    for c in (1..m).step_by(sub as usize) {
        if c % l != 0 {
            lhs = lhs.mul(&a.galois(c)?);
        }
    }
    let b = alpha_unit(field, n / l)?;
    let fr_inv = arith::mod_inv(l as i64, sub as i64).unwrap() as u64;
    let rhs = b.mul(&b.galois(fr_inv)?.inv()).inflate(l);
    Ok((lhs, rhs))
}

/// Exact check of the norm relation in `Q(ζ_{nf})`.
pub fn norm_relation_check(field: &QuadField, n: u64, l: u64, cfg: &CycloConfig) -> Result<bool> {
    let (lhs, rhs) = norm_relation_sides(field, n, l)?;
    units_equal(&lhs, &rhs, cfg)
}

pub(crate) fn units_equal(x: &CycloUnit, y: &CycloUnit, cfg: &CycloConfig) -> Result<bool> {
    if x == y {
        return Ok(true);
    }
    // compare x/y with 1 after cancelling common factors
    Ok(x.mul(&y.inv()).expand(cfg)? == CycloNum::one(x.modulus()))
}

/// Whether `α_1 = ±(ε/ε^τ)^{-h_F}` exactly in `Q(ζ_f)`.
pub fn base_case_holds(field: &QuadField, cfg: &CycloConfig) -> Result<bool> {
    let a = alpha(field, 1, cfg)?;
    let target = crate::quadfield::minus_part(field.fundamental_unit()).pow(-(field.class_number() as i64));
    let t = embed_quad(field, &target, field.conductor())?;
    Ok(a == t || a == t.neg())
}
