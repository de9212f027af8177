//! Reduction modulo a degree-one prime above an auxiliary prime `q`.

use crate::arith;
use crate::cyclo::CycloUnit;
use crate::error::{Error, Result};
use crate::groupring::UnitGroupMod;
use crate::quadfield::{QuadField, QuadNum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// `F(μ_m)^× → F_q^× ≅ Z/(q-1)` for `q ≡ 1 mod m`, `f | m`, sending
/// `ζ_m ↦ g^{(q-1)/m}` and `√d` to the matching Gauss sum.
#[derive(Clone, Debug)]
pub struct ReductionHom {
    pub q: u64,
    pub g: u64,
    pub m: u64,
    pub zeta: u64,
    pub sqrt_d: u64,
    d: i64,
    factors: Vec<(u64, u32)>,
}

impl ReductionHom {
    pub fn new(field: &QuadField, m: u64, q: u64) -> Result<Self> {
        Self::with_generator(field, m, q, arith::primitive_root(q))
    }

    pub fn with_generator(field: &QuadField, m: u64, q: u64, g: u64) -> Result<Self> {
        if !arith::is_prime(q) || (q - 1) % m != 0 {
            return Err(Error::InvalidArgument(format!("auxiliary prime {q} must be ≡ 1 mod {m}")));
        }
        let disc = field.conductor();
        if m % disc != 0 {
            return Err(Error::InvalidArgument(format!("modulus {m} is not a multiple of the conductor {disc}")));
        }
        let factors = arith::factor(q - 1);
        if factors.iter().any(|&(p, _)| arith::mod_pow(g, (q - 1) / p, q) == 1) {
            return Err(Error::InvalidArgument(format!("{g} is not a primitive root mod {q}")));
        }
        let zeta = arith::mod_pow(g, (q - 1) / m, q);
        let w = arith::mod_pow(zeta, m / disc, q);
        let mut s = 0u64;
        for a in 1..disc {
            match arith::kronecker(field.disc(), a as i64) {
                1 => s = (s + arith::mod_pow(w, a, q)) % q,
                -1 => s = (s + q - arith::mod_pow(w, a, q)) % q,
                _ => {}
            }
        }
        if disc as i64 != field.d() {
            s = arith::mod_mul(s, (q + 1) / 2, q);
        }
        let d = field.d();
        if arith::mod_mul(s, s, q) != (d as u64) % q {
            return Err(Error::InvalidArgument(format!("Gauss sum mod {q} does not square to {d}")));
        }
        Ok(ReductionHom { q, g, m, zeta, sqrt_d: s, d, factors })
    }

    /// Image of `ζ_k` for `k | m`.
    pub fn zeta_image(&self, k: u64) -> u64 {
        assert_eq!(self.m % k, 0, "ζ_{k} is not in Q(ζ_{})", self.m);
        arith::mod_pow(self.zeta, self.m / k, self.q)
    }

    pub fn eval_unit(&self, x: &CycloUnit) -> Result<u64> {
        x.eval_mod(self.q, self.zeta_image(x.modulus()))
    }

    pub fn eval_quad(&self, x: &QuadNum) -> Result<u64> {
        debug_assert_eq!(x.d(), self.d);
        let q = BigInt::from(self.q);
        let red = |r: &num_rational::BigRational| -> Result<u64> {
            let den = r.denom().mod_floor(&q);
            let den = den.to_i64().unwrap();
            let inv = arith::mod_inv(den, self.q as i64).ok_or(Error::BadPrime(self.q))?;
            let num = r.numer().mod_floor(&q).to_u64().unwrap();
            Ok(arith::mod_mul(num, inv as u64, self.q))
        };
        let v = (red(x.a())? + arith::mod_mul(red(x.b())?, self.sqrt_d, self.q)) % self.q;
        if v == 0 {
            return Err(Error::BadPrime(self.q));
        }
        Ok(v)
    }

    /// Discrete log base `g` of a nonzero residue.
    pub fn dlog(&self, x: u64) -> u64 {
        arith::discrete_log(self.g, x, self.q, self.q - 1, &self.factors).expect("g is a primitive root")
    }

    pub fn log_unit(&self, x: &CycloUnit) -> Result<u64> {
        Ok(self.dlog(self.eval_unit(x)?))
    }

    pub fn log_quad(&self, x: &QuadNum) -> Result<u64> {
        Ok(self.dlog(self.eval_quad(x)?))
    }

    /// `q - 1`.
    pub fn target_order(&self) -> u64 {
        self.q - 1
    }
}

/// Smallest `q ≡ 1 mod lcm(nf, e^r)` that the coefficient group of level `n`
/// embeds into, with `e` the exponent of `Γ_n`.
pub fn aux_modulus(field: &QuadField, n: u64) -> Result<u64> {
    let r = field.split_part(n).len() as u32;
    let e = UnitGroupMod::new(n)?.exponent();
    let er = e.checked_pow(r).ok_or_else(|| Error::Resource(format!("exponent {e}^{r} overflows")))?;
    Ok(arith::lcm(n * field.conductor(), er))
}

/// The first `count` primes `q ≡ 1 mod modulus` from `start` on.
pub fn aux_primes(modulus: u64, count: usize, start: u64, bound: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut q = (start / modulus) * modulus + 1;
    while out.len() < count {
        if q > bound {
            return Err(Error::Resource(format!("fewer than {count} auxiliary primes ≡ 1 mod {modulus} below {bound}")));
        }
        if q >= start && arith::is_prime(q) {
            out.push(q);
        }
        q += modulus;
    }
    Ok(out)
}
