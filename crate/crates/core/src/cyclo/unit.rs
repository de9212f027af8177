//! Cyclotomic numbers in product form `ζ^k Π (ζ^c - 1)^{e_c}`.

use super::{CycloConfig, CycloNum};
use crate::arith;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloUnit {
    m: u64,
    zeta: u64,
    factors: BTreeMap<u64, i64>,
}

impl CycloUnit {
    pub fn one(m: u64) -> Self {
        CycloUnit { m, zeta: 0, factors: BTreeMap::new() }
    }

    /// `ζ_m^k`.
    pub fn zeta(m: u64, k: u64) -> Self {
        CycloUnit { m, zeta: k % m, factors: BTreeMap::new() }
    }

    /// `ζ_m^c - 1` for `c ≢ 0`.
    pub fn binomial(m: u64, c: u64) -> Self {
        let mut x = Self::one(m);
        x.push(c, 1);
        x
    }

    fn push(&mut self, c: u64, e: i64) {
        let c = c % self.m;
        assert!(c != 0, "ζ^0 - 1 = 0 is not a unit");
        let v = self.factors.entry(c).or_insert(0);
        *v += e;
        if *v == 0 {
            self.factors.remove(&c);
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn zeta_exponent(&self) -> u64 {
        self.zeta
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    /// Total number of binomial factors counted with multiplicity.
    pub fn weight(&self) -> u64 {
        self.factors.values().map(|e| e.unsigned_abs()).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic moduli differ");
        let mut x = self.clone();
        x.zeta = (x.zeta + o.zeta) % x.m;
        for (&c, &e) in &o.factors {
            x.push(c, e);
        }
        x
    }

    pub fn pow(&self, k: i64) -> Self {
        let zeta = ((self.zeta as i128 * k as i128).rem_euclid(self.m as i128)) as u64;
        let factors = if k == 0 { BTreeMap::new() } else { self.factors.iter().map(|(&c, &e)| (c, e * k)).collect() };
        CycloUnit { m: self.m, zeta, factors }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn galois(&self, c: u64) -> Result<Self> {
        if arith::gcd(c as i64, self.m as i64) != 1 {
            return Err(Error::InvalidArgument(format!("{c} is not a unit modulo {}", self.m)));
        }
        let m = self.m as u128;
        let act = |k: u64| ((k as u128 * c as u128) % m) as u64;
        let mut x = Self::zeta(self.m, act(self.zeta));
        for (&k, &e) in &self.factors {
            x.push(act(k), e);
        }
        Ok(x)
    }

    /// The same number in `Q(ζ_{mk})`, via `ζ_m = ζ_{mk}^k`.
    pub fn inflate(&self, k: u64) -> Self {
        CycloUnit {
            m: self.m * k,
            zeta: self.zeta * k,
            factors: self.factors.iter().map(|(&c, &e)| (c * k, e)).collect(),
        }
    }

    /// Dense expansion. Factors are multiplied in increasing residue order.
    pub fn expand(&self, cfg: &CycloConfig) -> Result<CycloNum> {
        cfg.check(self.m)?;
        let mut x = CycloNum::zeta(self.m, self.zeta);
        for (&c, &e) in &self.factors {
            for _ in 0..e.unsigned_abs() {
                x = x.mul_binomial(c, e < 0);
            }
        }
        Ok(x)
    }

    /// Image in `F_q^×` under `ζ_m ↦ w`, where `w` has exact order `m` mod `q`.
    /// A factor vanishing mod `q` gives `BadPrime`.
    pub fn eval_mod(&self, q: u64, w: u64) -> Result<u64> {
        let mut num = arith::mod_pow(w, self.zeta, q);
        let mut den = 1u64;
        for (&c, &e) in &self.factors {
            let v = (arith::mod_pow(w, c, q) + q - 1) % q;
            if v == 0 {
                return Err(Error::BadPrime(q));
            }
            let p = arith::mod_pow(v, e.unsigned_abs(), q);
            if e > 0 {
                num = arith::mod_mul(num, p, q);
            } else {
                den = arith::mod_mul(den, p, q);
            }
        }
        let inv = arith::mod_inv(den as i64, q as i64).ok_or(Error::BadPrime(q))? as u64;
        Ok(arith::mod_mul(num, inv, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_form_matches_expansion() {
        let cfg = CycloConfig::default();
        let x = CycloUnit::binomial(20, 3).mul(&CycloUnit::binomial(20, 7).inv()).mul(&CycloUnit::zeta(20, 5));
        let y = CycloUnit::binomial(20, 9);
        let prod = x.mul(&y).expand(&cfg).unwrap();
        assert_eq!(prod, x.expand(&cfg).unwrap().mul(&y.expand(&cfg).unwrap()));
        let g = x.galois(3).unwrap().expand(&cfg).unwrap();
        assert_eq!(g, x.expand(&cfg).unwrap().galois(3).unwrap());
        assert_eq!(x.inflate(3).expand(&cfg).unwrap(), x.expand(&cfg).unwrap().inflate(3));
    }

    #[test]
    fn reduction_is_multiplicative() {
        // q = 41 ≡ 1 mod 20, w of order 20
        let q = 41u64;
        let g = arith::primitive_root(q);
        let w = arith::mod_pow(g, 2, q);
        let x = CycloUnit::binomial(20, 3).mul(&CycloUnit::zeta(20, 1));
        let y = CycloUnit::binomial(20, 11).inv();
        let hx = x.eval_mod(q, w).unwrap();
        let hy = y.eval_mod(q, w).unwrap();
        assert_eq!(x.mul(&y).eval_mod(q, w).unwrap(), arith::mod_mul(hx, hy, q));
        assert_eq!(x.galois(3).unwrap().eval_mod(q, w).unwrap(), x.eval_mod(q, arith::mod_pow(w, 3, q)).unwrap());
    }

    #[test]
    fn resource_bound() {
        let cfg = CycloConfig { max_phi: 10 };
        assert!(matches!(CycloUnit::binomial(23, 1).expand(&cfg), Err(Error::Resource(_))));
    }
}
