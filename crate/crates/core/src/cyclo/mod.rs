//! Exact arithmetic in `Q(ζ_m)`, the cyclotomic unit `α_n` and the formal
//! Galois orbit `θ'_n`.

mod poly;
mod theta;
mod unit;

pub use poly::cyclotomic_poly;
pub use theta::{alpha, alpha_unit, base_case_holds, embed_quad, norm_relation_check, norm_relation_sides, sqrt_d, theta_prime, ThetaElt};
pub use unit::CycloUnit;

use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use poly::Poly;
use std::fmt;

/// Resource bound for dense expansions.
#[derive(Clone, Copy, Debug)]
pub struct CycloConfig {
    pub max_phi: u64,
}

impl Default for CycloConfig {
    fn default() -> Self {
        CycloConfig { max_phi: 4096 }
    }
}

impl CycloConfig {
    pub fn check(&self, m: u64) -> Result<()> {
        let phi = arith::euler_phi(m);
        if phi > self.max_phi {
            return Err(Error::Resource(format!("φ({m}) = {phi} exceeds the degree bound {}", self.max_phi)));
        }
        Ok(())
    }
}

/// `num/den` with `num, den ∈ Z[x]/(x^m - 1)` read in `Q(ζ_m)`; equality is
/// decided modulo `Φ_m`.
#[derive(Clone, Debug)]
pub struct CycloNum {
    m: u64,
    num: Poly,
    den: Poly,
}

impl CycloNum {
    pub fn from_int(m: u64, k: i64) -> Self {
        let m_ = m as usize;
        CycloNum { m, num: poly::monomial(m_, 0, BigInt::from(k)), den: poly::monomial(m_, 0, BigInt::one()) }
    }

    pub fn zero(m: u64) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    /// `ζ_m^k`.
    pub fn zeta(m: u64, k: u64) -> Self {
        let m_ = m as usize;
        CycloNum { m, num: poly::monomial(m_, k as usize, BigInt::one()), den: poly::monomial(m_, 0, BigInt::one()) }
    }

    /// `Σ num_i ζ^i / Σ den_i ζ^i`; inputs are folded mod `x^m - 1`.
    pub fn from_coeffs(m: u64, num: &[BigInt], den: &[BigInt]) -> Result<Self> {
        let fold = |v: &[BigInt]| {
            let mut p = poly::zero(m as usize);
            for (i, c) in v.iter().enumerate() {
                p[i % m as usize] += c;
            }
            p
        };
        let x = CycloNum { m, num: fold(num), den: fold(den) };
        if poly::reduce_phi(&x.den, m).iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(x)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        poly::reduce_phi(&self.num, self.m).iter().all(|c| c.is_zero())
    }

    fn same_modulus(&self, o: &Self) {
        assert_eq!(self.m, o.m, "cyclotomic moduli differ");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_modulus(o);
        let num = poly::add(&poly::mul(&self.num, &o.den), &poly::mul(&o.num, &self.den));
        CycloNum { m: self.m, num, den: poly::mul(&self.den, &o.den) }
    }

    pub fn neg(&self) -> Self {
        CycloNum { m: self.m, num: poly::scale(&self.num, &BigInt::from(-1)), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_modulus(o);
        CycloNum { m: self.m, num: poly::mul(&self.num, &o.num), den: poly::mul(&self.den, &o.den) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        Ok(CycloNum { m: self.m, num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiply by `(ζ^c - 1)^{±1}`.
    pub fn mul_binomial(&self, c: u64, invert: bool) -> Self {
        let c = (c % self.m) as usize;
        let mut x = self.clone();
        if invert {
            x.den = poly::mul_binomial(&x.den, c);
        } else {
            x.num = poly::mul_binomial(&x.num, c);
        }
        x
    }

    /// The automorphism `ζ ↦ ζ^c`.
    pub fn galois(&self, c: u64) -> Result<Self> {
        if arith::gcd(c as i64, self.m as i64) != 1 {
            return Err(Error::InvalidArgument(format!("{c} is not a unit modulo {}", self.m)));
        }
        let c = (c % self.m) as usize;
        Ok(CycloNum { m: self.m, num: poly::substitute(&self.num, c), den: poly::substitute(&self.den, c) })
    }

    /// The same number in `Q(ζ_{mk})`, via `ζ_m = ζ_{mk}^k`.
    pub fn inflate(&self, k: u64) -> Self {
        CycloNum { m: self.m * k, num: poly::inflate(&self.num, k as usize), den: poly::inflate(&self.den, k as usize) }
    }

    /// Remainders of numerator and denominator modulo `Φ_m`.
    pub fn reduced(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (poly::reduce_phi(&self.num, self.m), poly::reduce_phi(&self.den, self.m))
    }

    pub fn is_fixed_by(&self, c: u64) -> Result<bool> {
        Ok(self.galois(c)? == *self)
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, o: &Self) -> bool {
        if self.m != o.m {
            return false;
        }
        let cross = poly::sub(&poly::mul(&self.num, &o.den), &poly::mul(&o.num, &self.den));
        poly::reduce_phi(&cross, self.m).iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &[BigInt]| {
            let terms: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| if i == 0 { c.to_string() } else { format!("{c}*z^{i}") })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let (n, d) = self.reduced();
        write!(f, "({}) / ({}) in Q(z_{})", show(&n), show(&d), self.m)
    }
}
