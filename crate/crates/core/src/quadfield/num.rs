//! Elements `a + b√d` of a real quadratic field with rational coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    d: i64,
    a: BigRational,
    b: BigRational,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl QuadNum {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Self {
        QuadNum { d, a, b }
    }

    pub fn from_ints(d: i64, a: i64, b: i64) -> Self {
        QuadNum { d, a: rat(a), b: rat(b) }
    }

    /// `(x + y√d)/den`.
    pub fn from_frac(d: i64, x: BigInt, y: BigInt, den: BigInt) -> Self {
        QuadNum { d, a: BigRational::new(x, den.clone()), b: BigRational::new(y, den) }
    }

    pub fn rational(d: i64, a: BigRational) -> Self {
        QuadNum { d, a, b: BigRational::zero() }
    }

    pub fn one(d: i64) -> Self {
        Self::from_ints(d, 1, 0)
    }

    pub fn sqrt_d(d: i64) -> Self {
        Self::from_ints(d, 0, 1)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadNum { d: self.d, a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadNum { d: self.d, a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> Self {
        QuadNum { d: self.d, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = rat(self.d);
        QuadNum {
            d: self.d,
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadNum { d: self.d, a: &self.a * k, b: &self.b * k }
    }

    /// The nontrivial automorphism `τ`.
    pub fn conj(&self) -> Self {
        QuadNum { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        self.conj().scale(&n.recip())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Sign of the real number under `√d > 0`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat(self.d);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact comparison of `|x|` with 1.
    pub fn abs_cmp_one(&self) -> Ordering {
        let ax = if self.signum() < 0 { self.neg() } else { self.clone() };
        match ax.sub(&Self::one(self.d)).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Natural log of `|x|`, accurate enough for display.
    pub fn ln_abs(&self) -> f64 {
        let v = self.to_f64().abs();
        if v.is_finite() && v > 0.0 {
            return v.ln();
        }
        // fall back to the dominant conjugate for huge values
        let c = self.conj().to_f64().abs();
        let n = self.norm().abs();
        ln_rational(&n) - c.ln()
    }

    /// Is the element in `O_F`?
    pub fn is_integral(&self) -> bool {
        let t = self.trace();
        let n = self.norm();
        t.is_integer() && n.is_integer()
    }

    /// `(A, B, M)` with `x = (A + B ω)/M`, `M > 0`, `ω` the standard integral generator.
    pub fn omega_coords(&self) -> (BigInt, BigInt, BigInt) {
        let m = self.a.denom().lcm(self.b.denom());
        let ma = (&self.a * BigRational::from_integer(m.clone())).to_integer();
        let mb = (&self.b * BigRational::from_integer(m.clone())).to_integer();
        let (x, y) = if self.d.rem_euclid(4) == 1 {
            // a + b√d = (a - b) + 2b ω with ω = (1+√d)/2
            (ma.clone() - &mb, mb * 2)
        } else {
            (ma, mb)
        };
        let g = x.gcd(&y).gcd(&m);
        (x / &g, y / &g, m / g)
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn ln_rational(x: &BigRational) -> f64 {
    let n = x.numer().abs();
    let dn = x.denom().clone();
    ln_bigint(&n) - ln_bigint(&dn)
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let x = QuadNum::from_ints(5, 1, 1);
        let y = QuadNum::from_ints(5, 2, -3);
        assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        assert_eq!(x.div(&y).mul(&y), x);
        assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        assert_eq!(x.pow(-3).mul(&x.pow(3)), QuadNum::one(5));
    }

    #[test]
    fn exact_signs() {
        // 2 - √5 < 0, 3 - √5 > 0, 1 - √2 < 0
        assert_eq!(QuadNum::from_ints(5, 2, -1).signum(), -1);
        assert_eq!(QuadNum::from_ints(5, 3, -1).signum(), 1);
        assert_eq!(QuadNum::from_ints(2, 1, -1).signum(), -1);
        assert_eq!(QuadNum::from_ints(2, -1, 1).abs_cmp_one(), Ordering::Less);
        assert_eq!(QuadNum::from_ints(2, 1, 1).abs_cmp_one(), Ordering::Greater);
    }

    #[test]
    fn omega_coordinates() {
        // (1 + √5)/2 = ω
        let phi = QuadNum::new(5, BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()));
        assert_eq!(phi.omega_coords(), (BigInt::from(0), BigInt::from(1), BigInt::from(1)));
        assert!(phi.is_integral());
        let x = QuadNum::from_ints(10, 3, 1);
        assert_eq!(x.omega_coords(), (BigInt::from(3), BigInt::from(1), BigInt::from(1)));
    }
}
