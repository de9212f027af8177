//! Integral group rings of `(Z/nZ)^×` for squarefree `n`, their augmentation
//! filtration and the graded pieces `I^r/I^{r+1}`.
//!
//! Elements of `Γ_n` are indexed in mixed radix by their exponent vectors
//! with respect to the fixed generators `σ_ℓ` (least primitive root mod `ℓ`),
//! one per prime `ℓ | n`. Index 0 is always the identity.

mod graded;
mod lattice;
mod perm;
mod quot;

pub use graded::{degree_one_of, frob_form, mono_degree, GradedPoly, Monomial};
pub use lattice::{smith_mod_n, ModHnf, SmithModN};
pub use perm::{all_permutations, d_det, d_matrix, derangements, det, is_single_cycle, perm_pi, single_cycles_through, PermData, Permutation};
pub use quot::{AugClass, AugQuot, AugQuotConfig};

use crate::arith;
use crate::error::{Error, Result};
use std::sync::Arc;

/// `Γ_n ≅ (Z/nZ)^×` with its decomposition `Π_{ℓ|n} Γ_ℓ`.
#[derive(Debug)]
pub struct UnitGroupMod {
    n: u64,
    primes: Vec<u64>,
    generators: Vec<u64>,
    orders: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    /// discrete logs base σ_ℓ of residues mod ℓ, one table per prime
    dlog_tables: Vec<Vec<u64>>,
    residues: Vec<u64>,
}

impl UnitGroupMod {
    pub fn new(n: u64) -> Result<Arc<Self>> {
        if n == 0 || !arith::is_squarefree(n) {
            return Err(Error::NotSquarefree(n));
        }
        let primes = arith::prime_divisors(n);
        let generators: Vec<u64> = primes.iter().map(|&l| arith::primitive_root(l)).collect();
        let orders: Vec<u64> = primes.iter().map(|&l| l - 1).collect();
        let mut strides = Vec::with_capacity(primes.len());
        let mut acc = 1usize;
        for &o in &orders {
            strides.push(acc);
            acc *= o as usize;
        }
        let order = acc;
        let dlog_tables = primes
            .iter()
            .zip(&generators)
            .map(|(&l, &g)| {
                let mut table = vec![0u64; l as usize];
                let mut x = 1u64;
                for k in 0..(l - 1).max(1) {
                    table[x as usize] = k;
                    x = x * g % l;
                }
                table
            })
            .collect();
        let mut group = UnitGroupMod {
            n,
            primes,
            generators,
            orders,
            strides,
            order,
            dlog_tables,
            residues: Vec::new(),
        };
        group.residues = (0..order).map(|i| group.residue_of_index(i)).collect();
        Ok(Arc::new(group))
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The fixed generator `σ_ℓ` of `Γ_ℓ`, as a residue mod `ℓ`.
    pub fn generator(&self, l: u64) -> Option<u64> {
        self.prime_position(l).map(|i| self.generators[i])
    }

    /// Exponent of the group, `lcm(ℓ-1)`.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| arith::lcm(acc, o))
    }

    pub fn prime_position(&self, l: u64) -> Option<usize> {
        self.primes.iter().position(|&p| p == l)
    }

    pub fn exponents(&self, idx: usize) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| ((idx / s) as u64) % o)
            .collect()
    }

    pub fn index_of_exponents(&self, exps: &[u64]) -> usize {
        exps.iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&e, &o), &s)| (e % o) as usize * s)
            .sum()
    }

    fn residue_of_index(&self, idx: usize) -> u64 {
        let exps = self.exponents(idx);
        // CRT: residue ≡ g_ℓ^{e_ℓ} mod ℓ
        let mut x = 0i128;
        let mut m = 1i128;
        for ((&l, &g), &e) in self.primes.iter().zip(&self.generators).zip(&exps) {
            let r = arith::mod_pow(g, e, l) as i128;
            let (_, s, _) = arith::ext_gcd(m, l as i128);
            let diff = (r - x).rem_euclid(l as i128);
            x += m * ((diff * s).rem_euclid(l as i128));
            m *= l as i128;
            x = x.rem_euclid(m);
        }
        if self.n == 1 {
            0
        } else {
            x as u64
        }
    }

    /// Residue mod `n` of the element at `idx`.
    pub fn residue(&self, idx: usize) -> u64 {
        self.residues[idx]
    }

    /// Index of the class of `c` (which must be prime to `n`).
    pub fn index_of_residue(&self, c: i64) -> Result<usize> {
        let c = c.rem_euclid(self.n.max(1) as i64) as u64;
        if arith::gcd(c as i64, self.n as i64) != 1 && self.n > 1 {
            return Err(Error::InvalidArgument(format!("{c} is not a unit mod {}", self.n)));
        }
        let exps: Vec<u64> = self
            .primes
            .iter()
            .enumerate()
            .map(|(i, &l)| self.dlog_tables[i][(c % l) as usize])
            .collect();
        Ok(self.index_of_exponents(&exps))
    }

    /// Discrete log of `c mod ℓ` with respect to `σ_ℓ`.
    pub fn dlog_at(&self, l: u64, c: i64) -> Option<u64> {
        let i = self.prime_position(l)?;
        let r = c.rem_euclid(l as i64) as usize;
        if r == 0 {
            return None;
        }
        Some(self.dlog_tables[i][r])
    }

    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&o, &s) in self.orders.iter().zip(&self.strides) {
            let ea = (a / s) % o as usize;
            let eb = (b / s) % o as usize;
            out += ((ea + eb) % o as usize) * s;
        }
        out
    }

    pub fn inv_index(&self, a: usize) -> usize {
        let exps: Vec<u64> = self
            .exponents(a)
            .iter()
            .zip(&self.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        self.index_of_exponents(&exps)
    }

    /// Index of `σ_ℓ^k` viewed inside `Γ_n`.
    pub fn sigma_power(&self, l: u64, k: u64) -> Option<usize> {
        let i = self.prime_position(l)?;
        Some(((k % self.orders[i]) as usize) * self.strides[i])
    }

    /// Frobenius at a prime `q ∤ n`: the residue `q mod n`.
    pub fn frobenius(&self, q: u64) -> Result<usize> {
        if self.n > 1 && self.n % q == 0 {
            return Err(Error::InvalidArgument(format!("{q} divides the level {}", self.n)));
        }
        self.index_of_residue(q as i64)
    }

    /// Image of the element `idx` under `Γ_n ↠ Γ_d ↪ Γ_n`.
    pub fn project_index(&self, idx: usize, d: u64) -> usize {
        let exps: Vec<u64> = self
            .exponents(idx)
            .iter()
            .zip(&self.primes)
            .map(|(&e, &l)| if d % l == 0 { e } else { 0 })
            .collect();
        self.index_of_exponents(&exps)
    }

    /// Embed an element of `Γ_m` (for `m | n`) as the subgroup `Π_{ℓ|m} Γ_ℓ`.
    pub fn embed_from(&self, sub: &UnitGroupMod, idx: usize) -> usize {
        let mut exps = vec![0u64; self.primes.len()];
        for (e, l) in sub.exponents(idx).into_iter().zip(sub.primes()) {
            let i = self.prime_position(*l).expect("sub level divides level");
            exps[i] = e;
        }
        self.index_of_exponents(&exps)
    }
}

/// An element of `Z[Γ_n]`.
#[derive(Debug, Clone)]
pub struct GroupRingElt {
    group: Arc<UnitGroupMod>,
    coeffs: Vec<i64>,
}

impl PartialEq for GroupRingElt {
    fn eq(&self, other: &Self) -> bool {
        self.group.level() == other.group.level() && self.coeffs == other.coeffs
    }
}

impl GroupRingElt {
    pub fn zero(group: &Arc<UnitGroupMod>) -> Self {
        GroupRingElt { group: group.clone(), coeffs: vec![0; group.order()] }
    }

    pub fn from_coeffs(group: &Arc<UnitGroupMod>, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), group.order());
        GroupRingElt { group: group.clone(), coeffs }
    }

    pub fn basis(group: &Arc<UnitGroupMod>, idx: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[idx] = 1;
        e
    }

    pub fn one(group: &Arc<UnitGroupMod>) -> Self {
        Self::basis(group, 0)
    }

    /// `γ - 1`.
    pub fn minus_one(group: &Arc<UnitGroupMod>, idx: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[idx] += 1;
        e.coeffs[0] -= 1;
        e
    }

    pub fn group(&self) -> &Arc<UnitGroupMod> {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        GroupRingElt { group: self.group.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        GroupRingElt { group: self.group.clone(), coeffs }
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupRingElt { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// Multiplication by a group element (a permutation of coefficients).
    pub fn shift(&self, idx: usize) -> Self {
        let mut out = vec![0; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out[self.group.mul_index(i, idx)] += c;
            }
        }
        GroupRingElt { group: self.group.clone(), coeffs: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0i128; self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[self.group.mul_index(i, j)] += a as i128 * b as i128;
                }
            }
        }
        let coeffs = out
            .into_iter()
            .map(|c| i64::try_from(c).expect("group ring coefficient overflow"))
            .collect();
        GroupRingElt { group: self.group.clone(), coeffs }
    }

    /// Multiply by `γ - 1`.
    pub fn mul_minus_one(&self, idx: usize) -> Self {
        self.shift(idx).sub(self)
    }

    /// `π_d`: push coefficients along `Γ_n ↠ Γ_d ↪ Γ_n`.
    pub fn pi(&self, d: u64) -> Result<Self> {
        if self.group.level() % d != 0 {
            return Err(Error::InvalidArgument(format!("{d} does not divide {}", self.group.level())));
        }
        let mut out = vec![0; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out[self.group.project_index(i, d)] += c;
            }
        }
        Ok(GroupRingElt { group: self.group.clone(), coeffs: out })
    }

    /// Image under `Z[Γ_m] ↪ Z[Γ_n]` for `m | n`.
    pub fn embed_into(&self, target: &Arc<UnitGroupMod>) -> Result<Self> {
        if target.level() % self.group.level() != 0 {
            return Err(Error::InvalidArgument(format!("{} does not divide {}", self.group.level(), target.level())));
        }
        let mut out = vec![0; target.order()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out[target.embed_from(&self.group, i)] += c;
            }
        }
        Ok(GroupRingElt { group: target.clone(), coeffs: out })
    }

    /// The polynomial `p` evaluated at `Y_ℓ = σ_ℓ - 1`.
    pub fn realize(group: &Arc<UnitGroupMod>, p: &GradedPoly) -> Result<Self> {
        let mut acc = Self::zero(group);
        for (mono, c) in p.terms() {
            let mut x = Self::one(group);
            for &(l, e) in mono {
                let s = group
                    .sigma_power(l, 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("{l} does not divide the level {}", group.level())))?;
                for _ in 0..e {
                    x = x.mul_minus_one(s);
                }
            }
            acc = acc.add(&x.scale(c));
        }
        Ok(acc)
    }

    /// Reduce coefficients into `[0, m)`.
    pub fn reduce_mod(&self, m: i64) -> Self {
        GroupRingElt { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c.rem_euclid(m)).collect() }
    }
}

/// `Γ_n` for squarefree `n`.
pub fn gamma(n: u64) -> Result<Arc<UnitGroupMod>> {
    UnitGroupMod::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_prime_levels() {
        let g1 = gamma(1).unwrap();
        assert_eq!(g1.order(), 1);
        let g11 = gamma(11).unwrap();
        assert_eq!(g11.order(), 10);
        assert_eq!(g11.generator(11), Some(2));
        assert!(gamma(12).is_err());
        assert!(gamma(0).is_err());
    }

    #[test]
    fn crt_is_a_group_isomorphism() {
        let g = gamma(209).unwrap();
        assert_eq!(g.order(), 180);
        let mut seen = std::collections::HashSet::new();
        for i in 0..g.order() {
            let r = g.residue(i);
            assert!(seen.insert(r));
            assert_eq!(g.index_of_residue(r as i64).unwrap(), i);
            for j in 0..g.order() {
                let prod = (r * g.residue(j)) % 209;
                assert_eq!(g.residue(g.mul_index(i, j)), prod);
            }
        }
    }

    #[test]
    fn frobenius_is_residue() {
        assert_eq!(gamma(11).unwrap().residue(gamma(11).unwrap().frobenius(19).unwrap()), 8);
        let g19 = gamma(19).unwrap();
        assert_eq!(g19.residue(g19.frobenius(11).unwrap()), 11);
        let g1 = gamma(1).unwrap();
        assert_eq!(g1.frobenius(2).unwrap(), 0);
        assert!(gamma(11).unwrap().frobenius(11).is_err());
    }

    #[test]
    fn augmentation_is_multiplicative() {
        let g = gamma(35).unwrap();
        let a = GroupRingElt::from_coeffs(&g, (0..24).map(|i| (i * 7 % 5) as i64 - 2).collect());
        let b = GroupRingElt::from_coeffs(&g, (0..24).map(|i| (i * 3 % 4) as i64 - 1).collect());
        assert_eq!(a.mul(&b).augmentation(), a.augmentation() * b.augmentation());
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.pi(5).unwrap().augmentation(), a.augmentation());
    }
}
