//! Homogeneous polynomials in symbols `Y_ℓ = σ_ℓ - 1`, with monomial
//! coefficients reduced modulo `gcd{ℓ-1 : Y_ℓ divides the monomial}`.
//!
//! This presentation covers `⊕_r I^r/I^{r+1}` for every level at once:
//! the symbol `Y_ℓ` means the same thing at each level divisible by `ℓ`,
//! and the relation `(ℓ-1) Y_ℓ ≡ 0` holds modulo the next filtration step.
//! The square-free monomial part is faithful (see [`super::AugQuot`]).

use super::UnitGroupMod;
use crate::arith;
use std::collections::BTreeMap;
use std::fmt;

/// Sorted `(prime, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(u64, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    base: u64,
    terms: BTreeMap<Monomial, i64>,
}

fn mono_modulus(mono: &Monomial, base: u64) -> u64 {
    let g = mono.iter().fold(0i64, |acc, &(l, _)| arith::gcd(acc, l as i64 - 1)) as u64;
    arith::gcd(g as i64, base as i64) as u64
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<u64, u32> = a.iter().cloned().collect();
    for &(l, e) in b {
        *out.entry(l).or_insert(0) += e;
    }
    out.into_iter().collect()
}

pub fn mono_degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

impl GradedPoly {
    /// Zero with coefficients in `Z/base` (`base = 0` for `Z`).
    pub fn zero(base: u64) -> Self {
        GradedPoly { base, terms: BTreeMap::new() }
    }

    pub fn constant(c: i64, base: u64) -> Self {
        let mut p = Self::zero(base);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn monomial(mono: Monomial, c: i64, base: u64) -> Self {
        let mut p = Self::zero(base);
        p.add_term(mono, c);
        p
    }

    /// `Y_{ℓ_1} ⋯ Y_{ℓ_k}` for the primes of a squarefree `m`.
    pub fn squarefree_monomial(m: u64, base: u64) -> Self {
        let mono = arith::prime_divisors(m).into_iter().map(|l| (l, 1)).collect();
        Self::monomial(mono, 1, base)
    }

    /// `Σ a_ℓ Y_ℓ`.
    pub fn linear(pairs: &[(u64, i64)], base: u64) -> Self {
        let mut p = Self::zero(base);
        for &(l, a) in pairs {
            p.add_term(vec![(l, 1)], a);
        }
        p
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> i64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(mono_degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn normalize(c: i64, m: u64) -> i64 {
        if m == 0 {
            c
        } else {
            c.rem_euclid(m as i64)
        }
    }

    pub fn add_term(&mut self, mono: Monomial, c: i64) {
        let m = mono_modulus(&mono, self.base);
        let entry = self.terms.entry(mono).or_insert(0);
        *entry = Self::normalize(*entry + Self::normalize(c, m), m);
        self.terms.retain(|_, v| *v != 0);
    }

    /// Re-reduce with a new coefficient base.
    pub fn with_base(&self, base: u64) -> Self {
        let mut p = Self::zero(base);
        for (m, c) in self.terms() {
            p.add_term(m.clone(), c);
        }
        p
    }

    fn common_base(&self, other: &Self) -> u64 {
        arith::gcd(self.base as i64, other.base as i64) as u64
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.with_base(self.common_base(other));
        for (m, c) in other.terms() {
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut p = Self::zero(self.base);
        for (m, c) in self.terms() {
            let md = mono_modulus(m, self.base);
            let prod = if md == 0 {
                i64::try_from(c as i128 * k as i128).expect("graded coefficient overflow")
            } else {
                (c as i128 * k as i128).rem_euclid(md as i128) as i64
            };
            p.add_term(m.clone(), prod);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.common_base(other));
        for (ma, a) in self.terms() {
            for (mb, b) in other.terms() {
                let mono = mono_mul(ma, mb);
                let m = mono_modulus(&mono, p.base);
                let prod = if m == 0 {
                    i64::try_from(a as i128 * b as i128).expect("graded coefficient overflow")
                } else {
                    (a as i128 * b as i128).rem_euclid(m as i128) as i64
                };
                p.add_term(mono, prod);
            }
        }
        p
    }

    /// `π_d`: kill every monomial involving `Y_ℓ` with `ℓ ∤ d`.
    pub fn pi(&self, d: u64) -> Self {
        let mut p = Self::zero(self.base);
        for (m, c) in self.terms() {
            if m.iter().all(|&(l, _)| d % l == 0) {
                p.add_term(m.clone(), c);
            }
        }
        p
    }

    /// Coefficient of `Y_{n_+}` modulo `gcd{ℓ-1 : ℓ | n_+}`.
    pub fn proj_new(&self, n_plus: u64) -> i64 {
        let mono: Monomial = arith::prime_divisors(n_plus).into_iter().map(|l| (l, 1)).collect();
        self.coefficient(&mono)
    }

    /// Order of the cyclic group in which the `Y_{n_+}` coefficient lives.
    pub fn new_order(n_plus: u64, base: u64) -> u64 {
        let mono: Monomial = arith::prime_divisors(n_plus).into_iter().map(|l| (l, 1)).collect();
        mono_modulus(&mono, base)
    }
}

/// Image of `γ - 1` in `I/I^2` at the level of `group`.
pub fn degree_one_of(group: &UnitGroupMod, idx: usize, base: u64) -> GradedPoly {
    let exps = group.exponents(idx);
    let pairs: Vec<(u64, i64)> = group.primes().iter().zip(exps).map(|(&l, e)| (l, e as i64)).collect();
    GradedPoly::linear(&pairs, base)
}

/// `Fr_q - 1 ∈ I_n/I_n^2`, i.e. `Σ_{ℓ|n} log_{σ_ℓ}(q mod ℓ) Y_ℓ`.
pub fn frob_form(q: u64, n: u64, base: u64) -> GradedPoly {
    let mut p = GradedPoly::zero(base);
    for l in arith::prime_divisors(n) {
        let g = arith::primitive_root(l);
        let target = q % l;
        let mut x = 1 % l;
        let mut k = 0i64;
        while x != target {
            x = x * g % l;
            k += 1;
            assert!(k < l as i64, "{q} is not a unit mod {l}");
        }
        p.add_term(vec![(l, 1)], k);
    }
    p
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                if m.is_empty() {
                    format!("{c}")
                } else {
                    let ys: Vec<String> = m
                        .iter()
                        .map(|&(l, e)| if e == 1 { format!("Y{l}") } else { format!("Y{l}^{e}") })
                        .collect();
                    format!("{c}*{}", ys.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_reduce_coefficients() {
        let y11 = GradedPoly::linear(&[(11, 13)], 0);
        assert_eq!(y11.coefficient(&vec![(11, 1)]), 3);
        let y19 = GradedPoly::linear(&[(19, 1)], 0);
        let prod = y11.mul(&y19);
        // gcd(10, 18) = 2
        assert_eq!(prod.coefficient(&vec![(11, 1), (19, 1)]), 1);
        assert_eq!(GradedPoly::new_order(209, 0), 2);
        assert!(GradedPoly::linear(&[(2, 5)], 0).is_zero());
    }

    #[test]
    fn pi_kills_foreign_symbols() {
        let p = GradedPoly::linear(&[(11, 1), (19, 2)], 0);
        assert_eq!(p.pi(11), GradedPoly::linear(&[(11, 1)], 0));
        assert_eq!(p.pi(1), GradedPoly::zero(0));
    }

    #[test]
    fn frobenius_form_matches_discrete_log() {
        // 19 ≡ 8 = 2^3 mod 11
        assert_eq!(frob_form(19, 11, 0), GradedPoly::linear(&[(11, 3)], 0));
        // 11 mod 19 = 2^12 mod 19 = 11
        assert_eq!(frob_form(11, 19, 0), GradedPoly::linear(&[(19, 12)], 0));
    }
}
