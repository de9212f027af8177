//! The graded pieces `I_n^r / I_n^{r+1}` as explicit finite abelian groups,
//! with the splitting into the `Y_{n_+}` line and the old part.

use super::graded::{mono_degree, Monomial};
use super::lattice::{smith_mod_n, ModHnf};
use super::{GradedPoly, GroupRingElt, UnitGroupMod};
use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

#[derive(Clone, Copy, Debug)]
pub struct AugQuotConfig {
    /// refuse levels whose unit group is larger than this
    pub max_order: usize,
}

impl Default for AugQuotConfig {
    fn default() -> Self {
        AugQuotConfig { max_order: 1 << 14 }
    }
}

/// A class in `I^r/I^{r+1}`, written in the cyclic decomposition of its quotient.
/// A cyclic factor of order 0 is a copy of `Z` (degree 0 only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugClass {
    diag: Arc<Vec<u64>>,
    coords: Vec<i64>,
}

impl AugClass {
    fn normalized(diag: Arc<Vec<u64>>, mut coords: Vec<i64>) -> Self {
        for (c, &d) in coords.iter_mut().zip(diag.iter()) {
            if d != 0 {
                *c = c.rem_euclid(d as i64);
            }
        }
        AugClass { diag, coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Cyclic orders of the coordinates (0 for `Z`).
    pub fn moduli(&self) -> &[u64] {
        &self.diag
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Self::normalized(self.diag.clone(), coords)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(self.diag.iter())
            .map(|(&a, &d)| {
                if d == 0 {
                    a * k
                } else {
                    (a as i128 * k as i128).rem_euclid(d as i128) as i64
                }
            })
            .collect();
        Self::normalized(self.diag.clone(), coords)
    }

    /// Order of the class (0 if of infinite order).
    pub fn order(&self) -> u64 {
        self.coords.iter().zip(self.diag.iter()).fold(1u64, |acc, (&c, &d)| {
            if c == 0 {
                acc
            } else if d == 0 {
                0
            } else if acc == 0 {
                0
            } else {
                arith::lcm(acc, d / arith::gcd(c, d as i64) as u64)
            }
        })
    }
}

/// `I_n^r / I_n^{r+1}` for squarefree `n`.
pub struct AugQuot {
    group: Arc<UnitGroupMod>,
    degree: u32,
    new_support: Option<u64>,
    lo: Option<ModHnf>,
    modulus_n: u64,
    diag: Arc<Vec<u64>>,
    transform: Vec<Vec<u64>>,
    generator_reps: Vec<Vec<i64>>,
    new_class: Option<AugClass>,
    new_order: u64,
    old: Option<ModHnf>,
    monomials: RwLock<HashMap<Monomial, AugClass>>,
}

impl std::fmt::Debug for AugQuot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AugQuot")
            .field("level", &self.group.level())
            .field("degree", &self.degree)
            .field("invariants", &self.invariants())
            .finish()
    }
}

type CacheKey = (u64, u32, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<AugQuot>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<AugQuot>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `I^r` as a lattice in the coordinates `x ↦ (x_γ)_{γ≠1}` of `I`.
fn power_lattice(group: &UnitGroupMod, r: u32, modulus: u64) -> ModHnf {
    let m = group.order() - 1;
    let mut lat = ModHnf::new(m, modulus);
    for j in 0..m {
        let mut v = vec![0i64; m];
        v[j] = 1;
        lat.insert(&v);
    }
    lat.finish();
    for _ in 1..r {
        lat = power_lattice_from(group, &lat, modulus);
    }
    lat
}

fn canonical_invariants(diag: &[u64]) -> Vec<u64> {
    let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
    for &d in diag.iter().filter(|&&d| d > 1) {
        for (p, e) in arith::factor(d) {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (_, mut parts) in by_prime {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in parts.into_iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out
}

fn multisets(primes: &[u64], r: u32) -> Vec<Monomial> {
    fn rec(primes: &[u64], r: u32, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Monomial>) {
        if r == 0 {
            let mut mono: Vec<(u64, u32)> = Vec::new();
            for &l in cur.iter() {
                match mono.last_mut() {
                    Some((p, e)) if *p == l => *e += 1,
                    _ => mono.push((l, 1)),
                }
            }
            out.push(mono);
            return;
        }
        for i in start..primes.len() {
            cur.push(primes[i]);
            rec(primes, r - 1, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(primes, r, 0, &mut Vec::new(), &mut out);
    out
}

impl AugQuot {
    /// `I_n^r/I_n^{r+1}` split along `Y_n` when `n` has exactly `r` prime factors.
    pub fn new(n: u64, r: u32) -> Result<Arc<Self>> {
        let support = (arith::prime_divisors(n).len() as u32 == r).then_some(n);
        Self::build(n, r, support, AugQuotConfig::default())
    }

    /// Split along `Y_{n_+}` for a divisor `n_+` of `n` with `r` prime factors.
    pub fn with_new_support(n: u64, r: u32, n_plus: u64) -> Result<Arc<Self>> {
        Self::build(n, r, Some(n_plus), AugQuotConfig::default())
    }

    pub fn with_config(n: u64, r: u32, n_plus: Option<u64>, config: AugQuotConfig) -> Result<Arc<Self>> {
        Self::build(n, r, n_plus, config)
    }

    fn build(n: u64, r: u32, n_plus: Option<u64>, config: AugQuotConfig) -> Result<Arc<Self>> {
        if !arith::is_squarefree(n) {
            return Err(Error::NotSquarefree(n));
        }
        if let Some(np) = n_plus {
            if n % np != 0 || arith::prime_divisors(np).len() as u32 != r {
                return Err(Error::InvalidArgument(format!(
                    "new support {np} must divide {n} and have {r} prime factors"
                )));
            }
        }
        let phi = arith::euler_phi(n) as usize;
        if phi > config.max_order {
            return Err(Error::Resource(format!(
                "|Γ_{n}| = {phi} exceeds the limit {}",
                config.max_order
            )));
        }
        let key = (n, r, n_plus.unwrap_or(0));
        if let Some(q) = cache().lock().unwrap().get(&key) {
            return Ok(q.clone());
        }
        let group = UnitGroupMod::new(n)?;
        let quot = Arc::new(Self::compute(group, r, n_plus)?);
        cache().lock().unwrap().insert(key, quot.clone());
        Ok(quot)
    }

    fn compute(group: Arc<UnitGroupMod>, r: u32, n_plus: Option<u64>) -> Result<Self> {
        let m = group.order() - 1;
        let mut quot = AugQuot {
            group: group.clone(),
            degree: r,
            new_support: n_plus,
            lo: None,
            modulus_n: 1,
            diag: Arc::new(Vec::new()),
            transform: Vec::new(),
            generator_reps: Vec::new(),
            new_class: None,
            new_order: 1,
            old: None,
            monomials: RwLock::new(HashMap::new()),
        };
        if r == 0 {
            quot.diag = Arc::new(vec![0]);
            quot.modulus_n = 0;
            quot.new_class = Some(AugClass { diag: quot.diag.clone(), coords: vec![1] });
            quot.new_order = 0;
            return Ok(quot);
        }
        if m == 0 {
            return Ok(quot);
        }
        let e = group.exponent();
        let modulus = e
            .checked_pow(r)
            .filter(|&v| v < (1u64 << 40))
            .ok_or_else(|| Error::Resource(format!("exponent {e}^{r} too large")))?;
        let lo = power_lattice(&group, r, modulus);
        let hi = power_lattice_from(&group, &lo, modulus);
        let order_big: BigInt = hi.index() / lo.index();
        let order = order_big
            .to_u64()
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| Error::Resource("graded piece too large".into()))?;
        quot.modulus_n = order;
        if order > 1 {
            let rel: Vec<Vec<u64>> = hi
                .rows()
                .iter()
                .map(|row| lo.coordinates_mod(row, order).expect("I^{r+1} ⊂ I^r"))
                .collect();
            let smith = smith_mod_n(rel, m, order);
            let keep: Vec<usize> = (0..m).filter(|&i| smith.diag[i] > 1).collect();
            quot.diag = Arc::new(keep.iter().map(|&i| smith.diag[i]).collect());
            quot.transform = smith
                .transform
                .iter()
                .map(|row| keep.iter().map(|&i| row[i]).collect())
                .collect();
            debug_assert_eq!(quot.diag.iter().product::<u64>(), order);
            let rows = lo.rows();
            quot.generator_reps = keep
                .iter()
                .map(|&i| {
                    let mut v = vec![0i128; m];
                    for (k, &xk) in smith.inverse[i].iter().enumerate() {
                        if xk != 0 {
                            for (c, &b) in v.iter_mut().zip(&rows[k]) {
                                *c = (*c + xk as i128 * b).rem_euclid(modulus as i128);
                            }
                        }
                    }
                    v.into_iter().map(|c| c as i64).collect()
                })
                .collect();
        }
        quot.lo = Some(lo);
        quot.split()?;
        Ok(quot)
    }

    fn split(&mut self) -> Result<()> {
        let primes: Vec<u64> = self.group.primes().to_vec();
        let new_mono: Option<Monomial> = self
            .new_support
            .map(|np| arith::prime_divisors(np).into_iter().map(|l| (l, 1)).collect());
        let k = self.diag.len();
        let expo = self.diag.iter().fold(1u64, |a, &d| arith::lcm(a, d));
        let mut old = ModHnf::new(k, expo.max(1));
        for (i, &d) in self.diag.iter().enumerate() {
            let mut v = vec![0i64; k];
            v[i] = d as i64;
            old.insert(&v);
        }
        for mono in multisets(&primes, self.degree) {
            if Some(&mono) == new_mono.as_ref() {
                continue;
            }
            let c = self.monomial_class(&mono)?;
            old.insert(c.coords());
        }
        old.finish();
        if let Some(mono) = new_mono {
            let c = self.monomial_class(&mono)?;
            self.new_order = c.order();
            self.new_class = Some(c);
        } else {
            self.new_order = 1;
        }
        let old_order = old.index().to_u64().unwrap_or(1);
        let old_size = self.diag.iter().product::<u64>() / old_order.max(1);
        if old_size * self.new_order != self.diag.iter().product::<u64>() {
            return Err(Error::InvalidArgument(format!(
                "graded piece of level {} degree {} does not split along the new line",
                self.group.level(),
                self.degree
            )));
        }
        self.old = Some(old);
        Ok(())
    }

    pub fn level(&self) -> u64 {
        self.group.level()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn group(&self) -> &Arc<UnitGroupMod> {
        &self.group
    }

    pub fn new_support(&self) -> Option<u64> {
        self.new_support
    }

    /// Cyclic decomposition used for class coordinates.
    pub fn cyclic_orders(&self) -> &[u64] {
        &self.diag
    }

    /// Invariant factors `d_1 | d_2 | ...` (nontrivial only; `0` denotes `Z`).
    pub fn invariants(&self) -> Vec<u64> {
        if self.degree == 0 {
            return vec![0];
        }
        canonical_invariants(&self.diag)
    }

    /// Group order (`0` for the infinite degree-0 piece).
    pub fn order(&self) -> u64 {
        if self.degree == 0 {
            0
        } else {
            self.diag.iter().product()
        }
    }

    pub fn zero(&self) -> AugClass {
        AugClass { diag: self.diag.clone(), coords: vec![0; self.diag.len()] }
    }

    /// Order of the `Y_{n_+}` line (1 when there is no new support).
    pub fn new_order(&self) -> u64 {
        self.new_order
    }

    pub fn new_class(&self) -> AugClass {
        self.new_class.clone().unwrap_or_else(|| self.zero())
    }

    fn class_of_icoords(&self, v: &[i128]) -> Result<AugClass> {
        let Some(lo) = &self.lo else {
            return Ok(self.zero());
        };
        let mut w = v.to_vec();
        for c in w.iter_mut() {
            *c = c.rem_euclid(lo.modulus() as i128);
        }
        let n = self.modulus_n;
        let x = lo
            .coordinates_mod(&w, n)
            .ok_or_else(|| Error::InvalidArgument(format!("element is not in I^{}", self.degree)))?;
        let coords = (0..self.diag.len())
            .map(|i| {
                let s: u128 = x
                    .iter()
                    .zip(&self.transform)
                    .map(|(&xk, row)| xk as u128 * row[i] as u128 % n as u128)
                    .sum();
                (s % self.diag[i] as u128) as i64
            })
            .collect();
        Ok(AugClass { diag: self.diag.clone(), coords })
    }

    /// Class of a group ring element lying in `I^r`.
    pub fn class_of(&self, x: &GroupRingElt) -> Result<AugClass> {
        if x.group().level() != self.level() {
            return Err(Error::InvalidArgument("level mismatch".into()));
        }
        if self.degree == 0 {
            return Ok(AugClass { diag: self.diag.clone(), coords: vec![x.augmentation()] });
        }
        if x.augmentation() != 0 {
            return Err(Error::InvalidArgument("element is not in the augmentation ideal".into()));
        }
        let v: Vec<i128> = x.coeffs()[1..].iter().map(|&c| c as i128).collect();
        self.class_of_icoords(&v)
    }

    /// Class of `x`, or `None` if `x ∉ I^r`.
    pub fn try_class_of(&self, x: &GroupRingElt) -> Option<AugClass> {
        self.class_of(x).ok()
    }

    /// Class of `Π (σ_ℓ - 1)^{e_ℓ}`.
    pub fn monomial_class(&self, mono: &Monomial) -> Result<AugClass> {
        if mono_degree(mono) != self.degree {
            return Err(Error::InvalidArgument("monomial of the wrong degree".into()));
        }
        if let Some(c) = self.monomials.read().unwrap().get(mono) {
            return Ok(c.clone());
        }
        let mut x = GroupRingElt::one(&self.group);
        for &(l, e) in mono {
            let s = self
                .group
                .sigma_power(l, 1)
                .ok_or_else(|| Error::InvalidArgument(format!("{l} does not divide the level")))?;
            for _ in 0..e {
                x = x.mul_minus_one(s);
            }
        }
        let c = self.class_of(&x)?;
        self.monomials.write().unwrap().insert(mono.clone(), c.clone());
        Ok(c)
    }

    /// Class of a homogeneous degree-`r` polynomial in the `Y_ℓ`.
    pub fn class_of_poly(&self, p: &GradedPoly) -> Result<AugClass> {
        let mut acc = self.zero();
        for (mono, c) in p.terms() {
            if mono.iter().any(|&(l, _)| self.level() % l != 0) {
                return Err(Error::InvalidArgument(format!("{p} is not defined at level {}", self.level())));
            }
            if self.degree == 0 && mono.is_empty() {
                acc = acc.add(&AugClass { diag: self.diag.clone(), coords: vec![c] });
                continue;
            }
            acc = acc.add(&self.monomial_class(mono)?.scale(c));
        }
        Ok(acc)
    }

    /// A group ring element in `I^r` representing the class.
    pub fn representative(&self, x: &AugClass) -> GroupRingElt {
        if self.degree == 0 {
            return GroupRingElt::one(&self.group).scale(x.coords[0]);
        }
        let m = self.group.order() - 1;
        let modulus = self.lo.as_ref().map_or(1, |l| l.modulus()) as i128;
        let mut v = vec![0i128; m];
        for (&c, rep) in x.coords.iter().zip(&self.generator_reps) {
            if c != 0 {
                for (a, &b) in v.iter_mut().zip(rep) {
                    *a = (*a + c as i128 * b as i128).rem_euclid(modulus);
                }
            }
        }
        let mut coeffs = Vec::with_capacity(m + 1);
        coeffs.push(-(v.iter().sum::<i128>() as i64));
        coeffs.extend(v.into_iter().map(|c| c as i64));
        GroupRingElt::from_coeffs(&self.group, coeffs)
    }

    /// `π_d` on classes.
    pub fn pi(&self, x: &AugClass, d: u64) -> Result<AugClass> {
        self.class_of(&self.representative(x).pi(d)?)
    }

    /// Class with the given cyclic coordinates.
    pub fn class_from_coords(&self, coords: Vec<i64>) -> Result<AugClass> {
        if coords.len() != self.diag.len() {
            return Err(Error::InvalidArgument("coordinate vector of the wrong length".into()));
        }
        Ok(AugClass::normalized(self.diag.clone(), coords))
    }

    /// The projection to the new component, as a class.
    pub fn proj_new_class(&self, x: &AugClass) -> Result<AugClass> {
        Ok(self.new_class().scale(self.proj_new(x)?))
    }

    /// The `Y_{n_+}` coordinate `a ∈ [0, new_order)` with `x - a·Y_{n_+}` old.
    pub fn proj_new(&self, x: &AugClass) -> Result<i64> {
        if self.degree == 0 {
            return Ok(x.coords[0]);
        }
        let (Some(y), Some(old)) = (&self.new_class, &self.old) else {
            return Ok(0);
        };
        let mut cur = x.clone();
        for a in 0..self.new_order.max(1) {
            if old.contains(cur.coords()) {
                return Ok(a as i64);
            }
            cur = cur.sub(y);
        }
        Err(Error::InvalidArgument("class does not decompose along the new line".into()))
    }
}

fn power_lattice_from(group: &UnitGroupMod, lo: &ModHnf, modulus: u64) -> ModHnf {
    let m = group.order() - 1;
    let gens: Vec<usize> = group.primes().iter().filter_map(|&l| group.sigma_power(l, 1)).filter(|&i| i != 0).collect();
    let mut next = ModHnf::new(m, modulus);
    for row in lo.rows() {
        let mut full = vec![0i128; m + 1];
        for (k, &c) in row.iter().enumerate() {
            full[k + 1] = c;
            full[0] -= c;
        }
        for &g in &gens {
            let mut prod = vec![0i128; m + 1];
            for (k, &c) in full.iter().enumerate() {
                if c != 0 {
                    prod[group.mul_index(k, g)] += c;
                    prod[k] -= c;
                }
            }
            let v: Vec<i64> = prod[1..].iter().map(|&c| c.rem_euclid(modulus as i128) as i64).collect();
            next.insert(&v);
        }
    }
    next.finish();
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_level_degree_one() {
        // I/I^2 ≅ Γ_11 ≅ Z/10
        let q = AugQuot::new(11, 1).unwrap();
        assert_eq!(q.invariants(), vec![10]);
        assert_eq!(q.new_order(), 10);
    }

    #[test]
    fn cyclic_graded_pieces() {
        // for cyclic Γ of order m, I^r/I^{r+1} ≅ Z/m
        for r in 1..4 {
            assert_eq!(AugQuot::new(7, r).unwrap().invariants(), vec![6]);
        }
    }

    #[test]
    fn composite_level_degree_one() {
        let q = AugQuot::new(35, 1).unwrap();
        assert_eq!(q.order(), 24);
        assert_eq!(q.invariants(), vec![2, 12]);
    }

    #[test]
    fn new_line_of_209() {
        let q = AugQuot::new(209, 2).unwrap();
        assert_eq!(q.new_order(), 2);
        let y = q.new_class();
        assert_eq!(q.proj_new(&y).unwrap(), 1);
        assert_eq!(q.proj_new(&q.zero()).unwrap(), 0);
        // (σ_11 - 1)^2 is old
        let sq = q.monomial_class(&vec![(11, 2)]).unwrap();
        assert_eq!(q.proj_new(&sq).unwrap(), 0);
        assert!(q.pi(&y, 19).unwrap().is_zero());
    }

    #[test]
    fn representatives_round_trip() {
        let q = AugQuot::new(35, 2).unwrap();
        for i in 0..q.cyclic_orders().len() {
            let mut c = vec![0; q.cyclic_orders().len()];
            c[i] = 1;
            let x = q.class_from_coords(c).unwrap();
            assert_eq!(q.class_of(&q.representative(&x)).unwrap(), x);
        }
    }
}
