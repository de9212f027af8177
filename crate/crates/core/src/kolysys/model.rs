//! Universes of auxiliary primes and synthetic local data on `A = (Z/M)^K`.

use crate::arith;
use crate::error::{Error, Result};
use crate::groupring::AugQuot;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const MAX_PRIMES: usize = 4;

/// A finite set of odd primes, each labelled split or inert.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Universe {
    split: Vec<u64>,
    inert: Vec<u64>,
}

impl Universe {
    pub fn new(mut split: Vec<u64>, mut inert: Vec<u64>) -> Result<Self> {
        split.sort_unstable();
        inert.sort_unstable();
        let mut all: Vec<u64> = split.iter().chain(&inert).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != split.len() + inert.len() {
            return Err(Error::InvalidArgument("a prime is listed twice".into()));
        }
        if all.len() > MAX_PRIMES {
            return Err(Error::Resource(format!("universes hold at most {MAX_PRIMES} primes")));
        }
        if let Some(&p) = all.iter().find(|&&p| p < 3 || !arith::is_prime(p)) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        Ok(Universe { split, inert })
    }

    /// Random labels on a random subset of `pool` of size `1..=max`.
    pub fn random<R: Rng>(rng: &mut R, pool: &[u64], max: usize) -> Self {
        let k = rng.gen_range(1..=max.min(pool.len()));
        let chosen: Vec<u64> = pool.choose_multiple(rng, k).copied().collect();
        let (split, inert) = chosen.into_iter().partition(|_| rng.gen_bool(0.7));
        Universe::new(split, inert).expect("pool of odd primes")
    }

    pub fn split(&self) -> &[u64] {
        &self.split
    }

    pub fn inert(&self) -> &[u64] {
        &self.inert
    }

    pub fn is_split(&self, l: u64) -> bool {
        self.split.contains(&l)
    }

    pub fn product(&self) -> u64 {
        self.split.iter().chain(&self.inert).product()
    }

    /// All levels, sorted; every divisor of a level comes before it.
    pub fn levels(&self) -> Vec<u64> {
        arith::divisors(self.product())
    }

    /// The levels built from split primes only.
    pub fn split_levels(&self) -> Vec<u64> {
        arith::divisors(self.split.iter().product())
    }

    pub fn n_plus(&self, n: u64) -> u64 {
        self.split.iter().filter(|&&l| n % l == 0).product()
    }

    pub fn r(&self, n: u64) -> u32 {
        arith::prime_divisors(self.n_plus(n)).len() as u32
    }

    /// Order of `Ĩ_n`: `gcd{ℓ - 1 : ℓ | n_+}`, or 0 (a copy of `Z`) when `n_+ = 1`.
    pub fn g(&self, n: u64) -> u64 {
        arith::prime_divisors(self.n_plus(n)).iter().fold(0, |acc, &l| arith::gcd(acc as i64, (l - 1) as i64) as u64)
    }

    /// `M = lcm{ℓ - 1}` over the split primes (1 if there are none).
    pub fn default_modulus(&self) -> u64 {
        self.split.iter().fold(1, |acc, &l| arith::lcm(acc, l - 1))
    }

    pub fn quot(&self, n: u64) -> Result<Arc<AugQuot>> {
        AugQuot::with_new_support(n, self.r(n), self.n_plus(n))
    }
}

/// `gcd(m, g)` with `g = 0` read as `Z`.
pub fn modulus_of(m: u64, g: u64) -> u64 {
    arith::gcd(m as i64, g as i64) as u64
}

/// Local data on `A = (Z/M)^K` at each split `ℓ`: the finite and transverse
/// parts of the localization, both valued in `Z/(ℓ-1)`, and the finite-singular
/// map, multiplication by a unit `u_ℓ`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SyntheticLocalModel {
    pub universe: Universe,
    pub modulus: u64,
    pub rank: usize,
    pub fin: BTreeMap<u64, Vec<u64>>,
    pub tr: BTreeMap<u64, Vec<u64>>,
    pub fs: BTreeMap<u64, u64>,
}

impl SyntheticLocalModel {
    pub fn validate(&self) -> Result<()> {
        for &l in self.universe.split() {
            if self.modulus % (l - 1) != 0 {
                return Err(Error::InvalidArgument(format!("{} - 1 does not divide M = {}", l, self.modulus)));
            }
            let (Some(f), Some(t), Some(&u)) = (self.fin.get(&l), self.tr.get(&l), self.fs.get(&l)) else {
                return Err(Error::InvalidArgument(format!("no local data at {l}")));
            };
            if f.len() != self.rank || t.len() != self.rank {
                return Err(Error::InvalidArgument(format!("local data at {l} has the wrong rank")));
            }
            if arith::gcd(u as i64, (l - 1) as i64) != 1 {
                return Err(Error::InvalidArgument(format!("finite-singular map at {l} is not invertible")));
            }
        }
        Ok(())
    }

    /// Index of the basis vector `a_m` attached to the split level `m`.
    pub fn basis_index(&self, m: u64) -> usize {
        self.universe.split_levels().iter().position(|&x| x == m).expect("split level")
    }

    /// Apply the `ℓ`-finite part to a vector of `A`, giving a value mod `ℓ - 1`.
    pub fn fin_of(&self, l: u64, v: &[i64]) -> i64 {
        dot(&self.fin[&l], v, l - 1)
    }

    pub fn tr_of(&self, l: u64, v: &[i64]) -> i64 {
        dot(&self.tr[&l], v, l - 1)
    }

    /// A random model together with the Kolyvagin system `κ_n = a_{n_+}` it was
    /// built around. The local maps on `a_m` are chosen subject exactly to
    /// the conditions that make this collection a Kolyvagin system.
    pub fn random<R: Rng>(universe: &Universe, extra: usize, rng: &mut R) -> (Self, BTreeMap<u64, Vec<i64>>) {
        let modulus = universe.default_modulus();
        let split_levels = universe.split_levels();
        let rank = split_levels.len() + extra;
        let mut fin = BTreeMap::new();
        let mut tr = BTreeMap::new();
        let mut fs = BTreeMap::new();
        for &l in universe.split() {
            let q = l - 1;
            let u = loop {
                let u = rng.gen_range(1..q.max(2));
                if arith::gcd(u as i64, q as i64) == 1 {
                    break u % q.max(1);
                }
            };
            let mut f = vec![0u64; rank];
            let mut t = vec![0u64; rank];
            for (k, &m) in split_levels.iter().enumerate() {
                let g = universe.g(m);
                if m % l != 0 {
                    f[k] = rng.gen_range(0..q);
                    t[k] = modulus_of(q, g) * rng.gen_range(0..q) % q;
                } else {
                    f[k] = g * rng.gen_range(0..q) % q;
                }
            }
            for (k, &m) in split_levels.iter().enumerate() {
                if m % l == 0 {
                    let below = split_levels.iter().position(|&x| x == m / l).unwrap();
                    t[k] = (u * f[below] + universe.g(m) * rng.gen_range(0..q)) % q;
                }
            }
            for k in split_levels.len()..rank {
                f[k] = rng.gen_range(0..q);
                t[k] = rng.gen_range(0..q);
            }
            fin.insert(l, f);
            tr.insert(l, t);
            fs.insert(l, u);
        }
        let model = SyntheticLocalModel { universe: universe.clone(), modulus, rank, fin, tr, fs };
        let ks = universe
            .levels()
            .into_iter()
            .map(|n| {
                let mut v = vec![0i64; rank];
                v[model.basis_index(universe.n_plus(n))] = 1;
                (n, v)
            })
            .collect();
        (model, ks)
    }
}

fn dot(a: &[u64], v: &[i64], m: u64) -> i64 {
    let m = m as i128;
    a.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>().rem_euclid(m) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn levels_and_orders() {
        let u = Universe::new(vec![5, 7], vec![3]).unwrap();
        assert_eq!(u.levels(), vec![1, 3, 5, 7, 15, 21, 35, 105]);
        assert_eq!(u.n_plus(105), 35);
        assert_eq!(u.r(21), 1);
        assert_eq!(u.g(35), 2);
        assert_eq!(u.g(3), 0);
        assert_eq!(u.default_modulus(), 12);
    }

    #[test]
    fn rejects_bad_universes() {
        assert!(Universe::new(vec![5, 5], vec![]).is_err());
        assert!(Universe::new(vec![9], vec![]).is_err());
        assert!(Universe::new(vec![3, 5, 7, 11, 13], vec![]).is_err());
    }

    #[test]
    fn random_models_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = Universe::random(&mut rng, &[3, 5, 7, 11, 13], 4);
            let (m, ks) = SyntheticLocalModel::random(&u, 1, &mut rng);
            m.validate().unwrap();
            assert_eq!(ks.len(), u.levels().len());
        }
    }
}
