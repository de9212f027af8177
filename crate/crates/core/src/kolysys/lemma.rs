//! The two equivalent forms of the cancellation condition on collections
//! `x_n ∈ A ⊗ Ĩ_n`, with `Ĩ_n` identified with `Z/|Ĩ_n|` through `Y_{n_+}`.

use super::model::{modulus_of, Universe};
use super::system::{derangement_sum, single_cycle_rhs};
use crate::arith;
use crate::error::{Error, Result};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// `A = Z/m_1 ⊕ Z/m_2`; a modulus of 0 is a copy of `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoGen {
    pub m: [u64; 2],
}

pub type Collection = BTreeMap<u64, [i64; 2]>;

impl TwoGen {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        TwoGen { m: [rng.gen_range(1..=60), rng.gen_range(0..=60)] }
    }

    /// The moduli of `A ⊗ Ĩ_n`.
    pub fn moduli_at(&self, u: &Universe, n: u64) -> [u64; 2] {
        let g = u.g(n);
        self.m.map(|m| modulus_of(m, g))
    }

    pub fn reduce(&self, u: &Universe, n: u64, v: [i128; 2]) -> [i64; 2] {
        let ms = self.moduli_at(u, n);
        [0, 1].map(|i| if ms[i] == 0 { v[i] as i64 } else { v[i].rem_euclid(ms[i] as i128) as i64 })
    }

    pub fn random_collection<R: Rng>(&self, u: &Universe, rng: &mut R) -> Collection {
        u.levels()
            .into_iter()
            .map(|n| {
                let ms = self.moduli_at(u, n);
                let v = ms.map(|m| if m == 0 { rng.gen_range(-50..=50) } else { rng.gen_range(0..m as i64) });
                (n, v)
            })
            .collect()
    }
}

fn require_split(u: &Universe, l: u64) -> Result<()> {
    if !u.is_split(l) {
        return Err(Error::InvalidArgument(format!("{l} is not a split prime of the universe")));
    }
    Ok(())
}

/// Extend `x` from the `ℓ`-free levels by form (ii). Values of `seed` at
/// levels divisible by `ℓ` are ignored.
pub fn extend(a: &TwoGen, u: &Universe, l: u64, seed: &Collection) -> Result<Collection> {
    require_split(u, l)?;
    let mut out = Collection::new();
    for n in u.levels() {
        let v = if n % l != 0 {
            let s = seed
                .get(&n)
                .ok_or_else(|| Error::InvalidArgument(format!("seed has no value at {n}")))?;
            a.reduce(u, n, s.map(|c| c as i128))
        } else {
            let primes = arith::prime_divisors(u.n_plus(n));
            let rhs = [0, 1].map(|i| single_cycle_rhs(|k| seed[&k][i], &primes, n, l));
            a.reduce(u, n, rhs)
        };
        out.insert(n, v);
    }
    Ok(out)
}

/// Form (i) at each level divisible by `ℓ`: `Σ_{d|n_+} x_{n/d} D_d = 0`.
pub fn check_form_i(a: &TwoGen, u: &Universe, l: u64, x: &Collection) -> Result<Vec<(u64, bool)>> {
    require_split(u, l)?;
    let mut out = Vec::new();
    for n in u.levels().into_iter().filter(|n| n % l == 0) {
        let np = u.n_plus(n);
        let mut s = [0i128; 2];
        for i in 0..2 {
            s[i] = derangement_sum(|k| x[&k][i], np, n)?;
        }
        out.push((n, a.reduce(u, n, s) == [0, 0]));
    }
    Ok(out)
}

/// Form (ii) at each level divisible by `ℓ`.
pub fn check_form_ii(a: &TwoGen, u: &Universe, l: u64, x: &Collection) -> Result<Vec<(u64, bool)>> {
    require_split(u, l)?;
    let mut out = Vec::new();
    for n in u.levels().into_iter().filter(|n| n % l == 0) {
        let primes = arith::prime_divisors(u.n_plus(n));
        let diff = [0, 1].map(|i| x[&n][i] as i128 - single_cycle_rhs(|k| x[&k][i], &primes, n, l));
        out.push((n, a.reduce(u, n, diff) == [0, 0]));
    }
    Ok(out)
}
