//! The congruence `θ̃'_n + 2^s h_n R_n = 0` on odd parts, probed by reductions.

use super::derived::theta_class;
use super::reduction::{aux_modulus, aux_primes, ReductionHom};
use super::residual::Residual;
use super::tensor::{level_quot, regulator};
use crate::arith;
use crate::cyclo::theta_prime;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

impl Verdict {
    /// Fail dominates; all-vacuous stays vacuous.
    pub fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut seen_pass = false;
        for v in vs {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Pass => seen_pass = true,
                Verdict::Vacuous => {}
            }
        }
        if seen_pass {
            Verdict::Pass
        } else {
            Verdict::Vacuous
        }
    }

    pub fn of_residual(r: &Residual) -> Verdict {
        if r.odd_group_trivial() {
            Verdict::Vacuous
        } else if r.is_zero() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeResult {
    pub q: u64,
    pub residual: Residual,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub field: i64,
    pub level: u64,
    pub check: String,
    pub r: u32,
    pub s: u32,
    pub h_n: u64,
    pub primes: Vec<PrimeResult>,
    pub verdict: Verdict,
    pub note: String,
}

/// What to add to `θ̃'_n`; anything but `Correct` is a canary that should fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturbation {
    Correct,
    WrongSign,
    /// `α_n` replaced by `α_n^2`
    AlphaSquared,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub primes: usize,
    pub start: u64,
    pub bound: u64,
    pub perturbation: Perturbation,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { primes: 5, start: 0, bound: 1 << 40, perturbation: Perturbation::Correct }
    }
}

/// Run `f` on the first `count` usable primes `q ≡ 1 mod modulus`, in parallel
/// batches; primes where some number reduces to 0 are skipped.
pub fn sample_primes<T, F>(modulus: u64, count: usize, start: u64, bound: u64, f: F) -> Result<Vec<(u64, T)>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let mut out = Vec::new();
    let mut from = start;
    while out.len() < count {
        let batch = aux_primes(modulus, 2 * (count - out.len()), from, bound)?;
        from = batch.last().unwrap() + 1;
        let results: Vec<(u64, Result<T>)> = batch.par_iter().map(|&q| (q, f(q))).collect();
        for (q, r) in results {
            match r {
                Ok(v) if out.len() < count => out.push((q, v)),
                Ok(_) | Err(Error::BadPrime(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

pub fn s_of(field: &QuadField, n: u64) -> u32 {
    arith::prime_divisors(n / field.n_plus(n)).len() as u32
}

pub fn verify_darmon(field: &QuadField, n: u64, config: &VerifyConfig) -> Result<VerifyReport> {
    field.check_level(n)?;
    let theta = theta_prime(field, n)?;
    let reg = regulator(field, n)?;
    let quot = level_quot(field, n)?;
    let h_n = field.h_n(n)?;
    let s = s_of(field, n);
    let scalar = (h_n << s) as i64;
    let sign = if config.perturbation == Perturbation::WrongSign { -1 } else { 1 };
    let m = n * field.conductor();
    let results = sample_primes(aux_modulus(field, n)?, config.primes, config.start, config.bound, |q| {
        let h = ReductionHom::new(field, m, q)?;
        let q1 = h.target_order();
        let mut t = Residual::from_class(&theta_class(&theta, &h, &quot)?, q1);
        if config.perturbation == Perturbation::AlphaSquared {
            t = t.scale(2);
        }
        let res = t.add(&reg.reduce(&h)?.scale_signed(sign * scalar)).odd_part();
        Ok(PrimeResult { q, verdict: Verdict::of_residual(&res), residual: res })
    })?;
    let primes: Vec<PrimeResult> = results.into_iter().map(|(_, p)| p).collect();
    let verdict = Verdict::combine(primes.iter().map(|p| p.verdict));
    Ok(VerifyReport {
        field: field.d(),
        level: n,
        check: "theta + 2^s h_n R_n".into(),
        r: theta.r,
        s,
        h_n,
        note: format!("verified under {} independent reductions", primes.len()),
        primes,
        verdict,
    })
}
