//! Dense integer polynomials modulo `x^m - 1` and reduction modulo `Φ_m`.

use crate::arith;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub(crate) type Poly = Vec<BigInt>;

pub(crate) fn zero(m: usize) -> Poly {
    vec![BigInt::zero(); m]
}

pub(crate) fn monomial(m: usize, k: usize, c: BigInt) -> Poly {
    let mut p = zero(m);
    p[k % m] = c;
    p
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Poly {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Poly {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn scale(a: &[BigInt], k: &BigInt) -> Poly {
    a.iter().map(|x| x * k).collect()
}

/// Product in `Z[x]/(x^m - 1)`.
pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    let m = a.len();
    let mut out = zero(m);
    let nz: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &nz {
            out[(i + j) % m] += x * y;
        }
    }
    out
}

/// `a · (x^c - 1)` in `Z[x]/(x^m - 1)`.
pub(crate) fn mul_binomial(a: &[BigInt], c: usize) -> Poly {
    let m = a.len();
    let mut out: Poly = a.iter().map(|x| -x).collect();
    for (i, x) in a.iter().enumerate() {
        if !x.is_zero() {
            out[(i + c) % m] += x;
        }
    }
    out
}

/// Substitution `x ↦ x^c`.
pub(crate) fn substitute(a: &[BigInt], c: usize) -> Poly {
    let m = a.len();
    let mut out = zero(m);
    for (i, x) in a.iter().enumerate() {
        if !x.is_zero() {
            out[(i * c) % m] += x;
        }
    }
    out
}

/// Re-embed a residue mod `x^m - 1` into `x^{m k} - 1` by `x ↦ x^k`.
pub(crate) fn inflate(a: &[BigInt], k: usize) -> Poly {
    let mut out = zero(a.len() * k);
    for (i, x) in a.iter().enumerate() {
        out[i * k] = x.clone();
    }
    out
}

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigInt>>>> {
    static C: OnceLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_m`, low degree first.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<BigInt>> {
    if let Some(p) = phi_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d
    let mut p: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in arith::divisors(m) {
        if d < m {
            p = exact_div(&p, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(p);
    phi_cache().write().unwrap().insert(m, p.clone());
    p
}

fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

/// Remainder modulo `Φ_m`, of length `φ(m)`.
pub(crate) fn reduce_phi(a: &[BigInt], m: u64) -> Poly {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut r = a.to_vec();
    for i in (deg..r.len()).rev() {
        let c = std::mem::take(&mut r[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if !pj.is_zero() {
                r[i - deg + j] -= &c * pj;
            }
        }
    }
    r.truncate(deg);
    r
}
