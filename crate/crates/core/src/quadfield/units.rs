//! Standard bases of `X_n^-` and oriented bases of `(1-τ)E_n`.

use super::{minus_part, QuadField, QuadIdeal, QuadNum};
use crate::error::{Error, Result};
use crate::groupring::all_permutations;
use std::cmp::Ordering;

/// The ordered split primes `ℓ_1 < … < ℓ_r` of `n` and the chosen `λ_i | ℓ_i`.
#[derive(Clone, Debug)]
pub struct PlaceData {
    pub level: u64,
    pub primes: Vec<u64>,
    pub lambdas: Vec<QuadIdeal>,
}

#[derive(Clone, Debug)]
pub struct UnitLattice {
    pub level: u64,
    /// `ε_0, …, ε_r`
    pub basis: Vec<QuadNum>,
    /// `k_i = h_{n_{i-1}}/h_{n_i}` for the nested levels `n_i = ℓ_1⋯ℓ_i`
    pub ks: Vec<u64>,
}

impl UnitLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub(super) fn unit_basis(field: &QuadField, n: u64) -> Result<(PlaceData, UnitLattice)> {
    let primes = field.split_part(n);
    let lambdas: Vec<QuadIdeal> = primes.iter().map(|&l| field.lambda(l)).collect::<Result<_>>()?;
    let places = PlaceData { level: n, primes: primes.clone(), lambdas };
    let mut basis = vec![minus_part(field.fundamental_unit())];
    let mut ks = Vec::new();
    for (k, g) in field.successive_generators(&primes)? {
        basis.push(g.conj().div(&g));
        ks.push(k);
    }
    let lattice = UnitLattice { level: n, basis, ks };
    if orientation(field, &places, &lattice.basis)? != 1 {
        return Err(Error::InvalidArgument("constructed unit basis is not oriented".into()));
    }
    Ok((places, lattice))
}

/// Integer matrix `ord_{λ_i}(ε_j)` for `i = 1..r`, `j = 0..r`.
pub fn ord_matrix(field: &QuadField, places: &PlaceData, basis: &[QuadNum]) -> Result<Vec<Vec<i64>>> {
    places
        .lambdas
        .iter()
        .map(|p| basis.iter().map(|e| field.ord_at(e, p)).collect())
        .collect()
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let t = m.len();
    all_permutations(t)
        .iter()
        .map(|p| p.sign() * (0..t).map(|i| m[i][p.apply(i)]).product::<i64>())
        .sum()
}

/// Sign of the regulator `det(log|ε_j|_{λ_i})`, decided exactly.
///
/// Row 0 is `log|ε_j|` and row `i ≥ 1` is `-ord_{λ_i}(ε_j) log ℓ_i`, so the
/// determinant equals `(-1)^r Π log ℓ_i · log|Π_j ε_j^{(-1)^j C_j}|` where
/// `C_j` is the integer minor of the ord-matrix without column `j`.
pub fn orientation(field: &QuadField, places: &PlaceData, basis: &[QuadNum]) -> Result<i32> {
    let r = places.primes.len();
    if basis.len() != r + 1 {
        return Err(Error::InvalidArgument(format!("expected {} basis elements, got {}", r + 1, basis.len())));
    }
    let ords = ord_matrix(field, places, basis)?;
    let mut prod = QuadNum::one(field.d());
    for j in 0..=r {
        let minor: Vec<Vec<i64>> = ords
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let c = int_det(&minor) * if j % 2 == 0 { 1 } else { -1 };
        if c != 0 {
            prod = prod.mul(&basis[j].pow(c));
        }
    }
    let s = match prod.abs_cmp_one() {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => return Err(Error::InvalidArgument("basis is degenerate".into())),
    };
    Ok(if r % 2 == 0 { s } else { -s })
}

/// Floating-point regulator `det(log|ε_j|_{λ_i})`, for display.
pub fn regulator_value(field: &QuadField, places: &PlaceData, basis: &[QuadNum]) -> Result<f64> {
    let r = places.primes.len();
    let ords = ord_matrix(field, places, basis)?;
    let mut m = vec![vec![0f64; r + 1]; r + 1];
    for (j, e) in basis.iter().enumerate() {
        m[0][j] = e.ln_abs();
        for i in 0..r {
            m[i + 1][j] = -(ords[i][j] as f64) * (places.primes[i] as f64).ln();
        }
    }
    Ok(all_permutations(r + 1)
        .iter()
        .map(|p| p.sign() as f64 * (0..=r).map(|i| m[i][p.apply(i)]).product::<f64>())
        .sum())
}
