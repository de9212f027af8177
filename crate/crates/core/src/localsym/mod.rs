//! Local symbols at split primes: `∂_λ^{(n)}`, the finite/transverse splitting
//! and the finite-singular map `φ^fs_ℓ`.

use crate::arith;
use crate::error::{Error, Result};
use crate::groupring::{frob_form, AugClass, AugQuot, GradedPoly};
use crate::quadfield::{QuadField, QuadIdeal, QuadNum};

/// `−log_{σ_ℓ}(u)`: the symbol of a unit `u ∈ Z_ℓ^×` is `ζ_ℓ ↦ ζ_ℓ^{u^{-1}}`.
pub fn tame_exponent(l: u64, u: u64) -> Result<i64> {
    if u % l == 0 {
        return Err(Error::InvalidArgument(format!("{u} is not a unit mod {l}")));
    }
    if l == 2 {
        return Ok(0);
    }
    let g = arith::primitive_root(l);
    let order = l - 1;
    let k = arith::discrete_log(g, u % l, l, order, &arith::factor(order)).expect("primitive root");
    Ok((order - k) as i64 % order as i64)
}

/// `∂_λ^{(n)}(x) ∈ I_n/I_n^2` in the `Y_q` coordinates.
pub fn del(field: &QuadField, x: &QuadNum, lambda: &QuadIdeal, n: u64) -> Result<GradedPoly> {
    let l = lambda.ell;
    if n % l != 0 {
        return Err(Error::InvalidArgument(format!("λ | {l} does not divide the level {n}")));
    }
    let (ord, u) = field.local_data(x, lambda)?;
    // unramified part: Fr_λ^{ord} on μ_{n/ℓ}, with Fr_λ = ℓ
    let mut p = frob_form(l, n / l, 0).scale(ord);
    p.add_term(vec![(l, 1)], tame_exponent(l, u)?);
    Ok(p)
}

/// `∂_λ^{(n)}(x)` as a class in `I_n/I_n^2`.
pub fn del_class(field: &QuadField, x: &QuadNum, lambda: &QuadIdeal, n: u64) -> Result<AugClass> {
    AugQuot::new(n, 1)?.class_of_poly(&del(field, x, lambda, n)?)
}

/// Local data of `x` at the two primes above a split `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDecomp {
    pub prime: u64,
    pub ord_lambda: i64,
    pub ord_lambda_tau: i64,
    /// unit part modulo `ℓ` at `λ`
    pub unit_residue: u64,
    pub unit_residue_tau: u64,
}

impl LocalDecomp {
    /// `x ∈ (F_ℓ^×)^-` with unit parts `u_λ u_{λ^τ} ≡ 1`.
    pub fn is_minus_type(&self) -> bool {
        self.ord_lambda == -self.ord_lambda_tau && arith::mod_mul(self.unit_residue, self.unit_residue_tau, self.prime) == 1 % self.prime
    }

    /// Finite part as an exponent of the ℓ-component symbol, in `Z/(ℓ-1)`.
    pub fn finite_exponent(&self) -> Result<i64> {
        tame_exponent(self.prime, self.unit_residue)
    }
}

pub fn fin_tr_split(field: &QuadField, x: &QuadNum, l: u64) -> Result<LocalDecomp> {
    let lambda = field.lambda(l)?;
    let (ord_lambda, unit_residue) = field.local_data(x, &lambda)?;
    let (ord_lambda_tau, unit_residue_tau) = field.local_data(x, &lambda.conj())?;
    Ok(LocalDecomp { prime: l, ord_lambda, ord_lambda_tau, unit_residue, unit_residue_tau })
}

/// `t·(ℓ, ℓ^{-1}) ⊗ a` with `a ∈ I_ℓ/I_ℓ^2 ≅ Z/(ℓ-1)`.
#[derive(Clone, Debug)]
pub struct FSClass {
    pub prime: u64,
    pub transverse_exponent: i64,
    pub aug: AugClass,
}

impl FSClass {
    /// The element `t·a` of `Z/(ℓ-1)`, the coefficient of `(ℓ,ℓ^{-1}) ⊗ Y_ℓ`.
    pub fn value(&self) -> i64 {
        let m = (self.prime - 1).max(1) as i64;
        (self.transverse_exponent * self.aug.coords().first().copied().unwrap_or(0)).rem_euclid(m)
    }
}

/// `φ^fs_ℓ(x)` for a unit `x` at `ℓ`, read off at `λ`, or at `λ^τ` if
/// `use_conjugate` (then the transverse generator is `(ℓ^{-1}, ℓ)`).
pub fn phi_fs(field: &QuadField, x: &QuadNum, l: u64, use_conjugate: bool) -> Result<FSClass> {
    let dec = fin_tr_split(field, x, l)?;
    if dec.ord_lambda != 0 || dec.ord_lambda_tau != 0 {
        return Err(Error::InvalidArgument(format!("φ^fs needs a unit at {l}")));
    }
    let (t, u) = if use_conjugate { (-1, dec.unit_residue_tau) } else { (1, dec.unit_residue) };
    let q = AugQuot::new(l, 1)?;
    let aug = q.class_of_poly(&GradedPoly::linear(&[(l, tame_exponent(l, u)?)], 0))?;
    Ok(FSClass { prime: l, transverse_exponent: t, aug })
}
