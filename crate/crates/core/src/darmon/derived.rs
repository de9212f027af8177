//! Images of `θ̃'_n` and of the derivative classes `β_n` under a reduction.

use super::reduction::ReductionHom;
use super::tensor::level_quot;
use crate::cyclo::{theta_prime, ThetaElt};
use crate::error::{Error, Result};
use crate::groupring::{frob_form, AugClass, AugQuot, GradedPoly, GroupRingElt};
use crate::quadfield::QuadField;
use std::sync::Arc;

/// Discrete logs of the coefficients `γ(α_n)`, indexed like `Γ_n`.
pub fn coefficient_logs(theta: &ThetaElt, h: &ReductionHom) -> Result<Vec<u64>> {
    (0..theta.group().order()).map(|i| h.log_unit(&theta.coefficient(i)?)).collect()
}

/// An integer lift of `(h ⊗ 1)(θ'_n)` lying in `I_n^r`.
///
/// For `r ≥ 1` the augmentation is `h(N α_n)`, which must vanish mod `q - 1`;
/// it is moved onto the identity so the lift is honestly in `I_n`.
pub fn theta_lift(theta: &ThetaElt, h: &ReductionHom) -> Result<GroupRingElt> {
    let logs = coefficient_logs(theta, h)?;
    let mut coeffs: Vec<i64> = logs.iter().map(|&v| v as i64).collect();
    if theta.r > 0 {
        let aug: i64 = coeffs.iter().sum();
        if aug % h.target_order() as i64 != 0 {
            return Err(Error::InvalidArgument(format!(
                "norm of α_{} does not reduce to 1 mod {}",
                theta.level, h.q
            )));
        }
        coeffs[0] -= aug;
    }
    Ok(GroupRingElt::from_coeffs(theta.group(), coeffs))
}

/// `(h ⊗ 1)(θ̃'_n)` as a class of `I_n^r/I_n^{r+1}` (an integer for `r = 0`).
pub fn theta_class(theta: &ThetaElt, h: &ReductionHom, quot: &AugQuot) -> Result<AugClass> {
    if quot.level() != theta.level || quot.degree() != theta.r {
        return Err(Error::InvalidArgument("quotient does not match θ'".into()));
    }
    quot.class_of(&theta_lift(theta, h)?)
}

/// The product of a class of `src` with `p`, read in `target` (a multiple level).
pub fn mul_class(src: &AugQuot, c: &AugClass, p: &GradedPoly, target: &AugQuot) -> Result<AugClass> {
    let rep = src.representative(c).embed_into(target.group())?;
    target.class_of(&rep.mul(&GroupRingElt::realize(target.group(), p)?))
}

/// `Π_{ℓ|d} π_{n/d}(Fr_ℓ - 1)` as a polynomial in the `Y_q`, `q | n/d`.
pub fn frobenius_product(n: u64, d: u64) -> GradedPoly {
    let mut acc = GradedPoly::constant(1, 0);
    for l in crate::arith::prime_divisors(d) {
        acc = acc.mul(&frob_form(l, n / d, 0));
    }
    acc
}

/// `(h ⊗ 1)(θ̃'_{n/d} Π_{ℓ|d} π_{n/d}(Fr_ℓ - 1))` in `target = I_n^r/I_n^{r+1}`.
pub fn theta_term(field: &QuadField, n: u64, d: u64, h: &ReductionHom, target: &AugQuot) -> Result<AugClass> {
    let m = n / d;
    let theta = theta_prime(field, m)?;
    let src = level_quot(field, m)?;
    let c = theta_class(&theta, h, &src)?;
    mul_class(&src, &c, &frobenius_product(n, d), target)
}

/// `h(D_n α_n) ∈ Z/(q-1)` for `D_n = Π_ℓ Σ_{i=1}^{ℓ-2} i σ_ℓ^i`.
pub fn beta_log(theta: &ThetaElt, h: &ReductionHom) -> Result<u64> {
    let q1 = h.target_order() as u128;
    let logs = coefficient_logs(theta, h)?;
    let mut acc = 0u128;
    for (idx, &v) in logs.iter().enumerate() {
        let w: u128 = theta.group().exponents(idx).iter().map(|&e| e as u128).product();
        acc = (acc + w % q1 * v as u128) % q1;
    }
    Ok(acc as u64)
}

/// The derivative class `β_{n_+}`, reduced by `h` and placed on the new line
/// `Y_{n_+}` of `target` (which must be split along `n_+`).
pub fn beta_class(field: &QuadField, n_plus: u64, h: &ReductionHom, target: &AugQuot) -> Result<AugClass> {
    if field.n_plus(n_plus) != n_plus || target.new_support() != Some(n_plus) {
        return Err(Error::InvalidArgument(format!("β needs a split level; got {n_plus}")));
    }
    let theta = theta_prime(field, n_plus)?;
    Ok(target.new_class().scale(beta_log(&theta, h)? as i64))
}

/// Both sides of `Σ_{d|n_+} θ̃'_{n/d} Π_{ℓ|d} π_{n/d}(Fr_ℓ - 1) = 2^{s(n)} β_{n_+}`.
pub fn derived_sides(field: &QuadField, n: u64, h: &ReductionHom) -> Result<(AugClass, AugClass)> {
    let quot: Arc<AugQuot> = level_quot(field, n)?;
    let np = field.n_plus(n);
    let mut lhs = quot.zero();
    for d in crate::arith::divisors(np) {
        lhs = lhs.add(&theta_term(field, n, d, h, &quot)?);
    }
    let s = crate::arith::prime_divisors(n / np).len() as u32;
    let rhs = beta_class(field, np, h, &quot)?.scale(1i64 << s);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::super::reduction::{aux_modulus, aux_primes};
    use super::super::residual::Residual;
    use super::*;
    use crate::quadfield::make_field;

    fn homs(field: &QuadField, n: u64, k: usize) -> Vec<ReductionHom> {
        let m = n * field.conductor();
        aux_primes(aux_modulus(field, n).unwrap(), k + 4, 0, 1 << 40)
            .unwrap()
            .into_iter()
            .filter_map(|q| ReductionHom::new(field, m, q).ok())
            .take(k)
            .collect()
    }

    #[test]
    fn theta_lands_in_the_right_power() {
        let f = make_field(5).unwrap();
        for n in [11u64, 19, 33] {
            let t = theta_prime(&f, n).unwrap();
            let quot = level_quot(&f, n).unwrap();
            for h in homs(&f, n, 3) {
                theta_class(&t, &h, &quot).unwrap();
            }
        }
    }

    #[test]
    fn derived_identity_at_split_prime() {
        let f = make_field(5).unwrap();
        for h in homs(&f, 11, 4) {
            let (lhs, rhs) = derived_sides(&f, 11, &h).unwrap();
            let q1 = h.target_order();
            assert!(Residual::from_class(&lhs.sub(&rhs), q1).odd_part().is_zero(), "q = {}", h.q);
        }
    }

    #[test]
    fn derived_identity_with_inert_prime() {
        let f = make_field(5).unwrap();
        for h in homs(&f, 33, 4) {
            let (lhs, rhs) = derived_sides(&f, 33, &h).unwrap();
            let q1 = h.target_order();
            assert!(Residual::from_class(&lhs.sub(&rhs), q1).odd_part().is_zero(), "q = {}", h.q);
        }
    }

    #[test]
    fn empty_derivative_is_alpha() {
        let f = make_field(5).unwrap();
        let t = theta_prime(&f, 1).unwrap();
        for h in homs(&f, 1, 3) {
            assert_eq!(beta_log(&t, &h).unwrap(), h.log_unit(&t.alpha).unwrap());
        }
    }
}
