//! The refined congruence between `θ̃'_n` and `h_n R_n`, tested through
//! reductions at auxiliary primes.

mod axioms;
mod derived;
mod reduction;
mod residual;
mod tensor;
mod verify;

pub use axioms::{regulator_kappa, theta_kappa, verify_preks_axiom, Axiom, Kappa, System};
pub use derived::{
    beta_class, beta_log, coefficient_logs, derived_sides, frobenius_product, mul_class, theta_class, theta_lift,
    theta_term,
};
pub use reduction::{aux_modulus, aux_primes, ReductionHom};
pub use residual::Residual;
pub use tensor::{bordered_regulator, level_quot, regulator, regulator_with_basis, unit_coordinates, TensorElt};
pub use verify::{s_of, sample_primes, verify_darmon, Perturbation, PrimeResult, Verdict, VerifyConfig, VerifyReport};
