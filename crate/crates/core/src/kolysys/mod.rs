//! Kolyvagin and pre-Kolyvagin systems over synthetic local data.

mod lemma;
mod model;
mod system;
mod trials;

pub use lemma::{check_form_i, check_form_ii, extend, TwoGen};
pub use model::{modulus_of, SyntheticLocalModel, Universe, MAX_PRIMES};
pub use system::{
    check_ks, check_preks, d_scalar, derangement_sum, inverse_transform, ks_eq, preks_eq, scale_add_preks, single_cycle_rhs,
    transform, transform_raw, untransform_raw, vanishes_mod, zero_ks, zero_preks, AxiomReport, Check, Ks, Levels, PreKs,
};
pub use trials::{run_trials, TrialConfig, TrialSummary};
