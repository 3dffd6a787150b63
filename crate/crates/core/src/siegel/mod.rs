//! Auxiliary forms with prescribed vanishing order, their Mahler recursion,
//! and the multiplicity experiment.

mod aux;
mod iterate;
mod scan;

pub use aux::{
    achieved_valuation, aux_form, compose_form, exponent_vectors, unknown_count, AuxResult,
};
pub use iterate::{check_iterate_identity, iterate_aux, perturb, IdentityCheck, IterContext};
pub use scan::{
    multiplicity_scan, trial_seed, MultiplicityRow, ScanResult, CSV_HEADER, MAX_WINDOW,
};

use thiserror::Error;

use crate::mahler::MahlerError;

#[derive(Debug, Clone, Error)]
pub enum SiegelError {
    #[error("series of different bases {0} and {1}")]
    MixedBase(u64, u64),
    #[error("series known to order {got}, at least {needed} required")]
    InsufficientTruncation { needed: usize, got: usize },
    #[error("{conditions} conditions leave no room among {unknowns} unknowns")]
    TooManyConditions { unknowns: usize, conditions: usize },
    #[error("form has {got} variables, system has size {expected}")]
    Arity { expected: usize, got: usize },
    #[error("form degree {deg} exceeds N = {n}")]
    DegreeExceedsN { deg: u32, n: u32 },
    #[error("a(z) does not clear the denominators of B(z)")]
    ClearingFailure,
    #[error(transparent)]
    Mahler(#[from] MahlerError),
}
