//! Lacunary series `xi = sum_n beta^{u_n}` over values of Mahler functions,
//! and experiments probing how well such numbers are approximated by
//! algebraic ones: exponent growth checks, the `Q_N` / `P_N` polynomial
//! identities, exhaustive small-polynomial scans and continued fractions.

mod cf;
mod exponents;
mod lacunary;
mod polyscan;

pub use cf::{continued_fraction, continued_fraction_of, CfExpansion, CfStop};
pub use exponents::{growth_check, ExponentSeq, GrowthReport, GrowthRow};
pub use lacunary::{
    liouville_constant, liouville_truncation, pn_build, pn_identity_sides, qn_form, xi_value,
    Beta,
};
pub use polyscan::{
    bound_profile_eval, bound_profile_log, default_ladder, poly_min_scan, BoundProfile,
    CandidateRelation, FnSource, PolyScan, ScanOptions, ScanRow, XiSource, SCAN_CSV_HEADER,
};

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiouvilleError {
    #[error("|beta| may reach {0}, the series needs |beta| < 1")]
    BetaNotContracting(String),
    #[error("invalid exponent sequence: {0}")]
    InvalidSequence(String),
    #[error("exponent u_{index} is not available")]
    ExponentUnavailable { index: usize },
    #[error("exponent u_{index} does not fit a polynomial degree")]
    ExponentTooLarge { index: usize },
    #[error("growth exponent must be positive, got {0}")]
    BadGrowthExponent(String),
    #[error("form has {got} variables, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("bound profile needs c1 > 0 and tau >= 1")]
    BadBoundProfile,
    #[error("scan needs d >= 1 and heights >= 1")]
    BadScan,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
