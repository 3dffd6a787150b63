//! Mahler equations, their power-series solutions, and Mahler systems.

mod equation;
mod series;
mod system;

pub use equation::{corpus, EquationDoc, MahlerEquation};
pub use series::{expand_series, initial_block, verify_equation, TruncatedSeries, Valuation};
pub use system::{
    companion_system, companion_vector, direct_sum, find_regular_power, iterate_system,
    regularity, MahlerSystem, PowerAttempt, Provenance, RegularPower, RegularityReport,
};

use thiserror::Error;

use crate::algebra::ParseError;

#[derive(Debug, Clone, Error)]
pub enum MahlerError {
    #[error("base q must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("equation has no usable coefficients")]
    EmptyEquation,
    #[error("a_0 and a_m must be nonzero")]
    VanishingEndCoefficient,
    #[error("cannot parse {field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("seed {index} ({text:?}) is not a rational number")]
    BadSeed { index: usize, text: String },
    #[error("invalid equation document: {0}")]
    Json(String),
    #[error("seed {index} contradicts the equation (expected {expected})")]
    InconsistentSeeds { index: usize, expected: String },
    #[error("{needed} more leading coefficient(s) must be supplied ({given} given)")]
    Underdetermined { given: usize, needed: usize },
    #[error("the equation has no power-series solution")]
    NoSeriesSolution,
    #[error("system matrix must be square")]
    NotSquare,
    #[error("system matrix has zero determinant")]
    SingularSystem,
    #[error("systems with different bases {0} and {1}")]
    MixedBase(u64, u64),
    #[error("point {0} must satisfy 0 < |alpha| < 1")]
    PointOutOfRange(String),
    #[error("no regular iterate up to the requested bound ({} attempts)", attempts.len())]
    NotFound { attempts: Vec<PowerAttempt> },
}
