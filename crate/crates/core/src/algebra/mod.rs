//! Exact and certified arithmetic: rationals, dense polynomials, rational
//! functions, matrices over both, dyadic intervals, homogeneous forms and a
//! small expression parser.

pub mod dyadic;
pub mod enclosure;
pub mod form;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod ratfun;
pub mod roots;

pub use dyadic::{Dyadic, Round};
pub use enclosure::{CEnclosure, Enclosure};
pub use form::{AuxForm, FormDoc, FormError};
pub use matrix::{kernel_basis, MatRF, RatMatrix};
pub use mpoly::MPoly;
pub use parse::{parse_poly, parse_ratfun, ParseError};
pub use poly::Poly;
pub use rat::Rat;
pub use ratfun::RatFun;
pub use roots::{binary_form_roots, isolate_roots, root_lower_bound, ProjRoot};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the zero polynomial has no root bound")]
    ZeroPolynomial,
    #[error("the zero form has no roots")]
    ZeroForm,
    #[error("expected a binary form, got {0} variables")]
    NotBinary(usize),
    #[error("form coefficients must not depend on z")]
    NotConstantInZ,
    #[error("root isolation did not converge within the precision ceiling")]
    RootIsolationFailed,
}
