//! Sparse multivariate polynomials over a [`Field`](crate::field::Field).

mod monomial;
mod polynomial;
mod registry;

pub use monomial::{Monomial, Var};
pub use polynomial::{format_polynomial, Polynomial};
pub use registry::{VarClass, VarInfo, VariableRegistry};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("variable `{0}` is already registered")]
    DuplicateVariable(String),
    #[error("coefficient extraction needs a monomial in series variables only")]
    NotSeriesMonomial,
}
