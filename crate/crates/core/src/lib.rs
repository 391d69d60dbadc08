//! Polynomial systems whose unknowns are truncated power series with support
//! constraints, solved by flattening to coefficient equations over ℚ or `F_p`.
//!
//! The core types are generic over a [`field::Field`] handle; the aliases
//! below fix the two supported fields.

pub mod field;
pub mod fixtures;
pub mod flatten;
pub mod jets;
pub mod pde;
pub mod poly;
pub mod solve;

pub use field::{Field, FieldSpec, PrimeField, Rationals};

pub type QPolynomial = poly::Polynomial<field::Rationals>;
pub type FpPolynomial = poly::Polynomial<field::PrimeField>;
pub type QJet = jets::Jet<field::Rationals>;
pub type FpJet = jets::Jet<field::PrimeField>;
pub type QSystem = flatten::ConstrainedSystem<field::Rationals>;
pub type FpSystem = flatten::ConstrainedSystem<field::PrimeField>;
pub type QFlattened = flatten::FlattenedSystem<field::Rationals>;
pub type FpFlattened = flatten::FlattenedSystem<field::PrimeField>;
pub type QReport = solve::SolveReport<num_rational::BigRational>;
pub type FpReport = solve::SolveReport<u64>;
