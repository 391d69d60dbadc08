//! The system-description language.
//!
//! ```text
//! field Q;
//! vars x1 x2;
//! unknown Y1 in [x1];
//! eq Y1^2 - x1^2*x2^2;
//! ord Y1 1;
//! order 5;
//! ```
//!
//! Differential systems write derivative terms as `D[z1, x1^2 x2]`, may
//! prescribe their orders with `ord D[z1, x1] 0;`, and pin coefficients with
//! `coeff z1 [0] = 1;`. A `#` starts a comment running to the end of the line.

mod lexer;
mod parser;
mod print;

use cjet_core::FieldSpec;
use num_bigint::BigInt;

pub use lexer::{Lexer, Token, TokenKind};
pub use parser::{parse, parse_expr, SyntaxError};

/// A parsed description. Statements of one kind keep their source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub unknowns: Vec<UnknownDecl>,
    pub equations: Vec<Expr>,
    pub ords: Vec<OrdDecl>,
    pub coeffs: Vec<CoeffDecl>,
    pub order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownDecl {
    pub name: String,
    pub support: Vec<String>,
}

/// `D[function, var^k ...]` as written; factors may repeat or come in any order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeRef {
    pub function: String,
    pub factors: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdTarget {
    Unknown(String),
    Derivative(DerivativeRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdDecl {
    pub target: OrdTarget,
    pub order: u32,
}

/// `coeff z1 [a, b] = value;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffDecl {
    pub unknown: String,
    pub exponent: Vec<u32>,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Non-negative integer literal.
    Int(BigInt),
    /// Literal `num/den`.
    Frac(BigInt, BigInt),
    Name(String),
    Derivative(DerivativeRef),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}
