//! Example systems and generators used by the tests and the command line.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use thiserror::Error;

use crate::field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
use crate::flatten::{ConstrainedSystem, FlattenError};
use crate::jets::ConstraintSet;
use crate::poly::{Polynomial, Var};
use crate::solve::EquationGenerator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{fixture}`: {reason}")]
    BadParameter { fixture: String, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Flatten(#[from] FlattenError),
}

/// `P_l = (x_1 - a_l) x_{l+1} - 1` for `l = 1..p`, with `a_1, ..., a_p` the
/// elements of `F_p` in listing order.
///
/// Every proper prefix is solvable (take `x_1` unlisted), the whole system is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTrap {
    pub field: PrimeField,
}

impl EnumerationTrap {
    /// `a_l`, 1-based.
    pub fn listed(&self, l: usize) -> u64 {
        (l - 1) as u64
    }

    pub fn len(&self) -> usize {
        self.field.modulus() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn enumeration_trap(field: PrimeField) -> EnumerationTrap {
    EnumerationTrap { field }
}

impl EquationGenerator for EnumerationTrap {
    type F = PrimeField;

    fn field(&self) -> &PrimeField {
        &self.field
    }

    fn equation(&self, l: usize) -> Option<Polynomial<PrimeField>> {
        if l == 0 || l > self.len() {
            return None;
        }
        let f = &self.field;
        let x1 = Polynomial::var(f, Var(0));
        let next = Polynomial::var(f, Var(l as u32));
        let shifted = &x1 - &Polynomial::constant(f, self.listed(l));
        Some(&(&shifted * &next) - &Polynomial::one(f))
    }
}

/// `P_l = x_l^2 - (x_1 - l)` for `l = 2..=l_max` over ℚ; `P_1 = 0` keeps the
/// indices aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealTrap {
    pub l_max: usize,
}

pub fn real_trap(l_max: usize) -> RealTrap {
    RealTrap { l_max }
}

impl EquationGenerator for RealTrap {
    type F = Rationals;

    fn field(&self) -> &Rationals {
        &Rationals
    }

    fn equation(&self, l: usize) -> Option<Polynomial<Rationals>> {
        if l == 0 || l > self.l_max {
            return None;
        }
        let f = &Rationals;
        if l == 1 {
            return Some(Polynomial::zero(f));
        }
        let xl = Polynomial::var(f, Var(l as u32 - 1));
        let x1 = Polynomial::var(f, Var(0));
        let shift = Polynomial::constant(f, BigRational::from_integer((l as i64).into()));
        Some(&(&xl * &xl) - &(&x1 - &shift))
    }
}

/// A nested linear system with its truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedLinear<F: Field> {
    pub system: ConstrainedSystem<F>,
    pub order: u32,
}

/// `Y_{i+1} - x_{i+1} Y_i - x_1 = 0` for `i = 1..n-1`, unknowns `Y_1..Y_n` in
/// `n` series variables, with `J_i = {1..i}` (a chain under inclusion).
pub fn nested_linear<F: Field>(field: F, n: usize, order: u32) -> Result<NestedLinear<F>, FixtureError> {
    let constraints = (1..=n).map(|i| ConstraintSet::new(0..i, n).expect("in range")).collect();
    nested_linear_with(field, n, order, constraints)
}

/// [`nested_linear`] with arbitrary constraint sets.
pub fn nested_linear_with<F: Field>(
    field: F,
    n: usize,
    order: u32,
    constraints: Vec<ConstraintSet>,
) -> Result<NestedLinear<F>, FixtureError> {
    if n < 2 {
        return Err(FixtureError::BadParameter { fixture: "nested-linear".into(), reason: "n must be at least 2".into() });
    }
    let (registry, layout) = ConstrainedSystem::<F>::standard_registry(n, n);
    let x = |k: usize| Polynomial::var(&field, layout.series[k]);
    let y = |i: usize| Polynomial::var(&field, layout.unknowns[i]);
    let equations = (0..n - 1).map(|i| &(&y(i + 1) - &(&x(i + 1) * &y(i))) - &x(0)).collect();
    let system = ConstrainedSystem::new(field.clone(), registry, layout, constraints, equations)?;
    Ok(NestedLinear { system, order })
}

/// A fixture reference such as `enum-trap:p=5`, `real-trap:l=3` or
/// `nested-linear:n=2,c=3,p=7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureSpec {
    /// `len` truncates the trap to its first equations.
    EnumTrap { p: u64, len: Option<usize> },
    RealTrap { l: usize },
    /// `uniform` gives every unknown all variables.
    NestedLinear { n: usize, c: u32, field: FieldSpec, uniform: bool },
}

impl FixtureSpec {
    pub fn name(&self) -> &'static str {
        match self {
            FixtureSpec::EnumTrap { .. } => "enum-trap",
            FixtureSpec::RealTrap { .. } => "real-trap",
            FixtureSpec::NestedLinear { .. } => "nested-linear",
        }
    }
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSpec::EnumTrap { p, len } => {
                write!(f, "enum-trap:p={p}")?;
                if let Some(len) = len {
                    write!(f, ",len={len}")?;
                }
                Ok(())
            }
            FixtureSpec::RealTrap { l } => write!(f, "real-trap:l={l}"),
            FixtureSpec::NestedLinear { n, c, field, uniform } => {
                write!(f, "nested-linear:n={n},c={c}")?;
                if let FieldSpec::PrimeField { modulus } = field {
                    write!(f, ",p={modulus}")?;
                }
                if *uniform {
                    write!(f, ",uniform")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FixtureSpec {
    type Err = FixtureError;

    fn from_str(s: &str) -> Result<Self, FixtureError> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let bad = |reason: String| FixtureError::BadParameter { fixture: name.to_string(), reason };
        let mut params: Vec<(&str, Option<&str>)> = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => params.push((k.trim(), Some(v.trim()))),
                None => params.push((item, None)),
            }
        }
        let known: &[&str] = match name {
            "enum-trap" => &["p", "len"],
            "real-trap" => &["l"],
            "nested-linear" => &["n", "c", "p", "uniform"],
            _ => return Err(FixtureError::UnknownFixture(name.to_string())),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !known.contains(k)) {
            return Err(bad(format!("unknown parameter `{k}`")));
        }
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let num = |key: &str| -> Result<Option<u64>, FixtureError> {
            match get(key) {
                None => Ok(None),
                Some(None) => Err(bad(format!("parameter `{key}` needs a value"))),
                Some(Some(v)) => v.parse().map(Some).map_err(|_| bad(format!("`{v}` is not a number"))),
            }
        };
        match name {
            "enum-trap" => {
                let p = num("p")?.ok_or_else(|| bad("missing parameter `p`".into()))?;
                PrimeField::new(p)?;
                Ok(FixtureSpec::EnumTrap { p, len: num("len")?.map(|l| l as usize) })
            }
            "real-trap" => {
                let l = num("l")?.ok_or_else(|| bad("missing parameter `l`".into()))? as usize;
                if l < 2 {
                    return Err(bad("l must be at least 2".into()));
                }
                Ok(FixtureSpec::RealTrap { l })
            }
            _ => {
                let n = num("n")?.ok_or_else(|| bad("missing parameter `n`".into()))? as usize;
                if n < 2 {
                    return Err(bad("n must be at least 2".into()));
                }
                let c = num("c")?.unwrap_or(3) as u32;
                let field = match num("p")? {
                    Some(p) => PrimeField::new(p)?.spec(),
                    None => FieldSpec::Rational,
                };
                if matches!(get("uniform"), Some(Some(_))) {
                    return Err(bad("`uniform` takes no value".into()));
                }
                Ok(FixtureSpec::NestedLinear { n, c, field, uniform: get("uniform").is_some() })
            }
        }
    }
}
