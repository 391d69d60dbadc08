//! Coefficientwise flattening.
//!
//! Each unknown series `Y_i` constrained to `K[[x_J]]` is replaced by the
//! generic jet `Σ_{α} Y_{i,α} x^α` over its support basis, and every equation
//! `f_k` is expanded modulo `(x)^c`. The coefficient of `x^β` gives one
//! polynomial equation `P_{k,β}` over the ground field in the coefficient
//! unknowns. Equations are listed by `|β|`, then `β` in canonical order, then
//! `k`, so the equations of order `c'` form a prefix of those of order `c > c'`.

use num_traits::Zero;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldSpec};
use crate::jets::{
    exponents_below, exponents_of_degree, support_basis, ConstraintSet, Exponent, Jet, JetError,
    SeriesLayout,
};
use crate::poly::{Monomial, PolyError, Polynomial, Var, VarClass, VariableRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("expected {expected} constraint sets, got {got}")]
    ConstraintCount { expected: usize, got: usize },
    #[error("equation {equation} uses variable `{name}` which is neither a series variable nor an unknown")]
    StrayVariable { equation: usize, name: String },
    #[error("invalid order witness for unknown {series}: {reason}")]
    InvalidWitness { series: usize, reason: String },
    #[error("prefix length {requested} exceeds the {available} available equations")]
    PrefixTooLong { requested: usize, available: usize },
    #[error("no value for coefficient unknown `{0}`")]
    MissingAssignment(String),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// A polynomial system `f(x, Y) = 0` with one support constraint per unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedSystem<F: Field> {
    pub field: F,
    pub registry: VariableRegistry,
    pub layout: SeriesLayout,
    pub constraints: Vec<ConstraintSet>,
    pub equations: Vec<Polynomial<F>>,
}

impl<F: Field> ConstrainedSystem<F> {
    pub fn new(
        field: F,
        registry: VariableRegistry,
        layout: SeriesLayout,
        constraints: Vec<ConstraintSet>,
        equations: Vec<Polynomial<F>>,
    ) -> Result<Self, FlattenError> {
        if constraints.len() != layout.m() {
            return Err(FlattenError::ConstraintCount { expected: layout.m(), got: constraints.len() });
        }
        for (k, eq) in equations.iter().enumerate() {
            if eq.field() != &field {
                return Err(PolyError::FieldMismatch.into());
            }
            if let Some(v) = eq
                .vars()
                .into_iter()
                .find(|v| !layout.series.contains(v) && !layout.unknowns.contains(v))
            {
                return Err(FlattenError::StrayVariable {
                    equation: k + 1,
                    name: registry.name(v).to_string(),
                });
            }
        }
        Ok(ConstrainedSystem { field, registry, layout, constraints, equations })
    }

    /// Fresh registry with `x1..xn` and `Y1..Ym`, for building systems in code.
    pub fn standard_registry(n: usize, m: usize) -> (VariableRegistry, SeriesLayout) {
        let mut reg = VariableRegistry::new();
        let series = (1..=n)
            .map(|k| reg.register(format!("x{k}"), VarClass::Series).expect("fresh"))
            .collect();
        let unknowns = (1..=m)
            .map(|i| reg.register(format!("Y{i}"), VarClass::Unknown).expect("fresh"))
            .collect();
        (reg, SeriesLayout { series, unknowns })
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn m(&self) -> usize {
        self.layout.m()
    }

    pub fn series_names(&self) -> Vec<String> {
        self.layout.series.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }

    pub fn unknown_names(&self) -> Vec<String> {
        self.layout.unknowns.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }
}

/// What a variable of a flattened system stands for. Series indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UnknownRef {
    Coeff { series: usize, exponent: Exponent },
    Witness { series: usize },
}

/// Where a flattened equation comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EquationOrigin {
    /// Coefficient of `x^beta` in equation `source` (0-based).
    Coefficient { source: usize, beta: Exponent },
    /// `Y_{series,exponent} = 0`, forcing the order up.
    Vanish { series: usize, exponent: Exponent },
    /// `Y_{series,exponent} · Z_series = 1`, forcing a nonzero coefficient.
    Witness { series: usize, exponent: Exponent },
    /// An externally pinned coefficient value.
    Pin { series: usize, exponent: Exponent },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatEquation<F: Field> {
    pub origin: EquationOrigin,
    pub poly: Polynomial<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenMeta {
    pub order: u32,
    pub series_names: Vec<String>,
    pub unknown_names: Vec<String>,
    pub constraints: Vec<ConstraintSet>,
    pub source: Vec<String>,
}

/// Finite polynomial system in coefficient (and witness) unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenedSystem<F: Field> {
    pub field: F,
    pub registry: VariableRegistry,
    pub unknowns: Vec<(Var, UnknownRef)>,
    pub equations: Vec<FlatEquation<F>>,
    pub meta: FlattenMeta,
}

pub(crate) fn coefficient_name(base: &str, e: &Exponent) -> String {
    let mut s = base.to_string();
    for k in &e.0 {
        s.push('_');
        s.push_str(&k.to_string());
    }
    s
}

/// Registers `Y_{i,α}` for every unknown and support-basis exponent,
/// returning the unknown table and the generic jets as polynomials in `x` and
/// the coefficient unknowns.
pub(crate) fn register_generic_jets<F: Field>(
    field: &F,
    registry: &mut VariableRegistry,
    series: &[Var],
    names: &[String],
    constraints: &[ConstraintSet],
    order: u32,
) -> Result<(Vec<(Var, UnknownRef)>, Vec<Polynomial<F>>), FlattenError> {
    let n = series.len();
    let mut unknowns = Vec::new();
    let mut generic = Vec::new();
    for (i, (name, j)) in names.iter().zip(constraints).enumerate() {
        let mut jet = Polynomial::zero(field);
        for alpha in support_basis(j, order, n).exponents {
            let v = registry.register(coefficient_name(name, &alpha), VarClass::Coefficient)?;
            jet.add_term(alpha.to_monomial(series).mul(&Monomial::var(v)), field.one());
            unknowns.push((v, UnknownRef::Coeff { series: i, exponent: alpha }));
        }
        generic.push(jet);
    }
    Ok((unknowns, generic))
}

/// Substitutes `sigma` into each equation modulo `(x)^eq_order` and emits the
/// coefficient equations for every `|β| < eq_order` in canonical order.
pub(crate) fn coefficient_equations<F: Field>(
    field: &F,
    series: &[Var],
    sigma: &HashMap<Var, Polynomial<F>>,
    equations: &[Polynomial<F>],
    eq_order: u32,
) -> Result<Vec<FlatEquation<F>>, FlattenError> {
    let n = series.len();
    let is_series = |v: Var| series.contains(&v);
    let keep = |m: &Monomial| m.degree_in(is_series) < eq_order;
    let mut tables = Vec::with_capacity(equations.len());
    for f in equations {
        let expanded = f.substitute_filtered(sigma, keep)?;
        let split = expanded.split_coefficients(is_series);
        let table: HashMap<Exponent, Polynomial<F>> = split
            .into_iter()
            .map(|(m, p)| (Exponent::from_monomial(&m, series).expect("series monomial"), p))
            .collect();
        tables.push(table);
    }
    let mut out = Vec::new();
    for beta in exponents_below(n, &ConstraintSet::full(n), eq_order) {
        for (k, table) in tables.iter().enumerate() {
            let poly = table.get(&beta).cloned().unwrap_or_else(|| Polynomial::zero(field));
            out.push(FlatEquation {
                origin: EquationOrigin::Coefficient { source: k, beta: beta.clone() },
                poly,
            });
        }
    }
    Ok(out)
}

/// Flattens `sys` at order `c`: unknowns `Y_{i,α}` for `supp(α) ⊆ J_i`,
/// `|α| < c`, and equations `P_{k,β}` for every `k` and `|β| < c`.
pub fn flatten<F: Field>(sys: &ConstrainedSystem<F>, c: u32) -> Result<FlattenedSystem<F>, FlattenError> {
    if c == 0 {
        return Err(FlattenError::ZeroOrder);
    }
    let mut registry = sys.registry.clone();
    let names = sys.unknown_names();
    let (unknowns, generic) = register_generic_jets(
        &sys.field,
        &mut registry,
        &sys.layout.series,
        &names,
        &sys.constraints,
        c,
    )?;
    let sigma: HashMap<Var, Polynomial<F>> = sys.layout.unknowns.iter().copied().zip(generic).collect();
    let equations = coefficient_equations(&sys.field, &sys.layout.series, &sigma, &sys.equations, c)?;
    Ok(FlattenedSystem {
        field: sys.field.clone(),
        unknowns,
        equations,
        meta: FlattenMeta {
            order: c,
            series_names: sys.series_names(),
            unknown_names: names,
            constraints: sys.constraints.clone(),
            source: sys.equations.iter().map(|f| f.to_text(&sys.registry)).collect(),
        },
        registry,
    })
}

/// Target order `ord(Y_i) = order`, certified by a nonzero coefficient at `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderTarget {
    pub order: u32,
    pub witness: Exponent,
}

/// Per-unknown order targets; `None` leaves an unknown unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderPrescription {
    pub targets: Vec<Option<OrderTarget>>,
}

/// Candidate witness exponents for `ord = order` under constraint `j`.
pub fn witness_candidates(n: usize, j: &ConstraintSet, order: u32) -> Vec<Exponent> {
    exponents_of_degree(n, j, order)
}

/// Every combination of witness choices for the given target orders, in
/// lexicographic order of the per-unknown candidate lists.
pub fn witness_branches(
    n: usize,
    constraints: &[ConstraintSet],
    orders: &[Option<u32>],
) -> Vec<OrderPrescription> {
    let mut branches: Vec<Vec<Option<OrderTarget>>> = vec![Vec::new()];
    for (j, target) in constraints.iter().zip(orders) {
        let choices: Vec<Option<OrderTarget>> = match target {
            None => vec![None],
            Some(order) => witness_candidates(n, j, *order)
                .into_iter()
                .map(|w| Some(OrderTarget { order: *order, witness: w }))
                .collect(),
        };
        branches = branches
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |ch| {
                    let mut p = prefix.clone();
                    p.push(ch.clone());
                    p
                })
            })
            .collect();
    }
    branches.into_iter().map(|targets| OrderPrescription { targets }).collect()
}

impl<F: Field> FlattenedSystem<F> {
    pub fn order(&self) -> u32 {
        self.meta.order
    }

    pub fn n(&self) -> usize {
        self.meta.series_names.len()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn unknown_vars(&self) -> Vec<Var> {
        self.unknowns.iter().map(|(v, _)| *v).collect()
    }

    pub fn polys(&self) -> Vec<Polynomial<F>> {
        self.equations.iter().map(|e| e.poly.clone()).collect()
    }

    pub fn coefficient_var(&self, series: usize, exponent: &Exponent) -> Option<Var> {
        self.unknowns.iter().find_map(|(v, r)| match r {
            UnknownRef::Coeff { series: s, exponent: e } if *s == series && e == exponent => Some(*v),
            _ => None,
        })
    }

    /// Number of leading equations coming from `|β| < order`.
    pub fn equations_below(&self, order: u32) -> usize {
        self.equations
            .iter()
            .take_while(|e| matches!(&e.origin, EquationOrigin::Coefficient { beta, .. } if beta.degree() < order))
            .count()
    }

    pub fn prefix(&self, count: usize) -> Result<Self, FlattenError> {
        if count > self.equations.len() {
            return Err(FlattenError::PrefixTooLong { requested: count, available: self.equations.len() });
        }
        let mut out = self.clone();
        out.equations.truncate(count);
        Ok(out)
    }

    /// Appends `Y_{i,α} = 0` for `|α| < c_i` and `Y_{i,α_i}·Z_i = 1` for each target.
    pub fn impose_orders(&self, pres: &OrderPrescription) -> Result<Self, FlattenError> {
        let m = self.meta.constraints.len();
        if pres.targets.len() != m {
            return Err(FlattenError::ConstraintCount { expected: m, got: pres.targets.len() });
        }
        let mut out = self.clone();
        for (i, target) in pres.targets.iter().enumerate() {
            let Some(OrderTarget { order, witness }) = target else { continue };
            let invalid = |reason: String| FlattenError::InvalidWitness { series: i + 1, reason };
            let j = &self.meta.constraints[i];
            if witness.n() != self.n() {
                return Err(invalid(format!("exponent {witness} has the wrong length")));
            }
            if !witness.support_within(j) {
                return Err(invalid(format!("exponent {witness} is not supported on J = {j}")));
            }
            if witness.degree() != *order {
                return Err(invalid(format!("exponent {witness} does not have degree {order}")));
            }
            if *order >= self.order() {
                return Err(invalid(format!("order {order} is not below the truncation order {}", self.order())));
            }
            for alpha in exponents_below(self.n(), j, *order) {
                let v = self.coefficient_var(i, &alpha).expect("basis unknown");
                out.equations.push(FlatEquation {
                    origin: EquationOrigin::Vanish { series: i, exponent: alpha },
                    poly: Polynomial::var(&self.field, v),
                });
            }
            let y = self.coefficient_var(i, witness).expect("basis unknown");
            let z_name = format!("Z_{}", self.meta.unknown_names[i]);
            let z = out
                .registry
                .register(z_name, VarClass::Witness)
                .map_err(|_| invalid("a witness is already imposed".into()))?;
            out.unknowns.push((z, UnknownRef::Witness { series: i }));
            let poly = &Polynomial::monomial(&self.field, Monomial::from_pairs([(y, 1), (z, 1)]), self.field.one())
                - &Polynomial::one(&self.field);
            out.equations.push(FlatEquation {
                origin: EquationOrigin::Witness { series: i, exponent: witness.clone() },
                poly,
            });
        }
        Ok(out)
    }

    /// Appends `Y_{i,α} = value`.
    pub fn pin_coefficient(&self, series: usize, exponent: &Exponent, value: F::Elem) -> Result<Self, FlattenError> {
        let v = self.coefficient_var(series, exponent).ok_or_else(|| FlattenError::InvalidWitness {
            series: series + 1,
            reason: format!("exponent {exponent} is not in the support basis"),
        })?;
        let mut out = self.clone();
        out.equations.push(FlatEquation {
            origin: EquationOrigin::Pin { series, exponent: exponent.clone() },
            poly: &Polynomial::var(&self.field, v) - &Polynomial::constant(&self.field, value),
        });
        Ok(out)
    }

    /// Assembles the jets `y_i = Σ a(Y_{i,α}) x^α`.
    pub fn realize(&self, assignment: &HashMap<Var, F::Elem>) -> Result<Vec<Jet<F>>, FlattenError> {
        let n = self.n();
        let mut coeffs: Vec<Vec<(Exponent, F::Elem)>> = vec![Vec::new(); self.meta.constraints.len()];
        for (v, r) in &self.unknowns {
            if let UnknownRef::Coeff { series, exponent } = r {
                let val = assignment
                    .get(v)
                    .ok_or_else(|| FlattenError::MissingAssignment(self.registry.name(*v).to_string()))?;
                coeffs[*series].push((exponent.clone(), val.clone()));
            }
        }
        coeffs
            .into_iter()
            .zip(&self.meta.constraints)
            .map(|(cs, j)| Ok(Jet::new(&self.field, n, j.clone(), self.order(), cs)?))
            .collect()
    }

    /// Coefficient assignment of a jet tuple (inverse of [`FlattenedSystem::realize`]).
    pub fn assignment_of(&self, jets: &[Jet<F>]) -> HashMap<Var, F::Elem> {
        self.unknowns
            .iter()
            .filter_map(|(v, r)| match r {
                UnknownRef::Coeff { series, exponent } => Some((*v, jets[*series].coefficient(exponent))),
                UnknownRef::Witness { .. } => None,
            })
            .collect()
    }

    /// True if every equation vanishes at `assignment`.
    pub fn is_satisfied_by(&self, assignment: &HashMap<Var, F::Elem>) -> Result<bool, FlattenError> {
        for eq in &self.equations {
            if !eq.poly.evaluate_map(assignment)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_document(&self) -> FlattenedDocument {
        FlattenedDocument {
            field: self.field.spec(),
            order: self.order(),
            series: self.meta.series_names.clone(),
            unknowns: self
                .meta
                .unknown_names
                .iter()
                .zip(&self.meta.constraints)
                .map(|(name, j)| UnknownDoc { name: name.clone(), constraint: j.iter().map(|k| k + 1).collect() })
                .collect(),
            source: self.meta.source.clone(),
            variables: self
                .unknowns
                .iter()
                .map(|(v, r)| {
                    let name = self.registry.name(*v).to_string();
                    match r {
                        UnknownRef::Coeff { series, exponent } => VariableDoc {
                            name,
                            kind: "coefficient".into(),
                            series: series + 1,
                            exponent: Some(exponent.0.clone()),
                        },
                        UnknownRef::Witness { series } => VariableDoc {
                            name,
                            kind: "witness".into(),
                            series: series + 1,
                            exponent: None,
                        },
                    }
                })
                .collect(),
            equations: self
                .equations
                .iter()
                .map(|e| EquationDoc {
                    origin: OriginDoc::from(&e.origin),
                    poly: e.poly.to_text(&self.registry),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }
}

/// JSON form of a [`FlattenedSystem`]. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlattenedDocument {
    pub field: FieldSpec,
    pub order: u32,
    pub series: Vec<String>,
    pub unknowns: Vec<UnknownDoc>,
    pub source: Vec<String>,
    pub variables: Vec<VariableDoc>,
    pub equations: Vec<EquationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownDoc {
    pub name: String,
    pub constraint: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub kind: String,
    pub series: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponent: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OriginDoc {
    Coefficient { source: usize, beta: Vec<u32> },
    Vanish { series: usize, exponent: Vec<u32> },
    Witness { series: usize, exponent: Vec<u32> },
    Pin { series: usize, exponent: Vec<u32> },
}

impl From<&EquationOrigin> for OriginDoc {
    fn from(o: &EquationOrigin) -> Self {
        match o {
            EquationOrigin::Coefficient { source, beta } => {
                OriginDoc::Coefficient { source: source + 1, beta: beta.0.clone() }
            }
            EquationOrigin::Vanish { series, exponent } => {
                OriginDoc::Vanish { series: series + 1, exponent: exponent.0.clone() }
            }
            EquationOrigin::Witness { series, exponent } => {
                OriginDoc::Witness { series: series + 1, exponent: exponent.0.clone() }
            }
            EquationOrigin::Pin { series, exponent } => {
                OriginDoc::Pin { series: series + 1, exponent: exponent.0.clone() }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationDoc {
    pub origin: OriginDoc,
    pub poly: String,
}
