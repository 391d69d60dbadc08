//! Checks a parsed description and turns it into core systems.

use cjet_core::field::FieldError;
use cjet_core::flatten::{flatten, ConstrainedSystem, FlattenError, FlattenedSystem};
use cjet_core::jets::{ConstraintSet, Exponent, SeriesLayout};
use cjet_core::pde::{derivative_name, pde_flatten, CoefficientPin, DerivativeTerm, PdeError, PdeSystem};
use cjet_core::poly::{Polynomial, Var, VarClass, VariableRegistry};
use cjet_core::Field;
use thiserror::Error;

use crate::dsl::{DerivativeRef, Description, Expr, OrdTarget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("`{0}` is declared more than once")]
    Duplicate(String),
    #[error("`{0}` is not a declared series variable")]
    NotSeries(String),
    #[error("`{0}` is not a declared unknown")]
    NotUnknown(String),
    #[error("`{0}` is not declared")]
    Undeclared(String),
    #[error("derivative {0} must differentiate at least once")]
    ZeroDerivative(String),
    #[error("the order of {0} is prescribed more than once")]
    DuplicateOrder(String),
    #[error("coefficient pin for `{unknown}`: {reason}")]
    BadPin { unknown: String, reason: String },
    #[error("derivative terms need the `pde` or `tau` command")]
    Differential,
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Flatten(#[from] FlattenError),
    #[error("{0}")]
    Pde(#[from] PdeError),
}

/// A checked description over a concrete field.
#[derive(Debug, Clone)]
pub struct Model<F: Field> {
    pub field: F,
    pub registry: VariableRegistry,
    pub layout: SeriesLayout,
    pub constraints: Vec<ConstraintSet>,
    pub equations: Vec<Polynomial<F>>,
    pub derivatives: Vec<DerivativeTerm>,
    pub unknown_orders: Vec<Option<u32>>,
    /// Aligned with `derivatives`.
    pub derivative_orders: Vec<Option<u32>>,
    pub pins: Vec<CoefficientPin<F::Elem>>,
    pub order: Option<u32>,
}

impl<F: Field> Model<F> {
    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn is_differential(&self) -> bool {
        !self.derivatives.is_empty()
    }

    pub fn unknown_names(&self) -> Vec<String> {
        self.layout.unknowns.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }

    pub fn series_names(&self) -> Vec<String> {
        self.layout.series.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }

    /// The algebraic system; pins are applied by [`Model::flatten`].
    pub fn system(&self) -> Result<ConstrainedSystem<F>, SemanticError> {
        if self.is_differential() {
            return Err(SemanticError::Differential);
        }
        Ok(ConstrainedSystem::new(
            self.field.clone(),
            self.registry.clone(),
            self.layout.clone(),
            self.constraints.clone(),
            self.equations.clone(),
        )?)
    }

    pub fn pde(&self) -> Result<PdeSystem<F>, SemanticError> {
        Ok(PdeSystem::new(
            self.field.clone(),
            self.registry.clone(),
            self.layout.series.clone(),
            self.layout.unknowns.clone(),
            self.constraints.clone(),
            self.derivatives.clone(),
            self.equations.clone(),
            self.pins.clone(),
        )?)
    }

    /// Flattens at order `c`, through the differential path when needed, with
    /// every coefficient pin appended.
    pub fn flatten(&self, c: u32) -> Result<FlattenedSystem<F>, SemanticError> {
        if self.is_differential() {
            return Ok(pde_flatten(&self.pde()?, c)?);
        }
        let mut flat = flatten(&self.system()?, c)?;
        for pin in &self.pins {
            flat = flat.pin_coefficient(pin.function, &pin.exponent, pin.value.clone())?;
        }
        Ok(flat)
    }
}

struct Builder<'a, F: Field> {
    field: &'a F,
    registry: VariableRegistry,
    series: Vec<Var>,
    unknowns: Vec<Var>,
    derivatives: Vec<DerivativeTerm>,
}

impl<F: Field> Builder<'_, F> {
    fn register(&mut self, name: &str, class: VarClass) -> Result<Var, SemanticError> {
        self.registry.register(name, class).map_err(|_| SemanticError::Duplicate(name.to_string()))
    }

    fn series_index(&self, name: &str) -> Result<usize, SemanticError> {
        self.series
            .iter()
            .position(|&v| self.registry.name(v) == name)
            .ok_or_else(|| SemanticError::NotSeries(name.to_string()))
    }

    fn unknown_index(&self, name: &str) -> Result<usize, SemanticError> {
        self.unknowns
            .iter()
            .position(|&v| self.registry.name(v) == name)
            .ok_or_else(|| SemanticError::NotUnknown(name.to_string()))
    }

    /// Index into `derivatives`, declaring the term on first sight.
    fn derivative(&mut self, d: &DerivativeRef) -> Result<usize, SemanticError> {
        let function = self.unknown_index(&d.function)?;
        let mut multi = vec![0u32; self.series.len()];
        for (v, k) in &d.factors {
            multi[self.series_index(v)?] += k;
        }
        let multi = Exponent(multi);
        if multi.degree() == 0 {
            return Err(SemanticError::ZeroDerivative(d.to_string()));
        }
        if let Some(i) = self.derivatives.iter().position(|t| t.function == function && t.multi == multi) {
            return Ok(i);
        }
        let series_names: Vec<String> = self.series.iter().map(|&v| self.registry.name(v).to_string()).collect();
        let name = derivative_name(&d.function, &multi, &series_names);
        let var = self.register(&name, VarClass::Derivative)?;
        self.derivatives.push(DerivativeTerm { function, multi, var });
        Ok(self.derivatives.len() - 1)
    }

    fn expr(&mut self, e: &Expr) -> Result<Polynomial<F>, SemanticError> {
        let f = self.field;
        Ok(match e {
            Expr::Int(n) => Polynomial::constant(f, f.from_bigint(n)),
            Expr::Frac(n, d) => Polynomial::constant(f, f.from_ratio(n, d)?),
            Expr::Name(name) => match self.registry.lookup(name) {
                Some(v) => Polynomial::var(f, v),
                None => return Err(SemanticError::Undeclared(name.clone())),
            },
            Expr::Derivative(d) => {
                let i = self.derivative(d)?;
                Polynomial::var(f, self.derivatives[i].var)
            }
            Expr::Neg(a) => -&self.expr(a)?,
            Expr::Add(a, b) => &self.expr(a)? + &self.expr(b)?,
            Expr::Sub(a, b) => &self.expr(a)? - &self.expr(b)?,
            Expr::Mul(a, b) => &self.expr(a)? * &self.expr(b)?,
            Expr::Pow(a, k) => self.expr(a)?.pow(*k),
        })
    }
}

/// Resolves names, derivative terms, order prescriptions and pins.
pub fn build<F: Field>(desc: &Description, field: F) -> Result<Model<F>, SemanticError> {
    let mut b = Builder {
        field: &field,
        registry: VariableRegistry::new(),
        series: Vec::new(),
        unknowns: Vec::new(),
        derivatives: Vec::new(),
    };
    for name in &desc.vars {
        let v = b.register(name, VarClass::Series)?;
        b.series.push(v);
    }
    let n = b.series.len();
    for u in &desc.unknowns {
        let v = b.register(&u.name, VarClass::Unknown)?;
        b.unknowns.push(v);
    }
    let mut constraints = Vec::new();
    for u in &desc.unknowns {
        let idx = u.support.iter().map(|s| b.series_index(s)).collect::<Result<Vec<_>, _>>()?;
        constraints.push(ConstraintSet::new(idx, n).expect("indices in range"));
    }
    let equations = desc.equations.iter().map(|e| b.expr(e)).collect::<Result<Vec<_>, _>>()?;

    let mut unknown_orders = vec![None; b.unknowns.len()];
    let mut derivative_orders: Vec<Option<u32>> = Vec::new();
    for o in &desc.ords {
        let (slot, label) = match &o.target {
            OrdTarget::Unknown(name) => (&mut unknown_orders[b.unknown_index(name)?], name.clone()),
            OrdTarget::Derivative(d) => {
                let i = b.derivative(d)?;
                derivative_orders.resize(b.derivatives.len(), None);
                (&mut derivative_orders[i], d.to_string())
            }
        };
        if slot.replace(o.order).is_some() {
            return Err(SemanticError::DuplicateOrder(label));
        }
    }
    derivative_orders.resize(b.derivatives.len(), None);

    let mut pins = Vec::new();
    for c in &desc.coeffs {
        let function = b.unknown_index(&c.unknown)?;
        let bad = |reason: String| SemanticError::BadPin { unknown: c.unknown.clone(), reason };
        if c.exponent.len() != n {
            return Err(bad(format!("expected {n} exponents, got {}", c.exponent.len())));
        }
        let exponent = Exponent(c.exponent.clone());
        if !exponent.support_within(&constraints[function]) {
            return Err(bad(format!("exponent {exponent} lies outside the declared support")));
        }
        let value = b.expr(&c.value)?;
        if !value.is_constant() {
            return Err(bad("the value must be a constant".into()));
        }
        pins.push(CoefficientPin { function, exponent, value: value.constant_term() });
    }

    let Builder { registry, series, unknowns, derivatives, .. } = b;
    Ok(Model {
        field,
        registry,
        layout: SeriesLayout { series, unknowns },
        constraints,
        equations,
        derivatives,
        unknown_orders,
        derivative_orders,
        pins,
        order: desc.order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use cjet_core::{PrimeField, Rationals};

    fn model(src: &str) -> Result<Model<Rationals>, SemanticError> {
        build(&parse(src).unwrap(), Rationals)
    }

    #[test]
    fn mixed_partials_in_any_order_are_one_term() {
        let m = model("field Q; vars x1 x2; unknown z in [x1, x2]; eq D[z, x1 x2] - D[z, x2 x1] + D[z, x1 x1];").unwrap();
        assert_eq!(m.derivatives.len(), 2);
        assert_eq!(m.equations[0].num_terms(), 1);
        assert_eq!(m.registry.name(m.derivatives[1].var), "D[z, x1^2]");
    }

    #[test]
    fn semantic_errors() {
        assert_eq!(model("field Q; vars x; unknown Y in [t]; eq Y;").unwrap_err(), SemanticError::NotSeries("t".into()));
        assert_eq!(model("field Q; vars x; unknown x in [x]; eq x;").unwrap_err(), SemanticError::Duplicate("x".into()));
        assert_eq!(model("field Q; vars x; unknown Y in [x]; eq Y - w;").unwrap_err(), SemanticError::Undeclared("w".into()));
        assert!(matches!(model("field Q; vars x; unknown Y in [x]; eq Y; ord Y 1; ord Y 2;"), Err(SemanticError::DuplicateOrder(_))));
        assert!(matches!(model("field Q; vars x; unknown Y in [x]; eq D[Y, x^0];"), Err(SemanticError::ZeroDerivative(_))));
        assert!(matches!(model("field Q; vars x y; unknown Y in [x]; eq Y; coeff Y [0, 1] = 2;"), Err(SemanticError::BadPin { .. })));
        let d = parse("field Fp 5; vars x; unknown Y in [x]; eq Y - 1/5;").unwrap();
        assert!(matches!(build(&d, PrimeField::new(5).unwrap()), Err(SemanticError::Field(_))));
    }

    #[test]
    fn pins_apply_to_algebraic_systems() {
        let m = model("field Q; vars x; unknown Y in [x]; eq Y^2 - 1; coeff Y [0] = -1;").unwrap();
        let flat = m.flatten(2).unwrap();
        assert_eq!(flat.len(), 3);
    }
}
