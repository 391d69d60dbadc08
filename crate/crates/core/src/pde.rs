//! Polynomial differential systems solved at jet level.
//!
//! Each unknown function `z_i` becomes a generic jet in coefficient unknowns
//! and each derivative placeholder `∂^j z_i` the formal derivative of that
//! jet, which is linear in the coefficient unknowns. Coefficient extraction
//! then proceeds exactly as in [`crate::flatten`], stopping at order
//! `c - max|j|` so that no equation depends on truncated terms.

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

use crate::field::Field;
use crate::flatten::{
    coefficient_equations, register_generic_jets, witness_branches, EquationOrigin, FlatEquation, FlattenError,
    FlattenMeta, FlattenedSystem, UnknownRef,
};
use crate::jets::{exponents_of_degree, ConstraintSet, Exponent, Jet, JetError};
use crate::poly::{Monomial, PolyError, Polynomial, Var, VarClass, VariableRegistry};
use crate::solve::{
    any_solvable, solve_branching, solve_exhaustive, solve_linear, BranchingOptions, EquationSystem,
    ExhaustiveOptions, NuCheck, NuOutcome, SearchStats, SolveError, SolveReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdeError {
    #[error("derivative `{0}` has a zero multi-index")]
    ZeroDerivative(String),
    #[error("derivative placeholder `{0}` is used but not declared")]
    UndeclaredDerivative(String),
    #[error("derivative jet for `{0}` disagrees with the derivative of its function")]
    InconsistentDerivative(String),
    #[error(transparent)]
    Flatten(#[from] FlattenError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// A placeholder variable standing for `∂^{|j|} z_function / ∂x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeTerm {
    /// 0-based index of the differentiated function.
    pub function: usize,
    pub multi: Exponent,
    pub var: Var,
}

/// A prescribed coefficient value `z_function[exponent] = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientPin<E> {
    pub function: usize,
    pub exponent: Exponent,
    pub value: E,
}

/// Polynomial equations in `x`, functions `z_1..z_q` and derivative placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdeSystem<F: Field> {
    pub field: F,
    pub registry: VariableRegistry,
    pub series: Vec<Var>,
    pub functions: Vec<Var>,
    pub constraints: Vec<ConstraintSet>,
    pub derivatives: Vec<DerivativeTerm>,
    pub equations: Vec<Polynomial<F>>,
    pub pins: Vec<CoefficientPin<F::Elem>>,
}

/// Display name of a derivative placeholder, e.g. `D[z1, x1^2 x2]`.
pub fn derivative_name(function: &str, multi: &Exponent, series_names: &[String]) -> String {
    let parts: Vec<String> = multi
        .0
        .iter()
        .zip(series_names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, x)| if *k == 1 { x.clone() } else { format!("{x}^{k}") })
        .collect();
    format!("D[{function}, {}]", parts.join(" "))
}

impl<F: Field> PdeSystem<F> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: F,
        registry: VariableRegistry,
        series: Vec<Var>,
        functions: Vec<Var>,
        constraints: Vec<ConstraintSet>,
        derivatives: Vec<DerivativeTerm>,
        equations: Vec<Polynomial<F>>,
        pins: Vec<CoefficientPin<F::Elem>>,
    ) -> Result<Self, PdeError> {
        if constraints.len() != functions.len() {
            return Err(FlattenError::ConstraintCount { expected: functions.len(), got: constraints.len() }.into());
        }
        for d in &derivatives {
            if d.multi.degree() == 0 {
                return Err(PdeError::ZeroDerivative(registry.name(d.var).to_string()));
            }
            if d.multi.n() != series.len() {
                return Err(JetError::DimensionMismatch { expected: series.len(), got: d.multi.n() }.into());
            }
        }
        for (k, eq) in equations.iter().enumerate() {
            if eq.field() != &field {
                return Err(PolyError::FieldMismatch.into());
            }
            for v in eq.vars() {
                if series.contains(&v) || functions.contains(&v) || derivatives.iter().any(|d| d.var == v) {
                    continue;
                }
                if registry.contains(v) && registry.class(v) == VarClass::Derivative {
                    return Err(PdeError::UndeclaredDerivative(registry.name(v).to_string()));
                }
                let name = if registry.contains(v) { registry.name(v).to_string() } else { format!("#{}", v.0) };
                return Err(FlattenError::StrayVariable { equation: k + 1, name }.into());
            }
        }
        for p in &pins {
            if p.function >= functions.len() || !p.exponent.support_within(&constraints[p.function]) {
                return Err(FlattenError::InvalidWitness {
                    series: p.function + 1,
                    reason: format!("pinned exponent {} is not in the support basis", p.exponent),
                }
                .into());
            }
        }
        Ok(PdeSystem { field, registry, series, functions, constraints, derivatives, equations, pins })
    }

    pub fn n(&self) -> usize {
        self.series.len()
    }

    pub fn q(&self) -> usize {
        self.functions.len()
    }

    /// `max |j_k|`, 0 without derivatives.
    pub fn max_derivative(&self) -> u32 {
        self.derivatives.iter().map(|d| d.multi.degree()).max().unwrap_or(0)
    }

    pub fn series_names(&self) -> Vec<String> {
        self.series.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }

    pub fn function_names(&self) -> Vec<String> {
        self.functions.iter().map(|&v| self.registry.name(v).to_string()).collect()
    }
}

/// Builds a [`PdeSystem`] in code with series `x1..xn` and functions `z1..zq`.
#[derive(Debug, Clone)]
pub struct PdeBuilder<F: Field> {
    field: F,
    registry: VariableRegistry,
    series: Vec<Var>,
    functions: Vec<Var>,
    derivatives: Vec<DerivativeTerm>,
}

impl<F: Field> PdeBuilder<F> {
    pub fn new(field: F, n: usize, q: usize) -> Self {
        let mut registry = VariableRegistry::new();
        let series = (1..=n).map(|k| registry.register(format!("x{k}"), VarClass::Series).expect("fresh")).collect();
        let functions = (1..=q).map(|i| registry.register(format!("z{i}"), VarClass::Unknown).expect("fresh")).collect();
        PdeBuilder { field, registry, series, functions, derivatives: Vec::new() }
    }

    /// `x_k`, 1-based.
    pub fn x(&self, k: usize) -> Polynomial<F> {
        Polynomial::var(&self.field, self.series[k - 1])
    }

    /// `z_i`, 1-based.
    pub fn z(&self, i: usize) -> Polynomial<F> {
        Polynomial::var(&self.field, self.functions[i - 1])
    }

    /// The placeholder for `∂^{|j|} z_i / ∂x^j` (`i` 1-based), declared on first use.
    pub fn d(&mut self, i: usize, multi: &[u32]) -> Polynomial<F> {
        let multi = Exponent(multi.to_vec());
        if let Some(t) = self.derivatives.iter().find(|t| t.function == i - 1 && t.multi == multi) {
            return Polynomial::var(&self.field, t.var);
        }
        let series_names: Vec<String> = self.series.iter().map(|&v| self.registry.name(v).to_string()).collect();
        let name = derivative_name(self.registry.name(self.functions[i - 1]), &multi, &series_names);
        let var = self.registry.register(name, VarClass::Derivative).expect("fresh");
        self.derivatives.push(DerivativeTerm { function: i - 1, multi, var });
        Polynomial::var(&self.field, var)
    }

    pub fn build(
        self,
        constraints: Option<Vec<ConstraintSet>>,
        equations: Vec<Polynomial<F>>,
        pins: Vec<CoefficientPin<F::Elem>>,
    ) -> Result<PdeSystem<F>, PdeError> {
        let n = self.series.len();
        let constraints = constraints.unwrap_or_else(|| vec![ConstraintSet::full(n); self.functions.len()]);
        PdeSystem::new(self.field, self.registry, self.series, self.functions, constraints, self.derivatives, equations, pins)
    }
}

fn differentiate<F: Field>(p: &Polynomial<F>, series: &[Var], multi: &Exponent) -> Polynomial<F> {
    let mut out = p.clone();
    for (&v, &k) in series.iter().zip(&multi.0) {
        if k > 0 {
            out = out.partial_derivative(v, k);
        }
    }
    out
}

struct Expansion<F: Field> {
    flat: FlattenedSystem<F>,
    /// Each derivative placeholder as a polynomial in `x` and coefficient unknowns.
    derivative_jets: Vec<Polynomial<F>>,
}

fn expand<F: Field>(sys: &PdeSystem<F>, c: u32) -> Result<Expansion<F>, PdeError> {
    let m = sys.max_derivative();
    if c <= m {
        return Err(JetError::OrderTooLow { needed: m + 1, got: c }.into());
    }
    let mut registry = sys.registry.clone();
    let names = sys.function_names();
    let (unknowns, generic) = register_generic_jets(&sys.field, &mut registry, &sys.series, &names, &sys.constraints, c)?;
    let mut sigma: HashMap<Var, Polynomial<F>> = sys.functions.iter().copied().zip(generic.iter().cloned()).collect();
    let mut derivative_jets = Vec::new();
    for d in &sys.derivatives {
        let jet = differentiate(&generic[d.function], &sys.series, &d.multi);
        sigma.insert(d.var, jet.clone());
        derivative_jets.push(jet);
    }
    let mut equations = coefficient_equations(&sys.field, &sys.series, &sigma, &sys.equations, c - m)?;
    let flat_unknowns: Vec<(Var, UnknownRef)> = unknowns;
    for pin in &sys.pins {
        let v = flat_unknowns
            .iter()
            .find_map(|(v, r)| match r {
                UnknownRef::Coeff { series, exponent } if *series == pin.function && *exponent == pin.exponent => Some(*v),
                _ => None,
            })
            .ok_or_else(|| FlattenError::InvalidWitness {
                series: pin.function + 1,
                reason: format!("pinned exponent {} is not below order {c}", pin.exponent),
            })?;
        equations.push(FlatEquation {
            origin: EquationOrigin::Pin { series: pin.function, exponent: pin.exponent.clone() },
            poly: &Polynomial::var(&sys.field, v) - &Polynomial::constant(&sys.field, pin.value.clone()),
        });
    }
    let flat = FlattenedSystem {
        field: sys.field.clone(),
        unknowns: flat_unknowns,
        equations,
        meta: FlattenMeta {
            order: c,
            series_names: sys.series_names(),
            unknown_names: names,
            constraints: sys.constraints.clone(),
            source: sys.equations.iter().map(|f| f.to_text(&sys.registry)).collect(),
        },
        registry,
    };
    Ok(Expansion { flat, derivative_jets })
}

/// Flattens a differential system at jet order `c`.
///
/// The functions become jets of order `c`; equations are the coefficients of
/// `x^β` for `|β| < c - max|j|`, followed by one equation per pinned
/// coefficient.
pub fn pde_flatten<F: Field>(sys: &PdeSystem<F>, c: u32) -> Result<FlattenedSystem<F>, PdeError> {
    Ok(expand(sys, c)?.flat)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdeOptions {
    pub budget: u64,
    pub jobs: usize,
    pub branching: BranchingOptions,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions { budget: 50_000_000, jobs: 1, branching: BranchingOptions::default() }
    }
}

/// A solve report together with the realized function and derivative jets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdeSolution<F: Field> {
    pub report: SolveReport<F::Elem>,
    pub flat: FlattenedSystem<F>,
    /// Jets for `z_1..z_q` at order `c`, when Sat.
    pub functions: Option<Vec<Jet<F>>>,
    /// One jet per declared derivative term, at order `c - |j|`, when Sat.
    pub derivatives: Option<Vec<Jet<F>>>,
}

/// Flattens at order `c` and solves: by elimination when every equation is
/// affine, by exhaustive search over a prime field, and by branching over ℚ.
pub fn pde_solve<F: Field>(sys: &PdeSystem<F>, c: u32, opts: &PdeOptions) -> Result<PdeSolution<F>, PdeError> {
    let Expansion { flat, derivative_jets } = expand(sys, c)?;
    let system = EquationSystem::from_flattened(&flat);
    let report = if system.equations.iter().all(Polynomial::is_affine) {
        solve_linear(&system)?
    } else if sys.field.is_finite() {
        solve_exhaustive(&system, &ExhaustiveOptions { budget: opts.budget, all_solutions: false, jobs: opts.jobs })?
    } else {
        solve_branching(&system, &opts.branching)?
    };
    let Some(assign) = report.first_assignment() else {
        return Ok(PdeSolution { report, flat, functions: None, derivatives: None });
    };
    let functions = flat.realize(&assign)?;
    let mut derivatives = Vec::new();
    for (d, p) in sys.derivatives.iter().zip(&derivative_jets) {
        let order = c - d.multi.degree();
        let jet = Jet::from_polynomial(&p.partial_evaluate(&assign), &sys.series, sys.constraints[d.function].clone(), order)?;
        if jet != functions[d.function].derivative(&d.multi)? {
            return Err(PdeError::InconsistentDerivative(sys.registry.name(d.var).to_string()));
        }
        derivatives.push(jet);
    }
    Ok(PdeSolution { report, flat, functions: Some(functions), derivatives: Some(derivatives) })
}

/// Parameters of a τ search. `orders` lists the prescribed order of each
/// function, then of each declared derivative term.
#[derive(Debug, Clone)]
pub struct TauQuery<F: Field> {
    pub system: PdeSystem<F>,
    pub orders: Vec<u32>,
    pub c_max: u32,
    pub tau_max: u32,
    pub budget: u64,
    pub jobs: usize,
}

impl<F: Field> TauQuery<F> {
    pub fn new(system: PdeSystem<F>, orders: Vec<u32>, c_max: u32, tau_max: u32) -> Self {
        TauQuery { system, orders, c_max, tau_max, budget: 50_000_000, jobs: 1 }
    }

    fn validate(&self) -> Result<(), SolveError> {
        let want = self.system.q() + self.system.derivatives.len();
        if self.orders.len() != want {
            return Err(SolveError::InvalidQuery(format!("{} orders given, {want} expected", self.orders.len())));
        }
        if self.function_orders().iter().any(|&c| c >= self.c_max) {
            return Err(SolveError::InvalidQuery(format!("C_max = {} must exceed every function order", self.c_max)));
        }
        Ok(())
    }

    fn function_orders(&self) -> &[u32] {
        &self.orders[..self.system.q()]
    }

    fn derivative_orders(&self) -> &[u32] {
        &self.orders[self.system.q()..]
    }

    /// Jet order making every prescribed order visible, with equations up to `eq_order`.
    fn level(&self, eq_order: u32) -> u32 {
        let m = self.system.max_derivative();
        let mut level = eq_order + m;
        for &c in self.function_orders() {
            level = level.max(c + 1);
        }
        for (d, &c) in self.system.derivatives.iter().zip(self.derivative_orders()) {
            level = level.max(c + d.multi.degree() + 1);
        }
        level
    }

    /// Agreement modulo `(x)^τ` determines every prescribed order.
    fn pinned(&self, tau: u32) -> bool {
        self.function_orders().iter().all(|&c| tau > c)
            && self.system.derivatives.iter().zip(self.derivative_orders()).all(|(d, &c)| tau > c + d.multi.degree())
    }

    fn exhaustive(&self) -> ExhaustiveOptions {
        ExhaustiveOptions { budget: self.budget, all_solutions: false, jobs: self.jobs }
    }
}

/// One system per combination of order witnesses, for functions and derivatives.
fn profile_systems<F: Field>(
    q: &TauQuery<F>,
    exp: &Expansion<F>,
    eq_order: u32,
) -> Result<Vec<EquationSystem<F>>, PdeError> {
    let sys = &q.system;
    let f = &sys.field;
    let flat = &exp.flat;
    let n = sys.n();
    let mut base = flat.clone();
    base.equations.retain(|e| match &e.origin {
        EquationOrigin::Coefficient { beta, .. } => beta.degree() < eq_order,
        _ => true,
    });
    let targets: Vec<Option<u32>> = q.function_orders().iter().map(|&c| Some(c)).collect();
    let function_branches = witness_branches(n, &flat.meta.constraints, &targets);

    // derivative coefficient δ_γ as a linear form in the coefficient unknowns
    let coefficient_of = |p: &Polynomial<F>, gamma: &Exponent| -> Polynomial<F> {
        let split = p.split_coefficients(|v| sys.series.contains(&v));
        split.get(&gamma.to_monomial(&sys.series)).cloned().unwrap_or_else(|| Polynomial::zero(f))
    };
    let derivative_choices: Vec<Vec<Exponent>> = sys
        .derivatives
        .iter()
        .zip(q.derivative_orders())
        .map(|(d, &c)| exponents_of_degree(n, &sys.constraints[d.function], c))
        .collect();

    let mut out = Vec::new();
    for fb in &function_branches {
        let with_functions = base.impose_orders(fb)?;
        let mut registry = with_functions.registry.clone();
        let mut witness_vars = Vec::new();
        for (k, d) in sys.derivatives.iter().enumerate() {
            let name = format!("W{}_{}", k + 1, sys.registry.name(d.var));
            witness_vars.push(registry.register(name, VarClass::Witness)?);
        }
        let mut combos: Vec<Vec<&Exponent>> = vec![Vec::new()];
        for choices in &derivative_choices {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |g| {
                        let mut p = prefix.clone();
                        p.push(g);
                        p
                    })
                })
                .collect();
        }
        for combo in combos {
            let mut system = EquationSystem::from_flattened(&with_functions);
            for (k, (d, &c)) in sys.derivatives.iter().zip(q.derivative_orders()).enumerate() {
                let jet = &exp.derivative_jets[k];
                for gamma in crate::jets::exponents_below(n, &sys.constraints[d.function], c) {
                    system.equations.push(coefficient_of(jet, &gamma));
                }
                let w = witness_vars[k];
                let witness = &coefficient_of(jet, combo[k]) * &Polynomial::monomial(f, Monomial::var(w), f.one());
                system.equations.push(&witness - &Polynomial::one(f));
                system.vars.push(w);
                system.names.push(registry.name(w).to_string());
            }
            out.push(system);
        }
    }
    Ok(out)
}

fn decide(q: &TauQuery<impl Field>, exp_order: u32, eq_order: u32, stats: &mut SearchStats, what: &str) -> Result<bool, PdeError> {
    let exp = expand(&q.system, exp_order)?;
    let systems = profile_systems(q, &exp, eq_order)?;
    any_solvable(systems, &q.exhaustive(), stats)?
        .ok_or_else(|| SolveError::InvalidQuery(format!("search budget exhausted while deciding {what}")).into())
}

/// The τ check at one order, analogous to [`crate::solve::nu_check`] with
/// derivative orders prescribed as well.
pub fn tau_check<F: Field>(q: &TauQuery<F>, tau: u32) -> Result<NuCheck, PdeError> {
    q.validate()?;
    let mut stats = SearchStats::default();
    let reference = decide(q, q.level(q.c_max), q.c_max, &mut stats, "the reference system")?;
    check_with(q, tau, reference, &mut stats)
}

fn check_with<F: Field>(q: &TauQuery<F>, tau: u32, reference_solvable: bool, stats: &mut SearchStats) -> Result<NuCheck, PdeError> {
    if tau == 0 {
        return Err(SolveError::InvalidQuery("τ must be positive".into()).into());
    }
    let hypothesis_nonempty = decide(q, q.level(tau), tau, stats, "the hypothesis set")?;
    let orders_pinned = q.pinned(tau);
    let holds = !hypothesis_nonempty || (orders_pinned && reference_solvable);
    Ok(NuCheck { at: tau, hypothesis_nonempty, orders_pinned, reference_solvable, holds })
}

/// Least τ in `1..=tau_max` such that every jet tuple solving the system
/// modulo `(x)^τ` with the prescribed function and derivative orders is
/// matched by a solution modulo `(x)^{C_max}` with the same order profile.
pub fn tau_search<F: Field>(q: &TauQuery<F>) -> Result<NuOutcome, PdeError> {
    q.validate()?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let reference = decide(q, q.level(q.c_max), q.c_max, &mut stats, "the reference system")?;
    let mut checks = Vec::new();
    let mut value = None;
    for tau in 1..=q.tau_max {
        let c = check_with(q, tau, reference, &mut stats)?;
        let holds = c.holds;
        checks.push(c);
        if holds {
            value = Some(tau);
            break;
        }
    }
    stats.elapsed = start.elapsed();
    Ok(NuOutcome { value, relative_to: q.c_max, checks, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::flatten::{flatten, ConstrainedSystem};
    use crate::solve::Outcome;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exponential_is_free_up_to_scale() {
        let mut b = PdeBuilder::new(Rationals, 1, 1);
        let eq = &b.d(1, &[1]) - &b.z(1);
        let sys = b.build(None, vec![eq], vec![]).unwrap();
        let flat = pde_flatten(&sys, 5).unwrap();
        assert_eq!(flat.len(), 4);
        let r = pde_solve(&sys, 5, &PdeOptions::default()).unwrap();
        assert_eq!(r.report.outcome, Outcome::Sat { solutions: vec![vec![q(0, 1); 5]], free: vec![0] });
    }

    #[test]
    fn exponential_with_normalization() {
        let mut b = PdeBuilder::new(Rationals, 1, 1);
        let eq = &b.d(1, &[1]) - &b.z(1);
        let pin = CoefficientPin { function: 0, exponent: Exponent(vec![0]), value: q(1, 1) };
        let sys = b.build(None, vec![eq], vec![pin]).unwrap();
        let r = pde_solve(&sys, 5, &PdeOptions::default()).unwrap();
        let z = &r.functions.unwrap()[0];
        let want: Vec<_> = [q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)].into_iter().enumerate().collect();
        for (k, c) in want {
            assert_eq!(z.coefficient(&Exponent(vec![k as u32])), c);
        }
        assert_eq!(r.derivatives.unwrap()[0], z.derivative(&Exponent(vec![1])).unwrap());
    }

    #[test]
    fn vanishing_gradient_forces_constants() {
        let mut b = PdeBuilder::new(Rationals, 2, 1);
        let e1 = b.d(1, &[1, 0]);
        let e2 = b.d(1, &[0, 1]);
        let sys = b.build(None, vec![e1, e2], vec![]).unwrap();
        let r = pde_solve(&sys, 4, &PdeOptions::default()).unwrap();
        let Outcome::Sat { free, .. } = &r.report.outcome else { panic!() };
        let free_names: Vec<&str> = free.iter().map(|&i| r.report.names[i].as_str()).collect();
        assert_eq!(free_names, vec!["z1_0_0"]);
    }

    #[test]
    fn squared_derivative_over_f3() {
        let f = PrimeField::new(3).unwrap();
        let mut b = PdeBuilder::new(f, 1, 1);
        let d = b.d(1, &[1]);
        let sys = b.build(None, vec![&(&d * &d) - &Polynomial::one(&f)], vec![]).unwrap();
        let r = pde_solve(&sys, 3, &PdeOptions::default()).unwrap();
        let z = &r.functions.unwrap()[0];
        let slope = z.coefficient(&Exponent(vec![1]));
        assert!(slope == 1 || slope == 2);
        assert_eq!(z.coefficient(&Exponent(vec![2])), 0);
    }

    #[test]
    fn square_plus_one_has_no_rational_root() {
        let b = PdeBuilder::new(Rationals, 1, 1);
        let z = b.z(1);
        let sys = b.build(None, vec![&(&z * &z) + &Polynomial::one(&Rationals)], vec![]).unwrap();
        let r = pde_solve(&sys, 3, &PdeOptions::default()).unwrap();
        assert_eq!(r.report.outcome.unsat_prefix(), Some(1));
    }

    #[test]
    fn characteristic_two_degenerates() {
        let f = PrimeField::new(2).unwrap();
        let mut b = PdeBuilder::new(f, 1, 1);
        let eq = &b.d(1, &[1]) - &b.z(1);
        let pin = CoefficientPin { function: 0, exponent: Exponent(vec![0]), value: 1 };
        let sys = b.build(None, vec![eq], vec![pin]).unwrap();
        let r = pde_solve(&sys, 3, &PdeOptions::default()).unwrap();
        assert!(r.report.outcome.is_unsat());
    }

    #[test]
    fn derivative_free_matches_flatten() {
        let f = PrimeField::new(5).unwrap();
        let b = PdeBuilder::new(f, 2, 1);
        let eq = &(&b.z(1) * &b.x(1)) - &b.x(2);
        let sys = b.build(Some(vec![ConstraintSet::new([0], 2).unwrap()]), vec![eq.clone()], vec![]).unwrap();
        let c = ConstrainedSystem::new(f, sys.registry.clone(), crate::jets::SeriesLayout { series: sys.series.clone(), unknowns: sys.functions.clone() }, sys.constraints.clone(), vec![eq]).unwrap();
        assert_eq!(pde_flatten(&sys, 4).unwrap(), flatten(&c, 4).unwrap());
    }

    #[test]
    fn order_too_low() {
        let mut b = PdeBuilder::new(Rationals, 1, 1);
        let eq = b.d(1, &[2]);
        let sys = b.build(None, vec![eq], vec![]).unwrap();
        assert!(matches!(pde_flatten(&sys, 2), Err(PdeError::Jet(JetError::OrderTooLow { .. }))));
    }

    #[test]
    fn tau_examples() {
        let f = PrimeField::new(2).unwrap();
        let mut b = PdeBuilder::new(f, 1, 1);
        let eq = &b.d(1, &[1]) - &Polynomial::one(&f);
        let sys = b.build(None, vec![eq], vec![]).unwrap();
        let out = tau_search(&TauQuery::new(sys.clone(), vec![1, 0], 3, 4)).unwrap();
        assert_eq!(out.value, Some(2));
        assert!(!tau_check(&TauQuery::new(sys.clone(), vec![1, 0], 3, 4), 1).unwrap().holds);
        // ord z = 2 forces ord ∂z >= 1, so ord ∂z = 0 is impossible
        let out = tau_search(&TauQuery::new(sys, vec![2, 0], 3, 4)).unwrap();
        assert_eq!(out.value, Some(1));
        assert!(!out.checks[0].hypothesis_nonempty);
    }
}
