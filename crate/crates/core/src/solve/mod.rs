//! Decision procedures for finite and countable polynomial systems.
//!
//! Every solver returns a [`SolveReport`]. A `Sat` outcome always carries
//! assignments that were re-checked by exact evaluation before the report was
//! built; `UnsatAtPrefix(N)` means the first `N` equations have no common zero
//! while the first `N - 1` do (for the exhaustive and linear solvers this is
//! established, not assumed).

mod countable;
mod exhaustive;
mod lift;
mod linear;
mod nu;
mod rational;

pub use countable::{
    decide_countable, generator_prefix, projection_chain, CountableOptions, EquationGenerator, FlattenedStream,
    FnGenerator, ListGenerator, ProjectionChain, Truncated,
};
pub use exhaustive::{solve_exhaustive, ExhaustiveOptions};
pub use lift::{lift_order, lift_to, LiftOptions};
pub use linear::{linear_solve, solve_linear, LinearSolution};
pub(crate) use nu::any_solvable;
pub use nu::{nu_check, nu_search, NuCheck, NuOutcome, NuQuery};
pub use rational::{height_bounded_rationals, rational_roots, solve_branching, BranchingOptions};

use std::collections::HashMap;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::flatten::{FlattenError, FlattenedSystem};
use crate::jets::JetError;
use crate::poly::{PolyError, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("the field is not finite; exhaustive search is unavailable")]
    FieldNotFinite,
    #[error("equation {0} is not affine in the unknowns")]
    NotLinear(usize),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("no extension to order {target} exists")]
    DeadEnd { target: u32 },
    #[error("partial solution does not satisfy the system modulo (x)^{0}")]
    NotAPartialSolution(u32),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Flatten(#[from] FlattenError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Equations over an ordered list of unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem<F: Field> {
    pub field: F,
    pub vars: Vec<Var>,
    pub names: Vec<String>,
    pub equations: Vec<Polynomial<F>>,
}

impl<F: Field> EquationSystem<F> {
    pub fn new(field: F, vars: Vec<Var>, names: Vec<String>, equations: Vec<Polynomial<F>>) -> Self {
        debug_assert_eq!(vars.len(), names.len());
        EquationSystem { field, vars, names, equations }
    }

    pub fn from_flattened(s: &FlattenedSystem<F>) -> Self {
        let vars = s.unknown_vars();
        let names = vars.iter().map(|&v| s.registry.name(v).to_string()).collect();
        EquationSystem::new(s.field.clone(), vars, names, s.polys())
    }

    pub fn prefix(&self, count: usize) -> Self {
        let mut out = self.clone();
        out.equations.truncate(count);
        out
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn assignment(&self, values: &[F::Elem]) -> HashMap<Var, F::Elem> {
        self.vars.iter().copied().zip(values.iter().cloned()).collect()
    }

    /// Index of the first equation not vanishing at `values`, if any.
    pub fn first_violation(&self, values: &[F::Elem]) -> Result<Option<usize>, PolyError> {
        let a = self.assignment(values);
        for (i, eq) in self.equations.iter().enumerate() {
            if !num_traits::Zero::is_zero(&eq.evaluate_map(&a)?) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_solution(&self, values: &[F::Elem]) -> bool {
        values.len() == self.vars.len() && matches!(self.first_violation(values), Ok(None))
    }
}

/// Why an unsatisfiability claim holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every assignment of the unknowns was ruled out.
    Exhausted,
    /// Gaussian elimination reduced equation `equation` (0-based) to `0 = c != 0`.
    InconsistentRow { equation: usize },
    /// A projection set of the countable system became empty.
    EmptyProjection,
    /// Branching over complete candidate sets (rational roots, finite fields) failed everywhere.
    CompleteBranching,
    /// All lower-order solutions were tried and none extends.
    LevelsExhausted { level: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<E> {
    /// Satisfying assignments (aligned with the report's variables) and, for
    /// linear systems, the positions of free unknowns.
    Sat { solutions: Vec<Vec<E>>, free: Vec<usize> },
    UnsatAtPrefix { prefix: usize, certificate: Certificate },
    Inconclusive { reason: String },
}

impl<E> Outcome<E> {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Outcome::UnsatAtPrefix { .. })
    }

    pub fn unsat_prefix(&self) -> Option<usize> {
        match self {
            Outcome::UnsatAtPrefix { prefix, .. } => Some(*prefix),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub branches: u64,
    /// Wall time; kept out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.branches += other.branches;
        self.elapsed += other.elapsed;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport<E> {
    pub vars: Vec<Var>,
    pub names: Vec<String>,
    pub outcome: Outcome<E>,
    pub stats: SearchStats,
    pub notes: Vec<String>,
}

impl<E: Clone> SolveReport<E> {
    pub fn first_solution(&self) -> Option<&[E]> {
        match &self.outcome {
            Outcome::Sat { solutions, .. } => solutions.first().map(Vec::as_slice),
            _ => None,
        }
    }

    pub fn first_assignment(&self) -> Option<HashMap<Var, E>> {
        self.first_solution()
            .map(|s| self.vars.iter().copied().zip(s.iter().cloned()).collect())
    }
}

/// Builds a report, re-verifying every claimed solution against `system`.
pub(crate) fn finish<F: Field>(
    system: &EquationSystem<F>,
    outcome: Outcome<F::Elem>,
    stats: SearchStats,
) -> SolveReport<F::Elem> {
    let outcome = match outcome {
        Outcome::Sat { solutions, free } => {
            if let Some(bad) = solutions.iter().position(|s| !system.is_solution(s)) {
                Outcome::Inconclusive { reason: format!("solution {bad} failed verification") }
            } else {
                Outcome::Sat { solutions, free }
            }
        }
        other => other,
    };
    SolveReport {
        vars: system.vars.clone(),
        names: system.names.clone(),
        outcome,
        stats,
        notes: Vec::new(),
    }
}

/// Smallest `N` in `1..=upper` with `unsat(N)`, given that `unsat(upper)` holds
/// and `unsat` is monotone. `unsat` returns `None` when it cannot decide.
pub(crate) fn minimal_unsat_prefix(
    upper: usize,
    mut unsat: impl FnMut(usize) -> Result<Option<bool>, SolveError>,
) -> Result<(usize, bool), SolveError> {
    // invariant: unsat(hi) is known true, prefixes <= lo are known (or assumed) sat
    let (mut lo, mut hi) = (0usize, upper);
    let mut exact = true;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match unsat(mid)? {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            None => {
                exact = false;
                lo = mid;
            }
        }
    }
    Ok((hi, exact))
}
