use std::time::Instant;

use serde::Serialize;

use super::exhaustive::{solve_exhaustive, ExhaustiveOptions};
use super::{EquationSystem, Outcome, SearchStats, SolveError};
use crate::field::Field;
use crate::flatten::{flatten, witness_branches, ConstrainedSystem, FlattenedSystem};

/// Parameters of a ν search: the system, the order profile `c`, the
/// reference order `C_max` and the largest ν tried.
#[derive(Debug, Clone)]
pub struct NuQuery<F: Field> {
    pub system: ConstrainedSystem<F>,
    pub orders: Vec<u32>,
    pub c_max: u32,
    pub nu_max: u32,
    /// Node budget for each exhaustive search.
    pub budget: u64,
    pub jobs: usize,
}

impl<F: Field> NuQuery<F> {
    pub fn new(system: ConstrainedSystem<F>, orders: Vec<u32>, c_max: u32, nu_max: u32) -> Self {
        NuQuery { system, orders, c_max, nu_max, budget: 50_000_000, jobs: 1 }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.orders.len() != self.system.m() {
            return Err(SolveError::InvalidQuery(format!(
                "{} orders given for {} unknowns",
                self.orders.len(),
                self.system.m()
            )));
        }
        let top = self.orders.iter().copied().max().unwrap_or(0);
        if top >= self.c_max {
            return Err(SolveError::InvalidQuery(format!("C_max = {} must exceed every order (max {top})", self.c_max)));
        }
        Ok(())
    }

    fn exhaustive(&self) -> ExhaustiveOptions {
        ExhaustiveOptions { budget: self.budget, all_solutions: false, jobs: self.jobs }
    }
}

/// Outcome of the defining check at one approximation order (ν, or τ for
/// differential systems).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuCheck {
    /// The approximation order checked.
    pub at: u32,
    /// Some jet tuple with the prescribed orders solves the system modulo `(x)^ν`.
    pub hypothesis_nonempty: bool,
    /// ν exceeds every prescribed order, so agreement modulo `(x)^ν` fixes the orders.
    pub orders_pinned: bool,
    /// A tuple with the prescribed orders solves the system modulo `(x)^{C_max}`.
    pub reference_solvable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuOutcome {
    /// Least order passing the check, if any up to the search limit does.
    pub value: Option<u32>,
    /// The reference order the result is relative to.
    pub relative_to: u32,
    pub checks: Vec<NuCheck>,
    pub stats: SearchStats,
}

/// Whether any system in `candidates` has a solution; `None` if a search ran
/// out of budget without finding one.
pub(crate) fn any_solvable<F: Field>(
    candidates: impl IntoIterator<Item = EquationSystem<F>>,
    opts: &ExhaustiveOptions,
    stats: &mut SearchStats,
) -> Result<Option<bool>, SolveError> {
    let mut undecided = false;
    for system in candidates {
        let report = solve_exhaustive(&system, opts)?;
        stats.absorb(&report.stats);
        match report.outcome {
            Outcome::Sat { .. } => return Ok(Some(true)),
            Outcome::UnsatAtPrefix { .. } => {}
            Outcome::Inconclusive { .. } => undecided = true,
        }
    }
    Ok(if undecided { None } else { Some(false) })
}

fn profile_systems<F: Field>(
    flat: &FlattenedSystem<F>,
    orders: &[u32],
) -> Result<Vec<EquationSystem<F>>, SolveError> {
    let targets: Vec<Option<u32>> = orders.iter().map(|&c| Some(c)).collect();
    witness_branches(flat.n(), &flat.meta.constraints, &targets)
        .iter()
        .map(|b| Ok(EquationSystem::from_flattened(&flat.impose_orders(b)?)))
        .collect()
}

fn undecided(what: &str) -> SolveError {
    SolveError::InvalidQuery(format!("search budget exhausted while deciding {what}"))
}

fn reference<F: Field>(q: &NuQuery<F>, stats: &mut SearchStats) -> Result<bool, SolveError> {
    let flat = flatten(&q.system, q.c_max)?;
    any_solvable(profile_systems(&flat, &q.orders)?, &q.exhaustive(), stats)?.ok_or_else(|| undecided("the reference system"))
}

fn check_with<F: Field>(q: &NuQuery<F>, nu: u32, reference_solvable: bool, stats: &mut SearchStats) -> Result<NuCheck, SolveError> {
    let top = q.orders.iter().copied().max().unwrap_or(0);
    // jets long enough to carry every prescribed order
    let level = nu.max(top + 1);
    let flat = flatten(&q.system, level)?;
    let hyp = flat.prefix(flat.equations_below(nu))?;
    let hypothesis_nonempty =
        any_solvable(profile_systems(&hyp, &q.orders)?, &q.exhaustive(), stats)?.ok_or_else(|| undecided("the hypothesis set"))?;
    let orders_pinned = nu > top;
    let holds = !hypothesis_nonempty || (orders_pinned && reference_solvable);
    Ok(NuCheck { at: nu, hypothesis_nonempty, orders_pinned, reference_solvable, holds })
}

/// The defining check at a single ν.
///
/// It holds when no jet tuple with the prescribed orders solves the system
/// modulo `(x)^ν`, or when ν exceeds every prescribed order and some tuple
/// with those orders solves it modulo `(x)^{C_max}`.
pub fn nu_check<F: Field>(q: &NuQuery<F>, nu: u32) -> Result<NuCheck, SolveError> {
    q.validate()?;
    if nu == 0 {
        return Err(SolveError::InvalidQuery("ν must be positive".into()));
    }
    let mut stats = SearchStats::default();
    let r = reference(q, &mut stats)?;
    check_with(q, nu, r, &mut stats)
}

/// Least ν in `1..=nu_max` passing [`nu_check`], relative to `C_max`.
pub fn nu_search<F: Field>(q: &NuQuery<F>) -> Result<NuOutcome, SolveError> {
    q.validate()?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let reference_solvable = reference(q, &mut stats)?;
    let mut checks = Vec::new();
    let mut nu = None;
    for v in 1..=q.nu_max {
        let c = check_with(q, v, reference_solvable, &mut stats)?;
        let holds = c.holds;
        checks.push(c);
        if holds {
            nu = Some(v);
            break;
        }
    }
    stats.elapsed = start.elapsed();
    Ok(NuOutcome { value: nu, relative_to: q.c_max, checks, stats })
}
