use std::collections::HashMap;
use std::ops::Range;
use std::time::Instant;

use super::exhaustive::{solve_exhaustive, ExhaustiveOptions};
use super::linear::linear_solve;
use super::rational::{solve_branching, BranchingOptions};
use super::{finish, minimal_unsat_prefix, Certificate, EquationSystem, Outcome, SearchStats, SolveError, SolveReport};
use crate::field::Field;
use crate::flatten::{flatten, ConstrainedSystem, EquationOrigin, FlattenedSystem, UnknownRef};
use crate::jets::Jet;
use crate::poly::Var;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftOptions {
    /// Maximum number of level candidates tried.
    pub budget: u64,
    /// Revisit earlier levels when a level has no extension.
    pub backtrack: bool,
    pub branching: BranchingOptions,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { budget: 1_000_000, backtrack: true, branching: BranchingOptions::default() }
    }
}

/// Equations and unknowns of one homogeneous degree.
struct Level {
    equations: Range<usize>,
    vars: Vec<Var>,
}

fn levels<F: Field>(flat: &FlattenedSystem<F>) -> Vec<Level> {
    let c = flat.order() as usize;
    let mut out: Vec<Level> = (0..c).map(|_| Level { equations: 0..0, vars: Vec::new() }).collect();
    for (k, eq) in flat.equations.iter().enumerate() {
        if let EquationOrigin::Coefficient { beta, .. } = &eq.origin {
            let r = &mut out[beta.degree() as usize].equations;
            if r.start == r.end {
                *r = k..k + 1;
            } else {
                r.end = k + 1;
            }
        }
    }
    for (v, r) in &flat.unknowns {
        if let UnknownRef::Coeff { exponent, .. } = r {
            out[exponent.degree() as usize].vars.push(*v);
        }
    }
    out
}

enum Step<E> {
    Found(HashMap<Var, E>),
    Dead,
    OutOfBudget,
}

struct Lifter<'a, F: Field> {
    flat: &'a FlattenedSystem<F>,
    levels: Vec<Level>,
    opts: &'a LiftOptions,
    stats: SearchStats,
    /// Cleared when some level's candidate list was not the full solution set.
    complete: bool,
    deepest_dead: Option<u32>,
}

impl<F: Field> Lifter<'_, F> {
    /// Every assignment of level `d`'s unknowns satisfying its equations, given
    /// the lower levels in `assign`, plus whether the list is complete.
    fn candidates(&mut self, d: usize, assign: &HashMap<Var, F::Elem>) -> Result<Option<(Vec<Vec<F::Elem>>, bool)>, SolveError> {
        let f = &self.flat.field;
        let level = &self.levels[d];
        let eqs: Vec<_> = self.flat.equations[level.equations.clone()].iter().map(|e| e.poly.partial_evaluate(assign)).collect();
        let names = vec![String::new(); level.vars.len()];
        let sub = EquationSystem::new(f.clone(), level.vars.clone(), names, eqs);
        let remaining = self.opts.budget.saturating_sub(self.stats.nodes);

        if sub.equations.iter().all(|e| e.is_affine()) {
            let sol = match linear_solve(&sub)? {
                Ok(sol) => sol,
                Err(_) => return Ok(Some((Vec::new(), true))),
            };
            let Ok(elements) = f.elements() else {
                let unique = sol.free.is_empty();
                return Ok(Some((vec![sol.particular], unique)));
            };
            let count = (elements.len() as u64).checked_pow(sol.free.len() as u32);
            if count.is_none_or(|c| c > remaining) {
                return Ok(None);
            }
            // particular + Σ t_j basis_j, t ranging lexicographically over F^dim
            let mut out = Vec::new();
            let mut digits = vec![0usize; sol.free.len()];
            loop {
                let mut v = sol.particular.clone();
                for (t, b) in digits.iter().zip(&sol.basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = f.add(x, &f.mul(&elements[*t], y));
                    }
                }
                out.push(v);
                let Some(i) = digits.iter().rposition(|&t| t + 1 < elements.len()) else { break };
                digits[i] += 1;
                for t in &mut digits[i + 1..] {
                    *t = 0;
                }
            }
            return Ok(Some((out, true)));
        }

        if f.is_finite() {
            let opts = ExhaustiveOptions { budget: remaining, all_solutions: true, jobs: 1 };
            let report = solve_exhaustive(&sub, &opts)?;
            self.stats.absorb(&report.stats);
            return Ok(match report.outcome {
                Outcome::Sat { solutions, .. } => Some((solutions, true)),
                Outcome::UnsatAtPrefix { .. } => Some((Vec::new(), true)),
                Outcome::Inconclusive { .. } => None,
            });
        }
        let report = solve_branching(&sub, &self.opts.branching)?;
        self.stats.absorb(&report.stats);
        Ok(match report.outcome {
            Outcome::Sat { solutions, .. } => Some((solutions, false)),
            Outcome::UnsatAtPrefix { .. } => Some((Vec::new(), true)),
            Outcome::Inconclusive { .. } => Some((Vec::new(), false)),
        })
    }

    fn lift(&mut self, d: usize, assign: &HashMap<Var, F::Elem>) -> Result<Step<F::Elem>, SolveError> {
        if d == self.levels.len() {
            return Ok(Step::Found(assign.clone()));
        }
        let Some((cands, complete)) = self.candidates(d, assign)? else {
            return Ok(Step::OutOfBudget);
        };
        self.complete &= complete;
        if cands.is_empty() {
            self.deepest_dead = Some(self.deepest_dead.map_or(d as u32, |x| x.max(d as u32)));
            return Ok(Step::Dead);
        }
        for cand in cands {
            self.stats.nodes += 1;
            self.stats.branches += 1;
            if self.stats.nodes > self.opts.budget {
                return Ok(Step::OutOfBudget);
            }
            let mut next = assign.clone();
            next.extend(self.levels[d].vars.iter().copied().zip(cand));
            match self.lift(d + 1, &next)? {
                Step::Dead if self.opts.backtrack => {}
                other => return Ok(other),
            }
        }
        Ok(Step::Dead)
    }
}

fn values_of<F: Field>(system: &EquationSystem<F>, assign: &HashMap<Var, F::Elem>) -> Vec<F::Elem> {
    system.vars.iter().map(|v| assign.get(v).cloned().unwrap_or_else(|| system.field.zero())).collect()
}

/// Decides solvability modulo `(x)^target` by lifting level by level from
/// order 0. With backtracking over a prime field this is a complete search
/// whose verdict matches exhaustive search on `flatten(sys, target)`.
pub fn lift_to<F: Field>(
    sys: &ConstrainedSystem<F>,
    target: u32,
    opts: &LiftOptions,
) -> Result<SolveReport<F::Elem>, SolveError> {
    let start = Instant::now();
    let flat = flatten(sys, target)?;
    let system = EquationSystem::from_flattened(&flat);
    let mut lifter = Lifter { flat: &flat, levels: levels(&flat), opts, stats: SearchStats::default(), complete: true, deepest_dead: None };
    let step = lifter.lift(0, &HashMap::new())?;
    let mut stats = lifter.stats;
    let mut notes = Vec::new();
    let outcome = match step {
        Step::Found(assign) => Outcome::Sat { solutions: vec![values_of(&system, &assign)], free: Vec::new() },
        Step::OutOfBudget => Outcome::Inconclusive { reason: format!("lifting budget {} exhausted", opts.budget) },
        Step::Dead if !(opts.backtrack && lifter.complete) => Outcome::Inconclusive {
            reason: "no extension found, but not every lower-order solution was tried".into(),
        },
        Step::Dead => {
            let level = lifter.deepest_dead.unwrap_or(0);
            let (prefix, exact) = minimal_unsat_prefix(system.len(), |n| {
                let r = solve_branching(&system.prefix(n), &opts.branching)?;
                stats.absorb(&r.stats);
                Ok(match r.outcome {
                    Outcome::Sat { .. } => Some(false),
                    Outcome::UnsatAtPrefix { .. } => Some(true),
                    Outcome::Inconclusive { .. } => None,
                })
            })?;
            if !exact {
                notes.push("some shorter prefixes could not be decided; the failing prefix may not be minimal".into());
            }
            Outcome::UnsatAtPrefix { prefix, certificate: Certificate::LevelsExhausted { level } }
        }
    };
    stats.elapsed = start.elapsed();
    let mut report = finish(&system, outcome, stats);
    report.notes = notes;
    Ok(report)
}

/// Extends jets solving `sys` modulo `(x)^c` to a solution modulo `(x)^target`,
/// keeping every coefficient below degree `c`. The report is over the
/// unknowns of `flatten(sys, target)`.
pub fn lift_order<F: Field>(
    sys: &ConstrainedSystem<F>,
    partial: &[Jet<F>],
    target: u32,
    opts: &LiftOptions,
) -> Result<SolveReport<F::Elem>, SolveError> {
    let start = Instant::now();
    let c = partial.first().map_or(0, Jet::order);
    if partial.len() != sys.m() || partial.iter().any(|y| y.order() != c) {
        return Err(SolveError::InvalidQuery(format!("expected {} jets of one common order", sys.m())));
    }
    if target <= c {
        return Err(SolveError::InvalidQuery(format!("target order {target} does not exceed {c}")));
    }
    if c > 0 {
        let lower = flatten(sys, c)?;
        if !lower.is_satisfied_by(&lower.assignment_of(partial))? {
            return Err(SolveError::NotAPartialSolution(c));
        }
    }
    let flat = flatten(sys, target)?;
    let system = EquationSystem::from_flattened(&flat);
    let mut assign = HashMap::new();
    for (v, r) in &flat.unknowns {
        if let UnknownRef::Coeff { series, exponent } = r {
            if exponent.degree() < c {
                assign.insert(*v, partial[*series].coefficient(exponent));
            }
        }
    }
    let mut lifter = Lifter { flat: &flat, levels: levels(&flat), opts, stats: SearchStats::default(), complete: true, deepest_dead: None };
    match lifter.lift(c as usize, &assign)? {
        Step::Found(assign) => {
            let mut stats = lifter.stats;
            stats.elapsed = start.elapsed();
            let outcome = Outcome::Sat { solutions: vec![values_of(&system, &assign)], free: Vec::new() };
            Ok(finish(&system, outcome, stats))
        }
        Step::Dead => Err(SolveError::DeadEnd { target: lifter.deepest_dead.unwrap_or(c) + 1 }),
        Step::OutOfBudget => Err(SolveError::BudgetExceeded(opts.budget)),
    }
}
