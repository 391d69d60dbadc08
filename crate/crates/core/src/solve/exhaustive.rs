use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use num_traits::Zero;

use super::{finish, minimal_unsat_prefix, Certificate, EquationSystem, Outcome, SearchStats, SolveError, SolveReport};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOptions {
    /// Maximum number of search nodes, summed over all workers.
    pub budget: u64,
    /// Collect every solution instead of stopping at the first.
    pub all_solutions: bool,
    /// Worker threads; the search space is split on the first unknown's value.
    pub jobs: usize,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        ExhaustiveOptions { budget: 50_000_000, all_solutions: false, jobs: 1 }
    }
}

/// An equation with its variables replaced by positions in the search order.
struct CompiledEq<E> {
    terms: Vec<(E, Vec<(usize, u32)>)>,
}

struct Plan<E> {
    /// `order[d]` is the index (into `system.vars`) assigned at depth `d`.
    order: Vec<usize>,
    equations: Vec<CompiledEq<E>>,
    /// Equations that become fully assigned once `d` unknowns are set.
    checks: Vec<Vec<usize>>,
}

fn plan<F: Field>(system: &EquationSystem<F>) -> Plan<F::Elem> {
    let u = system.vars.len();
    let pos_of = |v| system.vars.iter().position(|&w| w == v);
    // unknowns ordered by the first equation mentioning them
    let mut first_use = vec![usize::MAX; u];
    for (k, eq) in system.equations.iter().enumerate() {
        for v in eq.vars() {
            if let Some(i) = pos_of(v) {
                first_use[i] = first_use[i].min(k);
            }
        }
    }
    let mut order: Vec<usize> = (0..u).collect();
    order.sort_by_key(|&i| (first_use[i], i));
    let mut depth_of = vec![0; u];
    for (d, &i) in order.iter().enumerate() {
        depth_of[i] = d;
    }
    let mut checks = vec![Vec::new(); u + 1];
    let mut equations = Vec::with_capacity(system.equations.len());
    for (k, eq) in system.equations.iter().enumerate() {
        let mut last = 0;
        let terms = eq
            .terms()
            .map(|(m, c)| {
                let powers = m
                    .powers()
                    .iter()
                    .map(|&(v, e)| {
                        let d = depth_of[pos_of(v).expect("equation variable is an unknown")];
                        last = last.max(d + 1);
                        (d, e)
                    })
                    .collect();
                (c.clone(), powers)
            })
            .collect();
        checks[last].push(k);
        equations.push(CompiledEq { terms });
    }
    Plan { order, equations, checks }
}

struct Shared {
    nodes: AtomicU64,
    budget: u64,
    out_of_budget: AtomicBool,
    /// Lowest partition index that found a solution (first-solution mode).
    best: AtomicUsize,
}

struct Worker<'a, F: Field> {
    field: &'a F,
    plan: &'a Plan<F::Elem>,
    elements: &'a [F::Elem],
    shared: &'a Shared,
    all: bool,
    partition: usize,
    values: Vec<F::Elem>,
    solutions: Vec<Vec<F::Elem>>,
}

impl<F: Field> Worker<'_, F> {
    fn eval(&self, k: usize) -> F::Elem {
        let f = self.field;
        let mut acc = f.zero();
        for (c, powers) in &self.plan.equations[k].terms {
            let mut t = c.clone();
            for &(d, e) in powers {
                t = f.mul(&t, &f.pow(&self.values[d], e));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    fn consistent_at(&self, depth: usize) -> bool {
        self.plan.checks[depth].iter().all(|&k| self.eval(k).is_zero())
    }

    fn should_stop(&self) -> bool {
        if self.shared.out_of_budget.load(Ordering::Relaxed) {
            return true;
        }
        !self.all && (!self.solutions.is_empty() || self.shared.best.load(Ordering::Relaxed) < self.partition)
    }

    fn tick(&mut self) -> bool {
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if total > self.shared.budget {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&mut self, depth: usize) {
        if !self.tick() || self.should_stop() {
            return;
        }
        if !self.consistent_at(depth) {
            return;
        }
        if depth == self.plan.order.len() {
            self.solutions.push(self.values.clone());
            if !self.all {
                self.shared.best.fetch_min(self.partition, Ordering::Relaxed);
            }
            return;
        }
        for e in self.elements {
            self.values[depth] = e.clone();
            self.dfs(depth + 1);
            if self.should_stop() {
                return;
            }
        }
    }
}

enum SearchResult<E> {
    Found(Vec<Vec<E>>),
    Exhausted,
    OutOfBudget,
}

fn search<F: Field>(
    system: &EquationSystem<F>,
    elements: &[F::Elem],
    opts: &ExhaustiveOptions,
    stats: &mut SearchStats,
) -> SearchResult<F::Elem> {
    let plan = plan(system);
    let u = plan.order.len();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget: opts.budget,
        out_of_budget: AtomicBool::new(false),
        best: AtomicUsize::new(usize::MAX),
    };
    let new_worker = |partition| Worker {
        field: &system.field,
        plan: &plan,
        elements,
        shared: &shared,
        all: opts.all_solutions,
        partition,
        values: vec![system.field.zero(); u],
        solutions: Vec::new(),
    };

    // solutions in search order, tagged by partition
    let mut found: Vec<(usize, Vec<Vec<F::Elem>>)> = Vec::new();
    if opts.jobs <= 1 || u == 0 {
        let mut w = new_worker(0);
        w.dfs(0);
        found.push((0, w.solutions));
    } else {
        let root = new_worker(0);
        if root.consistent_at(0) {
            let jobs = opts.jobs.min(elements.len());
            let results = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs)
                    .map(|t| {
                        let new_worker = &new_worker;
                        scope.spawn(move || {
                            let mut out = Vec::new();
                            for p in (t..elements.len()).step_by(jobs) {
                                let mut w = new_worker(p);
                                w.values[0] = elements[p].clone();
                                w.dfs(1);
                                out.push((p, w.solutions));
                            }
                            out
                        })
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect::<Vec<_>>()
            });
            found = results;
            found.sort_by_key(|(p, _)| *p);
        }
    }
    stats.nodes += shared.nodes.load(Ordering::Relaxed);
    stats.branches += 1;

    let mut solutions: Vec<Vec<F::Elem>> = Vec::new();
    for (_, sols) in found {
        solutions.extend(sols);
        if !opts.all_solutions && !solutions.is_empty() {
            solutions.truncate(1);
            break;
        }
    }
    if shared.out_of_budget.load(Ordering::Relaxed) && (opts.all_solutions || solutions.is_empty()) {
        return SearchResult::OutOfBudget;
    }
    if solutions.is_empty() {
        return SearchResult::Exhausted;
    }
    // back from search order to the system's variable order
    let reordered = solutions
        .into_iter()
        .map(|s| {
            let mut v = vec![system.field.zero(); u];
            for (d, val) in s.into_iter().enumerate() {
                v[plan.order[d]] = val;
            }
            v
        })
        .collect();
    SearchResult::Found(reordered)
}

/// Complete enumeration over a finite field with consistency pruning.
///
/// Unknowns are assigned in the order of their first appearance; every
/// equation is checked as soon as all its unknowns are set. Values are tried
/// in the field's listing order, so the first solution found is the
/// lexicographically least one in search order.
pub fn solve_exhaustive<F: Field>(
    system: &EquationSystem<F>,
    opts: &ExhaustiveOptions,
) -> Result<SolveReport<F::Elem>, SolveError> {
    let elements = system.field.elements().map_err(|_| SolveError::FieldNotFinite)?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut notes = Vec::new();
    let outcome = match search(system, &elements, opts, &mut stats) {
        SearchResult::Found(solutions) => Outcome::Sat { solutions, free: Vec::new() },
        SearchResult::OutOfBudget => Outcome::Inconclusive {
            reason: format!("node budget {} exhausted", opts.budget),
        },
        SearchResult::Exhausted => {
            let first_only = ExhaustiveOptions { all_solutions: false, ..opts.clone() };
            let (prefix, exact) = minimal_unsat_prefix(system.len(), |n| {
                Ok(match search(&system.prefix(n), &elements, &first_only, &mut stats) {
                    SearchResult::Found(_) => Some(false),
                    SearchResult::Exhausted => Some(true),
                    SearchResult::OutOfBudget => None,
                })
            })?;
            if !exact {
                notes.push("budget ran out while minimizing the failing prefix; it may not be minimal".to_string());
            }
            Outcome::UnsatAtPrefix { prefix, certificate: Certificate::Exhausted }
        }
    };
    stats.elapsed = start.elapsed();
    let mut report = finish(system, outcome, stats);
    report.notes = notes;
    Ok(report)
}
