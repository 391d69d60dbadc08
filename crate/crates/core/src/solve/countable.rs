use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;

use super::{finish, Certificate, EquationSystem, Outcome, SearchStats, SolveError, SolveReport};
use crate::field::Field;
use crate::flatten::FlattenedSystem;
use crate::poly::{Polynomial, Var};

/// A countable list of equations `P_1, P_2, ...` in coordinates `x_1, x_2, ...`,
/// where `Var(j)` stands for `x_{j+1}`.
pub trait EquationGenerator {
    type F: Field;

    fn field(&self) -> &Self::F;

    /// `P_n` for `n >= 1`; `None` once a finite system has run out.
    fn equation(&self, n: usize) -> Option<Polynomial<Self::F>>;

    fn var_name(&self, j: usize) -> String {
        format!("x{}", j + 1)
    }
}

/// A finite system given by its equations.
#[derive(Debug, Clone)]
pub struct ListGenerator<F: Field> {
    pub field: F,
    pub equations: Vec<Polynomial<F>>,
}

impl<F: Field> ListGenerator<F> {
    pub fn new(field: F, equations: Vec<Polynomial<F>>) -> Self {
        ListGenerator { field, equations }
    }
}

impl<F: Field> EquationGenerator for ListGenerator<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.field
    }

    fn equation(&self, n: usize) -> Option<Polynomial<F>> {
        n.checked_sub(1).and_then(|i| self.equations.get(i).cloned())
    }
}

type MakeEquation<F> = Arc<dyn Fn(&F, usize) -> Polynomial<F> + Send + Sync>;

/// Equations produced by a closure, optionally stopping after `limit`.
#[derive(Clone)]
pub struct FnGenerator<F: Field> {
    field: F,
    limit: Option<usize>,
    make: MakeEquation<F>,
}

impl<F: Field> FnGenerator<F> {
    pub fn new(field: F, limit: Option<usize>, make: impl Fn(&F, usize) -> Polynomial<F> + Send + Sync + 'static) -> Self {
        FnGenerator { field, limit, make: Arc::new(make) }
    }
}

impl<F: Field> std::fmt::Debug for FnGenerator<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnGenerator").field("field", &self.field).field("limit", &self.limit).finish()
    }
}

impl<F: Field> EquationGenerator for FnGenerator<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.field
    }

    fn equation(&self, n: usize) -> Option<Polynomial<F>> {
        if n == 0 || self.limit.is_some_and(|l| n > l) {
            return None;
        }
        Some((self.make)(&self.field, n))
    }
}

/// The first `len` equations of another generator.
#[derive(Debug, Clone)]
pub struct Truncated<G> {
    pub inner: G,
    pub len: usize,
}

impl<G: EquationGenerator> EquationGenerator for Truncated<G> {
    type F = G::F;

    fn field(&self) -> &G::F {
        self.inner.field()
    }

    fn equation(&self, n: usize) -> Option<Polynomial<G::F>> {
        if n > self.len {
            None
        } else {
            self.inner.equation(n)
        }
    }

    fn var_name(&self, j: usize) -> String {
        self.inner.var_name(j)
    }
}

/// The equations of a flattened system as a finite generator, its unknowns
/// renumbered as coordinates in table order.
#[derive(Debug, Clone)]
pub struct FlattenedStream<F: Field> {
    list: ListGenerator<F>,
    names: Vec<String>,
}

impl<F: Field> FlattenedStream<F> {
    pub fn new(flat: &FlattenedSystem<F>) -> Self {
        let vars = flat.unknown_vars();
        let position = |v: Var| Var(vars.iter().position(|&w| w == v).expect("unknown") as u32);
        let equations = flat.equations.iter().map(|e| e.poly.rename(position)).collect();
        let names = vars.iter().map(|&v| flat.registry.name(v).to_string()).collect();
        FlattenedStream { list: ListGenerator::new(flat.field.clone(), equations), names }
    }
}

impl<F: Field> EquationGenerator for FlattenedStream<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.list.field
    }

    fn equation(&self, n: usize) -> Option<Polynomial<F>> {
        self.list.equation(n)
    }

    fn var_name(&self, j: usize) -> String {
        self.names.get(j).cloned().unwrap_or_else(|| format!("x{}", j + 1))
    }
}

/// The first `len` equations of `gen` (fewer if it runs out) over the
/// coordinates they use.
pub fn generator_prefix<G: EquationGenerator>(gen: &G, len: usize) -> EquationSystem<G::F> {
    let equations: Vec<_> = (1..=len).map_while(|n| gen.equation(n)).collect();
    let dim = equations.iter().flat_map(|e| e.vars()).map(|v| v.index() + 1).max().unwrap_or(0);
    EquationSystem::new(
        gen.field().clone(),
        (0..dim as u32).map(Var).collect(),
        (0..dim).map(|j| gen.var_name(j)).collect(),
        equations,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountableOptions {
    /// Number of equations to examine.
    pub n_max: usize,
    /// Maximum number of candidate tuples generated while building `V_N`.
    pub budget: u64,
}

impl Default for CountableOptions {
    fn default() -> Self {
        CountableOptions { n_max: 24, budget: 10_000_000 }
    }
}

/// The sets `C_N^k = π_k(V_N)` for `N = 1, 2, ...`; `sets[N - 1]` is `C_N^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionChain<E> {
    pub k: usize,
    pub sets: Vec<BTreeSet<Vec<E>>>,
    /// First `N` from which the computed sets stay constant.
    pub stabilized_at: Option<usize>,
    /// Whether the generator ran out of equations.
    pub exhausted: bool,
}

impl<E: Ord> ProjectionChain<E> {
    pub fn is_decreasing(&self) -> bool {
        self.sets.windows(2).all(|w| w[1].is_subset(&w[0]))
    }

    pub fn last(&self) -> Option<&BTreeSet<Vec<E>>> {
        self.sets.last()
    }
}

/// Solution sets `V_N` built one equation at a time.
struct Varieties<'a, G: EquationGenerator> {
    gen: &'a G,
    elements: Vec<<G::F as Field>::Elem>,
    budget: u64,
    spent: u64,
    equations: Vec<Polynomial<G::F>>,
    /// `D_N`: number of coordinates used by the equations so far.
    dim: usize,
    /// `V_N` in lexicographic order of the element listing.
    points: Vec<Vec<<G::F as Field>::Elem>>,
}

enum Advance {
    Next,
    Exhausted,
    OutOfBudget,
}

impl<'a, G: EquationGenerator> Varieties<'a, G> {
    fn new(gen: &'a G, budget: u64) -> Result<Self, SolveError> {
        let elements = gen.field().elements().map_err(|_| SolveError::FieldNotFinite)?;
        Ok(Varieties { gen, elements, budget, spent: 0, equations: Vec::new(), dim: 0, points: vec![Vec::new()] })
    }

    fn advance(&mut self) -> Advance {
        let n = self.equations.len() + 1;
        let Some(eq) = self.gen.equation(n) else { return Advance::Exhausted };
        let dim = eq.vars().iter().map(|v| v.index() + 1).max().unwrap_or(0).max(self.dim);
        let grow = (self.elements.len() as u64).checked_pow((dim - self.dim) as u32);
        let cost = grow.and_then(|g| g.checked_mul(self.points.len() as u64));
        match cost {
            Some(c) if self.spent + c <= self.budget => self.spent += c,
            _ => return Advance::OutOfBudget,
        }
        let mut next = Vec::new();
        for point in &self.points {
            let mut ext = point.clone();
            ext.resize(dim, self.elements[0].clone());
            let mut digits = vec![0usize; dim - self.dim];
            loop {
                for (slot, &t) in ext[self.dim..].iter_mut().zip(&digits) {
                    *slot = self.elements[t].clone();
                }
                let value = eq.evaluate(|v| ext.get(v.index()).cloned()).expect("coordinates cover the equation");
                if value.is_zero() {
                    next.push(ext.clone());
                }
                let Some(i) = digits.iter().rposition(|&t| t + 1 < self.elements.len()) else { break };
                digits[i] += 1;
                for t in &mut digits[i + 1..] {
                    *t = 0;
                }
            }
        }
        self.points = next;
        self.dim = dim;
        self.equations.push(eq);
        Advance::Next
    }

    fn project(&self, k: usize) -> BTreeSet<Vec<<G::F as Field>::Elem>> {
        project(&self.points, self.dim, k, &self.elements)
    }
}

/// `π_k(V)` for `V` in `dim` coordinates, padding with every value beyond `dim`.
fn project<E: Clone + Ord>(points: &[Vec<E>], dim: usize, k: usize, elements: &[E]) -> BTreeSet<Vec<E>> {
    let mut out: BTreeSet<Vec<E>> = points.iter().map(|p| p[..k.min(dim)].to_vec()).collect();
    for _ in dim..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                elements.iter().map(move |e| {
                    let mut q = p.clone();
                    q.push(e.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn stabilization<E: Eq>(sets: &[E], exhausted: bool) -> Option<usize> {
    let last = sets.last()?;
    let start = sets.iter().rposition(|s| s != last).map_or(0, |i| i + 1);
    (exhausted || sets.len() - start >= 2).then_some(start + 1)
}

/// Computes `C_N^k` for `N = 1..=n_max` by enumerating `V_N` in the `D_N`
/// coordinates used so far.
///
/// A chain counts as stabilized when its computed tail is constant over at
/// least two steps, or when the generator ran out of equations.
pub fn projection_chain<G: EquationGenerator>(
    gen: &G,
    k: usize,
    n_max: usize,
    budget: u64,
) -> Result<ProjectionChain<<G::F as Field>::Elem>, SolveError> {
    let mut v = Varieties::new(gen, budget)?;
    let mut sets: Vec<BTreeSet<Vec<_>>> = Vec::new();
    let mut exhausted = false;
    while sets.len() < n_max {
        match v.advance() {
            Advance::Next => {}
            Advance::Exhausted => {
                exhausted = true;
                break;
            }
            Advance::OutOfBudget => return Err(SolveError::BudgetExceeded(budget)),
        }
        let c = v.project(k);
        assert!(sets.last().is_none_or(|prev| c.is_subset(prev)), "projection chain must decrease");
        sets.push(c);
    }
    let stabilized_at = stabilization(&sets, exhausted);
    Ok(ProjectionChain { k, sets, stabilized_at, exhausted })
}

/// Decides a countable system over a finite field from its first `n_max`
/// equations.
///
/// `UnsatAtPrefix(N)` is reported for the first `N` with `V_N` empty. A finite
/// generator that runs out with `V_N` nonempty is Sat with the
/// lexicographically first point. Otherwise a coordinate sequence is built
/// greedily through the chains `C^k` that have stabilized, checking at each
/// step that the chosen prefix extends; any failed check gives `Inconclusive`.
pub fn decide_countable<G: EquationGenerator>(
    gen: &G,
    opts: &CountableOptions,
) -> Result<SolveReport<<G::F as Field>::Elem>, SolveError> {
    let start = Instant::now();
    let field = gen.field().clone();
    let mut v = Varieties::new(gen, opts.budget)?;
    let mut notes = Vec::new();
    // (D_N, V_N) for every N, needed to locate stable chains
    let mut history = Vec::new();
    let mut exhausted = false;
    let mut out_of_budget = false;
    let mut empty_at = None;
    while v.equations.len() < opts.n_max {
        match v.advance() {
            Advance::Next => {}
            Advance::Exhausted => {
                exhausted = true;
                break;
            }
            Advance::OutOfBudget => {
                out_of_budget = true;
                break;
            }
        }
        if v.points.is_empty() {
            empty_at = Some(v.equations.len());
            break;
        }
        history.push((v.dim, v.points.clone()));
    }
    let stats = SearchStats { nodes: v.spent, branches: v.equations.len() as u64, elapsed: start.elapsed() };
    let dim = v.dim;
    let names: Vec<String> = (0..dim).map(|j| gen.var_name(j)).collect();
    let vars: Vec<Var> = (0..dim as u32).map(Var).collect();
    let system = EquationSystem::new(field.clone(), vars, names, v.equations.clone());

    let outcome = if let Some(n) = empty_at {
        Outcome::UnsatAtPrefix { prefix: n, certificate: Certificate::EmptyProjection }
    } else if out_of_budget {
        Outcome::Inconclusive { reason: format!("enumeration budget {} exhausted", opts.budget) }
    } else if exhausted {
        notes.push(format!("finite system of {} equations", v.equations.len()));
        Outcome::Sat { solutions: vec![v.points[0].clone()], free: Vec::new() }
    } else {
        // a coordinate is usable once its chain C_N^k has a constant tail of length >= 2
        let mut usable = 0;
        for k in 1..=dim {
            let chain: Vec<BTreeSet<Vec<_>>> =
                history.iter().map(|(d, points)| project(points, *d, k, &v.elements)).collect();
            if stabilization(&chain, false).is_none() {
                break;
            }
            usable = k;
        }
        let stable: Vec<BTreeSet<Vec<_>>> = (1..=usable).map(|k| v.project(k)).collect();
        let mut point: Vec<_> = Vec::new();
        let mut ok = usable > 0;
        for k in 1..=usable {
            let choice = v.elements.iter().find(|e| {
                let mut p = point.clone();
                p.push((*e).clone());
                // the prefix must lie in C^k and extend into C^{k+1}
                stable[k - 1].contains(&p)
                    && (k == usable || stable[k].iter().any(|q| q[..k] == p[..]))
            });
            match choice {
                Some(e) => point.push(e.clone()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            notes.push(format!(
                "coordinates x1..x{usable} chosen from chains stable up to N = {}; later equations are not examined",
                v.equations.len()
            ));
            let usable_eqs: Vec<_> =
                v.equations.iter().filter(|e| e.vars().iter().all(|w| w.index() < usable)).cloned().collect();
            let sub = EquationSystem::new(
                field,
                system.vars[..usable].to_vec(),
                system.names[..usable].to_vec(),
                usable_eqs,
            );
            let mut report = finish(&sub, Outcome::Sat { solutions: vec![point], free: Vec::new() }, stats);
            report.notes = notes;
            return Ok(report);
        }
        Outcome::Inconclusive { reason: format!("projection chains did not stabilize within {} equations", opts.n_max) }
    };
    let mut report = finish(&system, outcome, stats);
    report.notes = notes;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::Monomial;

    fn x(f: &PrimeField, j: u32) -> Polynomial<PrimeField> {
        Polynomial::var(f, Var(j))
    }

    #[test]
    fn units_of_f3_stabilize_immediately() {
        let f = PrimeField::new(3).unwrap();
        let g = FnGenerator::new(f, None, |f, n| &(&x(f, 0) * &x(f, n as u32)) - &Polynomial::one(f));
        let chain = projection_chain(&g, 1, 6, 1_000_000).unwrap();
        assert!(chain.is_decreasing());
        assert!(chain.sets.iter().all(|s| s == &BTreeSet::from([vec![1], vec![2]])));
        assert_eq!(chain.stabilized_at, Some(1));
    }

    #[test]
    fn zero_equation_keeps_everything() {
        let f = PrimeField::new(5).unwrap();
        let g = ListGenerator::new(f, vec![Polynomial::zero(&f)]);
        let chain = projection_chain(&g, 1, 4, 1000).unwrap();
        assert_eq!(chain.sets, vec![(0..5).map(|a| vec![a]).collect::<BTreeSet<_>>()]);
        assert_eq!(chain.stabilized_at, Some(1));
    }

    #[test]
    fn idempotents_are_sat() {
        let f = PrimeField::new(2).unwrap();
        let g = FnGenerator::new(f, None, |f, n| {
            let v = x(f, n as u32 - 1);
            &(&v * &v) - &v
        });
        let r = decide_countable(&g, &CountableOptions { n_max: 8, ..Default::default() }).unwrap();
        assert!(r.outcome.is_sat(), "{:?}", r.outcome);
        assert!(r.first_solution().unwrap().iter().all(|&a| a == 0));
    }

    #[test]
    fn constant_first_equation() {
        let f = PrimeField::new(2).unwrap();
        let g = ListGenerator::new(f, vec![Polynomial::one(&f), Polynomial::monomial(&f, Monomial::var(Var(0)), 1)]);
        let r = decide_countable(&g, &CountableOptions::default()).unwrap();
        assert_eq!(r.outcome.unsat_prefix(), Some(1));
    }
}
