use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::linear_solve;
use super::{finish, minimal_unsat_prefix, Certificate, EquationSystem, Outcome, SearchStats, SolveError, SolveReport};
use crate::field::Field;
use crate::poly::{Polynomial, Var};

/// Largest integer whose divisors are listed by trial division.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Rational roots of `Σ coeffs[k] t^k`, ascending, by the rational root theorem.
///
/// `None` if the polynomial is zero or its extreme coefficients are too large
/// to factor by trial division.
pub fn rational_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let top = coeffs.iter().rposition(|c| !c.is_zero())?;
    let low = coeffs.iter().position(|c| !c.is_zero())?;
    let mut roots = BTreeSet::new();
    if low > 0 {
        roots.insert(BigRational::zero());
    }
    let coeffs = &coeffs[low..=top];
    match coeffs.len() {
        1 => {}
        2 => {
            roots.insert(-&coeffs[0] / &coeffs[1]);
        }
        _ => {
            let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
            let ps = divisors(&ints[0])?;
            let qs = divisors(ints.last().expect("nonempty"))?;
            for p in &ps {
                for q in &qs {
                    for cand in [BigRational::new(p.clone(), q.clone()), BigRational::new(-p, q.clone())] {
                        let value = ints
                            .iter()
                            .rev()
                            .fold(BigRational::zero(), |acc, c| acc * &cand + BigRational::from_integer(c.clone()));
                        if value.is_zero() {
                            roots.insert(cand);
                        }
                    }
                }
            }
        }
    }
    Some(roots.into_iter().collect())
}

/// All rationals `a/b` in lowest terms with `max(|a|, b) <= height`, ordered by
/// height, then denominator, then numerator magnitude, positive first.
pub fn height_bounded_rationals(height: u64) -> Vec<BigRational> {
    let h = height as i64;
    let mut out: Vec<(i64, i64, i64, i64)> = Vec::new();
    for b in 1..=h.max(1) {
        for a in -h..=h {
            if a.gcd(&b) == 1 || a == 0 && b == 1 {
                out.push((a.abs().max(b), b, a.abs(), -a.signum()));
            }
        }
    }
    out.sort();
    out.dedup();
    out.into_iter()
        .map(|(_, b, a, s)| BigRational::new(BigInt::from(-s * a), BigInt::from(b)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingOptions {
    /// Height bound for candidate rationals when no complete candidate list exists.
    pub height_bound: u64,
    /// Maximum number of search nodes.
    pub budget: u64,
}

impl Default for BranchingOptions {
    fn default() -> Self {
        BranchingOptions { height_bound: 8, budget: 1_000_000 }
    }
}

enum Node<E> {
    Found(HashMap<Var, E>),
    Dead,
    /// Every explored branch died, but some candidate list was incomplete.
    Incomplete,
    OutOfBudget,
}

struct Brancher<'a, F: Field> {
    system: &'a EquationSystem<F>,
    opts: &'a BranchingOptions,
    nodes: u64,
    branches: u64,
}

impl<F: Field> Brancher<'_, F> {
    fn univariate_coeffs(p: &Polynomial<F>, v: Var) -> Vec<F::Elem> {
        let f = p.field();
        let mut coeffs = vec![f.zero(); p.degree_in(v) as usize + 1];
        for (m, c) in p.terms() {
            let k = m.exponent(v) as usize;
            coeffs[k] = f.add(&coeffs[k], c);
        }
        coeffs
    }

    fn search(&mut self, mut assign: HashMap<Var, F::Elem>) -> Result<Node<F::Elem>, SolveError> {
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Ok(Node::OutOfBudget);
        }
        let f = &self.system.field;
        let reduced = loop {
            let mut reduced = Vec::new();
            for eq in &self.system.equations {
                let r = eq.partial_evaluate(&assign);
                if r.is_constant() {
                    if !r.is_zero() {
                        return Ok(Node::Dead);
                    }
                } else {
                    reduced.push(r);
                }
            }
            let single = reduced.iter().find_map(|r| {
                let (lin, c) = r.affine_parts()?;
                match lin.as_slice() {
                    [(v, a)] => Some((*v, a.clone(), c)),
                    _ => None,
                }
            });
            match single {
                Some((v, a, c)) => {
                    assign.insert(v, f.neg(&f.div(&c, &a)?));
                }
                None => break reduced,
            }
        };

        if reduced.iter().all(Polynomial::is_affine) {
            let vars: Vec<Var> = reduced.iter().flat_map(|r| r.vars()).collect::<BTreeSet<_>>().into_iter().collect();
            let names = vec![String::new(); vars.len()];
            let sub = EquationSystem::new(f.clone(), vars.clone(), names, reduced);
            return Ok(match linear_solve(&sub)? {
                Ok(sol) => {
                    assign.extend(vars.into_iter().zip(sol.particular));
                    Node::Found(assign)
                }
                Err(_) => Node::Dead,
            });
        }

        let nonlinear: Vec<&Polynomial<F>> = reduced.iter().filter(|r| !r.is_affine()).collect();
        let (var, values, complete) = match nonlinear.iter().find(|r| r.vars().len() == 1) {
            Some(r) => {
                let v = *r.vars().iter().next().expect("one variable");
                match f.roots(&Self::univariate_coeffs(r, v)) {
                    Some(roots) => (v, roots, true),
                    None => {
                        let (vals, complete) = f.branch_values(self.opts.height_bound);
                        (v, vals, complete)
                    }
                }
            }
            None => {
                let v = *nonlinear[0].vars().iter().next().expect("nonconstant");
                let (vals, complete) = f.branch_values(self.opts.height_bound);
                (v, vals, complete)
            }
        };
        let mut incomplete = !complete;
        for val in values {
            self.branches += 1;
            let mut next = assign.clone();
            next.insert(var, val);
            match self.search(next)? {
                Node::Found(a) => return Ok(Node::Found(a)),
                Node::Dead => {}
                Node::Incomplete => incomplete = true,
                Node::OutOfBudget => return Ok(Node::OutOfBudget),
            }
        }
        Ok(if incomplete { Node::Incomplete } else { Node::Dead })
    }
}

fn run<F: Field>(
    system: &EquationSystem<F>,
    opts: &BranchingOptions,
    stats: &mut SearchStats,
) -> Result<Node<F::Elem>, SolveError> {
    let mut b = Brancher { system, opts, nodes: 0, branches: 0 };
    let node = b.search(HashMap::new())?;
    stats.nodes += b.nodes;
    stats.branches += b.branches;
    Ok(node)
}

/// Propagation and branching for nonlinear systems over any field.
///
/// Unknowns fixed by a one-variable affine equation are propagated; once all
/// remaining equations are affine the rest is solved by elimination.
/// Otherwise the solver branches on the roots of a univariate equation when
/// the field can list them (always over a prime field, by the rational root
/// theorem over ℚ), and on the field's branch values otherwise. Over ℚ the
/// latter are height-bounded, so exhausting them yields `Inconclusive`, not
/// `UnsatAtPrefix`.
pub fn solve_branching<F: Field>(
    system: &EquationSystem<F>,
    opts: &BranchingOptions,
) -> Result<SolveReport<F::Elem>, SolveError> {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut notes = Vec::new();
    let outcome = match run(system, opts, &mut stats)? {
        Node::Found(assign) => {
            let values = system.vars.iter().map(|v| assign.get(v).cloned().unwrap_or_else(|| system.field.zero())).collect();
            Outcome::Sat { solutions: vec![values], free: Vec::new() }
        }
        Node::Dead => {
            let (prefix, exact) = minimal_unsat_prefix(system.len(), |n| {
                Ok(match run(&system.prefix(n), opts, &mut stats)? {
                    Node::Found(_) => Some(false),
                    Node::Dead => Some(true),
                    Node::Incomplete | Node::OutOfBudget => None,
                })
            })?;
            if !exact {
                notes.push("some shorter prefixes could not be decided; the failing prefix may not be minimal".to_string());
            }
            Outcome::UnsatAtPrefix { prefix, certificate: Certificate::CompleteBranching }
        }
        Node::Incomplete => Outcome::Inconclusive {
            reason: format!("no solution among candidates of height <= {}", opts.height_bound),
        },
        Node::OutOfBudget => Outcome::Inconclusive { reason: format!("node budget {} exhausted", opts.budget) },
    };
    stats.elapsed = start.elapsed();
    let mut report = finish(system, outcome, stats);
    report.notes = notes;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn roots_by_rational_root_theorem() {
        // 2t^3 - 3t^2 - 3t + 2 = (t - 2)(2t - 1)(t + 1)
        let c = [q(2, 1), q(-3, 1), q(-3, 1), q(2, 1)];
        assert_eq!(rational_roots(&c).unwrap(), vec![q(-1, 1), q(1, 2), q(2, 1)]);
        assert_eq!(rational_roots(&[q(1, 1), q(0, 1), q(1, 1)]).unwrap(), Vec::<BigRational>::new());
        assert_eq!(rational_roots(&[q(0, 1), q(0, 1), q(1, 3)]).unwrap(), vec![q(0, 1)]);
        assert_eq!(rational_roots(&[q(0, 1)]), None);
    }

    #[test]
    fn height_bounded_listing() {
        let v = height_bounded_rationals(2);
        assert_eq!(v, vec![q(0, 1), q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn quadratic_over_q() {
        let f = Rationals;
        let z = Polynomial::var(&f, Var(0));
        let one = Polynomial::one(&f);
        let s = EquationSystem::new(f, vec![Var(0)], vec!["z".into()], vec![&(&z * &z) + &one]);
        let r = solve_branching(&s, &BranchingOptions::default()).unwrap();
        assert_eq!(r.outcome.unsat_prefix(), Some(1));

        let s = EquationSystem::new(f, vec![Var(0)], vec!["z".into()], vec![&(&z * &z) - &Polynomial::constant(&f, q(4, 9))]);
        let r = solve_branching(&s, &BranchingOptions::default()).unwrap();
        assert_eq!(r.first_solution().unwrap(), &[q(-2, 3)]);
    }

    #[test]
    fn multivariate_over_q_is_inconclusive_when_candidates_run_out() {
        let f = Rationals;
        let a = Polynomial::var(&f, Var(0));
        let b = Polynomial::var(&f, Var(1));
        // a^2 + b^2 = -1 has no rational solution, but proving it needs more than branching
        let e = &(&(&a * &a) + &(&b * &b)) + &Polynomial::one(&f);
        let s = EquationSystem::new(f, vec![Var(0), Var(1)], vec!["a".into(), "b".into()], vec![e]);
        let opts = BranchingOptions { height_bound: 2, ..Default::default() };
        let r = solve_branching(&s, &opts).unwrap();
        assert!(matches!(r.outcome, Outcome::Inconclusive { .. }));
    }

    #[test]
    fn complete_over_prime_fields() {
        let f = PrimeField::new(3).unwrap();
        let a = Polynomial::var(&f, Var(0));
        let b = Polynomial::var(&f, Var(1));
        let e1 = &(&a * &b) - &Polynomial::one(&f);
        let e2 = &a * &a;
        let s = EquationSystem::new(f, vec![Var(0), Var(1)], vec!["a".into(), "b".into()], vec![e1.clone()]);
        let r = solve_branching(&s, &BranchingOptions::default()).unwrap();
        assert!(r.outcome.is_sat());
        let s = EquationSystem::new(f, vec![Var(0), Var(1)], vec!["a".into(), "b".into()], vec![e1, e2]);
        let r = solve_branching(&s, &BranchingOptions::default()).unwrap();
        assert_eq!(r.outcome.unsat_prefix(), Some(2));
    }
}
