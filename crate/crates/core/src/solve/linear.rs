use std::collections::HashMap;
use std::time::Instant;

use num_traits::Zero;

use super::{finish, Certificate, EquationSystem, Outcome, SearchStats, SolveError, SolveReport};
use crate::field::Field;

/// Solution set of a consistent affine system: `particular + span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution<E> {
    pub particular: Vec<E>,
    /// Positions of the free unknowns, ascending.
    pub free: Vec<usize>,
    /// One kernel vector per free unknown, with a 1 in that unknown's slot.
    pub basis: Vec<Vec<E>>,
}

impl<E: Clone> LinearSolution<E> {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }
}

struct Row<E> {
    coeffs: Vec<E>,
    rhs: E,
}

/// Exact Gaussian elimination, one equation at a time.
///
/// Returns `Err(k)` when equation `k` (0-based) is the first one inconsistent
/// with its predecessors.
pub fn linear_solve<F: Field>(
    system: &EquationSystem<F>,
) -> Result<Result<LinearSolution<F::Elem>, usize>, SolveError> {
    let f = &system.field;
    let u = system.vars.len();
    let col: HashMap<_, _> = system.vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // rows kept in reduced echelon form, keyed by pivot column
    let mut rows: Vec<(usize, Row<F::Elem>)> = Vec::new();
    let mut pivot_row: Vec<Option<usize>> = vec![None; u];

    for (k, eq) in system.equations.iter().enumerate() {
        let (lin, constant) = eq.affine_parts().ok_or(SolveError::NotLinear(k))?;
        let mut coeffs = vec![f.zero(); u];
        for (v, c) in lin {
            let i = *col.get(&v).ok_or(SolveError::NotLinear(k))?;
            coeffs[i] = f.add(&coeffs[i], &c);
        }
        let mut row = Row { coeffs, rhs: f.neg(&constant) };
        for (p, r) in &rows {
            let factor = row.coeffs[*p].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, b) in row.coeffs.iter_mut().zip(&r.coeffs) {
                *a = f.sub(a, &f.mul(&factor, b));
            }
            row.rhs = f.sub(&row.rhs, &f.mul(&factor, &r.rhs));
        }
        // pivot on the last unknown so earlier (lower-order) unknowns stay free
        let Some(p) = row.coeffs.iter().rposition(|c| !c.is_zero()) else {
            if row.rhs.is_zero() {
                continue;
            }
            return Ok(Err(k));
        };
        let inv = f.inv(&row.coeffs[p])?;
        for a in row.coeffs.iter_mut() {
            *a = f.mul(a, &inv);
        }
        row.rhs = f.mul(&row.rhs, &inv);
        for (_, r) in rows.iter_mut() {
            let factor = r.coeffs[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, b) in r.coeffs.iter_mut().zip(&row.coeffs) {
                *a = f.sub(a, &f.mul(&factor, b));
            }
            r.rhs = f.sub(&r.rhs, &f.mul(&factor, &row.rhs));
        }
        pivot_row[p] = Some(rows.len());
        rows.push((p, row));
    }

    let free: Vec<usize> = (0..u).filter(|&i| pivot_row[i].is_none()).collect();
    let mut particular = vec![f.zero(); u];
    for (p, r) in &rows {
        particular[*p] = r.rhs.clone();
    }
    let basis = free
        .iter()
        .map(|&j| {
            let mut v = vec![f.zero(); u];
            v[j] = f.one();
            for (p, r) in &rows {
                v[*p] = f.neg(&r.coeffs[j]);
            }
            v
        })
        .collect();
    Ok(Ok(LinearSolution { particular, free, basis }))
}

/// Solves an affine system exactly. Free unknowns are set to zero in the
/// reported solution and listed in `free`.
pub fn solve_linear<F: Field>(system: &EquationSystem<F>) -> Result<SolveReport<F::Elem>, SolveError> {
    let start = Instant::now();
    let outcome = match linear_solve(system)? {
        Ok(sol) => Outcome::Sat { solutions: vec![sol.particular], free: sol.free },
        Err(k) => Outcome::UnsatAtPrefix { prefix: k + 1, certificate: Certificate::InconsistentRow { equation: k } },
    };
    let stats = SearchStats { nodes: system.len() as u64, branches: 0, elapsed: start.elapsed() };
    Ok(finish(system, outcome, stats))
}
