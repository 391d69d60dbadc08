#![allow(dead_code)]

use std::collections::HashMap;

use cjet_core::flatten::ConstrainedSystem;
use cjet_core::jets::{exponents_below, ConstraintSet, Exponent, Jet, SeriesLayout};
use cjet_core::poly::{Monomial, Polynomial, Var};
use cjet_core::Field;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integers, plus small fractions when the field is ℚ.
pub fn random_elem<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> F::Elem {
    let num = rng.gen_range(-3i64..=3);
    if field.characteristic() == 0 && rng.gen_bool(0.3) {
        let den = rng.gen_range(1i64..=3);
        return field.from_ratio(&BigInt::from(num), &BigInt::from(den)).unwrap();
    }
    field.from_i64(num)
}

pub fn random_nonzero<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> F::Elem {
    loop {
        let e = random_elem(rng, field);
        if !e.is_zero() {
            return e;
        }
    }
}

pub fn random_monomial(rng: &mut ChaCha8Rng, vars: &[Var], max_deg: u32) -> Monomial {
    let deg = rng.gen_range(0..=max_deg);
    let mut pairs = Vec::new();
    for _ in 0..deg {
        pairs.push((vars[rng.gen_range(0..vars.len())], 1));
    }
    Monomial::from_pairs(pairs)
}

/// Sparse polynomial in `vars` with at most `max_terms` terms of degree at most `max_deg`.
pub fn random_poly<F: Field>(rng: &mut ChaCha8Rng, field: &F, vars: &[Var], max_deg: u32, max_terms: usize) -> Polynomial<F> {
    let terms = rng.gen_range(0..=max_terms);
    let mut p = Polynomial::zero(field);
    for _ in 0..terms {
        let m = random_monomial(rng, vars, max_deg);
        p.add_term(m, random_elem(rng, field));
    }
    p
}

pub fn random_constraint(rng: &mut ChaCha8Rng, n: usize) -> ConstraintSet {
    ConstraintSet::new((0..n).filter(|_| rng.gen_bool(0.6)), n).unwrap()
}

/// A random system with `m` unknowns in `n` series variables and `r` equations of degree at most `deg`.
pub fn random_system<F: Field>(rng: &mut ChaCha8Rng, field: &F, n: usize, m: usize, r: usize, deg: u32) -> ConstrainedSystem<F> {
    let (registry, layout) = ConstrainedSystem::<F>::standard_registry(n, m);
    let vars: Vec<Var> = layout.series.iter().chain(&layout.unknowns).copied().collect();
    let constraints = (0..m).map(|_| random_constraint(rng, n)).collect();
    let equations = (0..r).map(|_| random_poly(rng, field, &vars, deg, 4)).collect();
    ConstrainedSystem::new(field.clone(), registry, layout, constraints, equations).unwrap()
}

pub fn random_jet<F: Field>(rng: &mut ChaCha8Rng, field: &F, n: usize, j: &ConstraintSet, c: u32) -> Jet<F> {
    let mut coeffs: Vec<(Exponent, F::Elem)> = Vec::new();
    for e in exponents_below(n, j, c) {
        if rng.gen_bool(0.7) {
            coeffs.push((e, random_elem(rng, field)));
        }
    }
    Jet::new(field, n, j.clone(), c, coeffs).unwrap()
}

pub fn random_jets<F: Field>(rng: &mut ChaCha8Rng, sys: &ConstrainedSystem<F>, c: u32) -> Vec<Jet<F>> {
    sys.constraints.iter().map(|j| random_jet(rng, &sys.field, sys.n(), j, c)).collect()
}

/// `f(y)` computed by plain polynomial substitution and then cut to total
/// x-degree below `c`, with no jet arithmetic involved.
pub fn naive_substitute<F: Field>(f: &Polynomial<F>, layout: &SeriesLayout, ys: &[Jet<F>], c: u32) -> Jet<F> {
    let field = f.field();
    let sigma: HashMap<Var, Polynomial<F>> =
        layout.unknowns.iter().zip(ys).map(|(&v, y)| (v, y.to_polynomial(&layout.series))).collect();
    let full = f.substitute(&sigma).unwrap();
    let n = layout.n();
    let coeffs = full.terms().map(|(m, c)| (Exponent::from_monomial(m, &layout.series).unwrap(), c.clone()));
    Jet::new(field, n, ConstraintSet::full(n), c, coeffs).unwrap()
}

/// The polynomial `Σ coeffs·x^β` carried by a jet.
pub fn jet_poly<F: Field>(y: &Jet<F>, layout: &SeriesLayout) -> Polynomial<F> {
    y.to_polynomial(&layout.series)
}
