#![allow(dead_code)]

use std::collections::HashMap;

use cjet_cli::dsl::{CoeffDecl, DerivativeRef, Description, Expr, OrdDecl, OrdTarget, UnknownDecl};
use cjet_core::flatten::ConstrainedSystem;
use cjet_core::jets::{exponents_below, ConstraintSet, Exponent, Jet, SeriesLayout};
use cjet_core::poly::{Monomial, Polynomial, Var};
use cjet_core::{Field, FieldSpec};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> F::Elem {
    let num = rng.gen_range(-3i64..=3);
    if field.characteristic() == 0 && rng.gen_bool(0.3) {
        let den = rng.gen_range(1i64..=3);
        return field.from_ratio(&BigInt::from(num), &BigInt::from(den)).unwrap();
    }
    field.from_i64(num)
}

pub fn random_poly<F: Field>(rng: &mut ChaCha8Rng, field: &F, vars: &[Var], max_deg: u32, max_terms: usize) -> Polynomial<F> {
    let mut p = Polynomial::zero(field);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let deg = rng.gen_range(0..=max_deg);
        let pairs: Vec<(Var, u32)> = (0..deg).map(|_| (vars[rng.gen_range(0..vars.len())], 1)).collect();
        p.add_term(Monomial::from_pairs(pairs), random_elem(rng, field));
    }
    p
}

pub fn random_constraint(rng: &mut ChaCha8Rng, n: usize) -> ConstraintSet {
    ConstraintSet::new((0..n).filter(|_| rng.gen_bool(0.6)), n).unwrap()
}

/// `m` unknowns in `n` series variables, `r` equations of degree at most `deg`.
pub fn random_system<F: Field>(rng: &mut ChaCha8Rng, field: &F, n: usize, m: usize, r: usize, deg: u32) -> ConstrainedSystem<F> {
    let (registry, layout) = ConstrainedSystem::<F>::standard_registry(n, m);
    let vars: Vec<Var> = layout.series.iter().chain(&layout.unknowns).copied().collect();
    let constraints = (0..m).map(|_| random_constraint(rng, n)).collect();
    let equations = (0..r).map(|_| random_poly(rng, field, &vars, deg, 4)).collect();
    ConstrainedSystem::new(field.clone(), registry, layout, constraints, equations).unwrap()
}

pub fn random_jets<F: Field>(rng: &mut ChaCha8Rng, sys: &ConstrainedSystem<F>, c: u32) -> Vec<Jet<F>> {
    let n = sys.n();
    sys.constraints
        .iter()
        .map(|j| {
            let mut coeffs: Vec<(Exponent, F::Elem)> = Vec::new();
            for e in exponents_below(n, j, c) {
                if rng.gen_bool(0.7) {
                    coeffs.push((e, random_elem(rng, &sys.field)));
                }
            }
            Jet::new(&sys.field, n, j.clone(), c, coeffs).unwrap()
        })
        .collect()
}

/// `f(y)` by plain polynomial substitution, cut to total x-degree below `c`.
pub fn naive_substitute<F: Field>(f: &Polynomial<F>, layout: &SeriesLayout, ys: &[Jet<F>], c: u32) -> Jet<F> {
    let sigma: HashMap<Var, Polynomial<F>> =
        layout.unknowns.iter().zip(ys).map(|(&v, y)| (v, y.to_polynomial(&layout.series))).collect();
    let full = f.substitute(&sigma).unwrap();
    let n = layout.n();
    let coeffs = full.terms().map(|(m, a)| (Exponent::from_monomial(m, &layout.series).unwrap(), a.clone()));
    Jet::new(f.field(), n, ConstraintSet::full(n), c, coeffs).unwrap()
}

const VARS: [&str; 3] = ["x1", "x2", "t"];
const UNKNOWNS: [&str; 2] = ["Y1", "z"];

fn big(n: u32) -> BigInt {
    BigInt::from(n)
}

fn derivative_ref(m: usize) -> impl Strategy<Value = DerivativeRef> {
    (0..m, prop::collection::vec((0..VARS.len(), 1u32..3), 1..3)).prop_map(|(u, fs)| DerivativeRef {
        function: UNKNOWNS[u].to_string(),
        factors: fs.into_iter().map(|(v, k)| (VARS[v].to_string(), k)).collect(),
    })
}

/// Expressions over the first `m` unknowns and all of `VARS`; not checked
/// for meaning, only for syntax.
pub fn expr(m: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| Expr::Int(big(n))),
        (0u32..9, 1u32..9).prop_map(|(a, b)| Expr::Frac(big(a), big(b))),
        prop::sample::select(VARS.to_vec()).prop_map(|s| Expr::Name(s.to_string())),
        (0..m).prop_map(|u| Expr::Name(UNKNOWNS[u].to_string())),
        derivative_ref(m).prop_map(Expr::Derivative),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

pub fn description() -> impl Strategy<Value = Description> {
    (1usize..=2).prop_flat_map(|m| {
        let field = prop_oneof![
            Just(FieldSpec::Rational),
            prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| FieldSpec::PrimeField { modulus: p }),
        ];
        let supports = prop::collection::vec(prop::collection::vec(0..VARS.len(), 0..3), m);
        let ord = (prop_oneof![
            (0..m).prop_map(|u| OrdTarget::Unknown(UNKNOWNS[u].to_string())),
            derivative_ref(m).prop_map(OrdTarget::Derivative),
        ], 0u32..4)
            .prop_map(|(target, order)| OrdDecl { target, order });
        let coeff = (0..m, prop::collection::vec(0u32..3, VARS.len()), expr(m))
            .prop_map(|(u, exponent, value)| CoeffDecl { unknown: UNKNOWNS[u].to_string(), exponent, value });
        (
            field,
            supports,
            prop::collection::vec(expr(m), 1..4),
            prop::collection::vec(ord, 0..3),
            prop::collection::vec(coeff, 0..2),
            prop::option::of(0u32..8),
        )
            .prop_map(move |(field, supports, equations, ords, coeffs, order)| Description {
                field,
                vars: VARS.iter().map(|s| s.to_string()).collect(),
                unknowns: supports
                    .into_iter()
                    .enumerate()
                    .map(|(u, s)| UnknownDecl { name: UNKNOWNS[u].to_string(), support: s.into_iter().map(|v| VARS[v].to_string()).collect() })
                    .collect(),
                equations,
                ords,
                coeffs,
                order,
            })
    })
}
