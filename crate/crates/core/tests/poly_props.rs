mod common;

use std::collections::HashMap;

use cjet_core::jets::{exponents_below, ConstraintSet};
use cjet_core::poly::{Polynomial, Var};
use cjet_core::{Field, PrimeField, Rationals};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

const INNER: [Var; 3] = [Var(0), Var(1), Var(2)];
const OUTER: [Var; 3] = [Var(3), Var(4), Var(5)];

fn random_sigma<F: Field>(rng: &mut ChaCha8Rng, field: &F, n: usize) -> HashMap<Var, Polynomial<F>> {
    INNER[..n].iter().map(|&v| (v, random_poly(rng, field, &OUTER[..n], 2, 3))).collect()
}

fn homomorphism<F: Field>(field: F, seed: u64) {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=3);
    let f = random_poly(&mut rng, &field, &INNER[..n], 4, 4);
    let g = random_poly(&mut rng, &field, &INNER[..n], 4, 4);
    let sigma = random_sigma(&mut rng, &field, n);
    let s = |p: &Polynomial<F>| p.substitute(&sigma).unwrap();
    assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g), "seed {seed}");
    assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g), "seed {seed}");
}

fn evaluation_composes<F: Field>(field: F, seed: u64) {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=3);
    let f = random_poly(&mut rng, &field, &INNER[..n], 4, 4);
    let sigma = random_sigma(&mut rng, &field, n);
    let point: HashMap<Var, F::Elem> = OUTER[..n].iter().map(|&v| (v, random_elem(&mut rng, &field))).collect();
    let lhs = f.substitute(&sigma).unwrap().evaluate_map(&point).unwrap();
    let composed: HashMap<Var, F::Elem> =
        sigma.iter().map(|(&v, p)| (v, p.evaluate_map(&point).unwrap())).collect();
    assert_eq!(lhs, f.evaluate_map(&composed).unwrap(), "seed {seed}");
}

fn reconstruction<F: Field>(field: F, seed: u64) {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=3);
    let vars: Vec<Var> = INNER[..n].iter().chain(&OUTER[..n]).copied().collect();
    let f = random_poly(&mut rng, &field, &vars, 4, 6);
    let is_series = |v: Var| INNER[..n].contains(&v);
    let mut sum = Polynomial::zero(&field);
    for beta in exponents_below(n, &ConstraintSet::full(n), 5) {
        let m = beta.to_monomial(&INNER[..n]);
        let coeff = f.coefficient_extract(&m, is_series).unwrap();
        sum = &sum + &(&coeff * &Polynomial::monomial(&field, m, field.one()));
    }
    assert_eq!(sum, f, "seed {seed}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn substitution_is_a_ring_homomorphism(seed in any::<u64>()) {
        homomorphism(Rationals, seed);
        homomorphism(PrimeField::new(2).unwrap(), seed);
        homomorphism(PrimeField::new(7).unwrap(), seed);
    }

    #[test]
    fn evaluation_after_substitution_composes(seed in any::<u64>()) {
        evaluation_composes(Rationals, seed);
        evaluation_composes(PrimeField::new(5).unwrap(), seed);
    }

    #[test]
    fn coefficients_reconstruct_the_polynomial(seed in any::<u64>()) {
        reconstruction(Rationals, seed);
        reconstruction(PrimeField::new(3).unwrap(), seed);
    }

    #[test]
    fn mixed_partials_commute_over_q(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = random_poly(&mut rng, &Rationals, &INNER, 4, 6);
        let i = INNER[rng.gen_range(0..3)];
        let j = INNER[rng.gen_range(0..3)];
        let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        prop_assert_eq!(
            f.partial_derivative(i, a).partial_derivative(j, b),
            f.partial_derivative(j, b).partial_derivative(i, a)
        );
    }

    #[test]
    fn pth_derivative_vanishes_in_characteristic_p(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let field = PrimeField::new(p).unwrap();
        let mut rng = rng(seed);
        let f = random_poly(&mut rng, &field, &INNER, 7, 6);
        let v = INNER[rng.gen_range(0..3)];
        prop_assert!(f.partial_derivative(v, p as u32).is_zero());
    }
}
