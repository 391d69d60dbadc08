mod common;

use cjet_core::flatten::{flatten, witness_branches, ConstrainedSystem, UnknownRef};
use cjet_core::jets::{jet_substitute, support_basis, Jet, Order};
use cjet_core::solve::{solve_exhaustive, EquationSystem, ExhaustiveOptions, Outcome};
use cjet_core::{Field, PrimeField, Rationals};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

/// A random system shifted so that `ys` solves it modulo `(x)^c`.
fn solved_system<F: Field>(rng: &mut ChaCha8Rng, field: &F, c: u32) -> (ConstrainedSystem<F>, Vec<Jet<F>>) {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=2);
    let r = rng.gen_range(1..=2);
    let mut sys = random_system(rng, field, n, m, r, 3);
    let ys = random_jets(rng, &sys, c);
    for f in sys.equations.iter_mut() {
        let residue = jet_substitute(f, &sys.layout, &ys, c).unwrap();
        *f = &*f - &jet_poly(&residue, &sys.layout);
    }
    (sys, ys)
}

fn soundness<F: Field>(field: F, seed: u64) {
    let mut rng = rng(seed);
    let c = rng.gen_range(1..=4);
    let (sys, ys) = solved_system(&mut rng, &field, c);
    let flat = flatten(&sys, c).unwrap();
    assert!(flat.is_satisfied_by(&flat.assignment_of(&ys)).unwrap(), "seed {seed}");
    for _ in 0..4 {
        let zs = random_jets(&mut rng, &sys, c);
        let a = flat.assignment_of(&zs);
        let realized = flat.realize(&a).unwrap();
        let zero = sys.equations.iter().all(|f| jet_substitute(f, &sys.layout, &realized, c).unwrap().is_zero());
        assert_eq!(flat.is_satisfied_by(&a).unwrap(), zero, "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn satisfaction_matches_vanishing_substitution(seed in any::<u64>()) {
        soundness(PrimeField::new(2).unwrap(), seed);
        soundness(PrimeField::new(3).unwrap(), seed);
        soundness(Rationals, seed);
    }

    #[test]
    fn realize_inverts_assignment(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let sys = random_system(&mut rng, &Rationals, 3, 2, 1, 2);
        let c = rng.gen_range(1..=5);
        let ys = random_jets(&mut rng, &sys, c);
        let flat = flatten(&sys, c).unwrap();
        prop_assert_eq!(flat.realize(&flat.assignment_of(&ys)).unwrap(), ys);
    }

    #[test]
    fn unknown_and_equation_counts(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=5);
        let sys = random_system(&mut rng, &PrimeField::new(5).unwrap(), n, m, r, 3);
        let flat = flatten(&sys, c).unwrap();
        let coeffs: usize = sys.constraints.iter().map(|j| support_basis(j, c, n).len()).sum();
        prop_assert_eq!(flat.unknowns.len(), coeffs);
        let betas = support_basis(&cjet_core::jets::ConstraintSet::full(n), c, n).len();
        prop_assert_eq!(flat.len(), r * betas);
    }

    #[test]
    fn lower_order_equations_are_a_prefix(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let sys = random_system(&mut rng, &Rationals, 2, 2, 2, 3);
        let c = rng.gen_range(1..=4);
        let low = flatten(&sys, c).unwrap();
        let high = flatten(&sys, c + 1).unwrap();
        prop_assert_eq!(high.equations_below(c), low.len());
        for (a, b) in low.equations.iter().zip(&high.equations) {
            prop_assert_eq!(&a.origin, &b.origin);
            prop_assert_eq!(a.poly.to_text(&low.registry), b.poly.to_text(&high.registry));
        }
    }

    #[test]
    fn imposed_orders_hold_in_every_solution(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = PrimeField::new(2).unwrap();
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let c = rng.gen_range(2..=3);
        let sys = random_system(&mut rng, &field, n, m, 1, 2);
        let flat = flatten(&sys, c).unwrap();
        let orders: Vec<Option<u32>> = (0..m).map(|_| if rng.gen_bool(0.8) { Some(rng.gen_range(0..c)) } else { None }).collect();
        let opts = ExhaustiveOptions { all_solutions: true, ..ExhaustiveOptions::default() };
        for branch in witness_branches(n, &sys.constraints, &orders) {
            let imposed = flat.impose_orders(&branch).unwrap();
            let system = EquationSystem::from_flattened(&imposed);
            let report = solve_exhaustive(&system, &opts).unwrap();
            let Outcome::Sat { solutions, .. } = report.outcome else { continue };
            for s in &solutions {
                let ys = imposed.realize(&system.assignment(s)).unwrap();
                for (y, o) in ys.iter().zip(&orders) {
                    if let Some(o) = o {
                        prop_assert_eq!(y.ord(), Order::Finite(*o));
                    }
                }
            }
        }
        let coefficients_only = flat.unknowns.iter().all(|(_, r)| matches!(r, UnknownRef::Coeff { .. }));
        prop_assert!(coefficients_only);
    }
}
