mod common;

use cjet_core::flatten::flatten;
use cjet_core::poly::{Polynomial, Var};
use cjet_core::solve::{
    decide_countable, lift_to, solve_branching, solve_exhaustive, solve_linear, BranchingOptions, CountableOptions,
    EquationSystem, ExhaustiveOptions, FlattenedStream, LiftOptions, Outcome, SolveReport,
};
use cjet_core::{Field, PrimeField, Rationals};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn vars(u: usize) -> Vec<Var> {
    (0..u as u32).map(Var).collect()
}

fn system<F: Field>(field: &F, u: usize, equations: Vec<Polynomial<F>>) -> EquationSystem<F> {
    EquationSystem::new(field.clone(), vars(u), (0..u).map(|i| format!("a{i}")).collect(), equations)
}

fn random_linear<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> EquationSystem<F> {
    let u = rng.gen_range(1..=6);
    let e = rng.gen_range(1..=6);
    let eqs = (0..e).map(|_| random_poly(rng, field, &vars(u), 1, 4)).collect();
    system(field, u, eqs)
}

fn random_nonlinear<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> EquationSystem<F> {
    let u = rng.gen_range(1..=5);
    let e = rng.gen_range(1..=5);
    let eqs = (0..e).map(|_| random_poly(rng, field, &vars(u), 3, 3)).collect();
    system(field, u, eqs)
}

fn verdict<E>(r: &SolveReport<E>) -> Option<bool> {
    match r.outcome {
        Outcome::Sat { .. } => Some(true),
        Outcome::UnsatAtPrefix { .. } => Some(false),
        Outcome::Inconclusive { .. } => None,
    }
}

/// Sat solutions check out; an unsat prefix is unsat and its predecessor is not.
fn check_report<F: Field>(s: &EquationSystem<F>, r: &SolveReport<F::Elem>) {
    match &r.outcome {
        Outcome::Sat { solutions, .. } => {
            assert!(!solutions.is_empty());
            for sol in solutions {
                assert!(s.is_solution(sol));
            }
        }
        Outcome::UnsatAtPrefix { prefix, .. } => {
            assert!(*prefix >= 1 && *prefix <= s.len());
            let exhaustive = |n: usize| verdict(&solve_exhaustive(&s.prefix(n), &ExhaustiveOptions::default()).unwrap());
            assert_eq!(exhaustive(*prefix), Some(false));
            if *prefix > 1 {
                assert_eq!(exhaustive(prefix - 1), Some(true));
            }
        }
        Outcome::Inconclusive { .. } => {}
    }
}

fn small_field(rng: &mut ChaCha8Rng) -> PrimeField {
    PrimeField::new(if rng.gen_bool(0.5) { 2 } else { 3 }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linear_agrees_with_exhaustive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = small_field(&mut rng);
        let s = random_linear(&mut rng, &field);
        let lin = solve_linear(&s).unwrap();
        let ex = solve_exhaustive(&s, &ExhaustiveOptions::default()).unwrap();
        prop_assert_eq!(verdict(&lin), verdict(&ex));
        prop_assert_eq!(lin.outcome.unsat_prefix(), ex.outcome.unsat_prefix());
        check_report(&s, &lin);
    }

    #[test]
    fn exhaustive_reports_verify(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = small_field(&mut rng);
        let s = random_nonlinear(&mut rng, &field);
        let all = rng.gen_bool(0.5);
        let r = solve_exhaustive(&s, &ExhaustiveOptions { all_solutions: all, ..ExhaustiveOptions::default() }).unwrap();
        prop_assert!(verdict(&r).is_some());
        check_report(&s, &r);
    }

    #[test]
    fn parallel_search_matches_sequential(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = PrimeField::new(3).unwrap();
        let s = random_nonlinear(&mut rng, &field);
        let one = solve_exhaustive(&s, &ExhaustiveOptions { jobs: 1, all_solutions: true, ..ExhaustiveOptions::default() }).unwrap();
        let many = solve_exhaustive(&s, &ExhaustiveOptions { jobs: 3, all_solutions: true, ..ExhaustiveOptions::default() }).unwrap();
        prop_assert_eq!(one.outcome, many.outcome);
    }

    #[test]
    fn branching_decides_linear_systems_over_q(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = random_linear(&mut rng, &Rationals);
        let lin = solve_linear(&s).unwrap();
        let br = solve_branching(&s, &BranchingOptions::default()).unwrap();
        prop_assert_eq!(verdict(&lin), verdict(&br));
        prop_assert_eq!(lin.outcome.unsat_prefix(), br.outcome.unsat_prefix());
        if let Some(sol) = br.first_solution() {
            prop_assert!(s.is_solution(sol));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn countable_decision_on_flattened_stream_agrees(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = small_field(&mut rng);
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let c = rng.gen_range(1..=3);
        let sys = random_system(&mut rng, &field, n, m, 1, 2);
        let flat = flatten(&sys, c).unwrap();
        let ex = solve_exhaustive(&EquationSystem::from_flattened(&flat), &ExhaustiveOptions::default()).unwrap();
        let opts = CountableOptions { n_max: flat.len() + 1, ..CountableOptions::default() };
        let dc = decide_countable(&FlattenedStream::new(&flat), &opts).unwrap();
        prop_assert_eq!(verdict(&dc), verdict(&ex));
        prop_assert_eq!(dc.outcome.unsat_prefix(), ex.outcome.unsat_prefix());
    }

    #[test]
    fn lifting_agrees_with_exhaustive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = small_field(&mut rng);
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let c = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=2);
        let sys = random_system(&mut rng, &field, n, m, r, 2);
        let flat = flatten(&sys, c).unwrap();
        let s = EquationSystem::from_flattened(&flat);
        let ex = solve_exhaustive(&s, &ExhaustiveOptions::default()).unwrap();
        let lift = lift_to(&sys, c, &LiftOptions::default()).unwrap();
        prop_assert_eq!(verdict(&lift), verdict(&ex));
        check_report(&s, &lift);
    }
}
