use cjet_core::fixtures::{enumeration_trap, nested_linear, real_trap, FixtureSpec};
use cjet_core::flatten::flatten;
use cjet_core::jets::Order;
use cjet_core::solve::{
    decide_countable, generator_prefix, solve_exhaustive, solve_linear, CountableOptions, EquationGenerator,
    EquationSystem, ExhaustiveOptions, Outcome,
};
use cjet_core::{Field, PrimeField, Rationals};
use num_rational::BigRational;

fn sat(s: &EquationSystem<PrimeField>) -> bool {
    solve_exhaustive(s, &ExhaustiveOptions::default()).unwrap().outcome.is_sat()
}

#[test]
fn trap_prefixes_are_sat_exactly_below_p() {
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        let trap = enumeration_trap(f);
        for len in 1..=trap.len() {
            assert_eq!(sat(&generator_prefix(&trap, len)), len < p as usize, "p = {p}, prefix {len}");
        }
        assert!(trap.equation(trap.len() + 1).is_none());
    }
}

#[test]
fn trap_prefix_witness_uses_an_unlisted_point() {
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        let trap = enumeration_trap(f);
        for len in 1..p as usize {
            let x1 = len as u64;
            let mut point = vec![x1];
            for l in 1..=len {
                point.push(f.inv(&f.sub(&x1, &trap.listed(l))).unwrap());
            }
            assert!(generator_prefix(&trap, len).is_solution(&point), "p = {p}, prefix {len}");
        }
    }
}

#[test]
fn countable_decision_on_trap() {
    for p in [2u64, 3, 5] {
        let trap = enumeration_trap(PrimeField::new(p).unwrap());
        let r = decide_countable(&trap, &CountableOptions::default()).unwrap();
        assert_eq!(r.outcome.unsat_prefix(), Some(p as usize), "p = {p}");
    }
}

#[test]
fn real_trap_prefixes_have_rational_points() {
    let trap = real_trap(3);
    let s = generator_prefix(&trap, 3);
    let q = |n: i64| BigRational::from_integer(n.into());
    assert!(s.is_solution(&[q(3), q(1), q(0)]));
    assert!(s.is_solution(&[q(3), q(-1), q(0)]));
    assert!(!s.is_solution(&[q(2), q(0), q(0)]));
}

#[test]
fn fixtures_regenerate_identically() {
    for spec in ["enum-trap:p=5", "real-trap:l=4", "nested-linear:n=3,c=3,p=7", "nested-linear:n=2,c=4"] {
        let a: FixtureSpec = spec.parse().unwrap();
        let b: FixtureSpec = spec.parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), spec);
    }
    let a = generator_prefix(&enumeration_trap(PrimeField::new(5).unwrap()), 5);
    let b = generator_prefix(&enumeration_trap(PrimeField::new(5).unwrap()), 5);
    assert_eq!(a, b);
    let x = nested_linear(PrimeField::new(7).unwrap(), 3, 3).unwrap();
    let y = nested_linear(PrimeField::new(7).unwrap(), 3, 3).unwrap();
    assert_eq!(flatten(&x.system, x.order).unwrap().to_json(), flatten(&y.system, y.order).unwrap().to_json());
}

#[test]
fn nested_linear_solutions_respect_support() {
    for n in 2..=4 {
        let fx = nested_linear(Rationals, n, 3).unwrap();
        let flat = flatten(&fx.system, fx.order).unwrap();
        let r = solve_linear(&EquationSystem::from_flattened(&flat)).unwrap();
        let Outcome::Sat { .. } = r.outcome else { panic!("n = {n}: {:?}", r.outcome) };
        let ys = flat.realize(&r.first_assignment().unwrap()).unwrap();
        for (y, j) in ys.iter().zip(&fx.system.constraints) {
            for (e, _) in y.coefficients() {
                assert!(e.support_within(j));
            }
        }
        // y_2 = x_2 y_1 + x_1 has order exactly 1 when y_1 = 0
        assert_eq!(ys[1].ord(), Order::Finite(1));
    }
}
