mod common;

use bellflow::{FormalSeries, compose};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(
        f in series_with(7, 0.2, 5.0),
        g in series_with(7, 0.2, 5.0),
        h in series_with(7, 0.2, 5.0),
    ) {
        let left = compose(&compose(&f, &g), &h);
        let right = compose(&f, &compose(&g, &h));
        prop_assert!(relative(left.max_abs_diff(&right), right.max_abs()) < 1e-10);
    }

    #[test]
    fn truncation_is_consistent(f in series_with(8, 0.2, 5.0), g in series_with(8, 0.2, 5.0), n in 1usize..=8) {
        let full = compose(&f, &g);
        let short = compose(&f.resized(n), &g.resized(n));
        for r in 1..=n {
            prop_assert_eq!(full.coeff(r), short.coeff(r));
        }
    }

    #[test]
    fn composition_matches_substitution(f in series_with(6, 0.2, 5.0), g in series_with(6, 0.2, 5.0)) {
        let oracle = substitution_oracle(&f, &g);
        prop_assert!(relative(compose(&f, &g).max_abs_diff(&oracle), oracle.max_abs()) < 1e-12);
    }

    #[test]
    fn evaluation_commutes_with_composition_at_small_x(
        f in series_with(5, 0.2, 5.0),
        g in series_with(5, 0.2, 2.0),
        x in -1e-3..1e-3f64,
    ) {
        let x = c(x);
        let lhs = compose(&f, &g).evaluate(x);
        let rhs = f.evaluate(g.evaluate(x));
        prop_assert!((lhs - rhs).norm() <= 10.0 * x.norm().powi(6) + 1e-18);
    }
}

#[test]
fn evaluation_examples() {
    assert_eq!(FormalSeries::identity(1).evaluate(c(0.7)), c(0.7));
    let expm1 = FormalSeries::from_real_taylor(&[1.0; 10]).unwrap();
    assert!((expm1.evaluate(c(0.1)).re - 0.1f64.exp_m1()).abs() < 1e-9);
    assert_eq!(logistic(4.0, 4).evaluate(c(0.0)), c(0.0));
}

#[test]
fn log_and_exp_compose_to_identity() {
    for n in 1..=10 {
        let exp: Vec<f64> = vec![1.0; n];
        let log: Vec<f64> = (1..=n).map(|j| if j % 2 == 1 { 1.0 } else { -1.0 } * (1..j).product::<usize>() as f64).collect();
        let e = compose(&FormalSeries::from_real_taylor(&exp).unwrap(), &FormalSeries::from_real_taylor(&log).unwrap());
        assert!(e.max_abs_diff(&FormalSeries::identity(n)) < 1e-12, "n={n}");
    }
}
