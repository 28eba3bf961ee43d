mod common;

use bellflow::{
    Alphabet, Config, FormalSeries, Scalar, SpectralBasis, elementary_symmetric, projectors,
    projectors_product_form, sigma_missing,
};
use common::*;
use proptest::prelude::*;

/// |a| in [0.3, 0.8] ∪ [1.25, 3] with an arbitrary phase.
fn multiplier() -> impl Strategy<Value = Scalar> {
    (prop_oneof![0.3..0.8f64, 1.25..3.0f64], -3.1..3.1f64).prop_map(|(r, phase)| Scalar::from_polar(r, phase))
}

fn map_with(a: Scalar, rest: Vec<f64>) -> FormalSeries {
    let mut g = vec![a];
    g.extend(rest.into_iter().map(c));
    FormalSeries::from_taylor(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projector_algebra_for_random_maps(a in multiplier(), rest in prop::collection::vec(-1.0..1.0f64, 5)) {
        let g = map_with(a, rest);
        let basis = SpectralBasis::new(a, 6, &Config::default()).unwrap();
        let z = projectors(g.bell_matrix(), &basis).unwrap();
        let algebra = z.algebra(g.bell_matrix());
        prop_assert!(algebra.max() < 1e-8, "{algebra:?}");
        let product = projectors_product_form(g.bell_matrix(), &basis).unwrap();
        let scale = z.projectors().iter().map(|m| m.max_abs()).fold(0.0, f64::max);
        for (p, q) in z.projectors().iter().zip(&product) {
            prop_assert!(relative(p.max_abs_diff(q), scale) < 1e-8);
        }
    }

    #[test]
    fn lambda_inverse_inverts(a in multiplier(), n in 1usize..=8) {
        let basis = SpectralBasis::new(a, n, &Config::default()).unwrap();
        let product = &basis.lambda() * basis.lambda_inverse();
        let scale = basis.lambda().max_abs() * basis.lambda_inverse().max_abs();
        prop_assert!(basis.inverse_residual() < 1e-10);
        prop_assert!(relative(product.max_abs_diff(&bellflow::Matrix::identity(n)), scale) < 1e-10);
    }

    #[test]
    fn reciprocal_alphabet_relation(letters in prop::collection::vec((0.2..3.0f64, -3.1..3.1f64), 1..7)) {
        // (-1)^j σ_{N-j}[x] = σ_N[x] σ_j[x*]
        let xs: Vec<Scalar> = letters.iter().map(|&(r, p)| Scalar::from_polar(r, p)).collect();
        let Ok(alphabet) = Alphabet::new(xs, 1e-8) else { return Ok(()) };
        let n = alphabet.len();
        let sigma = elementary_symmetric(&alphabet);
        let star = elementary_symmetric(&alphabet.reciprocal());
        for j in 0..=n {
            let lhs = if j % 2 == 0 { sigma[n - j] } else { -sigma[n - j] };
            let rhs = sigma[n] * star[j];
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
        for i in 1..=n {
            let missing = sigma_missing(&alphabet, i).unwrap();
            prop_assert_eq!(missing[0], c(1.0));
            let others = alphabet.letters().iter().enumerate().filter(|&(k, _)| k + 1 != i).fold(c(1.0), |acc, (_, &x)| acc * x);
            prop_assert!((missing[n - 1] - others).norm() <= 1e-12 * others.norm().max(1.0));
        }
    }

    #[test]
    fn matrix_functions_act_on_eigenprojectors(a in multiplier(), rest in prop::collection::vec(-1.0..1.0f64, 4), t in -1.0..2.0f64) {
        let g = map_with(a, rest);
        let basis = SpectralBasis::new(a, 5, &Config::default()).unwrap();
        let z = projectors(g.bell_matrix(), &basis).unwrap();
        let f = |x: Scalar| (x.ln() * t).exp();
        let power = z.matrix_function(f);
        let mut letter = a;
        for zi in z.projectors() {
            let f = f(letter);
            letter *= a;
            let lhs = &power * zi;
            let rhs = zi.scale(f);
            prop_assert!(relative(lhs.max_abs_diff(&rhs), rhs.max_abs().max(zi.max_abs())) < 1e-8);
        }
    }
}
