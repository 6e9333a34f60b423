use proptest::prelude::*;
use sublinear_core::estimators::{
    brute_force_ml, exact_posterior_mean, ml_estimate, nonseparable_bayes, nonseparable_bayes_naive, residual_sq,
    separable_bayes, xi_profile,
};
use sublinear_core::{Alphabet, ProblemDims};

fn alphabet_strategy() -> impl Strategy<Value = Alphabet> {
    prop_oneof![
        Just(vec![1.0]),
        Just(vec![1.0, -1.0]),
        Just(vec![1.0, 2.0]),
        Just(vec![-0.5, 1.5]),
    ]
    .prop_map(|p| Alphabet::new(p).unwrap())
}

/// `(N, k, y)` with `N ≥ 2k + extra`.
fn instance(max_n: usize, max_k: usize, extra: usize) -> impl Strategy<Value = (ProblemDims, Vec<f64>)> {
    (1..=max_k)
        .prop_flat_map(move |k| (Just(k), 2 * k + extra..=max_n.max(2 * k + extra)))
        .prop_flat_map(|(k, n)| (Just(ProblemDims::new(n, k).unwrap()), prop::collection::vec(-3.0..3.0f64, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ml_matches_exhaustive_search((dims, y) in instance(10, 3, 0), a in alphabet_strategy()) {
        let fast = ml_estimate(&y, &dims, &a).unwrap();
        let slow = brute_force_ml(&y, &dims, &a).unwrap();
        prop_assert_eq!(residual_sq(&y, &fast.to_dense()), residual_sq(&y, &slow.to_dense()));
    }

    #[test]
    fn objective_equals_residual_of_its_candidate((dims, y) in instance(14, 4, 0), a in alphabet_strategy()) {
        let p = xi_profile(&y, dims.k, &a).unwrap();
        let xhat = ml_estimate(&y, &dims, &a).unwrap();
        let r = residual_sq(&y, &xhat.to_dense());
        prop_assert!((p.min_value() - r).abs() <= 1e-9 * (1.0 + r));
        prop_assert_eq!(xhat.k(), dims.k);
    }

    #[test]
    fn windowed_nonseparable_matches_naive((dims, y) in instance(24, 4, 1), a in alphabet_strategy(), v in 0.02..2.0f64) {
        let fast = nonseparable_bayes(&y, &dims, &a, v).unwrap();
        let naive = nonseparable_bayes_naive(&y, &dims, &a, v).unwrap();
        for (p, q) in fast.iter().zip(&naive) {
            prop_assert!((p - q).abs() <= 1e-10, "{} vs {}", p, q);
        }
    }

    #[test]
    fn negation_is_equivariant((dims, y) in instance(24, 4, 1), v in 0.02..2.0f64) {
        let a = Alphabet::new(vec![1.0, -1.0]).unwrap();
        let neg: Vec<f64> = y.iter().map(|t| -t).collect();
        for f in [separable_bayes, nonseparable_bayes] {
            let plus = f(&y, &dims, &a, v).unwrap();
            let minus = f(&neg, &dims, &a, v).unwrap();
            for (p, m) in plus.iter().zip(&minus) {
                prop_assert_eq!(*p, -*m);
            }
        }
    }

    #[test]
    fn posterior_means_stay_in_hull((dims, y) in instance(12, 2, 1), a in alphabet_strategy(), v in 0.02..2.0f64) {
        let lo = a.points().iter().cloned().fold(0.0, f64::min);
        let hi = a.points().iter().cloned().fold(0.0, f64::max);
        let outputs = [
            separable_bayes(&y, &dims, &a, v).unwrap(),
            nonseparable_bayes(&y, &dims, &a, v).unwrap(),
            exact_posterior_mean(&y, &dims, &a, v).unwrap(),
        ];
        for out in outputs {
            for e in out {
                prop_assert!(e >= lo - 1e-12 && e <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn exact_posterior_mean_sums_to_expected_count((dims, y) in instance(10, 2, 0), v in 0.05..2.0f64) {
        // with U = {1} every candidate has exactly k ones
        let out = exact_posterior_mean(&y, &dims, &Alphabet::unit(), v).unwrap();
        let total: f64 = out.iter().sum();
        prop_assert!((total - dims.k as f64).abs() <= 1e-9);
    }
}
