mod common;

use std::f64::consts::{E, PI, TAU};

use common::{jacobi_eigenvalues, scalar_pair};
use improper::entropy::{
    complex_gaussian_entropy, knn_entropy, knn_entropy_points, knn_kl_divergence, maxent_bound_ii,
    neeser_massey_bound, real_gaussian_entropy, EntropyMethod,
};
use improper::error::Error;
use improper::random;
use improper::rng;
use improper::second_order::{real_covariance, sample_gaussian, SampleSet, SecondOrderPair};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng as _;

/// `½ Σ log(2πe sᵢ)` over the Jacobi eigenvalues.
fn gaussian_entropy_oracle(pair: &SecondOrderPair) -> f64 {
    jacobi_eigenvalues(&real_covariance(pair))
        .iter()
        .map(|s| 0.5 * (TAU * E * s).ln())
        .sum()
}

#[test]
fn scalar_closed_forms() {
    let h = complex_gaussian_entropy(&scalar_pair(1.0, 0.0)).unwrap();
    assert_eq!(h.method, EntropyMethod::ClosedForm);
    assert!((h.value - (PI * E).ln()).abs() <= 4.0 * f64::EPSILON);
    for lambda in [0.3, 0.6, 0.8, 0.95] {
        let h = complex_gaussian_entropy(&scalar_pair(1.0, lambda))
            .unwrap()
            .value;
        let want = (PI * E).ln() + 0.5 * (1.0 - lambda * lambda).ln();
        assert!(
            (h - want).abs() <= 4.0 * f64::EPSILON,
            "lambda {lambda}: {h} vs {want}"
        );
    }
    let h = complex_gaussian_entropy(&scalar_pair(1.0, 0.8))
        .unwrap()
        .value;
    assert!((h - 1.633904262083409).abs() < 1e-14);
}

#[test]
fn closed_form_matches_real_representation() {
    let mut r = rng::rng(51);
    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let pair = random::valid_pair(n, r.random_range(0.0..=0.95), &mut r);
        let h = complex_gaussian_entropy(&pair).unwrap().value;
        let real = real_gaussian_entropy(&real_covariance(&pair))
            .unwrap()
            .value;
        assert!((h - real).abs() <= 1e-9, "{h} vs {real}");
        assert!((h - gaussian_entropy_oracle(&pair)).abs() <= 1e-9);
        assert_eq!(maxent_bound_ii(&pair).unwrap().value, h);
    }
}

#[test]
fn neeser_massey_gap_is_the_spectrum_defect() {
    let mut r = rng::rng(52);
    for _ in 0..50 {
        let lambdas: Vec<f64> = (0..3).map(|_| r.random_range(0.0..0.95)).collect();
        let pair = random::pair_with_spectrum(&lambdas, &mut r);
        let bound = neeser_massey_bound(&pair.c).unwrap().value;
        let h = complex_gaussian_entropy(&pair).unwrap().value;
        let defect: f64 = lambdas.iter().map(|l| 0.5 * (1.0 - l * l).ln()).sum();
        assert!(h <= bound + 1e-12);
        assert!((h - bound - defect).abs() < 1e-9);
    }
}

#[test]
fn closed_form_rejects_degenerate_pairs() {
    assert!(matches!(
        complex_gaussian_entropy(&scalar_pair(1.0, 1.0)),
        Err(Error::SpectrumAtOne { .. })
    ));
    assert!(matches!(
        complex_gaussian_entropy(&scalar_pair(1.0, 1.2)),
        Err(Error::InvalidPair { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_shifts_with_scale(seed in 0u64..1000, scale in 0.1f64..10.0) {
        let mut r = rng::rng(seed);
        let pair = random::valid_pair(2, 0.7, &mut r);
        let scaled = SecondOrderPair::zero_mean(pair.c.map(|z| z * scale), pair.p.map(|z| z * scale)).unwrap();
        let a = complex_gaussian_entropy(&pair).unwrap().value;
        let b = complex_gaussian_entropy(&scaled).unwrap().value;
        prop_assert!((b - a - 2.0 * scale.ln()).abs() < 1e-9);
    }

    #[test]
    fn impropriety_never_raises_entropy(seed in 0u64..1000) {
        let mut r = rng::rng(seed);
        let pair = random::valid_pair(3, 0.9, &mut r);
        let proper = SecondOrderPair::proper(pair.c.clone()).unwrap();
        prop_assert!(
            complex_gaussian_entropy(&pair).unwrap().value
                <= complex_gaussian_entropy(&proper).unwrap().value + 1e-12
        );
    }
}

#[test]
fn knn_recovers_gaussian_entropy() {
    for (lambda, seed) in [(0.0, 61), (0.8, 62)] {
        let pair = scalar_pair(1.0, lambda);
        let x = sample_gaussian(&pair, 100_000, seed).unwrap();
        let est = knn_entropy(&x, 4).unwrap();
        let exact = gaussian_entropy_oracle(&pair);
        assert_eq!(est.method, EntropyMethod::KnnEstimate);
        let se = est.stderr.unwrap();
        assert!(se > 0.0 && se < 0.01);
        assert!(
            (est.value - exact).abs() <= 0.03,
            "lambda {lambda}: {} vs {exact}",
            est.value
        );
    }
}

#[test]
fn knn_on_uniform_torus() {
    // uniform on the unit torus has entropy 0
    let mut r = rng::rng(63);
    let pts: Vec<f64> = (0..2 * 50_000).map(|_| r.random::<f64>()).collect();
    let est = knn_entropy_points(pts, 2, vec![true, true], 4).unwrap();
    assert!(est.value.abs() <= 0.02, "{}", est.value);
}

#[test]
fn kl_divergence_between_gaussians() {
    // D(CN(0,1) with λ = 0.8 ‖ CN(0,1) proper) = −½ log(1 − 0.64)
    let p = sample_gaussian(&scalar_pair(1.0, 0.8), 100_000, 64).unwrap();
    let q = sample_gaussian(&scalar_pair(1.0, 0.0), 100_000, 65).unwrap();
    let d = knn_kl_divergence(&p, &q, 4).unwrap();
    let want = -0.5 * 0.36f64.ln();
    assert!((d - want).abs() <= 0.05, "{d} vs {want}");

    let q2 = sample_gaussian(&scalar_pair(1.0, 0.0), 100_000, 66).unwrap();
    assert!(knn_kl_divergence(&q, &q2, 4).unwrap() <= 0.02);
}

#[test]
fn estimators_refuse_small_or_degenerate_samples() {
    let x = sample_gaussian(&scalar_pair(1.0, 0.0), 399, 67).unwrap();
    assert!(matches!(
        knn_entropy(&x, 4),
        Err(Error::TooFewSamples {
            got: 399,
            need: 400
        })
    ));
    let y = sample_gaussian(&scalar_pair(1.0, 0.0), 1000, 68).unwrap();
    assert!(matches!(
        knn_kl_divergence(&y, &x, 4),
        Err(Error::TooFewSamples { .. })
    ));

    let repeated = SampleSet::new(1, vec![Complex64::new(1.0, 0.0); 1000], 0).unwrap();
    assert!(matches!(
        knn_entropy(&repeated, 4),
        Err(Error::DegenerateSamples)
    ));

    let two = sample_gaussian(&random::valid_pair(2, 0.5, &mut rng::rng(69)), 1000, 70).unwrap();
    assert!(matches!(
        knn_kl_divergence(&y, &two, 4),
        Err(Error::DimensionMismatch(_))
    ));
}
