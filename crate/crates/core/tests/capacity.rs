mod common;

use common::{c, embed, jacobi_eigenvalues, real_cov, scalar_pair};
use improper::capacity::{
    capacity_loss, capacity_loss_bound, check_assumptions, mc_mutual_information,
    mc_mutual_information_samples, scalar_powers, solve_capacity, verify_circular_optimality,
    ChannelSpec, ViolationKind,
};
use improper::error::Error;
use improper::linalg::{ComplexMatrix, RealMatrix};
use improper::random;
use improper::rng;
use improper::second_order::{sample_gaussian, validate_pair, SampleSet, SecondOrderPair};
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

fn scalar_spec(cz: f64, pz: f64, s: f64) -> ChannelSpec {
    ChannelSpec::new(ComplexMatrix::identity(1, 1), scalar_pair(cz, pz), s)
}

fn log_det_spd(a: &RealMatrix) -> f64 {
    jacobi_eigenvalues(a).iter().map(|x| x.ln()).sum()
}

/// Real water-filling over the `2n` real eigenchannels of the noise referred
/// to the input. Every channel is above water in the admissible regime.
fn capacity_oracle(spec: &ChannelSpec) -> f64 {
    let hr = embed(&spec.h);
    let h_inv = hr.clone().try_inverse().unwrap();
    let k = &h_inv * real_cov(&spec.noise) * h_inv.transpose();
    let nu = jacobi_eigenvalues(&((&k + k.transpose()) * 0.5));
    let level = (spec.power + nu.iter().sum::<f64>()) / nu.len() as f64;
    assert!(level >= nu[nu.len() - 1]);
    nu.iter().map(|v| 0.5 * (level / v).ln()).sum()
}

/// `I(x; Hx + z)` for a Gaussian input, in the real representation.
fn gaussian_mi(spec: &ChannelSpec, input: &SecondOrderPair) -> f64 {
    let hr = embed(&spec.h);
    let sz = real_cov(&spec.noise);
    let sy = &hr * real_cov(input) * hr.transpose() + &sz;
    0.5 * (log_det_spd(&((&sy + sy.transpose()) * 0.5)) - log_det_spd(&sz))
}

fn random_specs(seed: u64, count: usize) -> Vec<ChannelSpec> {
    let mut r = rng::rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(1..=6);
            random::channel(n, &mut r)
        })
        .collect()
}

fn proper_design(spec: &ChannelSpec) -> SecondOrderPair {
    let proper = ChannelSpec::new(
        spec.h.clone(),
        SecondOrderPair::proper(spec.noise.c.clone()).unwrap(),
        spec.power,
    );
    solve_capacity(&proper).unwrap().input_pair
}

#[test]
fn worked_examples() {
    let r = solve_capacity(&scalar_spec(1.0, 0.0, 2.0)).unwrap();
    assert!((r.capacity_nats - 3f64.ln()).abs() <= 1e-12);
    assert!((r.water_level - 3.0).abs() <= 1e-12);
    assert!((r.input_pair.c[(0, 0)] - c(2.0, 0.0)).norm() <= 1e-12);
    assert_eq!(r.input_pair.p[(0, 0)].norm(), 0.0);

    let r = solve_capacity(&scalar_spec(1.0, 0.5, 2.0)).unwrap();
    assert!((r.capacity_nats - (3f64.ln() - 0.5 * 0.75f64.ln())).abs() <= 1e-12);
    assert!((r.input_pair.p[(0, 0)] - c(-0.5, 0.0)).norm() <= 1e-12);

    let spec = ChannelSpec::new(
        ComplexMatrix::identity(2, 2),
        SecondOrderPair::proper(ComplexMatrix::identity(2, 2)).unwrap(),
        8.0,
    );
    let r = solve_capacity(&spec).unwrap();
    assert!((r.capacity_nats - 2.0 * 5f64.ln()).abs() <= 1e-12);
    assert!((r.input_pair.c.clone() - ComplexMatrix::identity(2, 2) * c(4.0, 0.0)).norm() <= 1e-12);
    assert!((r.water_level - 5.0).abs() <= 1e-12);

    let loss = capacity_loss(&scalar_spec(1.0, 0.5, 2.0)).unwrap();
    assert!((loss.mus[0] - 1.0 / 6.0).abs() <= 1e-14);
    assert!((loss.delta_c_nats + 0.5 * (35.0f64 / 36.0).ln()).abs() <= 1e-14);
    assert_eq!(
        capacity_loss(&scalar_spec(1.0, 0.0, 2.0))
            .unwrap()
            .delta_c_nats,
        0.0
    );
}

#[test]
fn scalar_power_split() {
    let p = scalar_powers(1.0, 0.5, 2.0).unwrap();
    assert_eq!((p.re_noise, p.im_noise, p.level), (0.75, 0.25, 1.5));
    assert_eq!((p.re_power, p.im_power), (0.75, 1.25));
    let p = scalar_powers(1.0, 0.0, 3.0).unwrap();
    assert_eq!((p.re_power, p.im_power), (1.5, 1.5));
    let mut r = rng::rng(71);
    for _ in 0..100 {
        let cz = r.random_range(0.1..3.0);
        let pz = cz * r.random_range(-1.0..1.0);
        let s = 2.0 * cz * r.random_range(1.0..5.0);
        let p = scalar_powers(cz, pz, s).unwrap();
        assert!((p.re_power + p.im_power - s).abs() <= f64::EPSILON * s);
        assert!((p.re_noise + p.re_power - p.im_noise - p.im_power).abs() <= 1e-12 * s);
    }
    assert!(matches!(
        scalar_powers(1.0, 0.0, 1.9),
        Err(Error::AssumptionViolated(_))
    ));
}

#[test]
fn assumption_report() {
    assert!(check_assumptions(&scalar_spec(1.0, 0.0, 2.0)).is_empty());
    let v = check_assumptions(&scalar_spec(1.0, 0.0, 1.9));
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::HighSnr);
    assert!((v[0].threshold - 2.0).abs() < 1e-15);
    assert_eq!(v[0].measured, 1.9);

    let v = check_assumptions(&scalar_spec(1.0, 1.0, 2.0));
    assert!(v.iter().any(|x| x.kind == ViolationKind::SpectrumAtOne));

    let v = check_assumptions(&scalar_spec(1.0, 0.0, -1.0));
    assert!(v.iter().any(|x| x.kind == ViolationKind::NegativePower));

    let singular = ChannelSpec::new(ComplexMatrix::zeros(1, 1), scalar_pair(1.0, 0.0), 2.0);
    assert!(check_assumptions(&singular)
        .iter()
        .any(|x| x.kind == ViolationKind::SingularChannel));

    let mismatch = ChannelSpec::new(ComplexMatrix::identity(2, 2), scalar_pair(1.0, 0.0), 2.0);
    assert_eq!(
        check_assumptions(&mismatch)[0].kind,
        ViolationKind::DimensionMismatch
    );

    match solve_capacity(&scalar_spec(1.0, 0.0, 1.9)) {
        Err(Error::AssumptionViolated(v)) => assert_eq!(v[0].kind, ViolationKind::HighSnr),
        other => panic!("{other:?}"),
    }
}

#[test]
fn capacity_matches_real_water_filling() {
    for spec in random_specs(72, 100) {
        let r = solve_capacity(&spec).unwrap();
        let oracle = capacity_oracle(&spec);
        assert!(
            (r.capacity_nats - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
            "{} vs {oracle}",
            r.capacity_nats
        );
        // the solved input attains it
        assert!((gaussian_mi(&spec, &r.input_pair) - oracle).abs() <= 1e-8 * oracle.abs().max(1.0));
    }
}

#[test]
fn solved_input_is_valid_and_spends_budget() {
    for spec in random_specs(73, 100) {
        let r = solve_capacity(&spec).unwrap();
        assert!(
            validate_pair(&r.input_pair.c, &r.input_pair.p)
                .unwrap()
                .valid
        );
        let trace: f64 = r.input_pair.c.diagonal().iter().map(|z| z.re).sum();
        assert!((trace - spec.power).abs() <= 1e-8 * spec.power);
    }
}

#[test]
fn capacity_grows_with_power() {
    for spec in random_specs(74, 20) {
        let mut prev = f64::NEG_INFINITY;
        for step in 0..12 {
            let s = ChannelSpec::new(
                spec.h.clone(),
                spec.noise.clone(),
                spec.power * (1.0 + 0.25 * step as f64),
            );
            let cap = solve_capacity(&s).unwrap().capacity_nats;
            assert!(cap >= prev);
            prev = cap;
        }
    }
}

#[test]
fn improper_noise_bonus() {
    for spec in random_specs(75, 100) {
        let proper = ChannelSpec::new(
            spec.h.clone(),
            SecondOrderPair::proper(spec.noise.c.clone()).unwrap(),
            spec.power,
        );
        let (a, b) = (
            solve_capacity(&spec).unwrap(),
            solve_capacity(&proper).unwrap(),
        );
        let bonus = -0.5
            * a.spectrum
                .lambdas
                .iter()
                .map(|l| (1.0 - l * l).ln())
                .sum::<f64>();
        assert!(a.capacity_nats >= b.capacity_nats);
        assert!((a.capacity_nats - b.capacity_nats - bonus).abs() <= 1e-10);
    }
}

#[test]
fn capacity_loss_formula_and_bound() {
    for spec in random_specs(76, 100) {
        let n = spec.dim();
        let l = capacity_loss(&spec).unwrap();
        let direct = -0.5 * l.mus.iter().map(|m| (1.0 - m * m).ln()).sum::<f64>();
        assert!((l.delta_c_nats - direct).abs() <= 1e-10);
        assert!(l.delta_c_nats >= 0.0 && l.delta_c_nats < capacity_loss_bound(n));
        // the loss is the rate gap between the optimal and proper-design inputs
        let gap = gaussian_mi(&spec, &solve_capacity(&spec).unwrap().input_pair)
            - gaussian_mi(&spec, &proper_design(&spec));
        assert!(
            (gap - l.delta_c_nats).abs() <= 1e-8,
            "{gap} vs {}",
            l.delta_c_nats
        );
    }
}

#[test]
fn scalar_loss_peaks_at_the_snr_boundary() {
    // λ → 1 with S = 2C_z gives μ → 1/3, well inside the general bound
    let l = capacity_loss(&scalar_spec(1.0, 1.0 - 1e-9, 2.0)).unwrap();
    assert!((l.mus[0] - 1.0 / 3.0).abs() < 1e-8);
    assert!((l.delta_c_nats + 0.5 * (8.0f64 / 9.0).ln()).abs() < 1e-8);
    assert!(l.delta_c_nats < capacity_loss_bound(1));
}

#[test]
fn simulated_mutual_information() {
    let spec = scalar_spec(1.0, 0.0, 2.0);
    let r = solve_capacity(&spec).unwrap();
    let mi = mc_mutual_information(&spec, &r.input_pair, 100_000, 4, 77).unwrap();
    assert!((mi.value - 3f64.ln()).abs() <= 0.05, "{}", mi.value);

    let spec = scalar_spec(1.0, 0.5, 2.0);
    let r = solve_capacity(&spec).unwrap();
    let mi = mc_mutual_information(&spec, &r.input_pair, 100_000, 4, 78).unwrap();
    assert!((mi.value - r.capacity_nats).abs() <= 0.05);

    let tiny = SecondOrderPair::proper(ComplexMatrix::identity(1, 1) * c(1e-6, 0.0)).unwrap();
    let mi = mc_mutual_information(&spec, &tiny, 100_000, 4, 79).unwrap();
    assert!(mi.value <= 0.05, "{}", mi.value);

    let a = mc_mutual_information(&spec, &r.input_pair, 20_000, 4, 80).unwrap();
    let b = mc_mutual_information(&spec, &r.input_pair, 20_000, 4, 80).unwrap();
    assert_eq!(a, b);
}

#[test]
fn simulated_mi_rejects_bad_inputs() {
    let spec = scalar_spec(1.0, 0.0, 2.0);
    let too_big = SecondOrderPair::proper(ComplexMatrix::identity(1, 1) * c(2.5, 0.0)).unwrap();
    assert!(matches!(
        mc_mutual_information(&spec, &too_big, 1000, 4, 1),
        Err(Error::PowerExceeded { .. })
    ));
    let invalid = SecondOrderPair::scalar(1.0, c(1.5, 0.0)).unwrap();
    assert!(matches!(
        mc_mutual_information(&spec, &invalid, 1000, 4, 1),
        Err(Error::InvalidPair { .. })
    ));
}

#[test]
fn simulated_gap_reproduces_capacity_loss() {
    for (pz, seed) in [(0.5, 81), (0.9, 82)] {
        let spec = scalar_spec(1.0, pz, 2.0);
        let loss = capacity_loss(&spec).unwrap().delta_c_nats;
        let opt = mc_mutual_information(
            &spec,
            &solve_capacity(&spec).unwrap().input_pair,
            200_000,
            4,
            seed,
        )
        .unwrap();
        let naive = mc_mutual_information(&spec, &proper_design(&spec), 200_000, 4, seed).unwrap();
        let gap = opt.value - naive.value;
        assert!((gap - loss).abs() <= 0.05, "pz {pz}: {gap} vs {loss}");
    }
}

fn bpsk(count: usize, seed: u64) -> SampleSet {
    let mut r = rng::rng(seed);
    let data = (0..count)
        .map(|_| c(if r.random::<bool>() { 1.0 } else { -1.0 }, 0.0))
        .collect();
    SampleSet::new(1, data, seed).unwrap()
}

/// Uniform on a square of unit power (half-side √1.5), turned by 0.3 rad.
fn rotated_uniform(count: usize, seed: u64) -> SampleSet {
    let mut r = rng::rng(seed);
    let half = 1.5f64.sqrt();
    let turn = Complex64::from_polar(1.0, 0.3);
    let data = (0..count)
        .map(|_| turn * c(r.random_range(-half..half), r.random_range(-half..half)))
        .collect();
    SampleSet::new(1, data, seed).unwrap()
}

#[test]
fn circularizing_the_input_never_hurts() {
    let spec = scalar_spec(1.0, 0.0, 2.0);
    let n = 200_000;
    let inputs = [
        ("bpsk", bpsk(n, 91)),
        (
            "improper gaussian",
            sample_gaussian(&scalar_pair(1.0, 0.9), n, 92).unwrap(),
        ),
        ("rotated uniform", rotated_uniform(n, 93)),
    ];
    for (i, (name, x)) in inputs.iter().enumerate() {
        let r = verify_circular_optimality(&spec, x, 4, 94 + i as u64).unwrap();
        assert!(
            r.holds(3.0),
            "{name}: gain {} stderr {}",
            r.gain(),
            r.stderr()
        );
        if *name == "improper gaussian" {
            assert!(
                r.gain() >= 2.0 * r.stderr(),
                "gain {} stderr {}",
                r.gain(),
                r.stderr()
            );
        }
    }
}

#[test]
fn circularizing_a_circular_input_changes_nothing() {
    let spec = scalar_spec(1.0, 0.0, 2.0);
    let x = sample_gaussian(&scalar_pair(1.0, 0.0), 200_000, 95).unwrap();
    let r = verify_circular_optimality(&spec, &x, 4, 96).unwrap();
    assert!(
        r.gain().abs() <= 3.0 * r.stderr(),
        "gain {} stderr {}",
        r.gain(),
        r.stderr()
    );
}

#[test]
fn circular_optimality_needs_circular_noise() {
    let x = bpsk(1000, 97);
    assert!(matches!(
        verify_circular_optimality(&scalar_spec(1.0, 0.5, 2.0), &x, 4, 1),
        Err(Error::NoiseNotCircular { .. })
    ));
}

#[test]
fn sample_input_dimension_is_checked() {
    let x = bpsk(1000, 98);
    let spec = ChannelSpec::new(
        ComplexMatrix::identity(2, 2),
        SecondOrderPair::proper(ComplexMatrix::identity(2, 2)).unwrap(),
        8.0,
    );
    assert!(matches!(
        mc_mutual_information_samples(&spec, &x, 4, 1),
        Err(Error::DimensionMismatch(_))
    ));
    let _: f64 = rng::rng(0).sample(StandardNormal);
}
