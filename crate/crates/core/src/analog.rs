//! Circular analogs.
//!
//! The circular analog of `x` is `x₍ₐ₎ = e^{i2πψ} x` with `ψ` uniform on
//! `[0, 1)` and independent of `x`. It is the circular vector closest to `x`
//! in Kullback–Leibler divergence, it has the same covariance as `x`, and
//! its entropy is never smaller. For an improper Gaussian `x` the analog is
//! not Gaussian; its density involves `I₀`.

use num_complex::Complex64;
use rand::Rng as _;

use crate::bessel::log_bessel_i0;
use crate::entropy::{knn_entropy, kozachenko_leonenko, SAMPLES_PER_NEIGHBOR};
use crate::error::{Error, Result};
use crate::knn::KdTree;
use crate::linalg::{generalized_cholesky, log_abs_det, takagi, ComplexMatrix, ComplexVector};
use crate::rng;
use crate::second_order::{validate_pair, CircularitySpectrum, SampleSet, SecondOrderPair};
use crate::transforms::real_to_sheared;

/// Largest circularity coefficient the analog density accepts.
pub const SPECTRUM_LIMIT: f64 = 1.0 - 1e-10;

/// Rotates every vector by an independent uniform phase. One uniform is
/// drawn per vector, in data order, from the stream of `seed`.
pub fn circularize(samples: &SampleSet, seed: u64) -> SampleSet {
    let mut rng = rng::rng(seed);
    let mut out = samples.map_vectors(|_, x, dst| {
        let psi: f64 = rng.random();
        let rot = Complex64::from_polar(1.0, std::f64::consts::TAU * psi);
        for (d, z) in dst.iter_mut().zip(x) {
            *d = rot * z;
        }
    });
    out.seed = seed;
    out
}

/// The zero-mean Gaussian pair together with the whitening map
/// `W = Q⁻¹ B⁻¹` that takes it to the standard form `C = I`, `P = Λ`.
#[derive(Debug, Clone)]
pub struct AnalogGaussianModel {
    pub pair: SecondOrderPair,
    pub whitener: ComplexMatrix,
    pub lambdas: CircularitySpectrum,
    log_jacobian: f64,
    // log normalizing constant of the standardized density
    log_norm: f64,
}

impl AnalogGaussianModel {
    pub fn new(pair: SecondOrderPair) -> Result<Self> {
        if !pair.is_zero_mean() {
            return Err(Error::NonzeroMean);
        }
        let validity = validate_pair(&pair.c, &pair.p)?;
        if !validity.valid {
            return Err(Error::InvalidPair {
                reason: validity.reason,
            });
        }
        let b_inv = generalized_cholesky(&pair.c)?.inverse();
        let m = &b_inv * &pair.p * b_inv.transpose();
        // the product is symmetric up to rounding
        let m = (&m + m.transpose()) * Complex64::new(0.5, 0.0);
        let t = takagi(&m)?;
        let lambdas = CircularitySpectrum { lambdas: t.sigma };
        if lambdas.max() >= SPECTRUM_LIMIT {
            return Err(Error::SpectrumAtOne {
                lambda_max: lambdas.max(),
            });
        }
        let whitener = t.q.adjoint() * b_inv;
        let n = pair.dim() as f64;
        let log_jacobian = 2.0 * log_abs_det(&whitener);
        let log_norm = -n * std::f64::consts::PI.ln() - lambdas.half_log_defect();
        Ok(Self {
            pair,
            whitener,
            lambdas,
            log_jacobian,
            log_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    /// Log density of the circular analog at `x`.
    ///
    /// With `y = W x` and `Dᵢ = λᵢ / (1 − λᵢ²)`:
    /// `log f = log|det W|² − n log π − ½ Σ log(1 − λᵢ²)
    ///          − Σ |yᵢ|² / (1 − λᵢ²) + log I₀(|Σ Dᵢ yᵢ²|)`.
    pub fn log_density(&self, x: &[Complex64]) -> f64 {
        assert_eq!(x.len(), self.dim());
        let y = &self.whitener * ComplexVector::from_column_slice(x);
        let mut quad = 0.0;
        let mut twist = Complex64::new(0.0, 0.0);
        for (yi, &l) in y.iter().zip(&self.lambdas.lambdas) {
            let g = 1.0 - l * l;
            quad += yi.norm_sqr() / g;
            twist += yi * yi * (l / g);
        }
        self.log_jacobian + self.log_norm - quad + log_bessel_i0(twist.norm())
    }

    pub fn density(&self, x: &[Complex64]) -> f64 {
        self.log_density(x).exp()
    }
}

/// Density of the circular analog of the zero-mean Gaussian with `model.pair`.
pub fn analog_gaussian_density(model: &AnalogGaussianModel, x: &[Complex64]) -> f64 {
    model.density(x)
}

fn check_count(samples: &SampleSet, k: usize) -> Result<()> {
    let need = SAMPLES_PER_NEIGHBOR * k.max(1);
    if samples.count() < need {
        return Err(Error::TooFewSamples {
            got: samples.count(),
            need,
        });
    }
    Ok(())
}

/// Estimate of `D(x ‖ x₍ₐ₎)`, the smallest divergence from `x` to any
/// circular vector.
///
/// In sheared-polar coordinates the divergence equals minus the conditional
/// entropy of the last phase `ϑ` given the remaining coordinates `x̃`, i.e.
/// `h(x̃) − h(x̃, ϑ)`. Both entropies are kNN estimates in those coordinates,
/// with phase axes treated as periodic. The estimate is clamped at zero.
///
/// Returns [`Error::DegenerateConditional`] when `ϑ` is a function of `x̃`
/// on the sample (adding it never moves the `k`-th neighbour).
pub fn divergence_to_analog(samples: &SampleSet, k: usize) -> Result<f64> {
    check_count(samples, k)?;
    let n = samples.dim();
    let dim = 2 * n;
    let count = samples.count();
    let mut joint = Vec::with_capacity(count * dim);
    let mut reduced = Vec::with_capacity(count * (dim - 1));
    for x in samples.vectors() {
        let s = real_to_sheared(x);
        joint.extend_from_slice(&s.r);
        joint.extend_from_slice(&s.phi);
        reduced.extend_from_slice(&s.r);
        reduced.extend_from_slice(&s.phi[..n - 1]);
    }
    let periodic = |d: usize| (0..d).map(|a| a >= n).collect::<Vec<_>>();

    let joint_tree = KdTree::with_periodic(joint, dim, periodic(dim));
    let reduced_tree = KdTree::with_periodic(reduced, dim - 1, periodic(dim - 1));
    let eps_joint = joint_tree.self_kth_distances(k);
    let eps_reduced = reduced_tree.self_kth_distances(k);
    if eps_reduced.iter().any(|&e| e <= 0.0) {
        return Err(Error::DegenerateSamples);
    }
    let flat = eps_joint
        .iter()
        .zip(&eps_reduced)
        .filter(|(j, r)| **j <= **r * (1.0 + 1e-9))
        .count();
    if 2 * flat > count {
        return Err(Error::DegenerateConditional);
    }

    let h_joint = kozachenko_leonenko(&eps_joint, dim, k).value;
    let h_reduced = kozachenko_leonenko(&eps_reduced, dim - 1, k).value;
    Ok((h_reduced - h_joint).max(0.0))
}

/// `ĥ(x₍ₐ₎) − ĥ(x)`, using a circularized copy of the samples drawn with
/// `seed`. In expectation this equals `D(x ‖ x₍ₐ₎)` and is non-negative.
pub fn analog_entropy_gap(samples: &SampleSet, k: usize, seed: u64) -> Result<f64> {
    check_count(samples, k)?;
    let h = knn_entropy(samples, k)?;
    let h_a = knn_entropy(&circularize(samples, seed), k)?;
    Ok(h_a.value - h.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::second_order::{empirical_pair, sample_gaussian};
    use std::f64::consts::PI;

    #[test]
    fn proper_model_reduces_to_circular_gaussian() {
        let m =
            AnalogGaussianModel::new(SecondOrderPair::scalar(1.0, c(0.0, 0.0)).unwrap()).unwrap();
        assert!((m.density(&[c(0.0, 0.0)]) - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn density_is_phase_invariant() {
        let m =
            AnalogGaussianModel::new(SecondOrderPair::scalar(1.0, c(0.8, 0.0)).unwrap()).unwrap();
        let base = m.density(&[c(0.9, 0.0)]);
        for k in 1..64 {
            let z = Complex64::from_polar(0.9, std::f64::consts::TAU * k as f64 / 64.0);
            assert!(((m.density(&[z]) - base) / base).abs() <= 1e-12);
        }
    }

    #[test]
    fn model_rejects_boundary_and_mean() {
        assert!(matches!(
            AnalogGaussianModel::new(SecondOrderPair::scalar(1.0, c(1.0, 0.0)).unwrap()),
            Err(Error::SpectrumAtOne { .. })
        ));
        let mut pair = SecondOrderPair::scalar(1.0, c(0.3, 0.0)).unwrap();
        pair.mean[0] = c(1.0, 0.0);
        assert!(matches!(
            AnalogGaussianModel::new(pair),
            Err(Error::NonzeroMean)
        ));
    }

    #[test]
    fn circularize_is_deterministic_and_norm_preserving() {
        let s =
            sample_gaussian(&SecondOrderPair::scalar(1.0, c(0.5, 0.0)).unwrap(), 200, 1).unwrap();
        let a = circularize(&s, 9);
        assert_eq!(a, circularize(&s, 9));
        for (x, y) in s.as_slice().iter().zip(a.as_slice()) {
            assert!((x.norm() - y.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn circularize_removes_complementary_covariance() {
        let n = 100_000;
        let s = sample_gaussian(&SecondOrderPair::scalar(1.0, c(0.8, 0.0)).unwrap(), n, 2).unwrap();
        let before = empirical_pair(&s).unwrap();
        let after = empirical_pair(&circularize(&s, 3)).unwrap();
        let bound = 2.0 / (n as f64).sqrt();
        assert!(after.p[(0, 0)].norm() <= bound, "{}", after.p[(0, 0)]);
        assert!((after.c[(0, 0)] - before.c[(0, 0)]).norm() <= 2.0 * bound);
    }

    #[test]
    fn deterministic_phase_is_degenerate() {
        let s = sample_gaussian(
            &SecondOrderPair::scalar(1.0, c(0.0, 0.0)).unwrap(),
            5_000,
            4,
        )
        .unwrap();
        let fixed = s.map_vectors(|_, x, out| {
            out[0] = Complex64::from_polar(x[0].norm(), 0.5 * PI);
        });
        assert!(matches!(
            divergence_to_analog(&fixed, 4),
            Err(Error::DegenerateConditional)
        ));
    }

    #[test]
    fn too_few_samples() {
        let s =
            sample_gaussian(&SecondOrderPair::scalar(1.0, c(0.0, 0.0)).unwrap(), 399, 4).unwrap();
        assert!(matches!(
            divergence_to_analog(&s, 4),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            analog_entropy_gap(&s, 4, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
