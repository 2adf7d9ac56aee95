//! Differential entropies (in nats) of complex random vectors.
//!
//! The entropy of a complex vector is that of its real representation.
//! Closed forms cover the Gaussian case and the two maximum-entropy bounds;
//! the Kozachenko–Leonenko k-nearest-neighbour estimator handles samples.

use std::f64::consts::{E, PI};

use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{Error, Result};
use crate::knn::KdTree;
use crate::linalg::{
    frobenius_real, generalized_cholesky, real_symmetric_eig, scaled_tol, ComplexMatrix,
    RealMatrix, STRUCTURE_TOL,
};
use crate::second_order::{circularity_spectrum, validate_pair, SampleSet, SecondOrderPair};

/// Estimators require at least this many samples per neighbour.
pub const SAMPLES_PER_NEIGHBOR: usize = 100;

/// Default neighbour count for the kNN estimators.
pub const DEFAULT_K: usize = 4;

/// Largest circularity coefficient for which closed forms are evaluated.
pub const SPECTRUM_LIMIT: f64 = 1.0 - 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntropyMethod {
    ClosedForm,
    KnnEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    /// Nats.
    pub value: f64,
    pub method: EntropyMethod,
    pub stderr: Option<f64>,
}

impl EntropyValue {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            method: EntropyMethod::ClosedForm,
            stderr: None,
        }
    }

    pub fn bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }

    pub fn stderr_or_zero(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }
}

/// `½ log det(2πe S)` for a real symmetric positive definite `S`.
pub fn real_gaussian_entropy(s: &RealMatrix) -> Result<EntropyValue> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} is not square",
            s.shape()
        )));
    }
    let residual = frobenius_real(&(s - s.transpose()));
    if residual > scaled_tol(STRUCTURE_TOL, frobenius_real(s)) {
        return Err(Error::NotSymmetric { residual });
    }
    let m = s.nrows();
    let sym = (s + s.transpose()) * 0.5;
    let chol = Cholesky::new(sym).ok_or_else(|| Error::NotPositiveDefinite {
        min_eigenvalue: real_symmetric_eig(s).1.last().copied().unwrap_or(0.0),
    })?;
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    Ok(EntropyValue::closed_form(
        0.5 * (m as f64 * (2.0 * PI * E).ln() + log_det),
    ))
}

/// Entropy of the Gaussian with the given pair:
/// `log det(πe C) + ½ Σ log(1 − λᵢ²)`.
pub fn complex_gaussian_entropy(pair: &SecondOrderPair) -> Result<EntropyValue> {
    let validity = validate_pair(&pair.c, &pair.p)?;
    if !validity.valid {
        return Err(Error::InvalidPair {
            reason: validity.reason,
        });
    }
    let spectrum = circularity_spectrum(pair)?;
    if spectrum.max() >= SPECTRUM_LIMIT {
        return Err(Error::SpectrumAtOne {
            lambda_max: spectrum.max(),
        });
    }
    let nm = neeser_massey_bound(&pair.c)?;
    Ok(EntropyValue::closed_form(
        nm.value + spectrum.half_log_defect(),
    ))
}

/// Upper bound `log det(πe C)` on the entropy of any vector with covariance
/// `C`, attained by the proper Gaussian.
pub fn neeser_massey_bound(cm: &ComplexMatrix) -> Result<EntropyValue> {
    let chol = generalized_cholesky(cm)?;
    let n = cm.nrows() as f64;
    Ok(EntropyValue::closed_form(
        n * (PI * E).ln() + chol.log_det(),
    ))
}

/// Upper bound on the entropy of any vector with covariance `C` and
/// complementary covariance `P`. The improper Gaussian attains it, so the
/// value coincides with [`complex_gaussian_entropy`].
pub fn maxent_bound_ii(pair: &SecondOrderPair) -> Result<EntropyValue> {
    complex_gaussian_entropy(pair)
}

fn unit_ball_log_volume(dim: usize) -> f64 {
    let d = dim as f64;
    0.5 * d * PI.ln() - ln_gamma(0.5 * d + 1.0)
}

fn check_count(count: usize, k: usize) -> Result<()> {
    let need = SAMPLES_PER_NEIGHBOR * k.max(1);
    if count < need {
        return Err(Error::TooFewSamples { got: count, need });
    }
    Ok(())
}

/// Kozachenko–Leonenko estimate from a flat point cloud. Axes flagged as
/// periodic have period one.
///
/// `ĥ = ψ(N) − ψ(k) + log V_d + (d/N) Σ log εᵢ`, with `εᵢ` the distance from
/// point `i` to its `k`-th neighbour. The reported stderr is the delete-one
/// jackknife over the per-point terms `d·log εᵢ` with neighbour sets held
/// fixed.
pub fn knn_entropy_points(
    points: Vec<f64>,
    dim: usize,
    periodic: Vec<bool>,
    k: usize,
) -> Result<EntropyValue> {
    let count = points.len() / dim;
    check_count(count, k)?;
    let tree = KdTree::with_periodic(points, dim, periodic);
    let eps = tree.self_kth_distances(k);
    if eps.iter().any(|&e| e <= 0.0) {
        return Err(Error::DegenerateSamples);
    }
    Ok(kozachenko_leonenko(&eps, dim, k))
}

/// Estimate from precomputed `k`-th neighbour distances (all positive).
pub(crate) fn kozachenko_leonenko(eps: &[f64], dim: usize, k: usize) -> EntropyValue {
    let d = dim as f64;
    let terms: Vec<f64> = eps.iter().map(|e| d * e.ln()).collect();
    let (mean, sd) = mean_sd(&terms);
    let nf = eps.len() as f64;
    EntropyValue {
        value: digamma(nf) - digamma(k as f64) + unit_ball_log_volume(dim) + mean,
        method: EntropyMethod::KnnEstimate,
        stderr: Some(sd / nf.sqrt()),
    }
}

pub(crate) fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

/// Real representation `(Re x, Im x)` of every sample, row-major.
pub fn real_points(samples: &SampleSet) -> Vec<f64> {
    let d = 2 * samples.dim();
    let mut out = vec![0.0; samples.count() * d];
    for (i, row) in out.chunks_exact_mut(d).enumerate() {
        samples.real_point(i, row);
    }
    out
}

/// kNN entropy estimate of a complex sample set, on its real representation
/// with the Euclidean metric.
pub fn knn_entropy(samples: &SampleSet, k: usize) -> Result<EntropyValue> {
    let d = 2 * samples.dim();
    knn_entropy_points(real_points(samples), d, vec![false; d], k)
}

/// Two-sample kNN estimate of `D(p ‖ q)` in nats, clamped at zero:
/// `(d/n) Σ log(νᵢ/ρᵢ) + log(m/(n−1))`, where `ρᵢ` is the `k`-th neighbour
/// distance of `xᵢ` within `p` and `νᵢ` its `k`-th neighbour distance in `q`.
pub fn knn_kl_divergence(p: &SampleSet, q: &SampleSet, k: usize) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "sample dimensions {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    check_count(p.count(), k)?;
    check_count(q.count(), k)?;
    let d = 2 * p.dim();
    let p_points = real_points(p);
    let p_tree = KdTree::new(p_points.clone(), d);
    let q_tree = KdTree::new(real_points(q), d);
    let rho = p_tree.self_kth_distances(k);
    let nu = q_tree.cross_kth_distances(&p_points, k);
    if rho.iter().chain(&nu).any(|&e| e <= 0.0) {
        return Err(Error::DegenerateSamples);
    }
    let (n, m) = (p.count() as f64, q.count() as f64);
    let sum: f64 = rho.iter().zip(&nu).map(|(r, v)| (v / r).ln()).sum();
    Ok((d as f64 * sum / n + (m / (n - 1.0)).ln()).max(0.0))
}
