//! Capacity of `y = H x + z` with deterministic square `H`, Gaussian noise
//! `z` that may be improper, and average power budget `E[xᴴx] ≤ S`.
//!
//! Inside the high-SNR regime `S ≥ 2n ‖H⁻¹ C_z H⁻ᴴ‖₂` the water level lies
//! above every eigenchannel, so water-filling has a closed form. The
//! optimal input is Gaussian with `C_x = L·I − H⁻¹ C_z H⁻ᴴ` and
//! `P_x = −H⁻¹ P_z H⁻ᵀ`. Specs outside that regime are rejected.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analog::circularize;
use crate::entropy::{complex_gaussian_entropy, knn_entropy, EntropyMethod, EntropyValue};
use crate::error::{Error, Result};
use crate::linalg::{
    self, c, frobenius, inverse, log_abs_det, operator_norm, singular_values, trace_re,
    ComplexMatrix, ComplexVector,
};
use crate::rng::derive_seed;
use crate::second_order::{
    circularity_spectrum, sample_gaussian, validate_pair, CircularitySpectrum, SampleSet,
    SecondOrderPair,
};

/// Largest admissible noise circularity coefficient.
pub const SPECTRUM_LIMIT: f64 = 1.0 - 1e-10;

/// Relative slack on the high-SNR threshold, so the boundary `S = 2n‖·‖₂`
/// is admitted despite rounding.
const SNR_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub h: ComplexMatrix,
    pub noise: SecondOrderPair,
    pub power: f64,
}

impl ChannelSpec {
    pub fn new(h: ComplexMatrix, noise: SecondOrderPair, power: f64) -> Self {
        Self { h, noise, power }
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// `H⁻¹ C_z H⁻ᴴ`, the noise covariance referred to the input.
    fn effective_noise(&self, h_inv: &ComplexMatrix) -> ComplexMatrix {
        let k = h_inv * &self.noise.c * h_inv.adjoint();
        (&k + k.adjoint()) * c(0.5, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    DimensionMismatch,
    SingularChannel,
    SingularNoise,
    NonzeroNoiseMean,
    NegativePower,
    HighSnr,
    SpectrumAtOne,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::DimensionMismatch => "DIMENSION_MISMATCH",
            Self::SingularChannel => "SINGULAR_CHANNEL",
            Self::SingularNoise => "SINGULAR_NOISE",
            Self::NonzeroNoiseMean => "NONZERO_NOISE_MEAN",
            Self::NegativePower => "NEGATIVE_POWER",
            Self::HighSnr => "HIGH_SNR",
            Self::SpectrumAtOne => "SPECTRUM_AT_ONE",
        };
        f.write_str(s)
    }
}

/// A violated assumption with the measured quantity and the threshold it
/// was compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub measured: f64,
    pub threshold: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (measured {}, threshold {})",
            self.kind, self.measured, self.threshold
        )
    }
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub capacity_nats: f64,
    /// Capacity-achieving Gaussian input.
    pub input_pair: SecondOrderPair,
    pub water_level: f64,
    /// Circularity coefficients of the noise.
    pub spectrum: CircularitySpectrum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityLossResult {
    pub delta_c_nats: f64,
    /// Singular values of `(n / (S + tr K)) H⁻¹ P_z H⁻ᵀ`, descending.
    pub mus: Vec<f64>,
}

/// Lists every violated assumption; empty means the closed form applies.
pub fn check_assumptions(spec: &ChannelSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = spec.h.nrows();
    if !spec.h.is_square() || spec.noise.dim() != n {
        out.push(Violation {
            kind: ViolationKind::DimensionMismatch,
            measured: spec.noise.dim() as f64,
            threshold: n as f64,
        });
        return out;
    }
    if !(spec.power >= 0.0) {
        out.push(Violation {
            kind: ViolationKind::NegativePower,
            measured: spec.power,
            threshold: 0.0,
        });
    }
    if !spec.noise.is_zero_mean() {
        out.push(Violation {
            kind: ViolationKind::NonzeroNoiseMean,
            measured: spec.noise.mean.norm(),
            threshold: 0.0,
        });
    }

    let sv = singular_values(&spec.h);
    let rcond = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    };
    let h_inv = if rcond > 1e-12 {
        inverse(&spec.h)
    } else {
        None
    };
    if h_inv.is_none() {
        out.push(Violation {
            kind: ViolationKind::SingularChannel,
            measured: rcond,
            threshold: 1e-12,
        });
    }

    match circularity_spectrum(&spec.noise) {
        Err(_) => {
            let eig = linalg::hermitian_eig(&spec.noise.c).ok();
            out.push(Violation {
                kind: ViolationKind::SingularNoise,
                measured: eig.map(|e| e.min()).unwrap_or(f64::NAN),
                threshold: 0.0,
            });
        }
        Ok(sp) => {
            if sp.max() >= SPECTRUM_LIMIT {
                out.push(Violation {
                    kind: ViolationKind::SpectrumAtOne,
                    measured: sp.max(),
                    threshold: SPECTRUM_LIMIT,
                });
            }
            if let Some(h_inv) = &h_inv {
                let k = spec.effective_noise(h_inv);
                let required = 2.0 * n as f64 * operator_norm(&k);
                if spec.power < required * (1.0 - SNR_SLACK) {
                    out.push(Violation {
                        kind: ViolationKind::HighSnr,
                        measured: spec.power,
                        threshold: required,
                    });
                }
            }
        }
    }
    out
}

fn admissible(spec: &ChannelSpec) -> Result<ComplexMatrix> {
    let violations = check_assumptions(spec);
    if !violations.is_empty() {
        return Err(Error::AssumptionViolated(violations));
    }
    Ok(inverse(&spec.h).expect("checked non-singular"))
}

/// Capacity and capacity-achieving input of the channel.
pub fn solve_capacity(spec: &ChannelSpec) -> Result<CapacityResult> {
    let h_inv = admissible(spec)?;
    let n = spec.dim();
    let nf = n as f64;
    let k = spec.effective_noise(&h_inv);
    let total = spec.power + trace_re(&k);
    let water_level = total / nf;

    let cx = ComplexMatrix::identity(n, n) * c(water_level, 0.0) - &k;
    let px = -(&h_inv * &spec.noise.p * h_inv.transpose());
    let px = (&px + px.transpose()) * c(0.5, 0.0);
    let input_pair = SecondOrderPair::zero_mean(cx, px)?;

    let spectrum = circularity_spectrum(&spec.noise)?;
    let log_det_cz = linalg::generalized_cholesky(&spec.noise.c)?.log_det();
    let capacity_nats = 2.0 * log_abs_det(&spec.h) + nf * total.ln()
        - log_det_cz
        - spectrum.half_log_defect()
        - nf * nf.ln();

    Ok(CapacityResult {
        capacity_nats,
        input_pair,
        water_level,
        spectrum,
    })
}

/// Rate lost by water-filling as if the noise were proper.
pub fn capacity_loss(spec: &ChannelSpec) -> Result<CapacityLossResult> {
    let h_inv = admissible(spec)?;
    let nf = spec.dim() as f64;
    let total = spec.power + trace_re(&spec.effective_noise(&h_inv));
    let m = (&h_inv * &spec.noise.p * h_inv.transpose()) * c(nf / total, 0.0);
    let mus = singular_values(&m);
    let delta_c_nats = -0.5 * mus.iter().map(|mu| (-mu * mu).ln_1p()).sum::<f64>();
    Ok(CapacityLossResult { delta_c_nats, mus })
}

/// `n log(2/√3)`, the supremum of the capacity loss in dimension `n`.
pub fn capacity_loss_bound(n: usize) -> f64 {
    n as f64 * (2.0 / 3.0_f64.sqrt()).ln()
}

/// Real/imaginary power split of the scalar channel `y = x + z` with real
/// noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarPowers {
    /// `(C_z + P_z)/2`.
    pub re_noise: f64,
    /// `(C_z − P_z)/2`.
    pub im_noise: f64,
    pub re_power: f64,
    pub im_power: f64,
    /// Common fill level `(S + C_z)/2`.
    pub level: f64,
}

/// Water-filling on the real and imaginary parts of a scalar channel.
pub fn scalar_powers(cz: f64, pz: f64, s: f64) -> Result<ScalarPowers> {
    let mut violations = Vec::new();
    if !(cz > 0.0) || !(pz.abs() <= cz) {
        violations.push(Violation {
            kind: ViolationKind::SpectrumAtOne,
            measured: pz.abs() / cz,
            threshold: 1.0,
        });
    }
    if !(s >= 2.0 * cz) {
        violations.push(Violation {
            kind: ViolationKind::HighSnr,
            measured: s,
            threshold: 2.0 * cz,
        });
    }
    if !violations.is_empty() {
        return Err(Error::AssumptionViolated(violations));
    }
    let re_noise = 0.5 * (cz + pz);
    let im_noise = 0.5 * (cz - pz);
    let level = 0.5 * (s + cz);
    let re_power = level - re_noise;
    Ok(ScalarPowers {
        re_noise,
        im_noise,
        re_power,
        // budget is conserved up to one rounding
        im_power: s - re_power,
        level,
    })
}

fn simulate_output(spec: &ChannelSpec, x: &SampleSet, seed: u64) -> Result<SampleSet> {
    let n = spec.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "input dimension {} vs channel {n}",
            x.dim()
        )));
    }
    let z = sample_gaussian(&spec.noise, x.count(), derive_seed(seed, 1))?;
    let mut hx = ComplexVector::zeros(n);
    Ok(x.map_vectors(|i, xi, out| {
        hx.copy_from(&(&spec.h * ComplexVector::from_column_slice(xi)));
        for (k, o) in out.iter_mut().enumerate() {
            *o = hx[k] + z.vector(i)[k];
        }
    }))
}

fn mi_from_output(spec: &ChannelSpec, y: &SampleSet, k: usize) -> Result<EntropyValue> {
    let hy = knn_entropy(y, k)?;
    let hz = complex_gaussian_entropy(&spec.noise)?;
    Ok(EntropyValue {
        value: hy.value - hz.value,
        method: EntropyMethod::KnnEstimate,
        stderr: hy.stderr,
    })
}

/// Monte Carlo estimate of `I(x; y) = h(y) − h(z)` for a Gaussian input.
///
/// Draws `count` inputs from `input_pair` with sub-seed 0 of `seed` and
/// noise with sub-seed 1; `h(y)` is a kNN estimate and `h(z)` closed form.
pub fn mc_mutual_information(
    spec: &ChannelSpec,
    input_pair: &SecondOrderPair,
    count: usize,
    k: usize,
    seed: u64,
) -> Result<EntropyValue> {
    let validity = validate_pair(&input_pair.c, &input_pair.p)?;
    if !validity.valid {
        return Err(Error::InvalidPair {
            reason: validity.reason,
        });
    }
    let trace = trace_re(&input_pair.c);
    if trace > spec.power + 1e-8 * spec.power.max(1.0) {
        return Err(Error::PowerExceeded {
            trace,
            budget: spec.power,
        });
    }
    let x = sample_gaussian(input_pair, count, derive_seed(seed, 0))?;
    let y = simulate_output(spec, &x, seed)?;
    mi_from_output(spec, &y, k)
}

/// Mutual information for arbitrary input samples (noise still Gaussian).
pub fn mc_mutual_information_samples(
    spec: &ChannelSpec,
    input: &SampleSet,
    k: usize,
    seed: u64,
) -> Result<EntropyValue> {
    let y = simulate_output(spec, input, seed)?;
    mi_from_output(spec, &y, k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularOptimality {
    pub mi_original: EntropyValue,
    pub mi_circularized: EntropyValue,
}

impl CircularOptimality {
    /// `√(s₁² + s₂²)`, the standard error of the difference.
    pub fn stderr(&self) -> f64 {
        self.mi_original
            .stderr_or_zero()
            .hypot(self.mi_circularized.stderr_or_zero())
    }

    /// `mi_circularized − mi_original`.
    pub fn gain(&self) -> f64 {
        self.mi_circularized.value - self.mi_original.value
    }

    /// Circularizing did not lose more than `sigmas` standard errors.
    pub fn holds(&self, sigmas: f64) -> bool {
        self.gain() >= -sigmas * self.stderr()
    }
}

/// Compares the mutual information of a sampled input with that of its
/// circular analog over a channel with circular Gaussian noise. Both runs
/// share the same noise draws (sub-seed 1 of `seed`); the circularizing
/// phases come from sub-seed 2.
pub fn verify_circular_optimality(
    spec: &ChannelSpec,
    input: &SampleSet,
    k: usize,
    seed: u64,
) -> Result<CircularOptimality> {
    let p_norm = frobenius(&spec.noise.p);
    if !spec.noise.is_zero_mean() || p_norm > 1e-12 * frobenius(&spec.noise.c).max(1.0) {
        return Err(Error::NoiseNotCircular { norm: p_norm });
    }
    let mi_original = mc_mutual_information_samples(spec, input, k, seed)?;
    let circ = circularize(input, derive_seed(seed, 2));
    let mi_circularized = mc_mutual_information_samples(spec, &circ, k, seed)?;
    Ok(CircularOptimality {
        mi_original,
        mi_circularized,
    })
}
