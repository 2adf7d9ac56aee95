//! Covariance / complementary-covariance pairs.
//!
//! A zero-mean complex vector `x = u + i v` has covariance `C = E[x xᴴ]` and
//! complementary covariance `P = E[x xᵀ]`. Together they determine the
//! covariance of the stacked real vector `(u, v)`:
//! `½·overline(C) + ½·underline(P)`. A pair is *valid* exactly when the
//! singular values of `B⁻¹ P B⁻ᵀ` (with `B Bᴴ = C`) do not exceed one.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, frobenius, frobenius_real, generalized_cholesky, hermitian_eig, overline,
    real_symmetric_eig, scaled_tol, singular_values, underline, ComplexMatrix, ComplexVector,
    RealMatrix, STRUCTURE_TOL,
};
use crate::rng;

/// Slack on the circularity coefficients before a pair is declared invalid.
pub const VALIDITY_TOL: f64 = 1e-10;

/// Smallest admissible eigenvalue of `C`, relative to `‖C‖₂`.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderPair {
    pub mean: ComplexVector,
    pub c: ComplexMatrix,
    pub p: ComplexMatrix,
}

impl SecondOrderPair {
    /// Checks the structural invariants: `C` Hermitian and non-negative
    /// definite, `P` symmetric, matching dimensions. It does *not* require
    /// the pair to be valid; see [`validate_pair`].
    pub fn new(mean: ComplexVector, c: ComplexMatrix, p: ComplexMatrix) -> Result<Self> {
        let n = mean.len();
        if c.shape() != (n, n) || p.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "mean has length {n}, C is {:?}, P is {:?}",
                c.shape(),
                p.shape()
            )));
        }
        linalg::ensure_finite(&c, "covariance")?;
        linalg::ensure_finite(&p, "complementary covariance")?;
        if mean.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("mean".into()));
        }
        let eig = hermitian_eig(&c)?;
        if eig.min() < -STRUCTURE_TOL * eig.spectral_radius() {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: eig.min(),
            });
        }
        let residual = linalg::symmetry_residual(&p);
        if residual > scaled_tol(STRUCTURE_TOL, frobenius(&p)) {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(Self { mean, c, p })
    }

    pub fn zero_mean(c: ComplexMatrix, p: ComplexMatrix) -> Result<Self> {
        let n = c.nrows();
        Self::new(ComplexVector::zeros(n), c, p)
    }

    /// Proper pair `(0, C, 0)`.
    pub fn proper(c: ComplexMatrix) -> Result<Self> {
        let n = c.nrows();
        Self::new(ComplexVector::zeros(n), c, ComplexMatrix::zeros(n, n))
    }

    /// Scalar pair with real covariance `cov` and complementary covariance `pcov`.
    pub fn scalar(cov: f64, pcov: Complex64) -> Result<Self> {
        Self::zero_mean(
            ComplexMatrix::from_element(1, 1, c(cov, 0.0)),
            ComplexMatrix::from_element(1, 1, pcov),
        )
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn is_zero_mean(&self) -> bool {
        self.mean.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularitySpectrum {
    /// Circularity coefficients, descending.
    pub lambdas: Vec<f64>,
}

impl CircularitySpectrum {
    pub fn max(&self) -> f64 {
        self.lambdas.first().copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `½ Σ log(1 − λᵢ²)`, the (non-positive) entropy correction for
    /// improperness.
    pub fn half_log_defect(&self) -> f64 {
        0.5 * self.lambdas.iter().map(|l| (-l * l).ln_1p()).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidityReason {
    Ok,
    CNotHermitian,
    CNotPsd,
    CSingular,
    PNotSymmetric,
    SpectrumExceedsOne,
}

impl fmt::Display for ValidityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Ok => "OK",
            Self::CNotHermitian => "C_NOT_HERMITIAN",
            Self::CNotPsd => "C_NOT_PSD",
            Self::CSingular => "C_SINGULAR",
            Self::PNotSymmetric => "P_NOT_SYMMETRIC",
            Self::SpectrumExceedsOne => "SPECTRUM_EXCEEDS_ONE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairValidity {
    pub valid: bool,
    pub reason: ValidityReason,
    /// Largest circularity coefficient, when it could be computed.
    pub max_lambda: Option<f64>,
}

impl PairValidity {
    fn rejected(reason: ValidityReason, max_lambda: Option<f64>) -> Self {
        Self {
            valid: false,
            reason,
            max_lambda,
        }
    }
}

/// Covariance of the real representation `(Re x, Im x)`:
/// `½·overline(C) + ½·underline(P)`.
pub fn real_covariance(pair: &SecondOrderPair) -> RealMatrix {
    let s = (overline(&pair.c) + underline(&pair.p)) * 0.5;
    // exact symmetry; the two halves already agree up to rounding
    (&s + s.transpose()) * 0.5
}

/// Inverse of [`real_covariance`] for a zero-mean vector.
pub fn pair_from_real_covariance(s: &RealMatrix) -> Result<SecondOrderPair> {
    let (rows, cols) = s.shape();
    if rows != cols || rows % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "real covariance must be 2n x 2n, got {rows}x{cols}"
        )));
    }
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("real covariance".into()));
    }
    let residual = frobenius_real(&(s - s.transpose()));
    if residual > scaled_tol(STRUCTURE_TOL, frobenius_real(s)) {
        return Err(Error::NotSymmetric { residual });
    }
    let (_, eigs) = real_symmetric_eig(s);
    let min = eigs.last().copied().unwrap_or(0.0);
    let radius = eigs.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if min < -STRUCTURE_TOL * radius {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let n = rows / 2;
    let s11 = s.view((0, 0), (n, n));
    let s12 = s.view((0, n), (n, n));
    let s21 = s.view((n, 0), (n, n));
    let s22 = s.view((n, n), (n, n));
    let cm = ComplexMatrix::from_fn(n, n, |i, j| {
        c(s11[(i, j)] + s22[(i, j)], s21[(i, j)] - s12[(i, j)])
    });
    let pm = ComplexMatrix::from_fn(n, n, |i, j| {
        c(s11[(i, j)] - s22[(i, j)], s21[(i, j)] + s12[(i, j)])
    });
    SecondOrderPair::zero_mean(cm, pm)
}

/// Singular values of `B⁻¹ P B⁻ᵀ` for a generalized Cholesky factor `B` of `C`.
pub fn circularity_spectrum(pair: &SecondOrderPair) -> Result<CircularitySpectrum> {
    spectrum_of(&pair.c, &pair.p)
}

fn spectrum_of(cm: &ComplexMatrix, pm: &ComplexMatrix) -> Result<CircularitySpectrum> {
    let chol = generalized_cholesky(cm).map_err(|e| match e {
        Error::NotPositiveDefinite { min_eigenvalue } => {
            Error::SingularCovariance { min_eigenvalue }
        }
        other => other,
    })?;
    let b_inv = chol.inverse();
    let m = &b_inv * pm * b_inv.transpose();
    Ok(CircularitySpectrum {
        lambdas: singular_values(&m),
    })
}

/// Decides whether `(C, P)` can be the covariance and complementary
/// covariance of some complex random vector.
pub fn validate_pair(cm: &ComplexMatrix, pm: &ComplexMatrix) -> Result<PairValidity> {
    if !cm.is_square() || cm.shape() != pm.shape() {
        return Err(Error::DimensionMismatch(format!(
            "C is {:?}, P is {:?}",
            cm.shape(),
            pm.shape()
        )));
    }
    linalg::ensure_finite(cm, "covariance")?;
    linalg::ensure_finite(pm, "complementary covariance")?;
    let eig = match hermitian_eig(cm) {
        Ok(e) => e,
        Err(Error::NotHermitian { .. }) => {
            return Ok(PairValidity::rejected(ValidityReason::CNotHermitian, None))
        }
        Err(e) => return Err(e),
    };
    let radius = eig.spectral_radius();
    if eig.min() < -STRUCTURE_TOL * radius {
        return Ok(PairValidity::rejected(ValidityReason::CNotPsd, None));
    }
    if eig.d.is_empty() || eig.min() <= SINGULAR_TOL * radius {
        return Ok(PairValidity::rejected(ValidityReason::CSingular, None));
    }
    if linalg::symmetry_residual(pm) > scaled_tol(STRUCTURE_TOL, frobenius(pm)) {
        return Ok(PairValidity::rejected(ValidityReason::PNotSymmetric, None));
    }
    let lambda = spectrum_of(cm, pm)?.max();
    if lambda > 1.0 + VALIDITY_TOL {
        return Ok(PairValidity::rejected(
            ValidityReason::SpectrumExceedsOne,
            Some(lambda),
        ));
    }
    Ok(PairValidity {
        valid: true,
        reason: ValidityReason::Ok,
        max_lambda: Some(lambda),
    })
}

/// Eigenvalues of `underline(P)` next to the singular values of `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnderlineSpectrum {
    /// The 2n eigenvalues of `underline(P)`, descending.
    pub eigs: Vec<f64>,
    /// The n singular values of `P`, descending.
    pub sigma: Vec<f64>,
}

impl UnderlineSpectrum {
    /// Largest deviation between `eigs` and the multiset `{±σᵢ}`.
    pub fn max_mismatch(&self) -> f64 {
        let mut expected: Vec<f64> = self
            .sigma
            .iter()
            .copied()
            .chain(self.sigma.iter().map(|s| -s))
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        self.eigs
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The eigenvalues of `underline(P)` come in pairs `±σᵢ`, where `σᵢ` are the
/// singular values of the symmetric `P`.
pub fn underline_p_eigen_check(pair: &SecondOrderPair) -> Result<UnderlineSpectrum> {
    let residual = linalg::symmetry_residual(&pair.p);
    if residual > scaled_tol(STRUCTURE_TOL, frobenius(&pair.p)) {
        return Err(Error::NotSymmetric { residual });
    }
    let (_, eigs) = real_symmetric_eig(&underline(&pair.p));
    Ok(UnderlineSpectrum {
        eigs,
        sigma: singular_values(&pair.p),
    })
}

/// `count` complex `n`-vectors stored row-major, plus the seed that made them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    n: usize,
    data: Vec<Complex64>,
    pub seed: u64,
}

impl SampleSet {
    pub fn new(n: usize, data: Vec<Complex64>, seed: u64) -> Result<Self> {
        if n == 0 || data.is_empty() || !data.len().is_multiple_of(n) {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not form a non-empty set of {n}-vectors",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("samples".into()));
        }
        Ok(Self { n, data, seed })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn vectors(&self) -> impl ExactSizeIterator<Item = &[Complex64]> + '_ {
        self.data.chunks_exact(self.n)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Applies `f` to every vector, keeping the seed.
    pub fn map_vectors<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, &[Complex64], &mut [Complex64]),
    {
        let mut data = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for (i, (src, dst)) in self
            .data
            .chunks_exact(self.n)
            .zip(data.chunks_exact_mut(self.n))
            .enumerate()
        {
            f(i, src, dst);
        }
        Self {
            n: self.n,
            data,
            seed: self.seed,
        }
    }

    /// Stacks shards in the given order.
    pub fn concat(shards: &[SampleSet]) -> Result<Self> {
        let first = shards
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no shards".into()))?;
        if shards.iter().any(|s| s.n != first.n) {
            return Err(Error::DimensionMismatch(
                "shards differ in dimension".into(),
            ));
        }
        let data = shards.iter().flat_map(|s| s.data.iter().copied()).collect();
        Ok(Self {
            n: first.n,
            data,
            seed: first.seed,
        })
    }

    /// Real representation of vector `i`: `(Re x, Im x)`.
    pub fn real_point(&self, i: usize, out: &mut [f64]) {
        let n = self.n;
        for (k, z) in self.vector(i).iter().enumerate() {
            out[k] = z.re;
            out[n + k] = z.im;
        }
    }
}

/// Draws `count` i.i.d. Gaussian vectors with the given second-order pair.
///
/// The real covariance is factored through its eigendecomposition with
/// negative eigenvalues clipped to zero, so boundary pairs (some `λᵢ = 1`)
/// are supported. Draw order: for each vector in turn, `2n` standard normals
/// from the ChaCha20 stream of `seed`; the first `n` feed the real parts.
pub fn sample_gaussian(pair: &SecondOrderPair, count: usize, seed: u64) -> Result<SampleSet> {
    let validity = validate_pair(&pair.c, &pair.p)?;
    if !validity.valid {
        return Err(Error::InvalidPair {
            reason: validity.reason,
        });
    }
    let n = pair.dim();
    let s = real_covariance(pair);
    let (v, eigs) = real_symmetric_eig(&s);
    let scale: Vec<f64> = eigs.iter().map(|e| e.max(0.0).sqrt()).collect();
    let factor = RealMatrix::from_fn(2 * n, 2 * n, |i, j| v[(i, j)] * scale[j]);

    let mut rng = rng::rng(seed);
    let mut g = DVector::<f64>::zeros(2 * n);
    let mut data = Vec::with_capacity(count * n);
    for _ in 0..count {
        for gi in g.iter_mut() {
            *gi = StandardNormal.sample(&mut rng);
        }
        let xi = &factor * &g;
        for k in 0..n {
            data.push(pair.mean[k] + c(xi[k], xi[n + k]));
        }
    }
    SampleSet::new(n, data, seed)
}

/// Sample mean and `1/N`-normalized second moments. Sums run in index order,
/// so the result does not depend on how the set was sharded.
pub fn empirical_pair(samples: &SampleSet) -> Result<SecondOrderPair> {
    let count = samples.count();
    if count < 2 {
        return Err(Error::TooFewSamples {
            got: count,
            need: 2,
        });
    }
    let n = samples.dim();
    let inv = 1.0 / count as f64;
    let mut mean = ComplexVector::zeros(n);
    for x in samples.vectors() {
        for k in 0..n {
            mean[k] += x[k];
        }
    }
    mean *= c(inv, 0.0);

    let mut cm = ComplexMatrix::zeros(n, n);
    let mut pm = ComplexMatrix::zeros(n, n);
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for x in samples.vectors() {
        for k in 0..n {
            d[k] = x[k] - mean[k];
        }
        for i in 0..n {
            for j in i..n {
                cm[(i, j)] += d[i] * d[j].conj();
                pm[(i, j)] += d[i] * d[j];
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            cm[(i, j)] *= inv;
            pm[(i, j)] *= inv;
            if i == j {
                cm[(i, i)].im = 0.0;
            } else {
                cm[(j, i)] = cm[(i, j)].conj();
                pm[(j, i)] = pm[(i, j)];
            }
        }
    }
    Ok(SecondOrderPair { mean, c: cm, p: pm })
}
