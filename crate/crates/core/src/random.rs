//! Random test instances: matrices, unitaries, valid pairs and channels.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::capacity::ChannelSpec;
use crate::linalg::{c, generalized_cholesky, operator_norm, ComplexMatrix};
use crate::rng::Rng;
use crate::second_order::SecondOrderPair;

/// Matrix with i.i.d. standard complex Gaussian entries (`E|aᵢⱼ|² = 1`).
pub fn complex_gaussian(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(s * re, s * im)
    })
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn unitary(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let qr = complex_gaussian(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Complex symmetric matrix `U diag(σ) Uᵀ`. With `repeat` the singular
/// values come in equal pairs.
pub fn symmetric(n: usize, repeat: bool, rng: &mut Rng) -> ComplexMatrix {
    let u = unitary(n, rng);
    let mut sigma: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
    if repeat {
        for i in (1..n).step_by(2) {
            sigma[i] = sigma[i - 1];
        }
    }
    let d =
        ComplexMatrix::from_diagonal(&sigma.iter().map(|&s| c(s, 0.0)).collect::<Vec<_>>().into());
    &u * d * u.transpose()
}

/// Well-conditioned Hermitian positive definite matrix `AAᴴ/n + ½I`.
pub fn positive_definite(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let a = complex_gaussian(n, n, rng);
    let m = &a * a.adjoint() * c(1.0 / n as f64, 0.0) + ComplexMatrix::identity(n, n) * c(0.5, 0.0);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// Zero-mean pair whose circularity coefficients are the given `lambdas`:
/// `P = B Q diag(λ) Qᵀ Bᵀ` with `B` the generalized Cholesky factor of a
/// random `C` and `Q` a random unitary.
pub fn pair_with_spectrum(lambdas: &[f64], rng: &mut Rng) -> SecondOrderPair {
    let n = lambdas.len();
    let cm = positive_definite(n, rng);
    let b = generalized_cholesky(&cm)
        .expect("positive definite by construction")
        .b;
    let q = unitary(n, rng);
    let l = ComplexMatrix::from_diagonal(
        &lambdas
            .iter()
            .map(|&x| c(x, 0.0))
            .collect::<Vec<_>>()
            .into(),
    );
    let bq = &b * q;
    let p = &bq * l * bq.transpose();
    let p = (&p + p.transpose()) * c(0.5, 0.0);
    SecondOrderPair::zero_mean(cm, p).expect("well-formed by construction")
}

/// Random zero-mean pair with coefficients uniform on `[0, lambda_max]` and
/// the largest one equal to `lambda_max`.
pub fn valid_pair(n: usize, lambda_max: f64, rng: &mut Rng) -> SecondOrderPair {
    let mut lambdas: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=lambda_max)).collect();
    lambdas[0] = lambda_max;
    pair_with_spectrum(&lambdas, rng)
}

/// Admissible channel: `H = I + 0.1·G`, random noise with `λ_max ≤ 0.9`,
/// and `S = 2.5 n ‖H⁻¹C_zH⁻ᴴ‖₂`.
pub fn channel(n: usize, rng: &mut Rng) -> ChannelSpec {
    let h = ComplexMatrix::identity(n, n) + complex_gaussian(n, n, rng) * c(0.1, 0.0);
    let lambda_max = rng.random_range(0.0..=0.9);
    let noise = valid_pair(n, lambda_max, rng);
    let h_inv = h.clone().try_inverse().expect("near-identity channel");
    let k = &h_inv * &noise.c * h_inv.adjoint();
    let power = 2.5 * n as f64 * operator_norm(&k);
    ChannelSpec::new(h, noise, power)
}
