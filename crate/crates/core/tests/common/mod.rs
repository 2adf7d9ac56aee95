//! Independent oracles for the integration tests. Nothing here calls the
//! library's decompositions.

#![allow(dead_code)]

use improper::linalg::{overline, ComplexMatrix, RealMatrix};
use improper::second_order::SecondOrderPair;
use num_complex::Complex64;
use proptest::prelude::*;

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
pub fn jacobi_eigenvalues(a: &RealMatrix) -> Vec<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let scale: f64 = m.iter().map(|x| x * x).sum();
        if off <= 1e-32 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)] == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Eigenvalues of a Hermitian matrix, ascending: every eigenvalue of
/// `overline(A)` appears twice, so keep every other one.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    jacobi_eigenvalues(&overline(a))
        .into_iter()
        .step_by(2)
        .collect()
}

/// Singular values, descending, from the eigenvalues of `AᴴA`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let g = a.adjoint() * a;
    let mut s: Vec<f64> = hermitian_eigenvalues(&g)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    s.reverse();
    s
}

/// Composite Gauss–Legendre (5 points) on `[a, b]` with `panels` panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            X.iter()
                .zip(&W)
                .map(|(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// `∫∫ f(x, y)` over a rectangle.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x: (f64, f64),
    y: (f64, f64),
    panels: usize,
) -> f64 {
    integrate(
        |u| integrate(|v| f(u, v), y.0, y.1, panels),
        x.0,
        x.1,
        panels,
    )
}

/// Density of the zero-mean real Gaussian with covariance `s` at `x`,
/// for 2×2 `s` (used for scalar complex vectors).
pub fn real_gaussian_density_2d(s: &RealMatrix, x: f64, y: f64) -> f64 {
    let det = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
    let q = (s[(1, 1)] * x * x - 2.0 * s[(0, 1)] * x * y + s[(0, 0)] * y * y) / det;
    (-0.5 * q).exp() / (std::f64::consts::TAU * det.sqrt())
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn scalar_pair(cov: f64, pcov: f64) -> SecondOrderPair {
    SecondOrderPair::scalar(cov, c(pcov, 0.0)).unwrap()
}

/// Strategy for complex `rows × cols` matrices with entries in the unit box.
pub fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_fn(rows, cols, |i, j| c(v[i * cols + j].0, v[i * cols + j].1))
    })
}

/// Square complex matrix of random size `1..=max_n`.
pub fn square_matrix(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| complex_matrix(n, n))
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Zero-mean real Gaussian density with covariance `s` at `xi`.
pub fn real_gaussian_density(s: &RealMatrix, xi: &[f64]) -> f64 {
    let d = xi.len();
    let x = nalgebra::DVector::from_column_slice(xi);
    let inv = s.clone().try_inverse().expect("non-singular covariance");
    let q = (x.transpose() * inv * &x)[(0, 0)];
    (-0.5 * q).exp() / ((std::f64::consts::TAU).powi(d as i32) * s.determinant()).sqrt()
}

/// Density of `e^{i2πψ} x` with `ψ` uniform, by averaging the Gaussian
/// density of `x` over rotations.
pub fn rotation_averaged_density(s: &RealMatrix, x: &[Complex64]) -> f64 {
    let n = x.len();
    integrate(
        |psi| {
            let rot = Complex64::from_polar(1.0, -std::f64::consts::TAU * psi);
            let mut xi = vec![0.0; 2 * n];
            for (k, z) in x.iter().enumerate() {
                let w = rot * z;
                xi[k] = w.re;
                xi[n + k] = w.im;
            }
            real_gaussian_density(s, &xi)
        },
        0.0,
        1.0,
        200,
    )
}

/// `overline(H)` built entry by entry.
pub fn embed(h: &ComplexMatrix) -> RealMatrix {
    let n = h.nrows();
    let mut out = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}

/// Covariance of `(Re x, Im x)` from the second-order moments.
pub fn real_cov(pair: &SecondOrderPair) -> RealMatrix {
    real_cov_parts(&pair.c, &pair.p)
}

pub fn real_cov_parts(cm: &ComplexMatrix, pm: &ComplexMatrix) -> RealMatrix {
    let n = cm.nrows();
    let mut out = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (cij, pij) = (cm[(i, j)], pm[(i, j)]);
            out[(i, j)] = 0.5 * (cij + pij).re;
            out[(i + n, j + n)] = 0.5 * (cij - pij).re;
            out[(i + n, j)] = 0.5 * (cij + pij).im;
            out[(i, j + n)] = 0.5 * (pij - cij).im;
        }
    }
    out
}
