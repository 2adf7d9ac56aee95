//! Dense complex matrix kernel.
//!
//! Real embeddings (`overline`, `underline`), SVD, Hermitian eigendecomposition,
//! Takagi factorization of complex symmetric matrices and generalized Cholesky
//! factors. Matrices are small (covariance sized), so everything is dense.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;
pub type ComplexVector = DVector<Complex64>;

/// Absolute floor applied to every relative tolerance, so that checks on
/// (near) zero matrices stay meaningful.
pub const ABS_FLOOR: f64 = 1e-12;

/// Relative tolerance used for symmetry and Hermiticity checks.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Gap (relative to the largest singular value) below which singular values
/// are treated as one degenerate block in the Takagi factorization.
const DEGENERACY_GAP: f64 = 1e-8;

/// `max(rel * norm, ABS_FLOOR)`.
#[inline]
pub fn scaled_tol(rel: f64, norm: f64) -> f64 {
    (rel * norm).max(ABS_FLOOR)
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from row-major real and imaginary parts.
pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> ComplexMatrix {
    assert_eq!(re.len(), rows * cols);
    assert_eq!(im.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| c(re[i * cols + j], im[i * cols + j]))
}

pub fn from_real(a: &RealMatrix) -> ComplexMatrix {
    a.map(|x| c(x, 0.0))
}

pub fn diag_real(d: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        d.len(),
        d.iter().map(|&x| c(x, 0.0)),
    ))
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(a: &ComplexMatrix, what: &str) -> Result<()> {
    if is_finite(a) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_real(a: &RealMatrix) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖A − Aᵀ‖_F`.
pub fn symmetry_residual(a: &ComplexMatrix) -> f64 {
    frobenius(&(a - a.transpose()))
}

/// `‖A − Aᴴ‖_F`.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    frobenius(&(a - a.adjoint()))
}

pub fn is_symmetric(a: &ComplexMatrix) -> bool {
    a.is_square() && symmetry_residual(a) <= scaled_tol(STRUCTURE_TOL, frobenius(a))
}

pub fn is_hermitian(a: &ComplexMatrix) -> bool {
    a.is_square() && hermitian_residual(a) <= scaled_tol(STRUCTURE_TOL, frobenius(a))
}

pub fn trace_re(a: &ComplexMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// Real embedding `[[Re A, −Im A], [Im A, Re A]]`; the real-matrix image of
/// the linear map `x ↦ A x` acting on stacked `(Re x, Im x)`.
pub fn overline(a: &ComplexMatrix) -> RealMatrix {
    let (n, m) = a.shape();
    RealMatrix::from_fn(2 * n, 2 * m, |i, j| {
        let z = a[(i % n, j % m)];
        match (i < n, j < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Real embedding `[[Re A, Im A], [Im A, −Re A]]`; the image of the
/// conjugate-linear map `x ↦ A x̄`.
pub fn underline(a: &ComplexMatrix) -> RealMatrix {
    let (n, m) = a.shape();
    RealMatrix::from_fn(2 * n, 2 * m, |i, j| {
        let z = a[(i % n, j % m)];
        match (i < n, j < m) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    })
}

#[derive(Debug, Clone)]
pub struct Svd {
    /// n×n unitary.
    pub u: ComplexMatrix,
    /// min(n, m) singular values, descending.
    pub sigma: Vec<f64>,
    /// m×m unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    /// `U · diag_{n×m}(σ) · Vᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (n, m) = (self.u.nrows(), self.v.nrows());
        let mut s = ComplexMatrix::zeros(n, m);
        for (i, &x) in self.sigma.iter().enumerate() {
            s[(i, i)] = c(x, 0.0);
        }
        &self.u * s * self.v.adjoint()
    }
}

/// Full singular value decomposition `A = U Σ Vᴴ`.
///
/// One-sided Jacobi: column pairs of `A V` are rotated until mutually
/// orthogonal, then `σⱼ` are the column norms. This stays accurate when
/// singular values repeat, where nalgebra's complex bidiagonal SVD may stop
/// short of convergence.
pub fn svd(a: &ComplexMatrix) -> Svd {
    let (n, m) = a.shape();
    if n < m {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    if m == 0 {
        return Svd {
            u: ComplexMatrix::identity(n, n),
            sigma: Vec::new(),
            v: ComplexMatrix::identity(m, m),
        };
    }
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(m, m);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate_columns(&mut w, p, q, phase, cs, sn);
                rotate_columns(&mut v, p, q, phase, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..m).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let floor = sigma[0] * f64::EPSILON * n as f64;
    let rank = sigma.iter().take_while(|&&x| x > floor && x > 0.0).count();
    let u_cols: Vec<ComplexVector> = order[..rank]
        .iter()
        .map(|&j| w.column(j) / c(norms[j], 0.0))
        .collect();
    let u_part = if rank == 0 {
        ComplexMatrix::zeros(n, 0)
    } else {
        ComplexMatrix::from_columns(&u_cols)
    };
    let v_sorted = ComplexMatrix::from_fn(m, m, |i, j| v[(i, order[j])]);
    Svd {
        u: complete_unitary(&u_part),
        sigma,
        v: v_sorted,
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// Rephases column `q` by `e^{−iφ}`, then applies the real rotation
/// `x_p ← c x_p − s x_q`, `x_q ← s x_p + c x_q`.
fn rotate_columns(x: &mut ComplexMatrix, p: usize, q: usize, phase: Complex64, cs: f64, sn: f64) {
    let conj = phase.conj();
    for i in 0..x.nrows() {
        let xp = x[(i, p)];
        let xq = x[(i, q)] * conj;
        x[(i, p)] = xp * cs - xq * sn;
        x[(i, q)] = xp * sn + xq * cs;
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).sigma
}

/// Extends orthonormal columns to a square unitary matrix by Gram–Schmidt
/// against the standard basis.
fn complete_unitary(cols: &ComplexMatrix) -> ComplexMatrix {
    let (n, k) = cols.shape();
    if k == n {
        return cols.clone();
    }
    let mut basis: Vec<ComplexVector> = (0..k).map(|j| cols.column(j).into_owned()).collect();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = ComplexVector::zeros(n);
        v[e] = c(1.0, 0.0);
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / c(norm, 0.0));
        }
    }
    ComplexMatrix::from_columns(&basis)
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Unitary eigenvector matrix; column `i` belongs to `d[i]`.
    pub u: ComplexMatrix,
    /// Real eigenvalues, descending.
    pub d: Vec<f64>,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.u * diag_real(&self.d) * self.u.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.d.last().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue magnitude, i.e. the operator norm.
    pub fn spectral_radius(&self) -> f64 {
        self.d.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

/// Eigendecomposition `A = U diag(d) Uᴴ` of a Hermitian matrix.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let residual = hermitian_residual(a);
    if residual > scaled_tol(STRUCTURE_TOL, frobenius(a)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(hermitian_eig_unchecked(a))
}

fn hermitian_eig_unchecked(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.nrows();
    if n == 0 {
        return HermitianEigen {
            u: ComplexMatrix::zeros(0, 0),
            d: Vec::new(),
        };
    }
    let sym = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    HermitianEigen {
        u: ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]),
        d: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
    }
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues descending.
pub fn real_symmetric_eig(a: &RealMatrix) -> (RealMatrix, Vec<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (RealMatrix::zeros(0, 0), Vec::new());
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    (
        RealMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]),
        order.iter().map(|&i| eig.eigenvalues[i]).collect(),
    )
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

#[derive(Debug, Clone)]
pub struct TakagiFactorization {
    /// Unitary.
    pub q: ComplexMatrix,
    /// Non-negative, descending.
    pub sigma: Vec<f64>,
}

impl TakagiFactorization {
    /// `Q · diag(σ) · Qᵀ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.q * diag_real(&self.sigma) * self.q.transpose()
    }
}

/// Takagi factorization `A = Q Λ Qᵀ` of a complex symmetric matrix.
///
/// From the SVD `A = U Σ Vᴴ`, the matrix `W = Uᴴ V̄` is unitary and, on each
/// block of equal singular values, symmetric. Taking `Q = U W^{1/2}` with a
/// symmetric square root computed blockwise gives `Q Σ Qᵀ = A`. Blocks are
/// formed from singular values whose gap is below `1e-8 σ₁`, which keeps the
/// construction stable when singular values repeat.
pub fn takagi(a: &ComplexMatrix) -> Result<TakagiFactorization> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Takagi factorization needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let residual = symmetry_residual(a);
    if residual > scaled_tol(STRUCTURE_TOL, frobenius(a)) {
        return Err(Error::NotSymmetric { residual });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(TakagiFactorization {
            q: ComplexMatrix::zeros(0, 0),
            sigma: Vec::new(),
        });
    }
    let Svd { u, sigma, v } = svd(a);
    let w = u.adjoint() * v.conjugate();

    let gap = DEGENERACY_GAP * sigma[0];
    let mut root = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sigma[end - 1] - sigma[end] <= gap {
            end += 1;
        }
        let block = w
            .view((start, start), (end - start, end - start))
            .into_owned();
        root.view_mut((start, start), (end - start, end - start))
            .copy_from(&unitary_sqrt(&block));
        start = end;
    }

    Ok(TakagiFactorization { q: u * root, sigma })
}

/// Symmetric square root of a symmetric unitary matrix.
///
/// The real and imaginary parts of such a `W` are commuting real symmetric
/// matrices, so a real orthogonal `O` diagonalizes both, and
/// `O diag(e^{iθⱼ/2}) Oᵀ` is a symmetric root whatever branch each `θⱼ` is
/// taken on. `O` comes from a generic real combination of the two parts.
fn unitary_sqrt(w: &ComplexMatrix) -> ComplexMatrix {
    if w.nrows() == 1 {
        let z = w[(0, 0)];
        return ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, 0.5 * z.arg()));
    }
    const MIX: f64 = 0.754_877_666_246_692_7;
    let m = w.map(|z| z.re + MIX * z.im);
    let (o, _) = real_symmetric_eig(&(&m + m.transpose()).scale(0.5));
    let o = from_real(&o);
    let d = o.transpose() * w * &o;
    let roots: Vec<Complex64> = d
        .diagonal()
        .iter()
        .map(|ev| Complex64::from_polar(1.0, 0.5 * ev.arg()))
        .collect();
    &o * ComplexMatrix::from_diagonal(&ComplexVector::from_vec(roots)) * o.transpose()
}

#[derive(Debug, Clone)]
pub struct GeneralizedCholesky {
    /// Non-singular factor with `B Bᴴ = A`.
    pub b: ComplexMatrix,
    eig: HermitianEigen,
}

impl GeneralizedCholesky {
    /// `B⁻¹`, formed from the eigendecomposition rather than by inversion.
    pub fn inverse(&self) -> ComplexMatrix {
        let inv_sqrt: Vec<f64> = self.eig.d.iter().map(|d| 1.0 / d.sqrt()).collect();
        &self.eig.u * diag_real(&inv_sqrt) * self.eig.u.adjoint()
    }

    /// Eigenvalues of the factored matrix, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.d
    }

    /// `log det A`.
    pub fn log_det(&self) -> f64 {
        self.eig.d.iter().map(|d| d.ln()).sum()
    }
}

/// A generalized Cholesky factor of a Hermitian positive definite matrix.
///
/// Uses the Hermitian square root `B = U diag(√d) Uᴴ`; any right-unitary
/// multiple of it is an equally valid factor.
pub fn generalized_cholesky(a: &ComplexMatrix) -> Result<GeneralizedCholesky> {
    let eig = hermitian_eig(a)?;
    let min = eig.min();
    if eig.d.is_empty() || min <= 1e-12 * eig.spectral_radius() || min <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let sqrt: Vec<f64> = eig.d.iter().map(|d| d.sqrt()).collect();
    let b = &eig.u * diag_real(&sqrt) * eig.u.adjoint();
    Ok(GeneralizedCholesky { b, eig })
}

/// `log |det A|` from the singular values.
pub fn log_abs_det(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().map(|s| s.ln()).sum()
}

/// Inverse of a square matrix, or `None` when it is numerically singular.
pub fn inverse(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 1e-13 * hi => a.clone().try_inverse(),
        _ => None,
    }
}
