mod common;

use common::{
    c, complex_matrix, hermitian_eigenvalues, jacobi_eigenvalues, rel_diff, square_matrix,
};
use improper::linalg::{
    frobenius, frobenius_real, generalized_cholesky, hermitian_eig, overline, svd, takagi,
    underline, ComplexMatrix, RealMatrix,
};
use proptest::prelude::*;

fn rel(a: &RealMatrix, b: &RealMatrix) -> f64 {
    frobenius_real(&(a - b)) / frobenius_real(b).max(1e-300)
}

fn symmetric(a: ComplexMatrix) -> ComplexMatrix {
    &a + a.transpose()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn overline_and_underline_of_products((a, b) in (1..=6usize, 1..=6usize, 1..=6usize)
        .prop_flat_map(|(n, m, p)| (complex_matrix(n, m), complex_matrix(m, p))))
    {
        let ab = &a * &b;
        prop_assert!(rel(&overline(&ab), &(overline(&a) * overline(&b))) <= 1e-10);
        prop_assert!(rel(&underline(&ab), &(overline(&a) * underline(&b))) <= 1e-10);
        let ab_conj = &a * b.map(|z| z.conj());
        prop_assert!(rel(&underline(&ab_conj), &(underline(&a) * overline(&b))) <= 1e-10);
    }

    #[test]
    fn overline_of_adjoint_is_transpose(a in (1..=6usize, 1..=6usize).prop_flat_map(|(n, m)| complex_matrix(n, m))) {
        prop_assert_eq!(overline(&a.adjoint()), overline(&a).transpose());
    }

    #[test]
    fn determinant_of_overline(a in square_matrix(8)) {
        let lhs = overline(&a).determinant();
        let rhs = a.determinant().norm_sqr();
        prop_assert!(rel_diff(lhs, rhs) <= 1e-8, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn unitary_iff_overline_orthonormal(a in square_matrix(6)) {
        let n = a.nrows();
        let q = a.qr().q();
        let oq = overline(&q);
        prop_assert!(frobenius_real(&(oq.transpose() * &oq - RealMatrix::identity(2 * n, 2 * n))) <= 1e-12);
        let scaled = overline(&(&q * c(1.1, 0.0)));
        prop_assert!(frobenius_real(&(scaled.transpose() * &scaled - RealMatrix::identity(2 * n, 2 * n))) > 0.1);
    }

    #[test]
    fn takagi_reconstructs(a in square_matrix(8)) {
        let s = symmetric(a);
        let t = takagi(&s).unwrap();
        prop_assert!(frobenius(&(t.reconstruct() - &s)) <= 1e-8 * frobenius(&s).max(1e-300));
        let n = s.nrows();
        prop_assert!(frobenius(&(t.q.adjoint() * &t.q - ComplexMatrix::identity(n, n))) <= 1e-10);
    }

    #[test]
    fn takagi_values_match_singular_value_oracle(a in square_matrix(6)) {
        let s = symmetric(a);
        let t = takagi(&s).unwrap();
        let oracle = common::singular_values(&s);
        // the oracle squares the matrix, so small values carry √ε·σ₁ error
        for (x, y) in t.sigma.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-7 * oracle[0], "{} vs {}", x, y);
        }
    }

    #[test]
    fn svd_reconstructs(a in (1..=6usize, 1..=6usize).prop_flat_map(|(n, m)| complex_matrix(n, m))) {
        let s = svd(&a);
        prop_assert!(frobenius(&(s.reconstruct() - &a)) <= 1e-12 * frobenius(&a).max(1.0));
    }

    #[test]
    fn hermitian_eigenvalues_match_jacobi(a in square_matrix(6)) {
        let h = &a + a.adjoint();
        let mut d = hermitian_eig(&h).unwrap().d;
        d.sort_by(f64::total_cmp);
        for (x, y) in d.iter().zip(hermitian_eigenvalues(&h)) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn generalized_cholesky_factors(a in square_matrix(6)) {
        let n = a.nrows();
        let pd = &a * a.adjoint() + ComplexMatrix::identity(n, n) * c(0.1, 0.0);
        let g = generalized_cholesky(&pd).unwrap();
        prop_assert!(frobenius(&(&g.b * g.b.adjoint() - &pd)) <= 1e-10 * frobenius(&pd));
    }
}

#[test]
fn takagi_with_repeated_values() {
    // U diag(1, 1, 0.5, 0.5) Uᵀ for a unitary U
    let g = ComplexMatrix::from_fn(4, 4, |i, j| {
        c(
            (i * 3 + j) as f64 * 0.37 % 1.0,
            (i + 2 * j) as f64 * 0.21 % 1.0,
        )
    });
    let u = g.qr().q();
    let d = improper::linalg::diag_real(&[1.0, 1.0, 0.5, 0.5]);
    let a = &u * d * u.transpose();
    let t = takagi(&a).unwrap();
    assert!(frobenius(&(t.reconstruct() - &a)) <= 1e-12);
    for (x, y) in t.sigma.iter().zip([1.0, 1.0, 0.5, 0.5]) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn underline_eigenvalues_are_signed_singular_values() {
    let p = ComplexMatrix::from_fn(5, 5, |i, j| {
        c(((i + j) as f64).sin(), ((i * j) as f64).cos() * 0.3)
    });
    let eigs = jacobi_eigenvalues(&underline(&p));
    let sv = common::singular_values(&p);
    let mut expected: Vec<f64> = sv.iter().flat_map(|&s| [s, -s]).collect();
    expected.sort_by(f64::total_cmp);
    for (x, y) in eigs.iter().zip(&expected) {
        assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
    }
}
