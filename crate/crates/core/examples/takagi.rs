//! Takagi factorization of a complex symmetric matrix, and the real block
//! maps that relate complex matrix algebra to real 2n×2n algebra.

use improper::linalg::{c, frobenius, overline, takagi, underline, ComplexMatrix};

fn main() -> improper::Result<()> {
    let a = ComplexMatrix::from_row_slice(
        3,
        3,
        &[
            c(1.0, 0.5),
            c(0.2, -0.1),
            c(0.0, 0.3),
            c(0.2, -0.1),
            c(0.8, 0.0),
            c(0.4, 0.4),
            c(0.0, 0.3),
            c(0.4, 0.4),
            c(-0.6, 0.2),
        ],
    );
    let t = takagi(&a)?;
    println!("takagi values: {:?}", t.sigma);
    println!("‖QΣQᵀ − A‖_F = {:.2e}", frobenius(&(t.reconstruct() - &a)));
    let id = ComplexMatrix::identity(3, 3);
    println!(
        "‖QᴴQ − I‖_F = {:.2e}",
        frobenius(&(t.q.adjoint() * &t.q - id))
    );

    let b = ComplexMatrix::from_row_slice(3, 3, &[c(0.0, 1.0); 9]) + &a;
    let lhs = underline(&(&a * &b));
    let rhs = overline(&a) * underline(&b);
    println!(
        "underline(AB) vs overline(A)·underline(B): {:.2e}",
        (lhs - rhs).amax()
    );
    println!("det overline(A) = {:.12}", overline(&a).determinant());
    println!("|det A|²        = {:.12}", a.determinant().norm_sqr());
    Ok(())
}
