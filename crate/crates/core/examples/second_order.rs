//! Valid covariance pairs, circularity coefficients and Gaussian sampling.

use improper::linalg::{c, diag_real, ComplexMatrix};
use improper::second_order::{
    circularity_spectrum, empirical_pair, real_covariance, sample_gaussian, validate_pair,
    SecondOrderPair,
};

fn main() -> improper::Result<()> {
    let cov = diag_real(&[2.0, 1.0]);
    let pcov =
        ComplexMatrix::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.3, 0.2), c(0.3, 0.2), c(0.0, -0.5)]);

    let validity = validate_pair(&cov, &pcov)?;
    println!(
        "valid: {} ({}), lambda_max = {:?}",
        validity.valid, validity.reason, validity.max_lambda
    );

    let pair = SecondOrderPair::zero_mean(cov, pcov)?;
    println!(
        "circularity coefficients: {:?}",
        circularity_spectrum(&pair)?.lambdas
    );
    println!("covariance of (Re x, Im x):\n{:.4}", real_covariance(&pair));

    let x = sample_gaussian(&pair, 50_000, 1)?;
    let est = empirical_pair(&x)?;
    println!("empirical C:\n{:.3}", est.c);
    println!("empirical P:\n{:.3}", est.p);

    // too much improperness for the given covariance
    let bad = validate_pair(
        &ComplexMatrix::identity(1, 1),
        &ComplexMatrix::from_element(1, 1, c(1.5, 0.0)),
    )?;
    println!("C = 1, P = 1.5: {}", bad.reason);
    Ok(())
}
