//! Closed-form Gaussian entropies against nearest-neighbour estimates, and
//! the two maximum-entropy bounds.

use improper::analog::circularize;
use improper::entropy::{complex_gaussian_entropy, knn_entropy, neeser_massey_bound};
use improper::linalg::c;
use improper::second_order::{sample_gaussian, SecondOrderPair};

fn main() -> improper::Result<()> {
    for lambda in [0.0, 0.5, 0.8, 0.95] {
        let pair = SecondOrderPair::scalar(1.0, c(lambda, 0.0))?;
        let h = complex_gaussian_entropy(&pair)?.value;
        let bound = neeser_massey_bound(&pair.c)?.value;
        let x = sample_gaussian(&pair, 100_000, 3)?;
        let est = knn_entropy(&x, 4)?;
        let analog = knn_entropy(&circularize(&x, 4), 4)?;
        println!(
            "lambda {lambda:4}: h(x) = {h:.4}, estimate {:.4} ± {:.4}, h(x_a) ≈ {:.4}, proper bound {bound:.4}",
            est.value,
            est.stderr_or_zero(),
            analog.value
        );
    }
    Ok(())
}
