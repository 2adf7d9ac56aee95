//! The circular analog of an improper Gaussian: its Bessel-form density, a
//! sampled analog, and the divergence from x to its analog.

use improper::analog::{
    analog_entropy_gap, circularize, divergence_to_analog, AnalogGaussianModel,
};
use improper::linalg::c;
use improper::second_order::{empirical_pair, sample_gaussian, SecondOrderPair};

fn main() -> improper::Result<()> {
    let pair = SecondOrderPair::scalar(1.0, c(0.8, 0.0))?;
    let model = AnalogGaussianModel::new(pair.clone())?;
    for r in [0.0, 0.5, 1.0, 2.0] {
        println!(
            "analog density at |x| = {r}: {:.6}",
            model.density(&[c(r, 0.0)])
        );
    }

    let x = sample_gaussian(&pair, 200_000, 11)?;
    let xa = circularize(&x, 12);
    let before = empirical_pair(&x)?;
    let after = empirical_pair(&xa)?;
    println!(
        "P before: {:.4}, after: {:.4}",
        before.p[(0, 0)],
        after.p[(0, 0)]
    );
    println!(
        "C before: {:.4}, after: {:.4}",
        before.c[(0, 0)].re,
        after.c[(0, 0)].re
    );

    println!(
        "D(x ‖ x_a) estimate: {:.4} nats",
        divergence_to_analog(&x, 4)?
    );
    println!(
        "entropy gap estimate: {:.4} nats",
        analog_entropy_gap(&x, 4, 13)?
    );
    Ok(())
}
