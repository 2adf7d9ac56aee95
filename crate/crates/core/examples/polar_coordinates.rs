//! Polar and sheared-polar coordinates, with phases measured in turns.
//! For a circular vector the last sheared phase is uniform and independent
//! of the other coordinates.

use improper::linalg::c;
use improper::linalg::diag_real;
use improper::second_order::{sample_gaussian, SecondOrderPair};
use improper::stats::{ks_uniform, pearson};
use improper::transforms::{polar_to_real, polar_to_sheared, real_to_polar, real_to_sheared};

fn main() -> improper::Result<()> {
    let x = [c(1.0, 1.0), c(-0.5, 0.25)];
    let p = real_to_polar(&x);
    let s = polar_to_sheared(&p);
    println!("r = {:?}, phi = {:?}", p.r, p.phi);
    println!("sheared phi = {:?} (last is theta = {})", s.phi, s.theta());
    println!("round trip: {:?}", polar_to_real(&p));

    let circular = SecondOrderPair::proper(diag_real(&[1.0, 3.0]))?;
    let samples = sample_gaussian(&circular, 100_000, 5)?;
    let (theta, r1): (Vec<f64>, Vec<f64>) = samples
        .vectors()
        .map(|v| {
            let s = real_to_sheared(v);
            (s.theta(), s.r[0])
        })
        .unzip();
    println!("KS distance of theta to uniform: {:.4}", ks_uniform(&theta));
    println!("corr(theta, r1): {:.4}", pearson(&theta, &r1));
    Ok(())
}
