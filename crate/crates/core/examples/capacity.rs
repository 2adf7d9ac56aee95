//! Capacity with improper noise: closed-form water-filling, the loss from
//! ignoring improperness, the scalar real/imaginary split, and a Monte
//! Carlo check of the mutual information.

use improper::capacity::{
    capacity_loss, check_assumptions, mc_mutual_information, scalar_powers, solve_capacity,
    ChannelSpec,
};
use improper::linalg::{c, ComplexMatrix};
use improper::second_order::SecondOrderPair;

fn main() -> improper::Result<()> {
    let h =
        ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.2, 0.1), c(0.0, -0.3), c(0.9, 0.0)]);
    let noise = SecondOrderPair::zero_mean(
        ComplexMatrix::identity(2, 2),
        ComplexMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.3)]),
    )?;
    let spec = ChannelSpec::new(h, noise, 10.0);
    println!("violations: {:?}", check_assumptions(&spec));

    let r = solve_capacity(&spec)?;
    println!(
        "capacity {:.6} nats, water level {:.4}",
        r.capacity_nats, r.water_level
    );
    println!("optimal C_x:\n{:.4}", r.input_pair.c);
    println!("optimal P_x:\n{:.4}", r.input_pair.p);
    let loss = capacity_loss(&spec)?;
    println!(
        "loss from a proper design: {:.6} nats (mu = {:?})",
        loss.delta_c_nats, loss.mus
    );

    let mi = mc_mutual_information(&spec, &r.input_pair, 100_000, 4, 9)?;
    println!(
        "simulated I(x; y) = {:.4} ± {:.4}",
        mi.value,
        mi.stderr_or_zero()
    );

    let p = scalar_powers(1.0, 0.5, 2.0)?;
    println!(
        "scalar split: noise ({}, {}), level {}, input ({}, {})",
        p.re_noise, p.im_noise, p.level, p.re_power, p.im_power
    );

    let low = ChannelSpec::new(
        ComplexMatrix::identity(1, 1),
        SecondOrderPair::scalar(1.0, c(0.0, 0.0))?,
        1.9,
    );
    match solve_capacity(&low) {
        Err(e) => println!("S = 1.9: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
