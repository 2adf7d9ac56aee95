//! Second-order analysis of improper complex random vectors.
//!
//! A complex vector `x` is described to second order by its covariance
//! `C = E[(x−m)(x−m)ᴴ]` and its complementary covariance
//! `P = E[(x−m)(x−m)ᵀ]`. When `P ≠ 0` the vector is improper, and the
//! usual proper-Gaussian formulas for entropy and capacity no longer apply.
//!
//! The crate provides
//!
//! * [`linalg`]: the real/complex block maps, Takagi factorization and a
//!   generalized Cholesky factor;
//! * [`second_order`]: valid `(C, P)` pairs, circularity coefficients,
//!   Gaussian sampling and moment estimation;
//! * [`transforms`]: polar and sheared-polar coordinates (phases in turns);
//! * [`analog`]: circular analogs, their Bessel-form Gaussian density and
//!   the divergence to the analog;
//! * [`entropy`]: closed-form Gaussian entropies, maximum-entropy bounds and
//!   k-nearest-neighbour estimators;
//! * [`capacity`]: improper water-filling, capacity loss and Monte Carlo
//!   mutual information;
//! * [`verify`]: seeded property suites, also reachable from the `improper`
//!   binary.
//!
//! All entropies are in nats.

pub mod analog;
pub mod bessel;
pub mod capacity;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod knn;
pub mod linalg;
pub mod random;
pub mod rng;
pub mod second_order;
pub mod stats;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, RealMatrix};
pub use second_order::{SampleSet, SecondOrderPair};
