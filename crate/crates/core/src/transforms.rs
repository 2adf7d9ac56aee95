//! Real, polar and sheared-polar coordinates of complex vectors.
//!
//! Phases are measured in turns, i.e. in `[0, 1)`, so that the modulo
//! arithmetic of the sheared representation is exact in decimal tests.
//! The sheared-polar representation keeps the radii and the last phase
//! `ϑ = φₙ`, and replaces the other phases by `[φₖ − φₙ] mod 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// `x mod 1` in `[0, 1)`, also for negative `x`.
#[inline]
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance between two phases on the unit circle, in turns (at most ½).
#[inline]
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = wrap_unit(a - b);
    d.min(1.0 - d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarPoint {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShearedPolarPoint {
    pub r: Vec<f64>,
    /// First `n − 1` entries relative to the last; the last is `ϑ`.
    pub phi: Vec<f64>,
}

impl ShearedPolarPoint {
    /// The last phase `ϑ`.
    pub fn theta(&self) -> f64 {
        *self.phi.last().expect("non-empty point")
    }
}

pub fn real_to_polar(x: &[Complex64]) -> PolarPoint {
    let r: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    let phi = x
        .iter()
        .zip(&r)
        .map(|(z, &rk)| {
            if rk == 0.0 {
                0.0
            } else {
                wrap_unit(z.arg() / TAU)
            }
        })
        .collect();
    PolarPoint { r, phi }
}

pub fn polar_to_real(p: &PolarPoint) -> Vec<Complex64> {
    p.r.iter()
        .zip(&p.phi)
        .map(|(&r, &phi)| Complex64::from_polar(r, TAU * phi))
        .collect()
}

pub fn polar_to_sheared(p: &PolarPoint) -> ShearedPolarPoint {
    let n = p.phi.len();
    let mut phi = p.phi.clone();
    if let Some(&last) = p.phi.last() {
        for v in phi.iter_mut().take(n - 1) {
            *v = wrap_unit(*v - last);
        }
    }
    ShearedPolarPoint {
        r: p.r.clone(),
        phi,
    }
}

pub fn sheared_to_polar(s: &ShearedPolarPoint) -> PolarPoint {
    let n = s.phi.len();
    let mut phi = s.phi.clone();
    if let Some(&last) = s.phi.last() {
        for v in phi.iter_mut().take(n - 1) {
            *v = wrap_unit(*v + last);
        }
    }
    PolarPoint {
        r: s.r.clone(),
        phi,
    }
}

pub fn real_to_sheared(x: &[Complex64]) -> ShearedPolarPoint {
    polar_to_sheared(&real_to_polar(x))
}

/// Density of the polar representation, given the density `f_real` of the
/// real representation `(Re x, Im x)`: `(2π)ⁿ (r₁⋯rₙ) f_real(x)`.
pub fn polar_density<F>(f_real: F, p: &PolarPoint) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let jac: f64 = p.r.iter().map(|r| TAU * r).product();
    if jac == 0.0 {
        return 0.0;
    }
    let x = polar_to_real(p);
    let n = x.len();
    let mut xi = vec![0.0; 2 * n];
    for (k, z) in x.iter().enumerate() {
        xi[k] = z.re;
        xi[n + k] = z.im;
    }
    jac * f_real(&xi)
}

/// Density of the sheared-polar representation. The shear has unit Jacobian,
/// so this is the polar density at the unsheared point.
pub fn sheared_density<F>(f_real: F, s: &ShearedPolarPoint) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    polar_density(f_real, &sheared_to_polar(s))
}
