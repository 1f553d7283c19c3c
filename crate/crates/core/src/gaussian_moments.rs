//! Closed-form moments of centered isotropic Gaussians.
//!
//! For a normalized Gaussian with variance kT/m per axis,
//!
//! ```text
//! (m / 2 pi kT)^(3/2) * integral  v1^a v2^b v3^c exp(-m |v|^2 / 2kT) dv
//!   = 0                                        if any exponent is odd
//!   = prod (x-1)(x-3)...1 * (kT/m)^((a+b+c)/2) otherwise
//! ```
//!
//! The 6-D version over two independent Gaussians factorizes into two 3-D
//! moments; exponents interleave as (alpha, beta, gamma, delta, rho, eta)
//! with (alpha, gamma, rho) on the first velocity and (beta, delta, eta) on
//! the second. The double-factorial products are evaluated in exact integer
//! arithmetic (u128) and converted to floating point at the final multiply;
//! exceeding the integer range is an error, never a silent wrap.

use crate::error::{Error, Result};

/// Monomial exponents (a, b, c) for one 3-D velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentTriple(pub u32, pub u32, pub u32);

impl ExponentTriple {
    pub fn total_degree(&self) -> u32 {
        self.0 + self.1 + self.2
    }

    pub fn any_odd(&self) -> bool {
        self.0 % 2 == 1 || self.1 % 2 == 1 || self.2 % 2 == 1
    }
}

/// Monomial exponents (alpha, beta, gamma, delta, rho, eta) for a pair of
/// 3-D velocities (v, v*): alpha, gamma, rho act on v's axes, beta, delta,
/// eta on v*'s axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentSextuple(pub u32, pub u32, pub u32, pub u32, pub u32, pub u32);

impl ExponentSextuple {
    pub fn first(&self) -> ExponentTriple {
        ExponentTriple(self.0, self.2, self.4)
    }

    pub fn second(&self) -> ExponentTriple {
        ExponentTriple(self.1, self.3, self.5)
    }

    pub fn any_odd(&self) -> bool {
        self.first().any_odd() || self.second().any_odd()
    }
}

/// (x-1)(x-3)...1 for even x, as exact u128; empty product for x = 0.
fn odd_double_factorial_u128(x: u32) -> Result<u128> {
    if x % 2 == 1 {
        return Err(Error::OddExponent { value: x });
    }
    let mut acc: u128 = 1;
    let mut f = x as i64 - 1;
    while f >= 1 {
        acc = acc
            .checked_mul(f as u128)
            .ok_or(Error::DoubleFactorialOverflow { value: x })?;
        f -= 2;
    }
    Ok(acc)
}

/// Product over the six exponents of (x-1)(x-3)...1. All exponents must be
/// even; the empty product is 1.
pub fn double_factorial_product(e: &ExponentSextuple) -> Result<f64> {
    let parts = [e.0, e.1, e.2, e.3, e.4, e.5];
    let mut acc: u128 = 1;
    for &x in &parts {
        let d = odd_double_factorial_u128(x)?;
        acc = acc
            .checked_mul(d)
            .ok_or(Error::DoubleFactorialOverflow { value: x })?;
    }
    Ok(acc as f64)
}

fn check_positive(mass: f64, kt: f64) -> Result<()> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::NonpositiveMass {
            name: String::new(),
            value: mass,
        });
    }
    if !(kt > 0.0) || !kt.is_finite() {
        return Err(Error::NonpositiveTemperature { value: kt });
    }
    Ok(())
}

/// Normalized 3-D Gaussian moment with per-axis variance kT/mass.
pub fn gaussian_moment_3d(mass: f64, kt: f64, e: &ExponentTriple) -> Result<f64> {
    check_positive(mass, kt)?;
    if e.any_odd() {
        return Ok(0.0);
    }
    let sext = ExponentSextuple(e.0, 0, e.1, 0, e.2, 0);
    let dfp = double_factorial_product(&sext)?;
    let half_degree = (e.total_degree() / 2) as i32;
    Ok(dfp * (kt / mass).powi(half_degree))
}

/// Normalized 6-D Gaussian moment over two independent species Gaussians.
pub fn gaussian_moment_6d(m_i: f64, m_j: f64, kt: f64, e: &ExponentSextuple) -> Result<f64> {
    check_positive(m_i, kt)?;
    check_positive(m_j, kt)?;
    if e.any_odd() {
        return Ok(0.0);
    }
    let dfp = double_factorial_product(e)?;
    let deg_i = (e.first().total_degree() / 2) as i32;
    let deg_j = (e.second().total_degree() / 2) as i32;
    Ok(dfp * (kt / m_i).powi(deg_i) * (kt / m_j).powi(deg_j))
}
