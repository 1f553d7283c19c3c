//! Friction coefficients of a monatomic gas mixture and their
//! Maxwell-Stefan diffusion limit.
//!
//! The kinetic input is a factorized binary cross section: an analytic even
//! power series in the relative speed times an integrable angular kernel per
//! species pair. From it the crate computes reduced friction coefficients in
//! closed form ([`coefficients`]), checks them against an independent
//! Gauss-Hermite quadrature of the underlying velocity integrals
//! ([`quadrature`]), solves the limiting Maxwell-Stefan cross-diffusion
//! system ([`ms_solver`]), and integrates the scaled moment system whose
//! stiff relaxation limit that system is ([`moment_sim`]), so the
//! convergence rate in the scale separation can be measured directly.

// Validation uses negated comparisons (!(x > 0.0)) on purpose: they reject
// NaN, which the flipped operator would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coefficients;
pub mod collision;
pub mod config;
pub mod error;
pub mod gaussian_moments;
pub mod grid;
pub mod mixture;
pub mod moment_sim;
pub mod ms_solver;
pub mod output;
pub mod quadrature;

pub use error::{Error, Result};
