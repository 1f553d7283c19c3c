//! Independent quadrature oracle for the closed-form moment and coefficient
//! formulas.
//!
//! Everything here integrates numerically, on purpose: none of the closed
//! forms from `gaussian_moments` or `coefficients` are reused, so agreement
//! between the two routes is evidence, not tautology.
//!
//! The momentum-exchange oracle evaluates
//!
//! ```text
//! Theta_l = (1/eps) * (2 pi m_j ||b|| / (m_i + m_j))
//!         * integral  phi(|v - v*|) f_i(v) f_j(v*) (v*_l - v_l) dv* dv
//! ```
//!
//! with f_i, f_j Maxwellians shifted by eps u_i, eps u_j. Substituting
//! v = eps u_i + sqrt(2kT/m_i) x turns the integrand into a polynomial in
//! (x, y) times exp(-|x|^2 - |y|^2), so a tensor Gauss-Hermite rule with
//! enough nodes per axis is exact up to roundoff. The friction coefficient
//! is read off one velocity component and Richardson-extrapolated over a
//! pair of eps values to remove the finite-eps remainder.

use std::f64::consts::PI;

use crate::collision::AnalyticKineticKernel;
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;

/// Node budget and Richardson pair for the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Tensor nodes per axis, in [8, 128].
    pub nodes_per_axis: usize,
    /// Decreasing pair of scaling parameters, each in (0, 0.1].
    pub richardson_eps: (f64, f64),
}

impl QuadratureConfig {
    pub fn new(nodes_per_axis: usize, richardson_eps: (f64, f64)) -> Result<Self> {
        if !(8..=128).contains(&nodes_per_axis) {
            return Err(Error::NodesOutOfRange {
                nodes: nodes_per_axis,
            });
        }
        let (e1, e2) = richardson_eps;
        if !(e2 > 0.0) || !(e1 > e2) || !(e1 <= 0.1) || !e1.is_finite() {
            return Err(Error::RichardsonEps { e1, e2 });
        }
        Ok(QuadratureConfig {
            nodes_per_axis,
            richardson_eps,
        })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes_per_axis: 40,
            richardson_eps: (1e-3, 5e-4),
        }
    }
}

/// Gauss-Hermite nodes and weights for weight exp(-x^2) on the real line
/// (Golub-Welsch on the Jacobi matrix). Nodes are sorted ascending and
/// symmetrized so x_k = -x_(n-1-k) exactly.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > 256 {
        return Err(Error::NodesOutOfRange { nodes: n });
    }
    let mut jacobi = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 0..n - 1 {
        let off = ((k + 1) as f64 / 2.0).sqrt();
        jacobi[(k, k + 1)] = off;
        jacobi[(k + 1, k)] = off;
    }
    let eigen = nalgebra::SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let q0 = eigen.eigenvectors[(0, k)];
            (eigen.eigenvalues[k], PI.sqrt() * q0 * q0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    for k in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - k] - nodes[k]);
        nodes[n - 1 - k] = x;
        nodes[k] = -x;
        let w = 0.5 * (weights[k] + weights[n - 1 - k]);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Normalized 3-D Gaussian moment by an honest tensor-product quadrature
/// (triple loop over the grid; no closed forms).
pub fn gh_moment_3d(
    mass: f64,
    kt: f64,
    e: &crate::gaussian_moments::ExponentTriple,
    q: &QuadratureConfig,
) -> Result<f64> {
    if !(mass > 0.0) || !(kt > 0.0) {
        return Err(Error::NonpositiveTemperature {
            value: if mass > 0.0 { kt } else { mass },
        });
    }
    let max_degree = 2 * q.nodes_per_axis as u32 - 2;
    if e.total_degree() > max_degree {
        return Err(Error::DegreeBound {
            degree: e.total_degree(),
            max: max_degree,
        });
    }
    let (nodes, weights) = gauss_hermite(q.nodes_per_axis)?;
    let s = (2.0 * kt / mass).sqrt();
    let (a, b, c) = (e.0 as i32, e.1 as i32, e.2 as i32);
    let mut total = 0.0;
    for (i, &xi) in nodes.iter().enumerate() {
        let fi = weights[i] * (s * xi).powi(a);
        for (j, &xj) in nodes.iter().enumerate() {
            let fj = fi * weights[j] * (s * xj).powi(b);
            for (k, &xk) in nodes.iter().enumerate() {
                total += fj * weights[k] * (s * xk).powi(c);
            }
        }
    }
    Ok(total / PI.powf(1.5))
}

/// Maxwellian number density c (m / 2 pi kT)^(3/2) exp(-m |v - u|^2 / 2 kT).
pub fn maxwellian_density(c: f64, u: [f64; 3], mass: f64, kt: f64, v: [f64; 3]) -> f64 {
    let d2 = (v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2) + (v[2] - u[2]).powi(2);
    c * (mass / (2.0 * PI * kt)).powf(1.5) * (-mass * d2 / (2.0 * kt)).exp()
}

/// Momentum-exchange rate for the (i, j) pair at scaling eps, by exact 6-D
/// tensor Gauss-Hermite quadrature centered at the shifted means.
#[allow(clippy::too_many_arguments)]
pub fn theta_oracle(
    spec: &MixtureSpec,
    kernel: &AnalyticKineticKernel,
    b_norm: f64,
    i: usize,
    j: usize,
    eps: f64,
    u_i: [f64; 3],
    u_j: [f64; 3],
    c_i: f64,
    c_j: f64,
    q: &QuadratureConfig,
) -> Result<[f64; 3]> {
    let count = spec.len();
    if i >= count {
        return Err(Error::SpeciesIndexOutOfRange { index: i, count });
    }
    if j >= count || i == j {
        return Err(Error::SpeciesIndexOutOfRange { index: j, count });
    }
    if !(eps > 0.0) || !(eps <= 0.1) {
        return Err(Error::EpsOutOfRange { value: eps });
    }
    if !(c_i > 0.0) {
        return Err(Error::NegativeConcentration { index: i, value: c_i });
    }
    if !(c_j > 0.0) {
        return Err(Error::NegativeConcentration { index: j, value: c_j });
    }
    // Per-axis polynomial degree of phi(|v - v*|) (v* - v)_l is 2N + 1, so
    // N + 2 nodes per axis integrate it exactly (with one to spare). The
    // configured budget is an upper bound on what we may spend.
    let required = kernel.truncation_order() + 2;
    let m6 = required.max(8);
    if m6 > q.nodes_per_axis {
        return Err(Error::QuadratureDegreeInsufficient {
            required: m6,
            budget: q.nodes_per_axis,
        });
    }
    let (nodes, weights) = gauss_hermite(m6)?;
    let kt = spec.kt();
    let m_i = spec.mass(i);
    let m_j = spec.mass(j);
    let s_i = (2.0 * kt / m_i).sqrt();
    let s_j = (2.0 * kt / m_j).sqrt();

    let mut acc = [0.0f64; 3];
    for (a0, &x0) in nodes.iter().enumerate() {
        let v0 = eps * u_i[0] + s_i * x0;
        let w0 = weights[a0];
        for (a1, &x1) in nodes.iter().enumerate() {
            let v1 = eps * u_i[1] + s_i * x1;
            let w1 = w0 * weights[a1];
            for (a2, &x2) in nodes.iter().enumerate() {
                let v2 = eps * u_i[2] + s_i * x2;
                let w2 = w1 * weights[a2];
                for (b0, &y0) in nodes.iter().enumerate() {
                    let vs0 = eps * u_j[0] + s_j * y0;
                    let w3 = w2 * weights[b0];
                    let d0 = vs0 - v0;
                    for (b1, &y1) in nodes.iter().enumerate() {
                        let vs1 = eps * u_j[1] + s_j * y1;
                        let w4 = w3 * weights[b1];
                        let d1 = vs1 - v1;
                        let partial = d0 * d0 + d1 * d1;
                        for (b2, &y2) in nodes.iter().enumerate() {
                            let vs2 = eps * u_j[2] + s_j * y2;
                            let d2 = vs2 - v2;
                            let r2 = partial + d2 * d2;
                            let w = w4 * weights[b2] * kernel.eval(r2.sqrt());
                            acc[0] += w * d0;
                            acc[1] += w * d1;
                            acc[2] += w * d2;
                        }
                    }
                }
            }
        }
    }
    let prefactor =
        (2.0 * PI * m_j * b_norm / (m_i + m_j)) * c_i * c_j / (PI.powi(3) * eps);
    Ok([
        prefactor * acc[0],
        prefactor * acc[1],
        prefactor * acc[2],
    ])
}

/// Reduced friction coefficient extracted from the Theta oracle: evaluates
/// Theta at the two Richardson eps values, reads off the largest component
/// of u_j - u_i, and extrapolates the eps -> 0 limit.
#[allow(clippy::too_many_arguments)]
pub fn delta_tilde_from_theta(
    spec: &MixtureSpec,
    kernel: &AnalyticKineticKernel,
    b_norm: f64,
    i: usize,
    j: usize,
    u_i: [f64; 3],
    u_j: [f64; 3],
    c_i: f64,
    c_j: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let diff = [u_j[0] - u_i[0], u_j[1] - u_i[1], u_j[2] - u_i[2]];
    let mut l = 0;
    for d in 1..3 {
        if diff[d].abs() > diff[l].abs() {
            l = d;
        }
    }
    if diff[l] == 0.0 {
        return Err(Error::ZeroVelocityDifference);
    }
    let (e1, e2) = q.richardson_eps;
    if !(e2 > 0.0) || !(e1 > e2) || !(e1 <= 0.1) {
        return Err(Error::RichardsonEps { e1, e2 });
    }
    let kt = spec.kt();
    let m_i = spec.mass(i);
    let reduce = |theta: [f64; 3]| (m_i / kt) * theta[l] / (c_i * c_j * diff[l]);
    let d1 = reduce(theta_oracle(
        spec, kernel, b_norm, i, j, e1, u_i, u_j, c_i, c_j, q,
    )?);
    let d2 = reduce(theta_oracle(
        spec, kernel, b_norm, i, j, e2, u_i, u_j, c_i, c_j, q,
    )?);
    Ok((e1 * d2 - e2 * d1) / (e1 - e2))
}
