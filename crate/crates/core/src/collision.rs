//! Collision cross-section model.
//!
//! Cross sections factorize as B(v, v*, sigma) = phi(|v - v*|) * b(cos theta)
//! with cos theta = (v - v*) . sigma / |v - v*|. The kinetic part phi is an
//! even power series in the relative speed, phi(r) = sum_n a_n r^(2n); the
//! angular part b is even, nonnegative and integrable (angular cutoff), kept
//! either as a constant or as tabulated samples on a uniform cos-theta grid.
//!
//! Post-collision velocities follow the elastic two-body exchange
//!
//! ```text
//! v'  = (m_i v + m_j v* + m_j |v - v*| sigma) / (m_i + m_j)
//! v*' = (m_i v + m_j v* - m_i |v - v*| sigma) / (m_i + m_j)
//! ```
//!
//! which conserves momentum and kinetic energy exactly.

use crate::error::{Error, Result};

/// Default validation radius for kernel nonnegativity checks.
pub const DEFAULT_R_MAX: f64 = 10.0;

const VALIDATION_POINTS: usize = 1001;

/// Even power-series kinetic kernel phi(r) = a_0 + a_1 r^2 + ... + a_N r^(2N),
/// validated nonnegative on a dense grid of [0, r_max].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticKineticKernel {
    coefficients: Vec<f64>,
    r_max: f64,
}

impl AnalyticKineticKernel {
    /// Builds a kernel validated on [0, DEFAULT_R_MAX].
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        Self::with_r_max(coefficients, DEFAULT_R_MAX)
    }

    /// Builds a kernel validated on [0, r_max].
    pub fn with_r_max(coefficients: Vec<f64>, r_max: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptyKernel);
        }
        for &a in &coefficients {
            if !a.is_finite() {
                return Err(Error::NonFiniteKernelCoefficient { value: a });
            }
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::NonpositiveRMax { value: r_max });
        }
        let kernel = AnalyticKineticKernel {
            coefficients,
            r_max,
        };
        // Nonnegativity on the validation grid, with a roundoff allowance
        // scaled by the magnitude of the evaluated terms.
        for p in 0..VALIDATION_POINTS {
            let r = r_max * (p as f64) / ((VALIDATION_POINTS - 1) as f64);
            let value = kernel.eval(r);
            let scale = horner(&kernel.coefficients, r * r, true);
            if value < -1e-12 * scale.max(1.0) {
                return Err(Error::NegativeKernelValue { r, value });
            }
        }
        Ok(kernel)
    }

    /// Truncation order N (highest power of r^2).
    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// phi(r) by Horner evaluation in r^2.
    pub fn eval(&self, r: f64) -> f64 {
        horner(&self.coefficients, r * r, false)
    }

    /// Single-term kernel a_n r^(2n); handy for per-term oracle comparisons.
    pub fn single_term(n: usize, a_n: f64, r_max: f64) -> Result<Self> {
        let mut coefficients = vec![0.0; n + 1];
        coefficients[n] = a_n;
        Self::with_r_max(coefficients, r_max)
    }

    /// Least-squares fit of the hard-sphere kernel |z| on [0, r_max] by an
    /// even polynomial of truncation order `degree` (basis r^0, r^2, ...,
    /// r^(2*degree)). Returns the fitted kernel (validated on [0, r_max])
    /// and the maximum absolute fit error on the sample grid.
    pub fn hard_sphere_fit(r_max: f64, degree: usize) -> Result<(Self, f64)> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::NonpositiveRMax { value: r_max });
        }
        if degree > 64 {
            return Err(Error::FitRequest {
                message: format!("degree {degree} exceeds 64"),
            });
        }
        let npts = 801usize;
        let ncoef = degree + 1;
        // Condition the basis with t = (r / r_max)^2 in [0, 1]; unscale after.
        let mut a = nalgebra::DMatrix::<f64>::zeros(npts, ncoef);
        let mut y = nalgebra::DVector::<f64>::zeros(npts);
        for p in 0..npts {
            let r = r_max * (p as f64) / ((npts - 1) as f64);
            let t = (r / r_max) * (r / r_max);
            let mut tn = 1.0;
            for n in 0..ncoef {
                a[(p, n)] = tn;
                tn *= t;
            }
            y[p] = r;
        }
        let svd = nalgebra::SVD::new(a, true, true);
        let scaled = svd.solve(&y, 1e-13).map_err(|m| Error::FitRequest {
            message: m.to_string(),
        })?;
        let mut coefficients = Vec::with_capacity(ncoef);
        let mut scale = 1.0;
        for n in 0..ncoef {
            coefficients.push(scaled[n] / scale);
            scale *= r_max * r_max;
        }
        let kernel = Self::with_r_max(coefficients, r_max)?;
        let mut max_err: f64 = 0.0;
        for p in 0..npts {
            let r = r_max * (p as f64) / ((npts - 1) as f64);
            max_err = max_err.max((kernel.eval(r) - r).abs());
        }
        Ok((kernel, max_err))
    }
}

/// Horner evaluation of sum_n a_n x^n; with `absolute` the coefficient
/// magnitudes are used instead, giving the roundoff scale of the sum.
fn horner(coefficients: &[f64], x: f64, absolute: bool) -> f64 {
    let mut acc = 0.0;
    for &a in coefficients.iter().rev() {
        let a = if absolute { a.abs() } else { a };
        acc = acc * x + a;
    }
    acc
}

/// Angular kernel b(eta), eta = cos theta in [-1, 1]: either a constant or
/// tabulated samples on a uniform grid with an odd point count (so eta = 0 is
/// a node). Tabulated kernels must be nonnegative and even within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularKernel {
    Constant(f64),
    Table { samples: Vec<f64> },
}

impl AngularKernel {
    pub fn constant(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeAngularSample { index: 0, value });
        }
        Ok(AngularKernel::Constant(value))
    }

    /// Builds a tabulated kernel from samples on the implicit uniform grid
    /// eta_k = (2k - (M-1)) / (M-1), k = 0..M.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        let m = samples.len();
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::AngularSampleCount { count: m });
        }
        for (index, &value) in samples.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativeAngularSample { index, value });
            }
        }
        for k in 0..m / 2 {
            let diff = (samples[k] - samples[m - 1 - k]).abs();
            if diff > 1e-12 {
                return Err(Error::AngularAsymmetry { index: k, diff });
            }
        }
        Ok(AngularKernel::Table { samples })
    }

    /// Builds a tabulated kernel from (eta, b) pairs, checking that the eta
    /// values form the uniform symmetric grid on [-1, 1].
    pub fn from_points(eta: &[f64], b: &[f64]) -> Result<Self> {
        if eta.len() != b.len() {
            return Err(Error::AngularGrid {
                message: format!(
                    "eta and b lengths differ ({} vs {})",
                    eta.len(),
                    b.len()
                ),
            });
        }
        let m = eta.len();
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::AngularSampleCount { count: m });
        }
        for (k, &e) in eta.iter().enumerate() {
            let expect = grid_eta(k, m);
            if (e - expect).abs() > 1e-12 {
                return Err(Error::AngularGrid {
                    message: format!(
                        "eta[{k}] = {e} is not the uniform grid node {expect}"
                    ),
                });
            }
        }
        Self::from_samples(b.to_vec())
    }

    /// b(eta); tabulated kernels interpolate linearly, and eta is clamped to
    /// [-1, 1] to absorb roundoff in computed cosines.
    pub fn eval(&self, eta: f64) -> f64 {
        match self {
            AngularKernel::Constant(v) => *v,
            AngularKernel::Table { samples } => {
                let m = samples.len();
                let eta = eta.clamp(-1.0, 1.0);
                let pos = (eta + 1.0) / 2.0 * ((m - 1) as f64);
                let k = (pos.floor() as usize).min(m - 2);
                let frac = pos - k as f64;
                samples[k] * (1.0 - frac) + samples[k + 1] * frac
            }
        }
    }

    /// ||b||_L1 = integral of |b(eta)| over [-1, 1]. Constants integrate
    /// exactly to 2*value; tables use composite Simpson with mirrored node
    /// pairs summed together, so a reflected table gives the bit-identical
    /// result.
    pub fn l1_norm(&self) -> f64 {
        match self {
            AngularKernel::Constant(v) => 2.0 * v,
            AngularKernel::Table { samples } => {
                let m = samples.len();
                let h = 2.0 / ((m - 1) as f64);
                let mid = (m - 1) / 2;
                let mut acc = 0.0;
                for k in 0..=mid {
                    let c = simpson_coefficient(k, m);
                    if k == m - 1 - k {
                        acc += c * samples[k];
                    } else {
                        acc += c * samples[k] + c * samples[m - 1 - k];
                    }
                }
                acc * (h / 3.0)
            }
        }
    }
}

fn grid_eta(k: usize, m: usize) -> f64 {
    (2.0 * k as f64 - (m - 1) as f64) / ((m - 1) as f64)
}

fn simpson_coefficient(k: usize, m: usize) -> f64 {
    if k == 0 || k == m - 1 {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Angular data for one unordered species pair: either a full kernel or just
/// its L1 norm (enough for the coefficient formulas, not for pointwise
/// cross-section evaluation).
#[derive(Debug, Clone, PartialEq)]
pub enum PairAngular {
    Kernel(AngularKernel),
    NormOnly(f64),
}

/// Per-pair angular kernels for an I-species mixture, stored once per
/// unordered pair (this is what makes b_ij = b_ji automatic).
#[derive(Debug, Clone)]
pub struct AngularKernelSet {
    order: usize,
    pairs: Vec<PairAngular>,
}

impl AngularKernelSet {
    /// Builds the set from (i, j, data) entries; every unordered pair must
    /// appear exactly once.
    pub fn from_entries(order: usize, entries: Vec<(usize, usize, PairAngular)>) -> Result<Self> {
        if order < 2 {
            return Err(Error::MatrixOrder { order });
        }
        let npairs = order * (order - 1) / 2;
        let mut pairs: Vec<Option<PairAngular>> = vec![None; npairs];
        for (i, j, data) in entries {
            if i >= order || j >= order || i == j {
                return Err(Error::AngularGrid {
                    message: format!("pair ({i}, {j}) invalid for {order} species"),
                });
            }
            if let PairAngular::NormOnly(norm) = data {
                if !(norm >= 0.0) || !norm.is_finite() {
                    return Err(Error::AngularGrid {
                        message: format!("pair ({i}, {j}) has invalid L1 norm {norm}"),
                    });
                }
            }
            let idx = pair_index(order, i, j);
            if pairs[idx].is_some() {
                return Err(Error::AngularGrid {
                    message: format!("pair ({i}, {j}) given twice"),
                });
            }
            pairs[idx] = Some(data);
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if pairs[pair_index(order, i, j)].is_none() {
                    return Err(Error::MissingAngularPair { i, j });
                }
            }
        }
        Ok(AngularKernelSet {
            order,
            pairs: pairs.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Same kernel for every pair.
    pub fn uniform(order: usize, kernel: AngularKernel) -> Result<Self> {
        let mut entries = Vec::new();
        for i in 0..order {
            for j in (i + 1)..order {
                entries.push((i, j, PairAngular::Kernel(kernel.clone())));
            }
        }
        Self::from_entries(order, entries)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// ||b_ij||_L1; symmetric in (i, j) by storage.
    pub fn l1_norm(&self, i: usize, j: usize) -> f64 {
        match &self.pairs[pair_index(self.order, i, j)] {
            PairAngular::Kernel(k) => k.l1_norm(),
            PairAngular::NormOnly(norm) => *norm,
        }
    }

    /// The tabulated/constant kernel if one was given (None for NormOnly).
    pub fn kernel(&self, i: usize, j: usize) -> Option<&AngularKernel> {
        match &self.pairs[pair_index(self.order, i, j)] {
            PairAngular::Kernel(k) => Some(k),
            PairAngular::NormOnly(_) => None,
        }
    }
}

/// Upper-triangle packing of unordered pairs, lexicographic in (min, max).
pub(crate) fn pair_index(order: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * order - a - 1) / 2 + (b - a - 1)
}

/// Elastic post-collision velocities for masses (m_i, m_j) and scattering
/// direction sigma (unit vector within 1e-12).
pub fn post_collision_velocities(
    v: [f64; 3],
    v_star: [f64; 3],
    m_i: f64,
    m_j: f64,
    sigma: [f64; 3],
) -> Result<([f64; 3], [f64; 3])> {
    let norm = (sigma[0] * sigma[0] + sigma[1] * sigma[1] + sigma[2] * sigma[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitSigma { norm });
    }
    let msum = m_i + m_j;
    let rel = [v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]];
    let speed = (rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]).sqrt();
    let mut v_prime = [0.0; 3];
    let mut v_star_prime = [0.0; 3];
    for d in 0..3 {
        let center = m_i * v[d] + m_j * v_star[d];
        v_prime[d] = (center + m_j * speed * sigma[d]) / msum;
        v_star_prime[d] = (center - m_i * speed * sigma[d]) / msum;
    }
    Ok((v_prime, v_star_prime))
}

/// B(v, v*, sigma) = phi(|v - v*|) * b(cos theta). Undefined for v = v*.
pub fn cross_section_eval(
    kernel: &AnalyticKineticKernel,
    angular: &AngularKernel,
    v: [f64; 3],
    v_star: [f64; 3],
    sigma: [f64; 3],
) -> Result<f64> {
    let rel = [v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]];
    let speed = (rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]).sqrt();
    if speed == 0.0 {
        return Err(Error::CoincidentVelocities);
    }
    let cos_theta = (rel[0] * sigma[0] + rel[1] * sigma[1] + rel[2] * sigma[2]) / speed;
    Ok(kernel.eval(speed) * angular.eval(cos_theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm3(x: [f64; 3]) -> f64 {
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    fn unit(x: [f64; 3]) -> [f64; 3] {
        let n = norm3(x);
        [x[0] / n, x[1] / n, x[2] / n]
    }

    #[test]
    fn kernel_eval_matches_terms() {
        let k = AnalyticKineticKernel::new(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(k.truncation_order(), 2);
        assert_eq!(k.eval(0.0), 1.0);
        let r: f64 = 1.5;
        let expect = 1.0 + 0.5 * r.powi(2) + 0.25 * r.powi(4);
        assert!((k.eval(r) - expect).abs() < 1e-14);
    }

    #[test]
    fn kernel_rejects_bad_input() {
        assert!(matches!(
            AnalyticKineticKernel::new(vec![]).unwrap_err(),
            Error::EmptyKernel
        ));
        assert!(matches!(
            AnalyticKineticKernel::new(vec![-1.0]).unwrap_err(),
            Error::NegativeKernelValue { .. }
        ));
        // Negative only beyond the validation radius is accepted.
        AnalyticKineticKernel::with_r_max(vec![1.0, -0.009], 10.0).unwrap();
        assert!(matches!(
            AnalyticKineticKernel::with_r_max(vec![1.0, -0.02], 10.0).unwrap_err(),
            Error::NegativeKernelValue { .. }
        ));
        assert!(matches!(
            AnalyticKineticKernel::with_r_max(vec![1.0], 0.0).unwrap_err(),
            Error::NonpositiveRMax { .. }
        ));
    }

    #[test]
    fn kernel_square_is_nonnegative_at_roundoff() {
        // (1 - r^2)^2 expands to {1, -2, 1}; roundoff near the root must not
        // trip the nonnegativity check.
        AnalyticKineticKernel::with_r_max(vec![1.0, -2.0, 1.0], 2.0).unwrap();
    }

    #[test]
    fn hard_sphere_fit_reports_its_error() {
        let (kernel, max_err) = AnalyticKineticKernel::hard_sphere_fit(4.0, 6).unwrap();
        assert_eq!(kernel.truncation_order(), 6);
        assert!(max_err > 0.0 && max_err < 0.2, "max_err = {max_err}");
        // Recompute the error independently on the same grid.
        let mut recomputed: f64 = 0.0;
        for p in 0..801 {
            let r = 4.0 * (p as f64) / 800.0;
            recomputed = recomputed.max((kernel.eval(r) - r).abs());
        }
        assert!(recomputed <= max_err + 1e-15);
    }

    #[test]
    fn post_collision_identity_and_swap() {
        let v = [1.0, 2.0, 3.0];
        let v_star = [-1.0, 0.5, 2.0];
        let rel = [v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]];
        let (vp, vsp) = post_collision_velocities(v, v_star, 2.0, 2.0, unit(rel)).unwrap();
        for d in 0..3 {
            assert!((vp[d] - v[d]).abs() < 1e-14);
            assert!((vsp[d] - v_star[d]).abs() < 1e-14);
        }
        let neg = unit([-rel[0], -rel[1], -rel[2]]);
        let (vp, vsp) = post_collision_velocities(v, v_star, 2.0, 2.0, neg).unwrap();
        for d in 0..3 {
            assert!((vp[d] - v_star[d]).abs() < 1e-14);
            assert!((vsp[d] - v[d]).abs() < 1e-14);
        }
    }

    #[test]
    fn post_collision_conserves_momentum_and_energy() {
        // Deterministic low-discrepancy-ish sweep over directions and masses.
        let mut failures = 0;
        for k in 0..200 {
            let t = k as f64;
            let v = [(t * 0.37).sin(), (t * 0.11).cos(), (t * 0.53).sin() * 2.0];
            let v_star = [(t * 0.29).cos() * 3.0, (t * 0.41).sin(), -(t * 0.17).cos()];
            let sigma = unit([(t * 0.23).sin(), (t * 0.31).cos(), (t * 0.43).sin() + 0.1]);
            let m_i = 10f64.powf(((t * 0.07).sin()) * 2.0);
            let m_j = 10f64.powf(((t * 0.13).cos()) * 2.0);
            let (vp, vsp) = post_collision_velocities(v, v_star, m_i, m_j, sigma).unwrap();
            let mut p_err: f64 = 0.0;
            let mut p_scale: f64 = 0.0;
            for d in 0..3 {
                p_err = p_err.max(
                    (m_i * vp[d] + m_j * vsp[d] - m_i * v[d] - m_j * v_star[d]).abs(),
                );
                p_scale = p_scale.max((m_i * v[d]).abs() + (m_j * v_star[d]).abs());
            }
            let e_before = 0.5 * (m_i * norm3(v).powi(2) + m_j * norm3(v_star).powi(2));
            let e_after = 0.5 * (m_i * norm3(vp).powi(2) + m_j * norm3(vsp).powi(2));
            if p_err > 1e-12 * p_scale.max(1.0) || (e_after - e_before).abs() > 1e-12 * e_before {
                failures += 1;
            }
        }
        assert_eq!(failures, 0);
    }

    #[test]
    fn post_collision_rejects_non_unit_sigma() {
        let err =
            post_collision_velocities([1.0, 0.0, 0.0], [0.0, 0.0, 0.0], 1.0, 1.0, [1.0, 1.0, 0.0])
                .unwrap_err();
        assert!(matches!(err, Error::NonUnitSigma { .. }));
    }

    #[test]
    fn angular_constant_norm_is_exact() {
        let b = AngularKernel::constant(0.75).unwrap();
        assert_eq!(b.l1_norm(), 1.5);
        assert_eq!(b.eval(0.3), 0.75);
    }

    #[test]
    fn angular_table_simpson_matches_polynomials() {
        // b(eta) = eta^2: integral 2/3; Simpson is exact for cubics.
        let m = 33;
        let samples: Vec<f64> = (0..m).map(|k| grid_eta(k, m).powi(2)).collect();
        let b = AngularKernel::from_samples(samples).unwrap();
        assert!((b.l1_norm() - 2.0 / 3.0).abs() < 1e-10);

        // b(eta) = (1 + eta^2) / 2: integral 4/3.
        let samples: Vec<f64> = (0..m)
            .map(|k| (1.0 + grid_eta(k, m).powi(2)) / 2.0)
            .collect();
        let b = AngularKernel::from_samples(samples).unwrap();
        assert!((b.l1_norm() - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn angular_reflection_is_bit_identical() {
        let m = 65;
        let samples: Vec<f64> = (0..m)
            .map(|k| {
                let eta = grid_eta(k, m);
                0.3 + eta * eta * (1.0 + 0.5 * eta * eta)
            })
            .collect();
        let mut reflected = samples.clone();
        reflected.reverse();
        let b = AngularKernel::from_samples(samples).unwrap();
        let br = AngularKernel::from_samples(reflected).unwrap();
        assert_eq!(b.l1_norm().to_bits(), br.l1_norm().to_bits());
    }

    #[test]
    fn angular_rejects_bad_tables() {
        assert!(matches!(
            AngularKernel::from_samples(vec![1.0, 1.0]).unwrap_err(),
            Error::AngularSampleCount { count: 2 }
        ));
        assert!(matches!(
            AngularKernel::from_samples(vec![1.0, -0.5, 1.0]).unwrap_err(),
            Error::NegativeAngularSample { index: 1, .. }
        ));
        assert!(matches!(
            AngularKernel::from_samples(vec![1.0, 0.5, 2.0]).unwrap_err(),
            Error::AngularAsymmetry { .. }
        ));
        assert!(matches!(
            AngularKernel::from_points(&[-1.0, 0.1, 1.0], &[1.0, 1.0, 1.0]).unwrap_err(),
            Error::AngularGrid { .. }
        ));
    }

    #[test]
    fn angular_set_requires_every_pair() {
        let b = AngularKernel::constant(1.0).unwrap();
        let err = AngularKernelSet::from_entries(
            3,
            vec![
                (0, 1, PairAngular::Kernel(b.clone())),
                (1, 2, PairAngular::NormOnly(2.0)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingAngularPair { i: 0, j: 2 }));

        let set = AngularKernelSet::from_entries(
            3,
            vec![
                (0, 1, PairAngular::Kernel(b.clone())),
                (2, 1, PairAngular::NormOnly(2.0)),
                (0, 2, PairAngular::Kernel(b)),
            ],
        )
        .unwrap();
        assert_eq!(set.l1_norm(0, 1), 2.0);
        assert_eq!(set.l1_norm(1, 2), 2.0);
        assert_eq!(set.l1_norm(2, 1), 2.0);
        assert!(set.kernel(1, 2).is_none());
        assert!(set.kernel(0, 2).is_some());
    }

    #[test]
    fn cross_section_symmetries() {
        let kernel = AnalyticKineticKernel::new(vec![0.5, 0.25, 0.125]).unwrap();
        let m = 41;
        let samples: Vec<f64> = (0..m)
            .map(|k| 1.0 + grid_eta(k, m).powi(4))
            .collect();
        let b = AngularKernel::from_samples(samples).unwrap();
        let v = [0.3, -0.2, 1.1];
        let v_star = [-0.4, 0.9, 0.2];
        let sigma = unit([0.2, 0.5, -0.7]);

        let base = cross_section_eval(&kernel, &b, v, v_star, sigma).unwrap();

        // Swap (v, v*) with sigma -> -sigma.
        let swapped = cross_section_eval(
            &kernel,
            &b,
            v_star,
            v,
            [-sigma[0], -sigma[1], -sigma[2]],
        )
        .unwrap();
        assert!((base - swapped).abs() < 1e-12 * base.abs());

        // Microreversibility: the reverse collision uses the original relative
        // direction as its scattering direction.
        let (vp, vsp) = post_collision_velocities(v, v_star, 1.0, 2.0, sigma).unwrap();
        let rel = unit([v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]]);
        let reverse = cross_section_eval(&kernel, &b, vp, vsp, rel).unwrap();
        assert!((base - reverse).abs() < 1e-12 * base.abs());

        let err = cross_section_eval(&kernel, &b, v, v, sigma).unwrap_err();
        assert!(matches!(err, Error::CoincidentVelocities));
    }
}
