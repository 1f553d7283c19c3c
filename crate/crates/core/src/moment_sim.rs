//! Scaled moment system whose stiff relaxation limit is the Maxwell-Stefan
//! model, integrated with an IMEX splitting.
//!
//! Per species the unknowns are cell concentrations c_i and rescaled bulk
//! velocities u_i (already divided by the scale separation, so the mass flux
//! c_i u_i stays O(1) as eps -> 0):
//!
//! ```text
//! d_t c_i + d_x (c_i u_i) = 0
//! d_t (c_i u_i) + d_x (c_i u_i^2)
//!     = -(1/eps^2) [ (kT/m_i) d_x c_i + sum_j Delta_ij c_i c_j (u_i - u_j) ]
//! ```
//!
//! As eps -> 0 the bracket is driven to zero, which is exactly the
//! Maxwell-Stefan flux relation, so solutions converge to the cross-diffusion
//! system at rate eps^2. One step treats mass transport explicitly with
//! centered face fluxes, momentum transport explicitly with a local
//! Lax-Friedrichs flux whose dissipation speed comes from the material
//! velocity alone (an acoustic-speed LxF would drown the limit in numerical
//! diffusion), then the pressure gradient of the updated concentrations and
//! the friction exchange implicitly. The implicit friction matrix is strictly
//! diagonally dominant for positive concentrations.
//!
//! Explicit transport imposes two step-size preconditions checked on entry:
//! an advective bound dt <= 0.9 dx / max|u| and an acoustic bound
//! dt <= 0.9 * 2 eps dx / (pi * max_i sqrt(kT/m_i)), the stability limit of
//! the staggered (mass explicit, pressure from updated mass) wave update.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::coefficients::{DeltaMatrix, DiffusionMatrix, PairMatrix};
use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};
use crate::mixture::MixtureSpec;
use crate::ms_solver::{self, MixtureState};

/// Plain friction coefficients Delta_ij = kT Delta~_ij / m_i for the full
/// (non-symmetric) exchange table, plus the masses and kT needed for
/// momentum bookkeeping.
#[derive(Debug, Clone)]
pub struct FrictionMatrix {
    order: usize,
    kt: f64,
    masses: Vec<f64>,
    /// Row-major order x order, zero diagonal.
    deltas: Vec<f64>,
}

impl FrictionMatrix {
    pub fn new(spec: &MixtureSpec, delta: &DeltaMatrix) -> Result<Self> {
        if spec.len() != delta.order() {
            return Err(Error::ShapeMismatch {
                message: format!(
                    "{} species, friction matrix order {}",
                    spec.len(),
                    delta.order()
                ),
            });
        }
        let masses: Vec<f64> = (0..spec.len()).map(|i| spec.mass(i)).collect();
        Self::from_parts(masses, spec.kt(), delta.pair_values().to_vec())
    }

    /// Build from raw masses, kT and the upper-triangle Delta~ values in
    /// lexicographic pair order.
    pub fn from_parts(masses: Vec<f64>, kt: f64, delta_tilde_pairs: Vec<f64>) -> Result<Self> {
        let order = masses.len();
        if order < 2 {
            return Err(Error::TooFewSpecies { count: order });
        }
        if !(kt > 0.0) || !kt.is_finite() {
            return Err(Error::NonpositiveTemperature { value: kt });
        }
        for (i, &m) in masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::NonpositiveMass {
                    name: format!("#{i}"),
                    value: m,
                });
            }
        }
        let tilde = PairMatrix::from_pairs(order, delta_tilde_pairs)?;
        let mut deltas = vec![0.0; order * order];
        for i in 0..order {
            for j in 0..order {
                if i != j {
                    deltas[i * order + j] = kt * tilde.get(i, j) / masses[i];
                }
            }
        }
        Ok(FrictionMatrix {
            order,
            kt,
            masses,
            deltas,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Delta_ij; zero on the diagonal.
    pub fn delta(&self, i: usize, j: usize) -> f64 {
        self.deltas[i * self.order + j]
    }

    /// Largest isothermal sound speed sqrt(kT/m) over the species.
    pub fn max_sound_speed(&self) -> f64 {
        let m_min = self.masses.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        (self.kt / m_min).sqrt()
    }

    /// The limiting binary diffusion coefficients D_ij = 1 / (c Delta~_ij).
    pub fn diffusion_matrix(&self, c_total: f64) -> Result<DiffusionMatrix> {
        if !(c_total > 0.0) || !c_total.is_finite() {
            return Err(Error::NonpositiveTotalConcentration { value: c_total });
        }
        let mut values = Vec::with_capacity(self.order * (self.order - 1) / 2);
        for i in 0..self.order {
            for j in (i + 1)..self.order {
                let tilde = self.masses[i] * self.delta(i, j) / self.kt;
                if !(tilde > 0.0) {
                    return Err(Error::NonpositiveDeltaTilde { i, j, value: tilde });
                }
                values.push(1.0 / (c_total * tilde));
            }
        }
        PairMatrix::from_pairs(self.order, values)
    }
}

/// Concentrations and rescaled velocities for every species on a grid,
/// tagged with the scale separation eps of the run. Species-major storage.
#[derive(Debug, Clone)]
pub struct MomentState {
    n_species: usize,
    n_cells: usize,
    concentrations: Vec<f64>,
    velocities: Vec<f64>,
    epsilon: f64,
}

impl MomentState {
    pub fn new(
        concentrations: Vec<Vec<f64>>,
        velocities: Vec<Vec<f64>>,
        epsilon: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0) || !(epsilon < 1.0) {
            return Err(Error::EpsilonOutOfRange { value: epsilon });
        }
        if concentrations.len() < 2 {
            return Err(Error::TooFewSpecies {
                count: concentrations.len(),
            });
        }
        if velocities.len() != concentrations.len() {
            return Err(Error::ShapeMismatch {
                message: format!(
                    "{} concentration fields, {} velocity fields",
                    concentrations.len(),
                    velocities.len()
                ),
            });
        }
        let n_cells = concentrations[0].len();
        if n_cells == 0 {
            return Err(Error::ShapeMismatch {
                message: "state needs at least one cell".into(),
            });
        }
        let mut c_flat = Vec::with_capacity(concentrations.len() * n_cells);
        let mut u_flat = Vec::with_capacity(concentrations.len() * n_cells);
        for (s, (c, u)) in concentrations.iter().zip(velocities.iter()).enumerate() {
            if c.len() != n_cells || u.len() != n_cells {
                return Err(Error::ShapeMismatch {
                    message: format!("species {s} field lengths differ"),
                });
            }
            for (i, &v) in c.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NegativeCell {
                        species: s,
                        cell: i,
                        value: v,
                    });
                }
            }
            for &v in u.iter() {
                if !v.is_finite() {
                    return Err(Error::ShapeMismatch {
                        message: format!("species {s} has a non-finite velocity"),
                    });
                }
            }
            c_flat.extend_from_slice(c);
            u_flat.extend_from_slice(u);
        }
        Ok(MomentState {
            n_species: concentrations.len(),
            n_cells,
            concentrations: c_flat,
            velocities: u_flat,
            epsilon,
        })
    }

    /// Zero-velocity state (the well-prepared form of limit initial data).
    pub fn at_rest(concentrations: Vec<Vec<f64>>, epsilon: f64) -> Result<Self> {
        let velocities = concentrations
            .iter()
            .map(|c| vec![0.0; c.len()])
            .collect();
        Self::new(concentrations, velocities, epsilon)
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn concentration(&self, species: usize, cell: usize) -> f64 {
        self.concentrations[species * self.n_cells + cell]
    }

    pub fn velocity(&self, species: usize, cell: usize) -> f64 {
        self.velocities[species * self.n_cells + cell]
    }

    pub fn concentration_slice(&self, species: usize) -> &[f64] {
        &self.concentrations[species * self.n_cells..(species + 1) * self.n_cells]
    }

    pub fn max_speed(&self) -> f64 {
        self.velocities.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }
}

/// Friction momentum exchange Theta_i = sum_j Delta_ij c_i c_j (u_j - u_i)
/// at one cell, in a fixed summation order. The mass-weighted sum
/// sum_i m_i Theta_i cancels in exactly paired terms, so it vanishes to
/// roundoff for any state.
pub fn theta_eval(c: &[f64], u: &[f64], friction: &FrictionMatrix) -> Vec<f64> {
    let n = friction.order();
    let mut theta = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += friction.delta(i, j) * c[i] * c[j] * (u[j] - u[i]);
            }
        }
        theta[i] = acc;
    }
    theta
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StepDiagnostics {
    /// max over cells of |sum_i m_i Theta_i| after the implicit solve.
    pub max_momentum_residual: f64,
    pub max_speed: f64,
}

fn neighbor_indices(boundary: Boundary, n: usize, face: usize) -> Option<(usize, usize)> {
    match boundary {
        Boundary::Periodic => {
            let left = (face + n - 1) % n;
            Some((left, face % n))
        }
        Boundary::NoFlux => {
            if face == 0 || face == n {
                None
            } else {
                Some((face - 1, face))
            }
        }
    }
}

/// One IMEX step; fails on violated stability preconditions.
pub fn imex_step(
    state: &MomentState,
    grid: &Grid1D,
    friction: &FrictionMatrix,
    dt: f64,
) -> Result<(MomentState, StepDiagnostics)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDt { value: dt });
    }
    if state.n_cells != grid.n_cells() {
        return Err(Error::ShapeMismatch {
            message: format!(
                "state has {} cells, grid has {}",
                state.n_cells,
                grid.n_cells()
            ),
        });
    }
    if state.n_species != friction.order() {
        return Err(Error::ShapeMismatch {
            message: format!(
                "state has {} species, friction order {}",
                state.n_species,
                friction.order()
            ),
        });
    }
    let dx = grid.dx();
    let eps = state.epsilon;

    let max_speed = state.max_speed();
    if max_speed > 0.0 {
        let bound = 0.9 * dx / max_speed;
        if dt > bound {
            return Err(Error::StabilityBound {
                dt,
                bound,
                kind: "advective",
            });
        }
    }
    let acoustic_bound = 0.9 * 2.0 * eps * dx / (PI * friction.max_sound_speed());
    if dt > acoustic_bound {
        return Err(Error::StabilityBound {
            dt,
            bound: acoustic_bound,
            kind: "acoustic",
        });
    }

    let n = state.n_cells;
    let ns = state.n_species;
    let n_faces = n + 1;
    let boundary = grid.boundary();
    let lam = dt / dx;
    let stiff = dt / (eps * eps);

    // Mass transport, centered flux. The wrap face is copied so periodic
    // telescoping is exact.
    let mut c_new = vec![0.0; ns * n];
    {
        let mut g = vec![0.0; ns * n_faces];
        for face in 0..n_faces {
            if boundary == Boundary::Periodic && face == n {
                for s in 0..ns {
                    g[s * n_faces + n] = g[s * n_faces];
                }
                continue;
            }
            if let Some((l, r)) = neighbor_indices(boundary, n, face) {
                for s in 0..ns {
                    let fl = state.concentration(s, l) * state.velocity(s, l);
                    let fr = state.concentration(s, r) * state.velocity(s, r);
                    g[s * n_faces + face] = 0.5 * (fl + fr);
                }
            }
        }
        for s in 0..ns {
            for i in 0..n {
                let v = state.concentration(s, i)
                    - lam * (g[s * n_faces + i + 1] - g[s * n_faces + i]);
                if v < 0.0 {
                    if v < -1e-12 {
                        return Err(Error::NegativeCell {
                            species: s,
                            cell: i,
                            value: v,
                        });
                    }
                    c_new[s * n + i] = 0.0;
                } else {
                    c_new[s * n + i] = v;
                }
            }
        }
    }

    // Momentum transport, local Lax-Friedrichs with material wave speed.
    let mut q_star = vec![0.0; ns * n];
    {
        let mut h = vec![0.0; ns * n_faces];
        for face in 0..n_faces {
            if boundary == Boundary::Periodic && face == n {
                for s in 0..ns {
                    h[s * n_faces + n] = h[s * n_faces];
                }
                continue;
            }
            if let Some((l, r)) = neighbor_indices(boundary, n, face) {
                for s in 0..ns {
                    let ul = state.velocity(s, l);
                    let ur = state.velocity(s, r);
                    let ql = state.concentration(s, l) * ul;
                    let qr = state.concentration(s, r) * ur;
                    let alpha = ul.abs().max(ur.abs());
                    h[s * n_faces + face] = 0.5 * (ql * ul + qr * ur) - 0.5 * alpha * (qr - ql);
                }
            }
        }
        for s in 0..ns {
            for i in 0..n {
                let q = state.concentration(s, i) * state.velocity(s, i);
                q_star[s * n + i] = q - lam * (h[s * n_faces + i + 1] - h[s * n_faces + i]);
            }
        }
    }

    // Pressure gradient of the updated concentrations, centered at cells
    // (zero-gradient ghosts at no-flux walls).
    let grad_c = |s: usize, i: usize| -> f64 {
        match boundary {
            Boundary::Periodic => {
                let ip = (i + 1) % n;
                let im = (i + n - 1) % n;
                (c_new[s * n + ip] - c_new[s * n + im]) / (2.0 * dx)
            }
            Boundary::NoFlux => {
                let ip = if i + 1 < n { i + 1 } else { i };
                let im = i.saturating_sub(1);
                (c_new[s * n + ip] - c_new[s * n + im]) / (2.0 * dx)
            }
        }
    };

    // Implicit friction at frozen updated concentrations, cell by cell.
    let mut u_new = vec![0.0; ns * n];
    let mut a = DMatrix::zeros(ns, ns);
    let mut rhs = DVector::zeros(ns);
    for i in 0..n {
        a.fill(0.0);
        for s in 0..ns {
            let cs = c_new[s * n + i];
            if cs == 0.0 {
                a[(s, s)] = 1.0;
                rhs[s] = 0.0;
                continue;
            }
            let mut diag = cs;
            for j in 0..ns {
                if j == s {
                    continue;
                }
                let coupling = stiff * friction.delta(s, j) * cs * c_new[j * n + i];
                diag += coupling;
                a[(s, j)] = -coupling;
            }
            a[(s, s)] = diag;
            rhs[s] = q_star[s * n + i] - stiff * (friction.kt() / friction.masses()[s]) * grad_c(s, i);
        }
        let solved = a
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularMomentumSystem { cell: i })?;
        for s in 0..ns {
            u_new[s * n + i] = solved[s];
        }
    }

    // Diagnostics on the relaxed state.
    let mut diag = StepDiagnostics::default();
    let mut c_cell = vec![0.0; ns];
    let mut u_cell = vec![0.0; ns];
    for i in 0..n {
        for s in 0..ns {
            c_cell[s] = c_new[s * n + i];
            u_cell[s] = u_new[s * n + i];
            diag.max_speed = diag.max_speed.max(u_cell[s].abs());
        }
        let theta = theta_eval(&c_cell, &u_cell, friction);
        let residual: f64 = theta
            .iter()
            .zip(friction.masses())
            .map(|(t, m)| m * t)
            .sum();
        diag.max_momentum_residual = diag.max_momentum_residual.max(residual.abs());
    }

    Ok((
        MomentState {
            n_species: ns,
            n_cells: n,
            concentrations: c_new,
            velocities: u_new,
            epsilon: eps,
        },
        diag,
    ))
}

/// Runs to t_end exactly; snapshots like the diffusion solver. Returns the
/// snapshots and the worst momentum residual seen over all steps.
pub fn run_moments(
    initial: &MomentState,
    grid: &Grid1D,
    friction: &FrictionMatrix,
    t_end: f64,
    dt: f64,
    output_every: usize,
) -> Result<(Vec<(f64, MomentState)>, f64)> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidTEnd { value: t_end });
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDt { value: dt });
    }
    let mut snapshots = vec![(0.0, initial.clone())];
    let mut state = initial.clone();
    let mut worst = 0.0f64;
    let mut t = 0.0;
    let mut step_count = 0usize;
    while t < t_end {
        let remaining = t_end - t;
        let dt_k = if remaining < dt * (1.0 + 1e-9) {
            remaining
        } else {
            dt
        };
        let (next, diag) = imex_step(&state, grid, friction, dt_k)?;
        state = next;
        worst = worst.max(diag.max_momentum_residual);
        t += dt_k;
        step_count += 1;
        let at_end = t >= t_end - dt * 1e-12;
        if at_end {
            snapshots.push((t_end, state.clone()));
            break;
        }
        if output_every != 0 && step_count.is_multiple_of(output_every) {
            snapshots.push((t, state.clone()));
        }
    }
    Ok((snapshots, worst))
}

/// Block average of `refine` fine cells per coarse cell.
pub fn restrict(fine: &[f64], refine: usize) -> Vec<f64> {
    assert!(refine >= 1 && fine.len().is_multiple_of(refine));
    let n = fine.len() / refine;
    (0..n)
        .map(|i| fine[i * refine..(i + 1) * refine].iter().sum::<f64>() / refine as f64)
        .collect()
}

/// Limit reference: the diffusion system solved on a `refine`-times finer
/// grid and block-averaged back, removing most of the spatial truncation
/// error from the comparison.
pub fn ms_reference(
    friction: &FrictionMatrix,
    grid: &Grid1D,
    refine: usize,
    c_total: f64,
    t_end: f64,
    init: &dyn Fn(usize, f64) -> f64,
) -> Result<Vec<Vec<f64>>> {
    let fine = Grid1D::new(
        grid.x_min(),
        grid.x_max(),
        grid.n_cells() * refine,
        grid.boundary(),
    )?;
    let ns = friction.order();
    let fields: Vec<Vec<f64>> = (0..ns)
        .map(|s| (0..fine.n_cells()).map(|i| init(s, fine.cell_center(i))).collect())
        .collect();
    let initial = MixtureState::new(fields)?;
    let d = friction.diffusion_matrix(c_total)?;
    let dt = 0.2 * fine.dx() * fine.dx() / d.max_value();
    let out = ms_solver::run(&initial, &fine, &d, c_total, t_end, dt, 0)?;
    let (_, last) = out.last().unwrap();
    Ok((0..ns)
        .map(|s| restrict(last.species_slice(s), refine))
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub epsilons: Vec<f64>,
    pub l2_errors: Vec<f64>,
    /// Consecutive observed orders ln(e_k/e_{k+1}) / ln(eps_k/eps_{k+1}).
    pub observed_orders: Vec<f64>,
    pub max_momentum_residual: f64,
    pub dt: f64,
    pub reference_cells: usize,
}

/// Moment runs at each eps (strictly decreasing, shared dt chosen at the
/// smallest eps) against the refined diffusion reference; reports L2 errors
/// and consecutive convergence orders.
#[allow(clippy::too_many_arguments)]
pub fn epsilon_sweep(
    friction: &FrictionMatrix,
    grid: &Grid1D,
    refine: usize,
    c_total: f64,
    t_end: f64,
    epsilons: &[f64],
    dt: Option<f64>,
    init: &dyn Fn(usize, f64) -> f64,
) -> Result<SweepResult> {
    if epsilons.is_empty() {
        return Err(Error::SweepEpsilons {
            message: "no eps values given".into(),
        });
    }
    for pair in epsilons.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::SweepEpsilons {
                message: format!("eps values must strictly decrease, got {} then {}", pair[0], pair[1]),
            });
        }
    }
    for &e in epsilons {
        if !(e > 0.0) || !(e < 1.0) {
            return Err(Error::EpsilonOutOfRange { value: e });
        }
    }
    if refine < 1 {
        return Err(Error::SweepEpsilons {
            message: "refinement factor must be at least 1".into(),
        });
    }
    let eps_min = *epsilons.last().unwrap();
    let d_limit = friction.diffusion_matrix(c_total)?;
    let dx = grid.dx();
    let dt = match dt {
        Some(v) => v,
        None => {
            let parabolic = 0.2 * dx * dx / d_limit.max_value();
            let acoustic = 0.5 * 2.0 * eps_min * dx / (PI * friction.max_sound_speed());
            parabolic.min(acoustic)
        }
    };

    let reference = ms_reference(friction, grid, refine, c_total, t_end, init)?;

    let ns = friction.order();
    let n = grid.n_cells();
    let coarse_fields: Vec<Vec<f64>> = (0..ns)
        .map(|s| (0..n).map(|i| init(s, grid.cell_center(i))).collect())
        .collect();

    let mut l2_errors = Vec::with_capacity(epsilons.len());
    let mut worst_residual = 0.0f64;
    for &eps in epsilons {
        let initial = MomentState::at_rest(coarse_fields.clone(), eps)?;
        let (snapshots, residual) = run_moments(&initial, grid, friction, t_end, dt, 0)?;
        worst_residual = worst_residual.max(residual);
        let (_, last) = snapshots.last().unwrap();
        let mut err2 = 0.0;
        for (s, reference_s) in reference.iter().enumerate() {
            for (i, &r) in reference_s.iter().enumerate() {
                let diff = last.concentration(s, i) - r;
                err2 += diff * diff;
            }
        }
        l2_errors.push((err2 * dx).sqrt());
    }

    let mut observed_orders = Vec::new();
    for k in 0..epsilons.len().saturating_sub(1) {
        let order = (l2_errors[k] / l2_errors[k + 1]).ln()
            / (epsilons[k] / epsilons[k + 1]).ln();
        observed_orders.push(order);
    }

    Ok(SweepResult {
        epsilons: epsilons.to_vec(),
        l2_errors,
        observed_orders,
        max_momentum_residual: worst_residual,
        dt,
        reference_cells: n * refine,
    })
}
