//! Finite-volume solver for the Maxwell-Stefan cross-diffusion system.
//!
//! Unknowns are cell-averaged molar concentrations c_i(x, t) with
//! sum_i c_i = c fixed. At every cell face the fluxes F_i solve the linear
//! Maxwell-Stefan relations
//!
//! ```text
//! sum_{j != i} (c_j F_i - c_i F_j) / D_ij = -c * d(c_i)/dx
//! ```
//!
//! whose rows are linearly dependent; the last row is replaced by the
//! equimolar closure sum_i F_i = 0 before the dense solve, and the closure is
//! then re-imposed exactly by recomputing the last flux as minus the sum of
//! the others. Explicit Euler in time with the parabolic step bound
//! dt <= dx^2 / (4 max D_ij) enforced as a hard precondition.

use nalgebra::{DMatrix, DVector};

use crate::coefficients::DiffusionMatrix;
use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};

/// Negative cell values above this floor are treated as roundoff and clamped.
const CLAMP_FLOOR: f64 = -1e-12;

/// Concentrations (and the face fluxes of the step that produced them) for
/// every species on a 1-D grid. Species-major storage.
#[derive(Debug, Clone)]
pub struct MixtureState {
    n_species: usize,
    n_cells: usize,
    concentrations: Vec<f64>,
    /// n_cells + 1 faces per species; zero until a step has run.
    fluxes: Vec<f64>,
}

impl MixtureState {
    pub fn new(fields: Vec<Vec<f64>>) -> Result<Self> {
        if fields.len() < 2 {
            return Err(Error::TooFewSpecies {
                count: fields.len(),
            });
        }
        let n_cells = fields[0].len();
        if n_cells == 0 {
            return Err(Error::ShapeMismatch {
                message: "state needs at least one cell".into(),
            });
        }
        let mut concentrations = Vec::with_capacity(fields.len() * n_cells);
        for (s, field) in fields.iter().enumerate() {
            if field.len() != n_cells {
                return Err(Error::ShapeMismatch {
                    message: format!(
                        "species {s} has {} cells, species 0 has {n_cells}",
                        field.len()
                    ),
                });
            }
            for (i, &v) in field.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NegativeCell {
                        species: s,
                        cell: i,
                        value: v,
                    });
                }
            }
            concentrations.extend_from_slice(field);
        }
        let n_species = fields.len();
        Ok(MixtureState {
            n_species,
            n_cells,
            concentrations,
            fluxes: vec![0.0; n_species * (n_cells + 1)],
        })
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn concentration(&self, species: usize, cell: usize) -> f64 {
        self.concentrations[species * self.n_cells + cell]
    }

    pub fn species_slice(&self, species: usize) -> &[f64] {
        &self.concentrations[species * self.n_cells..(species + 1) * self.n_cells]
    }

    /// Face flux from the step that produced this state (faces 0..=n_cells).
    pub fn flux(&self, species: usize, face: usize) -> f64 {
        self.fluxes[species * (self.n_cells + 1) + face]
    }

    pub fn total_amount(&self, species: usize, dx: f64) -> f64 {
        self.species_slice(species).iter().sum::<f64>() * dx
    }
}

/// Maxwell-Stefan flux solve at one face. `c_face` and `grads` hold per
/// species the face concentration and concentration gradient; `face` is only
/// used for error reporting. The returned fluxes satisfy sum F_i = 0.0
/// exactly: the last entry is recomputed as the negated sum of the others.
pub fn solve_fluxes(
    face: usize,
    c_face: &[f64],
    grads: &[f64],
    d: &DiffusionMatrix,
    c_total: f64,
) -> Result<Vec<f64>> {
    let n = d.order();
    if c_face.len() != n || grads.len() != n {
        return Err(Error::ShapeMismatch {
            message: format!(
                "face data has {} / {} species, matrix order {n}",
                c_face.len(),
                grads.len()
            ),
        });
    }
    let mut a = DMatrix::zeros(n, n);
    let mut b = DVector::zeros(n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = d.get(i, j);
            diag += c_face[j] / dij;
            a[(i, j)] = -c_face[i] / dij;
        }
        a[(i, i)] = diag;
        b[i] = -c_total * grads[i];
    }
    // Bootstrap: the rows sum to zero, so replace the last one by the closure.
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    b[n - 1] = 0.0;
    let norm = a.norm();
    let solution = a.lu().solve(&b).ok_or(Error::SingularFluxSystem { face, norm })?;
    let mut fluxes: Vec<f64> = solution.iter().copied().collect();
    let partial: f64 = fluxes[..n - 1].iter().sum();
    fluxes[n - 1] = -partial;
    Ok(fluxes)
}

fn stability_bound(grid: &Grid1D, d: &DiffusionMatrix) -> f64 {
    0.25 * grid.dx() * grid.dx() / d.max_value()
}

/// One explicit Euler step. Fails on a violated parabolic bound, on a
/// singular face system, or on a concentration more negative than roundoff.
pub fn step(
    state: &MixtureState,
    grid: &Grid1D,
    d: &DiffusionMatrix,
    c_total: f64,
    dt: f64,
) -> Result<MixtureState> {
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
    if state.n_species != d.order() {
        return Err(Error::ShapeMismatch {
            message: format!(
                "state has {} species, matrix order {}",
                state.n_species,
                d.order()
            ),
        });
    }
    let bound = stability_bound(grid, d);
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::StabilityBound {
            dt,
            bound,
            kind: "parabolic",
        });
    }

    let n = grid.n_cells();
    let ns = state.n_species;
    let dx = grid.dx();
    let n_faces = n + 1;
    let mut fluxes = vec![0.0; ns * n_faces];
    let mut c_face = vec![0.0; ns];
    let mut grads = vec![0.0; ns];

    let interior = |left: usize,
                    right: usize,
                    face: usize,
                    c_face: &mut [f64],
                    grads: &mut [f64],
                    fluxes: &mut [f64]|
     -> Result<()> {
        for s in 0..ns {
            let cl = state.concentration(s, left);
            let cr = state.concentration(s, right);
            c_face[s] = 0.5 * (cl + cr);
            grads[s] = (cr - cl) / dx;
        }
        let f = solve_fluxes(face, c_face, grads, d, c_total)?;
        for s in 0..ns {
            fluxes[s * n_faces + face] = f[s];
        }
        Ok(())
    };

    match grid.boundary() {
        Boundary::Periodic => {
            for face in 0..n {
                let left = (face + n - 1) % n;
                let right = face;
                interior(left, right, face, &mut c_face, &mut grads, &mut fluxes)?;
            }
            // The wrap face is the same face; copy so telescoping is exact.
            for s in 0..ns {
                fluxes[s * n_faces + n] = fluxes[s * n_faces];
            }
        }
        Boundary::NoFlux => {
            // Faces 0 and n stay zero.
            for face in 1..n {
                interior(face - 1, face, face, &mut c_face, &mut grads, &mut fluxes)?;
            }
        }
    }

    let mut concentrations = vec![0.0; ns * n];
    let scale = dt / dx;
    for s in 0..ns {
        for i in 0..n {
            let f_left = fluxes[s * n_faces + i];
            let f_right = fluxes[s * n_faces + i + 1];
            concentrations[s * n + i] = state.concentration(s, i) - scale * (f_right - f_left);
        }
    }

    // Clamp roundoff-negative cells and renormalize the affected columns.
    for i in 0..n {
        let mut clamped = false;
        for s in 0..ns {
            let v = concentrations[s * n + i];
            if v < 0.0 {
                if v < CLAMP_FLOOR {
                    return Err(Error::NegativeCell {
                        species: s,
                        cell: i,
                        value: v,
                    });
                }
                concentrations[s * n + i] = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let sum: f64 = (0..ns).map(|s| concentrations[s * n + i]).sum();
            if sum > 0.0 {
                let factor = c_total / sum;
                for s in 0..ns {
                    concentrations[s * n + i] *= factor;
                }
            }
        }
    }

    Ok(MixtureState {
        n_species: ns,
        n_cells: n,
        concentrations,
        fluxes,
    })
}

/// Runs to `t_end` exactly (the final step is shortened to land on it).
/// Snapshots: the initial state, every `output_every`-th step when it is
/// nonzero, and always the final state.
pub fn run(
    initial: &MixtureState,
    grid: &Grid1D,
    d: &DiffusionMatrix,
    c_total: f64,
    t_end: f64,
    dt: f64,
    output_every: usize,
) -> Result<Vec<(f64, MixtureState)>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidTEnd { value: t_end });
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDt { value: dt });
    }
    let mut snapshots = vec![(0.0, initial.clone())];
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut step_count = 0usize;
    while t < t_end {
        let remaining = t_end - t;
        let dt_k = if remaining < dt * (1.0 + 1e-9) {
            remaining
        } else {
            dt
        };
        state = step(&state, grid, d, c_total, dt_k)?;
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
    Ok(snapshots)
}
