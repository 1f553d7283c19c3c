//! Uniform 1-D finite-volume grid.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Zero flux through both domain ends.
    NoFlux,
}

#[derive(Debug, Clone, Copy)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    boundary: Boundary,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 4;

    pub fn new(x_min: f64, x_max: f64, n_cells: usize, boundary: Boundary) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || !(x_max > x_min) {
            return Err(Error::GridBounds { x_min, x_max });
        }
        if n_cells < Self::MIN_CELLS {
            return Err(Error::GridTooSmall {
                n_cells,
                min: Self::MIN_CELLS,
            });
        }
        Ok(Grid1D {
            x_min,
            x_max,
            n_cells,
            boundary,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }
}
