//! Cell-centred radial grid on `[0, R]` and densities living on it.

use crate::error::{Error, Result};
use std::cell::RefCell;

use crate::params::sphere_area;
use crate::quadrature::integrate;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    cells: usize,
    outer_radius: f64,
    dim: usize,
}

impl RadialGrid {
    pub fn new(cells: usize, outer_radius: f64, dim: usize) -> Result<Self> {
        if cells < 4 {
            return Err(Error::domain(format!("need at least 4 cells, got {cells}")));
        }
        if !(outer_radius > 0.0 && outer_radius.is_finite()) {
            return Err(Error::domain(format!("outer radius must be positive, got {outer_radius}")));
        }
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        Ok(Self {
            cells,
            outer_radius,
            dim,
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dr(&self) -> f64 {
        self.outer_radius / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }

    /// Radius of face `i` (`0..=N`); face `i` is the inner face of cell `i`.
    pub fn face(&self, i: usize) -> f64 {
        i as f64 * self.dr()
    }

    /// `r^{d-1}` at face `i`, without the sphere-area factor.
    pub fn face_area(&self, i: usize) -> f64 {
        self.face(i).powi(self.dim as i32 - 1)
    }

    /// `(r_{i+1}^d - r_i^d)/d`, without the sphere-area factor.
    pub fn volume(&self, i: usize) -> f64 {
        let d = self.dim as i32;
        (self.face(i + 1).powi(d) - self.face(i).powi(d)) / self.dim as f64
    }

    pub fn volumes(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.volume(i)).collect()
    }

    /// Same cell count, radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.cells, self.outer_radius * factor, self.dim)
    }
}

/// Radially symmetric density sampled at cell centres at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::domain(format!(
                "field has {} values for {} cells",
                values.len(),
                grid.cells()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(format!(
                "density must be finite and nonnegative (cell {i}: {})",
                values[i]
            )));
        }
        Ok(Self { grid, values, time })
    }

    /// Samples `f(r)` at the cell centres.
    pub fn from_fn(grid: RadialGrid, time: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = (0..grid.cells())
            .map(|i| f(grid.center(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, time)
    }

    pub fn mass(&self) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, n)| n * self.grid.volume(i))
            .sum();
        sphere_area(self.grid.dim()) * s
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `∫ |n - m|` against another field on an identical grid.
    pub fn l1_distance(&self, other: &RadialField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("L1 distance needs identical grids"));
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| (a - b).abs() * self.grid.volume(i))
            .sum();
        Ok(sphere_area(self.grid.dim()) * s)
    }

    /// `∫ |n - f|` against a function sampled at cell centres.
    pub fn l1_distance_to(&self, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut s = 0.0;
        for (i, n) in self.values.iter().enumerate() {
            s += (n - f(self.grid.center(i))?).abs() * self.grid.volume(i);
        }
        Ok(sphere_area(self.grid.dim()) * s)
    }

    /// `∫ |n_h - f|` over the ball with `n_h` the piecewise-constant cell
    /// function, integrated per cell by adaptive quadrature. Unlike
    /// [`l1_distance_to`](Self::l1_distance_to) this is a norm on functions,
    /// so it also sees the resolution error of the cell averages.
    pub fn l1_error(&self, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let d = self.grid.dim() as i32;
        let failure = RefCell::new(None);
        let mut s = 0.0;
        for (i, &n) in self.values.iter().enumerate() {
            let integrand = |r: f64| match f(r) {
                Ok(v) => (n - v).abs() * r.powi(d - 1),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            };
            s += integrate(integrand, self.grid.face(i), self.grid.face(i + 1), 1e-15, 1e-9)?;
        }
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(sphere_area(self.grid.dim()) * s)
    }

    /// Linear interpolation in `r`; constant extension towards `r = 0`.
    /// Returns `None` beyond the last cell centre.
    pub fn interpolate(&self, r: f64) -> Option<f64> {
        let dr = self.grid.dr();
        let x = r / dr - 0.5;
        let last = self.grid.cells() - 1;
        if x <= 0.0 {
            return Some(self.values[0]);
        }
        if x > last as f64 {
            return None;
        }
        let j = (x.floor() as usize).min(last - 1);
        let s = x - j as f64;
        Some((1.0 - s) * self.values[j] + s * self.values[j + 1])
    }
}
