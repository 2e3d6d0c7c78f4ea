//! Time-dependent change of variables between the drift-less equation and
//! the Fokker–Planck equation with quadratic confinement.
//!
//! With `φ(t) = e^t`, `ψ(t) = e^{(dγ+2)t}` and
//! `n̂(t, x) = φ(t)^d n(ψ(t), φ(t) x)`, a solution `n(s, y)` of
//! `∂ₛn = ∇·(n∇p)` becomes a solution of
//! `∂ₜn̂ = ∇·(n̂∇(λp̂ + |x|²/2))` with `λ = dγ + 2`.

use crate::error::{Error, Result};
use crate::functionals::{fisher_information, FunctionalKind};
use crate::grid::{RadialField, RadialGrid};
use crate::params::{sphere_area, DiffusionParams};
use crate::profiles::BarenblattProfile;
use crate::series::FunctionalSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Fokker–Planck time `t` to drift-less time `s = ψ(t)`.
    ToDriftless,
    /// Drift-less time `s` to Fokker–Planck time `t = log(s)/(dγ+2)`.
    ToFokkerPlanck,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingMap {
    gamma: f64,
    dim: usize,
    direction: Direction,
}

impl ScalingMap {
    pub fn new(params: &DiffusionParams, direction: Direction) -> Self {
        Self {
            gamma: params.gamma(),
            dim: params.dim(),
            direction,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn inverse(&self) -> Self {
        Self {
            direction: match self.direction {
                Direction::ToDriftless => Direction::ToFokkerPlanck,
                Direction::ToFokkerPlanck => Direction::ToDriftless,
            },
            ..*self
        }
    }

    /// `dγ + 2 = 1/α`.
    pub fn rate(&self) -> f64 {
        self.dim as f64 * self.gamma + 2.0
    }

    /// Coefficient `λ` in front of the pressure in the image equation.
    pub fn pressure_scale(&self) -> f64 {
        self.rate()
    }

    pub fn phi(&self, t: f64) -> f64 {
        t.exp()
    }

    pub fn psi(&self, t: f64) -> f64 {
        (self.rate() * t).exp()
    }

    pub fn map_time(&self, t: f64) -> Result<f64> {
        match self.direction {
            Direction::ToDriftless => Ok(self.psi(t)),
            Direction::ToFokkerPlanck => {
                if t > 0.0 {
                    Ok(t.ln() / self.rate())
                } else {
                    Err(Error::domain(format!("drift-less time must be positive, got {t}")))
                }
            }
        }
    }

    /// Maps a field to the other frame. Without a target grid the source grid
    /// is rescaled by `φ` so that cells correspond one to one; with a target
    /// grid the density is interpolated linearly in `r`.
    pub fn map_field(&self, field: &RadialField, target: Option<&RadialGrid>) -> Result<RadialField> {
        let d = self.dim as i32;
        // (amplitude factor, length factor from target to source radius, new time)
        let (amp, stretch, time) = match self.direction {
            Direction::ToDriftless => {
                let t = field.time;
                (self.phi(t).powi(-d), 1.0 / self.phi(t), self.psi(t))
            }
            Direction::ToFokkerPlanck => {
                let t = self.map_time(field.time)?;
                (self.phi(t).powi(d), self.phi(t), t)
            }
        };
        match target {
            None => {
                let grid = field.grid.scaled(1.0 / stretch)?;
                let values = field.values.iter().map(|v| amp * v).collect();
                RadialField::new(grid, values, time)
            }
            Some(grid) => {
                let outer_empty = field.values.last().is_some_and(|&v| v == 0.0);
                let mut values = Vec::with_capacity(grid.cells());
                for i in 0..grid.cells() {
                    let r = grid.center(i) * stretch;
                    let v = match field.interpolate(r) {
                        Some(v) => v,
                        None if outer_empty => 0.0,
                        None => {
                            return Err(Error::Coverage(format!(
                                "target radius {} maps to {r}, beyond the source grid ({}) where the density is nonzero",
                                grid.center(i),
                                field.grid.outer_radius()
                            )))
                        }
                    };
                    values.push(amp * v);
                }
                RadialField::new(grid.clone(), values, time)
            }
        }
    }

    /// Exponent `β = -αγdb - 2 + 2α`.
    pub fn beta(&self, b: f64) -> f64 {
        let a = 1.0 / self.rate();
        -a * self.gamma * self.dim as f64 * b - 2.0 + 2.0 * a
    }

    /// Converts `max |p̂|^b |∇p̂ + x/λ|²` recorded in Fokker–Planck time into
    /// `max |p|^b |∇p + α y/s|²` in drift-less time: `v ↦ s^β v`, `s = ψ(t)`.
    pub fn transfer_series(&self, series: &FunctionalSeries, b: f64) -> Result<FunctionalSeries> {
        if self.direction != Direction::ToDriftless {
            return Err(Error::domain("transfer_series maps Fokker-Planck series to drift-less time"));
        }
        let beta = self.beta(b);
        series.map(FunctionalKind::WeightedGapCentered { b }, |t, v| {
            let s = self.psi(t);
            (s, s.powf(beta) * v)
        })
    }

    /// Drift-less profile seen in the Fokker–Planck frame at time `t`:
    /// `e^{dt} B(ψ(t), e^t r)`.
    pub fn profile_density(&self, profile: &BarenblattProfile, t: f64, r: f64) -> Result<f64> {
        let phi = self.phi(t);
        Ok(phi.powi(self.dim as i32) * profile.density(self.psi(t), phi * r)?)
    }
}

/// Time `T` at which `B(T, ·)` is stationary for
/// `∂ₜn = ∇·(n∇(λp + |x|²/2))`, found by minimising the Fisher information
/// `∫ B |∇p + x/λ|²` of the sampled profile over `log T`.
pub fn stationary_time(profile: &BarenblattProfile, pressure_scale: f64, grid: &RadialGrid) -> Result<f64> {
    if !(pressure_scale > 0.0) {
        return Err(Error::domain("pressure scale must be positive"));
    }
    let params = profile.params();
    let base = BarenblattProfile::new(params.clone(), profile.mass())?;
    let objective = |log_t: f64| -> Result<f64> {
        let t = log_t.exp();
        let field = RadialField::from_fn(grid.clone(), t, |r| base.density(t, r))?;
        // Normalised by the second moment so that far-off times do not win
        // merely because the sampled profile has spread beyond the grid.
        let moment: f64 = field
            .values
            .iter()
            .enumerate()
            .map(|(i, n)| n * grid.center(i).powi(2) * grid.volume(i))
            .sum::<f64>()
            * sphere_area(grid.dim());
        if !(moment > 0.0) {
            return Ok(f64::INFINITY);
        }
        Ok(fisher_information(&field, params, 1.0 / pressure_scale) / moment)
    };
    // Golden-section search on a wide bracket.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-20.0f64, 20.0f64);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = objective(d)?;
        }
    }
    Ok((0.5 * (a + b)).exp())
}
