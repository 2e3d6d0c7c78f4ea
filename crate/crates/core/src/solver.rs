//! Explicit conservative finite-volume scheme for
//! `∂ₜn = ∇·(n∇(λ sign(γ) n^γ + V))` on a ball, radially symmetric.
//!
//! The diffusive flux is written on `w = n^{γ+1}`:
//! `J = -λκ (w_{i} - w_{i-1})/Δr`, `κ = |γ|/(γ+1)`, so the porous-medium
//! free boundary needs no special treatment. The drift flux is first-order
//! upwind. `λ = 1` is the equation itself; other values arise as the image
//! of the drift-less equation under the self-similar change of variables.

use std::fmt;

use crate::error::{Error, Result};
use crate::functionals::{evaluate, FunctionalKind};
use crate::grid::{RadialField, RadialGrid};
use crate::params::{sphere_area, DiffusionParams};
use crate::profiles::BarenblattProfile;
use crate::rescaling::ScalingMap;
use crate::series::FunctionalSeries;

/// Relative size of a negative value that is treated as round-off and
/// clamped to zero.
const CLAMP_TOLERANCE: f64 = 1e-12;

/// Exact-solution far field for fast diffusion on a truncated domain.
#[derive(Debug, Clone)]
pub struct FarField {
    pub profile: BarenblattProfile,
    /// Present when the run is in the rescaled (Fokker–Planck) frame; the
    /// ghost value is then the rescaled profile.
    pub frame: Option<ScalingMap>,
}

impl FarField {
    pub fn new(profile: BarenblattProfile) -> Self {
        Self { profile, frame: None }
    }

    pub fn rescaled(profile: BarenblattProfile, map: ScalingMap) -> Self {
        Self {
            profile,
            frame: Some(map),
        }
    }

    pub fn density(&self, t: f64, r: f64) -> Result<f64> {
        match &self.frame {
            None => self.profile.density(t, r),
            Some(map) => map.profile_density(&self.profile, t, r),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Boundary {
    NeumannZeroFlux,
    FarFieldBarenblatt(FarField),
}

/// Ghost value beyond the outer face: the far-field density at `R + Δr/2`.
pub fn far_field_boundary(far: &FarField, grid: &RadialGrid, t: f64) -> Result<f64> {
    far.density(t, grid.outer_radius() + 0.5 * grid.dr())
}

#[derive(Debug, Clone)]
pub enum InitialCondition {
    /// `B(t₀ + τ, ·)` for the given mass.
    Barenblatt { mass: f64, time_offset: f64 },
    /// As above, cut to zero beyond `radius` (porous-medium only).
    TruncatedBarenblatt {
        mass: f64,
        time_offset: f64,
        radius: f64,
    },
    /// Stationary state of the confined equation with the run's `λ`.
    Stationary { mass: f64 },
    /// Pressure `A (r - r₁)(r₂ - r)` on `r₁ < r < r₂`, zero elsewhere.
    Annulus { inner: f64, outer: f64, amplitude: f64 },
    /// Piecewise-linear table in `r`; zero beyond the last node.
    Table { radii: Vec<f64>, values: Vec<f64> },
    /// `base · (1 + ε e^{-r²/w²})`, rescaled back to the mass of `base`.
    Perturbed {
        base: Box<InitialCondition>,
        amplitude: f64,
        width: f64,
    },
}

impl InitialCondition {
    pub fn build(&self, params: &DiffusionParams, grid: &RadialGrid, t0: f64, pressure_scale: f64) -> Result<RadialField> {
        let field = match self {
            InitialCondition::Barenblatt { mass, time_offset } => {
                let b = BarenblattProfile::new(params.clone(), *mass)?.with_time_offset(*time_offset)?;
                RadialField::from_fn(grid.clone(), t0, |r| b.density(t0, r))?
            }
            InitialCondition::TruncatedBarenblatt {
                mass,
                time_offset,
                radius,
            } => {
                if !params.is_slow() {
                    return Err(Error::domain("truncated data would vanish somewhere; needs gamma > 0"));
                }
                let b = BarenblattProfile::new(params.clone(), *mass)?.with_time_offset(*time_offset)?;
                RadialField::from_fn(grid.clone(), t0, |r| {
                    if r <= *radius {
                        b.density(t0, r)
                    } else {
                        Ok(0.0)
                    }
                })?
            }
            InitialCondition::Stationary { mass } => {
                let b = BarenblattProfile::new(params.clone(), *mass)?;
                let ts = b.stationary_time(pressure_scale);
                RadialField::from_fn(grid.clone(), t0, |r| b.density(ts, r))?
            }
            InitialCondition::Annulus {
                inner,
                outer,
                amplitude,
            } => {
                if !params.is_slow() {
                    return Err(Error::domain("annulus data needs gamma > 0"));
                }
                if !(0.0 <= *inner && inner < outer && *amplitude > 0.0) {
                    return Err(Error::domain("annulus needs 0 <= inner < outer and amplitude > 0"));
                }
                let inv = 1.0 / params.gamma();
                RadialField::from_fn(grid.clone(), t0, |r| {
                    let p = amplitude * (r - inner) * (outer - r);
                    Ok(if p > 0.0 { p.powf(inv) } else { 0.0 })
                })?
            }
            InitialCondition::Table { radii, values } => {
                if radii.len() != values.len() || radii.len() < 2 {
                    return Err(Error::domain("table needs matching radii and values (at least two)"));
                }
                if radii.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::domain("table radii must increase"));
                }
                RadialField::from_fn(grid.clone(), t0, |r| {
                    if r <= radii[0] {
                        return Ok(values[0]);
                    }
                    let j = radii.partition_point(|&x| x < r);
                    if j >= radii.len() {
                        return Ok(0.0);
                    }
                    let s = (r - radii[j - 1]) / (radii[j] - radii[j - 1]);
                    Ok((1.0 - s) * values[j - 1] + s * values[j])
                })?
            }
            InitialCondition::Perturbed { base, amplitude, width } => {
                if !(*width > 0.0 && *amplitude > -1.0) {
                    return Err(Error::domain("perturbation needs width > 0 and amplitude > -1"));
                }
                let f = base.build(params, grid, t0, pressure_scale)?;
                let m0 = f.mass();
                let mut values: Vec<f64> = f
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, n)| {
                        let r = grid.center(i);
                        n * (1.0 + amplitude * (-(r * r) / (width * width)).exp())
                    })
                    .collect();
                let m1: f64 = RadialField::new(grid.clone(), values.clone(), t0)?.mass();
                for v in &mut values {
                    *v *= m0 / m1;
                }
                RadialField::new(grid.clone(), values, t0)?
            }
        };
        if !params.is_slow() {
            if let Some(i) = field.values.iter().position(|&v| v <= 0.0) {
                return Err(Error::domain(format!(
                    "fast-diffusion data must be positive everywhere (cell {i})"
                )));
            }
        }
        Ok(field)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cadence {
    /// `per_decade` log-spaced samples per factor ten in `t` (needs `t₀ > 0`).
    Geometric { per_decade: usize },
    /// `count` equal intervals between start and end.
    Uniform { count: usize },
    /// The given interior times, strictly inside `(t_start, t_end)`.
    Explicit(Vec<f64>),
}

impl Cadence {
    pub fn sample_times(&self, t0: f64, t1: f64) -> Result<Vec<f64>> {
        let mut out = vec![t0];
        match self {
            Cadence::Geometric { per_decade } => {
                let per_decade = *per_decade;
                if !(t0 > 0.0) || per_decade == 0 {
                    return Err(Error::domain("geometric cadence needs t_start > 0 and per_decade > 0"));
                }
                let mut k = 1;
                loop {
                    let t = t0 * 10f64.powf(k as f64 / per_decade as f64);
                    if t >= t1 * (1.0 - 1e-12) {
                        break;
                    }
                    out.push(t);
                    k += 1;
                }
            }
            Cadence::Uniform { count } => {
                let count = *count;
                if count == 0 {
                    return Err(Error::domain("uniform cadence needs count > 0"));
                }
                for k in 1..count {
                    out.push(t0 + (t1 - t0) * k as f64 / count as f64);
                }
            }
            Cadence::Explicit(times) => {
                let mut last = t0;
                for &t in times {
                    if !(t > last && t < t1) {
                        return Err(Error::domain(format!(
                            "explicit sample time {t} must increase strictly inside ({t0}, {t1})"
                        )));
                    }
                    out.push(t);
                    last = t;
                }
            }
        }
        out.push(t1);
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotPolicy {
    None,
    Final,
    /// Every `k`-th sample (and the final one).
    Every(usize),
}

#[derive(Debug, Clone)]
pub struct RecordSpec {
    pub functionals: Vec<FunctionalKind>,
    pub cadence: Cadence,
    pub snapshots: SnapshotPolicy,
}

impl Default for RecordSpec {
    fn default() -> Self {
        Self {
            functionals: Vec::new(),
            cadence: Cadence::Geometric { per_decade: 32 },
            snapshots: SnapshotPolicy::Every(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub params: DiffusionParams,
    pub grid: RadialGrid,
    pub initial: InitialCondition,
    pub t_start: f64,
    pub t_end: f64,
    /// Safety factor `σ ∈ (0, 1]` on the stability limit.
    pub cfl: f64,
    pub boundary: Boundary,
    /// `λ` in `∇·(n∇(λp + V))`.
    pub pressure_scale: f64,
    pub record: RecordSpec,
}

impl SolverConfig {
    pub fn new(params: DiffusionParams, grid: RadialGrid, initial: InitialCondition, t_start: f64, t_end: f64) -> Self {
        Self {
            params,
            grid,
            initial,
            t_start,
            t_end,
            cfl: 0.5,
            boundary: Boundary::NeumannZeroFlux,
            pressure_scale: 1.0,
            record: RecordSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::domain(format!("CFL factor must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end > self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::domain("need finite t_end > t_start"));
        }
        if !(self.pressure_scale > 0.0 && self.pressure_scale.is_finite()) {
            return Err(Error::domain("pressure scale must be positive"));
        }
        if self.grid.dim() != self.params.dim() {
            return Err(Error::domain("grid and problem dimensions differ"));
        }
        if matches!(self.boundary, Boundary::FarFieldBarenblatt(_)) && self.params.is_slow() {
            return Err(Error::domain("far-field boundary is for gamma < 0 only"));
        }
        Ok(())
    }
}

/// `x^e` with fast paths for the exponents that occur most often.
#[derive(Debug, Clone, Copy)]
enum Pow {
    One,
    Two,
    ThreeHalves,
    Half,
    MinusHalf,
    General(f64),
}

impl Pow {
    fn new(e: f64) -> Self {
        match e {
            e if e == 1.0 => Pow::One,
            e if e == 2.0 => Pow::Two,
            e if e == 1.5 => Pow::ThreeHalves,
            e if e == 0.5 => Pow::Half,
            e if e == -0.5 => Pow::MinusHalf,
            e => Pow::General(e),
        }
    }

    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Pow::One => x,
            Pow::Two => x * x,
            Pow::ThreeHalves => x * x.sqrt(),
            Pow::Half => x.sqrt(),
            Pow::MinusHalf => 1.0 / x.sqrt(),
            Pow::General(e) => x.powf(e),
        }
    }
}

/// Precomputed geometry and scratch buffers for repeated steps.
struct Stepper {
    dr: f64,
    dim: usize,
    slow: bool,
    /// `λκ`.
    diffusion: f64,
    /// `λ|γ|`, the prefactor of the linearised diffusivity `λ|γ| n^γ`.
    diffusivity: f64,
    gamma: f64,
    w_pow: Pow,
    area: Vec<f64>,
    inv_volume: Vec<f64>,
    /// Velocity `-∂ᵣV` at each face.
    velocity: Vec<f64>,
    max_speed: f64,
    far_field: Option<FarField>,
    w: Vec<f64>,
    flux: Vec<f64>,
    limiter: Vec<f64>,
}

impl Stepper {
    fn new(config: &SolverConfig) -> Self {
        let grid = &config.grid;
        let params = &config.params;
        let n = grid.cells();
        let dim = grid.dim();
        let mut area: Vec<f64> = (0..=n).map(|i| grid.face_area(i)).collect();
        area[0] = 0.0;
        let inv_volume = (0..n).map(|i| 1.0 / grid.volume(i)).collect();
        let velocity: Vec<f64> = (0..=n)
            .map(|i| -params.potential().radial_derivative(grid.face(i), dim))
            .collect();
        let max_speed = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lambda = config.pressure_scale;
        Self {
            dr: grid.dr(),
            dim,
            slow: params.is_slow(),
            diffusion: lambda * params.kappa(),
            diffusivity: lambda * params.gamma().abs(),
            gamma: params.gamma(),
            w_pow: Pow::new(params.gamma() + 1.0),
            area,
            inv_volume,
            velocity,
            max_speed,
            far_field: match &config.boundary {
                Boundary::NeumannZeroFlux => None,
                Boundary::FarFieldBarenblatt(f) => Some(f.clone()),
            },
            w: vec![0.0; n],
            flux: vec![0.0; n + 1],
            limiter: vec![1.0; n],
        }
    }

    fn ghost(&self, t: f64) -> Result<Option<f64>> {
        match &self.far_field {
            None => Ok(None),
            Some(f) => {
                let r = (self.w.len() as f64 + 0.5) * self.dr;
                Ok(Some(f.density(t, r)?))
            }
        }
    }

    fn cfl_dt(&self, n: &[f64], ghost: Option<f64>, sigma: f64) -> f64 {
        // The largest diffusivity sits at the largest n^γ: max n for γ > 0,
        // min n for γ < 0.
        let extreme = if self.slow {
            n.iter().copied().fold(0.0, f64::max).max(ghost.unwrap_or(0.0))
        } else {
            n.iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
                .min(ghost.unwrap_or(f64::INFINITY))
        };
        let d_max = if extreme > 0.0 && extreme.is_finite() {
            self.diffusivity * extreme.powf(self.gamma)
        } else {
            0.0
        };
        let inv_diff = 2.0 * self.dim as f64 * d_max / (self.dr * self.dr);
        let inv_drift = self.max_speed / self.dr;
        let inv = inv_diff + inv_drift;
        if inv > 0.0 {
            sigma / inv
        } else {
            f64::INFINITY
        }
    }

    /// Advances `n` in place by `dt`; returns the mass that left through the
    /// outer face (without the `ω_d` factor).
    fn advance(&mut self, n: &mut [f64], t: f64, dt: f64, ghost: Option<f64>) -> Result<f64> {
        let cells = n.len();
        for (w, &v) in self.w.iter_mut().zip(n.iter()) {
            *w = if v > 0.0 { self.w_pow.apply(v) } else { 0.0 };
        }
        let inv_dr = 1.0 / self.dr;
        self.flux[0] = 0.0;
        for f in 1..cells {
            let v = self.velocity[f];
            let up = if v > 0.0 { n[f - 1] } else { n[f] };
            self.flux[f] = -self.diffusion * (self.w[f] - self.w[f - 1]) * inv_dr + v * up;
        }
        self.flux[cells] = match ghost {
            None => 0.0,
            Some(g) => {
                let wg = self.w_pow.apply(g);
                let v = self.velocity[cells];
                let up = if v > 0.0 { n[cells - 1] } else { g };
                -self.diffusion * (wg - self.w[cells - 1]) * inv_dr + v * up
            }
        };
        // Cap the outflow of every cell by its content.
        let mut limited = false;
        for i in 0..cells {
            let out = self.area[i + 1] * self.flux[i + 1].max(0.0) + self.area[i] * (-self.flux[i]).max(0.0);
            let out = dt * out * self.inv_volume[i];
            self.limiter[i] = if out > n[i] && out > 0.0 {
                limited = true;
                n[i] / out
            } else {
                1.0
            };
        }
        if limited {
            for f in 1..=cells {
                let donor = if self.flux[f] > 0.0 { Some(f - 1) } else if f < cells { Some(f) } else { None };
                if let Some(c) = donor {
                    self.flux[f] *= self.limiter[c];
                }
            }
        }
        let mut peak: f64 = 0.0;
        for i in 0..cells {
            let div = self.area[i] * self.flux[i] - self.area[i + 1] * self.flux[i + 1];
            n[i] += dt * div * self.inv_volume[i];
            peak = peak.max(n[i]);
        }
        for (i, v) in n.iter_mut().enumerate() {
            if v.is_nan() {
                return Err(Error::numerical(format!("NaN in cell {i} at t = {t}")));
            }
            if self.slow {
                if *v < 0.0 {
                    if *v >= -CLAMP_TOLERANCE * peak {
                        *v = 0.0;
                    } else {
                        return Err(Error::Instability { cell: i, time: t + dt, value: *v });
                    }
                }
            } else if *v <= 0.0 {
                return Err(Error::Instability { cell: i, time: t + dt, value: *v });
            }
        }
        Ok(dt * self.area[cells] * self.flux[cells])
    }
}

/// Stable time step for the current field.
pub fn cfl_dt(field: &RadialField, config: &SolverConfig) -> Result<f64> {
    let stepper = Stepper::new(config);
    let ghost = stepper.ghost(field.time)?;
    Ok(stepper.cfl_dt(&field.values, ghost, config.cfl))
}

/// One explicit step of size `dt` (which must not exceed [`cfl_dt`]).
pub fn step(field: &RadialField, dt: f64, config: &SolverConfig) -> Result<RadialField> {
    if field.grid != config.grid {
        return Err(Error::domain("field grid differs from the configured grid"));
    }
    let mut stepper = Stepper::new(config);
    let ghost = stepper.ghost(field.time)?;
    let mut values = field.values.clone();
    stepper.advance(&mut values, field.time, dt, ghost)?;
    RadialField::new(field.grid.clone(), values, field.time + dt)
}

/// Mass bookkeeping: `mass(t) + leaked(t)` stays at the initial mass.
#[derive(Debug, Clone, Default)]
pub struct MassLedger {
    pub initial: f64,
    /// `(t, mass on the grid, cumulative outflow through the outer face)`.
    pub samples: Vec<(f64, f64, f64)>,
}

impl MassLedger {
    /// Largest `|mass + leaked - initial|` over the samples.
    pub fn conservation_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(_, m, l)| (m + l - self.initial).abs())
            .fold(0.0, f64::max)
    }

    pub fn total_leak(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.2)
    }
}

/// Output of [`run`]; immutable once produced.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: DiffusionParams,
    pub pressure_scale: f64,
    pub sample_times: Vec<f64>,
    pub snapshots: Vec<RadialField>,
    pub series: Vec<FunctionalSeries>,
    pub ledger: MassLedger,
    pub steps: usize,
}

impl Trajectory {
    pub fn series(&self, label: &str) -> Option<&FunctionalSeries> {
        self.series.iter().find(|s| s.kind.label() == label)
    }

    pub fn final_field(&self) -> Option<&RadialField> {
        self.snapshots.last()
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} samples, {} steps, mass defect {:.3e}",
            self.sample_times.len(),
            self.steps,
            self.ledger.conservation_defect()
        )
    }
}

/// Integrates from the initial data to `t_end`, stepping exactly onto each
/// sample time and recording the requested functionals there.
pub fn run(config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let times = config.record.cadence.sample_times(config.t_start, config.t_end)?;
    let mut field = config
        .initial
        .build(&config.params, &config.grid, config.t_start, config.pressure_scale)?;
    let omega = sphere_area(config.grid.dim());
    let mut stepper = Stepper::new(config);
    let potential_scale = 1.0 / config.pressure_scale;
    let mut series: Vec<FunctionalSeries> = config
        .record
        .functionals
        .iter()
        .map(|k| FunctionalSeries::new(k.clone()))
        .collect();
    let mut snapshots = Vec::new();
    let mut ledger = MassLedger {
        initial: field.mass(),
        samples: Vec::new(),
    };
    let mut leaked = 0.0;
    let mut steps = 0usize;
    let mut t = config.t_start;

    for (k, &target) in times.iter().enumerate() {
        while t < target {
            let ghost = stepper.ghost(t)?;
            let mut dt = stepper.cfl_dt(&field.values, ghost, config.cfl);
            let remaining = target - t;
            // Avoid a sliver step right before the sample time.
            if dt >= remaining || remaining - dt < 1e-9 * dt {
                dt = remaining;
            }
            leaked += omega * stepper.advance(&mut field.values, t, dt, ghost)?;
            t = if dt == remaining { target } else { t + dt };
            steps += 1;
        }
        field.time = t;
        for s in series.iter_mut() {
            let v = evaluate(&s.kind, &field, &config.params, potential_scale)?;
            s.push(t, v)?;
        }
        ledger.samples.push((t, field.mass(), leaked));
        let last = k + 1 == times.len();
        let keep = match config.record.snapshots {
            SnapshotPolicy::None => false,
            SnapshotPolicy::Final => last,
            SnapshotPolicy::Every(m) => last || (m > 0 && k % m == 0),
        };
        if keep {
            snapshots.push(field.clone());
        }
    }

    Ok(Trajectory {
        params: config.params.clone(),
        pressure_scale: config.pressure_scale,
        sample_times: times,
        snapshots,
        series,
        ledger,
        steps,
    })
}
