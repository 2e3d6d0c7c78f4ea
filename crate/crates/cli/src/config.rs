//! Experiment files: TOML with sections `[problem]`, `[grid]`, `[time]`,
//! `[initial]`, `[boundary]`, `[record]` and any number of `[[check]]`.
//!
//! Parsing happens in two passes. serde reads the raw tables (syntax and
//! type errors come with toml's own line numbers), then [`resolve`] turns
//! them into a solver configuration, reporting semantic errors against the
//! line of the offending table or string.

use std::fs;
use std::path::{Path, PathBuf};

use pmfd_core::admissibility;
use pmfd_core::functionals::{FunctionalKind, TailModel};
use pmfd_core::params::Potential;
use pmfd_core::profiles::{quadratic_rate, sharp_exponent_trivial, weighted_gap_exponent};
use pmfd_core::ratefit::Window;
use pmfd_core::solver::{Boundary, Cadence, FarField, InitialCondition, RecordSpec, SnapshotPolicy, SolverConfig};
use pmfd_core::{BarenblattProfile, DiffusionParams, GenericPotential, RadialGrid};
use serde::Deserialize;
use toml::Spanned;

use crate::error::{line_of, CliError, CliResult};

/// Relative slack for upper bounds when neither the check nor `--slack` sets one.
pub const DEFAULT_SLACK: f64 = 0.05;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Spanned<String>,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    problem: Spanned<RawProblem>,
    grid: Spanned<RawGrid>,
    time: Spanned<RawTime>,
    initial: Spanned<RawInitial>,
    #[serde(default)]
    boundary: Option<Spanned<RawBoundary>>,
    record: Spanned<RawRecord>,
    #[serde(default, rename = "check")]
    checks: Vec<Spanned<RawCheck>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    gamma: f64,
    dim: usize,
    #[serde(default = "default_potential")]
    potential: String,
    pressure_scale: Option<f64>,
}

fn default_potential() -> String {
    "trivial".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    cells: usize,
    /// Outer radius.
    radius: Option<f64>,
    /// Outer radius as a multiple of the reference support (see `reference_radius`).
    support_factor: Option<f64>,
    /// Outer radius as a multiple of `sqrt(C)`, `C` the profile constant.
    constant_factor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    start: f64,
    end: f64,
    cfl: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawInitial {
    Barenblatt {
        mass: f64,
        #[serde(default)]
        time_offset: f64,
    },
    TruncatedBarenblatt {
        mass: f64,
        #[serde(default)]
        time_offset: f64,
        radius: f64,
    },
    Stationary {
        mass: f64,
    },
    Annulus {
        inner: f64,
        outer: f64,
        amplitude: f64,
    },
    Perturbed {
        base: Box<RawInitial>,
        amplitude: f64,
        width: Option<f64>,
        /// Width as a multiple of the base data's reference support.
        width_factor: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawBoundary {
    Neumann,
    FarField,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSnapshots {
    Every(usize),
    Policy(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    functionals: Vec<Spanned<String>>,
    #[serde(default = "default_cadence")]
    cadence: String,
    per_decade: Option<usize>,
    count: Option<usize>,
    snapshots: Option<RawSnapshots>,
    /// Admits `b = -1` functionals without the admissibility check.
    #[serde(default)]
    b_minus_one_override: bool,
}

fn default_cadence() -> String {
    "geometric".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(f64),
    Named(String),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawCheck {
    PowerFit {
        functional: String,
        reference: RawValue,
        tolerance: f64,
        window: Option<[f64; 2]>,
        min_r2: Option<f64>,
    },
    ExponentialFit {
        functional: String,
        reference: RawValue,
        tolerance: f64,
        /// Only a rate below `reference - tolerance` fails.
        #[serde(default)]
        at_least: bool,
        window: Option<[f64; 2]>,
        min_r2: Option<f64>,
    },
    UpperBound {
        functional: String,
        coefficient: RawValue,
        #[serde(default)]
        exponent: f64,
        /// Multiplies the series before comparison.
        #[serde(default = "one")]
        scale: f64,
        slack: Option<f64>,
    },
    LowerBound {
        functional: String,
        coefficient: RawValue,
        #[serde(default)]
        exponent: f64,
        #[serde(default)]
        slack: f64,
        /// Extra absolute slack in units of the cell width.
        #[serde(default)]
        slack_cells: f64,
    },
    Nonincreasing {
        functional: String,
        #[serde(default)]
        tolerance: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// A resolved check, ready to be evaluated on a trajectory.
#[derive(Debug, Clone)]
pub enum CheckKind {
    /// `|k - reference| ≤ tolerance` and `r² ≥ min_r2`.
    PowerFit {
        reference: f64,
        tolerance: f64,
        window: Window,
        min_r2: f64,
    },
    ExponentialFit {
        reference: f64,
        tolerance: f64,
        at_least: bool,
        window: Window,
        min_r2: f64,
    },
    /// `scale · v(t) ≤ coefficient t^exponent (1 + slack)`.
    UpperBound {
        coefficient: f64,
        exponent: f64,
        scale: f64,
        slack: Option<f64>,
    },
    /// `v(t) ≥ coefficient t^exponent - slack`.
    LowerBound {
        coefficient: f64,
        exponent: f64,
        slack: f64,
    },
    Nonincreasing {
        tolerance: f64,
    },
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::PowerFit { .. } => "power_fit",
            CheckKind::ExponentialFit { .. } => "exponential_fit",
            CheckKind::UpperBound { .. } => "upper_bound",
            CheckKind::LowerBound { .. } => "lower_bound",
            CheckKind::Nonincreasing { .. } => "nonincreasing",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub functional: FunctionalKind,
    pub kind: CheckKind,
    /// Line of the `[[check]]` table, for messages.
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub source: PathBuf,
    pub solver: SolverConfig,
    pub checks: Vec<Check>,
}

pub fn load(path: &Path) -> CliResult<Experiment> {
    let text = fs::read_to_string(path).map_err(|e| pmfd_core::Error::io(path, e))?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> CliResult<Experiment> {
    let raw: RawExperiment = toml::from_str(text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    Resolver { text, path }.resolve(raw)
}

struct Resolver<'a> {
    text: &'a str,
    path: &'a Path,
}

impl Resolver<'_> {
    fn err<T>(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> CliResult<T> {
        Err(CliError::Config {
            path: self.path.to_path_buf(),
            line: line_of(self.text, span.start),
            message: message.into(),
        })
    }

    /// Wraps a core error with the line of the table it came from.
    fn at<T>(&self, span: std::ops::Range<usize>, r: pmfd_core::Result<T>) -> CliResult<T> {
        r.or_else(|e| self.err(span, e.to_string()))
    }

    fn resolve(&self, raw: RawExperiment) -> CliResult<Experiment> {
        let name = raw.name.get_ref().clone();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return self.err(raw.name.span(), "name must be nonempty and use only [A-Za-z0-9_-]");
        }

        let prob = raw.problem.get_ref();
        let potential = match prob.potential.as_str() {
            "trivial" => Potential::Trivial,
            "quadratic" => Potential::Quadratic,
            "soft_cone" => Potential::BoundedGeneric(GenericPotential::soft_cone()),
            other => {
                return self.err(
                    raw.problem.span(),
                    format!("unknown potential '{other}' (trivial, quadratic, soft_cone)"),
                )
            }
        };
        let params = self.at(raw.problem.span(), DiffusionParams::new(prob.gamma, prob.dim, potential))?;
        let pressure_scale = prob.pressure_scale.unwrap_or(1.0);

        let initial = self.initial(&raw.initial, raw.initial.get_ref(), &params, pressure_scale)?;

        let time = raw.time.get_ref();
        let g = raw.grid.get_ref();
        let radius = match (g.radius, g.support_factor, g.constant_factor) {
            (Some(r), None, None) => r,
            (None, Some(f), None) => {
                let reference = self.reference_radius(&raw.initial, raw.initial.get_ref(), &params, pressure_scale, time.end)?;
                f * reference
            }
            (None, None, Some(f)) => {
                let mass = match nominal_mass(raw.initial.get_ref()) {
                    Some(m) => m,
                    None => self.at(raw.initial.span(), initial.build(&params, &probe_grid(prob.dim)?, time.start, pressure_scale))?.mass(),
                };
                let b = self.at(raw.grid.span(), BarenblattProfile::new(params.clone(), mass))?;
                f * b.profile_constant().sqrt()
            }
            _ => return self.err(raw.grid.span(), "give exactly one of radius, support_factor, constant_factor"),
        };
        let grid = self.at(raw.grid.span(), RadialGrid::new(g.cells, radius, prob.dim))?;

        let mut solver = SolverConfig::new(params.clone(), grid, initial, time.start, time.end);
        solver.pressure_scale = pressure_scale;
        if let Some(cfl) = time.cfl {
            solver.cfl = cfl;
        }

        let far = match raw.boundary.as_ref().map(|b| (b.span(), b.get_ref())) {
            None | Some((_, RawBoundary::Neumann)) => None,
            Some((span, RawBoundary::FarField)) => match raw.initial.get_ref() {
                RawInitial::Barenblatt { mass, time_offset } => {
                    let b = self.at(span.clone(), BarenblattProfile::new(params.clone(), *mass))?;
                    let b = self.at(span, b.with_time_offset(*time_offset))?;
                    Some(b)
                }
                _ => return self.err(span, "far_field boundary needs barenblatt initial data"),
            },
        };
        if let Some(b) = &far {
            solver.boundary = Boundary::FarFieldBarenblatt(FarField::new(b.clone()));
        }

        let record = self.record(&raw.record, &params, raw.initial.get_ref(), far.as_ref())?;
        solver.record = record;
        self.at(raw.time.span(), solver.validate())?;

        let mut checks = Vec::new();
        for c in &raw.checks {
            checks.push(self.check(c, &solver)?);
        }
        Ok(Experiment {
            name,
            source: self.path.to_path_buf(),
            solver,
            checks,
        })
    }

    fn initial(
        &self,
        spanned: &Spanned<RawInitial>,
        raw: &RawInitial,
        params: &DiffusionParams,
        pressure_scale: f64,
    ) -> CliResult<InitialCondition> {
        Ok(match raw {
            RawInitial::Barenblatt { mass, time_offset } => InitialCondition::Barenblatt {
                mass: *mass,
                time_offset: *time_offset,
            },
            RawInitial::TruncatedBarenblatt {
                mass,
                time_offset,
                radius,
            } => InitialCondition::TruncatedBarenblatt {
                mass: *mass,
                time_offset: *time_offset,
                radius: *radius,
            },
            RawInitial::Stationary { mass } => InitialCondition::Stationary { mass: *mass },
            RawInitial::Annulus {
                inner,
                outer,
                amplitude,
            } => InitialCondition::Annulus {
                inner: *inner,
                outer: *outer,
                amplitude: *amplitude,
            },
            RawInitial::Perturbed {
                base,
                amplitude,
                width,
                width_factor,
            } => {
                let width = match (width, width_factor) {
                    (Some(w), None) => *w,
                    (None, Some(f)) => f * self.reference_radius(spanned, base, params, pressure_scale, 0.0)?,
                    _ => return self.err(spanned.span(), "perturbed data needs exactly one of width, width_factor"),
                };
                InitialCondition::Perturbed {
                    base: Box::new(self.initial(spanned, base, params, pressure_scale)?),
                    amplitude: *amplitude,
                    width,
                }
            }
        })
    }

    /// Length scale that `support_factor` and `width_factor` multiply:
    /// the support of the drift-less profile at `t_end + τ` for Barenblatt
    /// data, of the stationary state for stationary data, and of the
    /// equal-mass profile at `t_end` for annulus data.
    fn reference_radius(
        &self,
        spanned: &Spanned<RawInitial>,
        raw: &RawInitial,
        params: &DiffusionParams,
        pressure_scale: f64,
        t_end: f64,
    ) -> CliResult<f64> {
        let span = spanned.span();
        let radius = match raw {
            RawInitial::Barenblatt { mass, time_offset } | RawInitial::TruncatedBarenblatt { mass, time_offset, .. } => {
                let b = self.at(span.clone(), BarenblattProfile::new(params.clone(), *mass))?;
                self.at(span.clone(), b.support_radius(t_end + time_offset))?
            }
            RawInitial::Stationary { mass } => {
                let b = self.at(span.clone(), BarenblattProfile::new(params.clone(), *mass))?;
                self.at(span.clone(), b.support_radius(b.stationary_time(pressure_scale)))?
            }
            RawInitial::Annulus { .. } => {
                let init = self.initial(spanned, raw, params, pressure_scale)?;
                let mass = self.at(span.clone(), init.build(params, &probe_grid(params.dim())?, 0.0, pressure_scale))?.mass();
                let b = self.at(span.clone(), BarenblattProfile::new(params.clone(), mass))?;
                self.at(span.clone(), b.support_radius(t_end))?
            }
            RawInitial::Perturbed { base, .. } => self.reference_radius(spanned, base, params, pressure_scale, t_end)?,
        };
        if !radius.is_finite() {
            return self.err(span, "support is unbounded for gamma < 0; use radius or constant_factor");
        }
        Ok(radius)
    }

    fn record(
        &self,
        raw: &Spanned<RawRecord>,
        params: &DiffusionParams,
        initial: &RawInitial,
        far: Option<&BarenblattProfile>,
    ) -> CliResult<RecordSpec> {
        let r = raw.get_ref();
        let cadence = match r.cadence.as_str() {
            "geometric" => Cadence::Geometric {
                per_decade: r.per_decade.unwrap_or(32),
            },
            "uniform" => match r.count {
                Some(count) => Cadence::Uniform { count },
                None => return self.err(raw.span(), "uniform cadence needs count"),
            },
            other => return self.err(raw.span(), format!("unknown cadence '{other}' (geometric, uniform)")),
        };
        let snapshots = match &r.snapshots {
            None => SnapshotPolicy::Final,
            Some(RawSnapshots::Every(k)) => SnapshotPolicy::Every(*k),
            Some(RawSnapshots::Policy(s)) => match s.as_str() {
                "none" => SnapshotPolicy::None,
                "final" => SnapshotPolicy::Final,
                "all" => SnapshotPolicy::Every(1),
                other => return self.err(raw.span(), format!("unknown snapshot policy '{other}' (none, final, all, or an integer)")),
            },
        };
        let mut functionals = Vec::new();
        for f in &r.functionals {
            let kind = self.functional(f.get_ref(), f.span(), params, initial, far, r.b_minus_one_override)?;
            if functionals.iter().any(|k: &FunctionalKind| k.label() == kind.label()) {
                return self.err(f.span(), format!("functional '{}' listed twice", f.get_ref()));
            }
            functionals.push(kind);
        }
        Ok(RecordSpec {
            functionals,
            cadence,
            snapshots,
        })
    }

    fn functional(
        &self,
        text: &str,
        span: std::ops::Range<usize>,
        params: &DiffusionParams,
        initial: &RawInitial,
        far: Option<&BarenblattProfile>,
        allow_minus_one: bool,
    ) -> CliResult<FunctionalKind> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        let b = || -> CliResult<f64> {
            match arg.map(str::parse::<f64>) {
                Some(Ok(b)) if b.is_finite() => Ok(b),
                _ => self.err(span.clone(), format!("'{name}' needs a numeric b, as in '{name}:1'")),
            }
        };
        let no_arg = |kind: FunctionalKind| -> CliResult<FunctionalKind> {
            match arg {
                None => Ok(kind),
                Some(_) => self.err(span.clone(), format!("'{name}' takes no parameter")),
            }
        };
        let kind = match name {
            "lipschitz_u" => FunctionalKind::LipschitzU { b: b()? },
            "weighted_gap" => FunctionalKind::WeightedGap { b: b()? },
            "weighted_gap_centered" => FunctionalKind::WeightedGapCentered { b: b()? },
            "linf" => no_arg(FunctionalKind::LinfDensity)?,
            "mass" => no_arg(FunctionalKind::Mass)?,
            "fisher" => no_arg(FunctionalKind::Fisher)?,
            "ab_min" => no_arg(FunctionalKind::AbMin)?,
            "density_gradient" => no_arg(FunctionalKind::DensityGradient)?,
            "x_norm" => no_arg(FunctionalKind::Xnorm(match far {
                Some(b) => TailModel::Barenblatt(b.clone()),
                None => TailModel::None,
            }))?,
            "relative_error" => match initial {
                RawInitial::Barenblatt { mass, time_offset } => {
                    let p = self.at(span.clone(), BarenblattProfile::new(params.clone(), *mass))?;
                    let p = self.at(span.clone(), p.with_time_offset(*time_offset))?;
                    no_arg(FunctionalKind::RelativeError(Box::new(p)))?
                }
                _ => return self.err(span, "relative_error compares against barenblatt initial data"),
            },
            other => return self.err(span, format!("unknown functional '{other}'")),
        };
        if let Some(b) = functional_b(&kind) {
            self.admissible(b, span, params, allow_minus_one)?;
        }
        Ok(kind)
    }

    fn admissible(&self, b: f64, span: std::ops::Range<usize>, params: &DiffusionParams, allow_minus_one: bool) -> CliResult<()> {
        if b == -1.0 && allow_minus_one {
            return Ok(());
        }
        let report = self.at(
            span.clone(),
            admissibility::check(params.gamma(), b, params.dim(), params.potential()),
        )?;
        if report.admissible() {
            return Ok(());
        }
        let failed: Vec<&str> = report.clauses.iter().filter(|c| !c.holds).map(|c| c.label).collect();
        let mut why = format!(
            "b = {b} is not admissible for gamma = {}, d = {} ({} potential): gamma*b must lie in {}",
            params.gamma(),
            params.dim(),
            report.regime,
            report.gamma_b_interval
        );
        if !failed.is_empty() {
            why.push_str(&format!("; failing clauses {}", failed.join(", ")));
        }
        if b == -1.0 {
            why.push_str("; set b_minus_one_override = true in [record] to admit b = -1");
        }
        self.err(span, why)
    }

    fn check(&self, raw: &Spanned<RawCheck>, solver: &SolverConfig) -> CliResult<Check> {
        let span = raw.span();
        let params = &solver.params;
        let find = |text: &str| -> CliResult<FunctionalKind> {
            let label = canonical_label(text);
            match solver.record.functionals.iter().find(|k| k.label() == label) {
                Some(k) => Ok(k.clone()),
                None => self.err(span.clone(), format!("check refers to '{text}', which [record] does not list")),
            }
        };
        let value = |v: &RawValue, f: &FunctionalKind| -> CliResult<f64> {
            match v {
                RawValue::Number(x) => Ok(*x),
                RawValue::Named(name) => named_value(name, params, f).ok_or_else(|| CliError::Config {
                    path: self.path.to_path_buf(),
                    line: line_of(self.text, span.start),
                    message: format!(
                        "unknown reference '{name}' (sharp_trivial, quadratic_rate, weighted_gap, two_alpha, alpha, aronson_benilan)"
                    ),
                }),
            }
        };
        let window = |w: &Option<[f64; 2]>| match w {
            Some([a, b]) => Window::Range(*a, *b),
            None => Window::Default,
        };
        let (functional, kind) = match raw.get_ref() {
            RawCheck::PowerFit {
                functional,
                reference,
                tolerance,
                window: w,
                min_r2,
            } => {
                let f = find(functional)?;
                let reference = value(reference, &f)?;
                (
                    f,
                    CheckKind::PowerFit {
                        reference,
                        tolerance: *tolerance,
                        window: window(w),
                        min_r2: min_r2.unwrap_or(0.0),
                    },
                )
            }
            RawCheck::ExponentialFit {
                functional,
                reference,
                tolerance,
                at_least,
                window: w,
                min_r2,
            } => {
                let f = find(functional)?;
                let reference = value(reference, &f)?;
                (
                    f,
                    CheckKind::ExponentialFit {
                        reference,
                        tolerance: *tolerance,
                        at_least: *at_least,
                        window: window(w),
                        min_r2: min_r2.unwrap_or(0.0),
                    },
                )
            }
            RawCheck::UpperBound {
                functional,
                coefficient,
                exponent,
                scale,
                slack,
            } => {
                let f = find(functional)?;
                let coefficient = value(coefficient, &f)?;
                (
                    f,
                    CheckKind::UpperBound {
                        coefficient,
                        exponent: *exponent,
                        scale: *scale,
                        slack: *slack,
                    },
                )
            }
            RawCheck::LowerBound {
                functional,
                coefficient,
                exponent,
                slack,
                slack_cells,
            } => {
                let f = find(functional)?;
                let coefficient = value(coefficient, &f)?;
                (
                    f,
                    CheckKind::LowerBound {
                        coefficient,
                        exponent: *exponent,
                        slack: slack + slack_cells * solver.grid.dr(),
                    },
                )
            }
            RawCheck::Nonincreasing { functional, tolerance } => {
                (find(functional)?, CheckKind::Nonincreasing { tolerance: *tolerance })
            }
        };
        Ok(Check {
            functional,
            kind,
            line: line_of(self.text, span.start),
        })
    }
}

/// A small grid, only used to measure the mass of initial data.
fn probe_grid(dim: usize) -> CliResult<RadialGrid> {
    Ok(RadialGrid::new(4096, 16.0, dim)?)
}

fn nominal_mass(raw: &RawInitial) -> Option<f64> {
    match raw {
        RawInitial::Barenblatt { mass, .. } | RawInitial::Stationary { mass } => Some(*mass),
        RawInitial::Perturbed { base, .. } => nominal_mass(base),
        _ => None,
    }
}

fn functional_b(kind: &FunctionalKind) -> Option<f64> {
    match kind {
        FunctionalKind::LipschitzU { b } | FunctionalKind::WeightedGap { b } | FunctionalKind::WeightedGapCentered { b } => Some(*b),
        _ => None,
    }
}

/// Maps a `[record]` style name (`lipschitz_u:1`) to the series label.
fn canonical_label(text: &str) -> String {
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    let b = arg.and_then(|a| a.parse::<f64>().ok());
    match (name, b) {
        ("lipschitz_u", Some(b)) => FunctionalKind::LipschitzU { b }.label(),
        ("weighted_gap", Some(b)) => FunctionalKind::WeightedGap { b }.label(),
        ("weighted_gap_centered", Some(b)) => FunctionalKind::WeightedGapCentered { b }.label(),
        ("linf", None) => FunctionalKind::LinfDensity.label(),
        _ => name.to_string(),
    }
}

/// Reference values by name, evaluated for the run's parameters and the
/// `b` of the checked functional.
fn named_value(name: &str, params: &DiffusionParams, f: &FunctionalKind) -> Option<f64> {
    let (g, d) = (params.gamma(), params.dim());
    let b = functional_b(f);
    match name {
        "sharp_trivial" => b.map(|b| sharp_exponent_trivial(g, d, b)),
        "quadratic_rate" => b.map(|b| quadratic_rate(g, d, b)),
        "weighted_gap" => b.map(|b| weighted_gap_exponent(g, d, b)),
        "two_alpha" => Some(2.0 * params.alpha()),
        "alpha" => Some(params.alpha()),
        // Coefficient of 1/t in the Aronson–Bénilan bound.
        "aronson_benilan" => Some(params.aronson_benilan_bound(1.0)),
        _ => None,
    }
}

