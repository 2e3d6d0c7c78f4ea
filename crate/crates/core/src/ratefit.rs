//! Least-squares decay rates and pointwise bound checks on series.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::FunctionalSeries;

/// Minimum number of samples a fit window must hold.
pub const MIN_SAMPLES: usize = 8;
/// Goodness of fit required before an exponent counts as matched.
pub const MATCH_R2: f64 = 0.999;
/// Fraction of the time range discarded as transient by default.
pub const BURN_IN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `v ≈ A t^k`; `exponent_or_rate = k`.
    PowerLaw,
    /// `v ≈ A e^{-λt}`; `exponent_or_rate = λ`.
    Exponential,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::PowerLaw => "power",
            Model::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub model: Model,
    pub exponent_or_rate: f64,
    pub prefactor: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

impl RateFit {
    pub fn matched(&self) -> bool {
        self.r2 >= MATCH_R2
    }
}

/// Which samples enter a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Drop the first [`BURN_IN`] of the range: of `log t` for power laws,
    /// of `t` for exponentials.
    Default,
    Range(f64, f64),
    All,
}

fn select(series: &FunctionalSeries, window: Window, model: Model) -> Result<Vec<(f64, f64)>> {
    let samples = series.samples();
    if samples.is_empty() {
        return Err(Error::domain("cannot fit an empty series"));
    }
    let (t0, t1) = (samples[0].0, samples[samples.len() - 1].0);
    let (lo, hi) = match window {
        Window::All => (t0, t1),
        Window::Range(a, b) => (a, b),
        Window::Default => match model {
            Model::PowerLaw if t0 > 0.0 => (t0 * (t1 / t0).powf(BURN_IN), t1),
            _ => (t0 + BURN_IN * (t1 - t0), t1),
        },
    };
    let picked = series.window(lo, hi);
    if picked.len() < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "fit window [{lo}, {hi}] holds {} samples; need at least {MIN_SAMPLES}",
            picked.len()
        )));
    }
    if let Some(&(t, v)) = picked.iter().find(|&&(_, v)| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!(
            "value {v} at t = {t} is not positive and finite; cannot take its logarithm"
        )));
    }
    if model == Model::PowerLaw {
        if let Some(&(t, _)) = picked.iter().find(|&&(t, _)| !(t > 0.0)) {
            return Err(Error::domain(format!("power-law fit needs t > 0 (got {t})")));
        }
    }
    Ok(picked)
}

/// Ordinary least squares `y = a + k x`; returns `(a, k, r²)`.
fn least_squares(xy: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - k * mx;
    let ss_res: f64 = xy.iter().map(|p| (p.1 - a - k * p.0).powi(2)).sum();
    // A constant series is fitted perfectly by a zero slope.
    let r2 = if syy > 1e-28 * (1.0 + my * my) * n { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    (a, k, r2)
}

pub fn fit_power(series: &FunctionalSeries, window: Window) -> Result<RateFit> {
    let picked = select(series, window, Model::PowerLaw)?;
    let xy: Vec<(f64, f64)> = picked.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let (a, k, r2) = least_squares(&xy);
    Ok(RateFit {
        model: Model::PowerLaw,
        exponent_or_rate: k,
        prefactor: a.exp(),
        r2,
        window: (picked[0].0, picked[picked.len() - 1].0),
        samples: picked.len(),
    })
}

pub fn fit_exponential(series: &FunctionalSeries, window: Window) -> Result<RateFit> {
    let picked = select(series, window, Model::Exponential)?;
    let xy: Vec<(f64, f64)> = picked.iter().map(|&(t, v)| (t, v.ln())).collect();
    let (a, k, r2) = least_squares(&xy);
    Ok(RateFit {
        model: Model::Exponential,
        exponent_or_rate: -k,
        prefactor: a.exp(),
        r2,
        window: (picked[0].0, picked[picked.len() - 1].0),
        samples: picked.len(),
    })
}

pub fn fit(series: &FunctionalSeries, model: Model, window: Window) -> Result<RateFit> {
    match model {
        Model::PowerLaw => fit_power(series, window),
        Model::Exponential => fit_exponential(series, window),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub holds: bool,
    /// Largest `v / bound` over the samples (for lower bounds: the largest
    /// `bound / v` in the mirrored sense, see [`verify_lower_bound`]).
    pub worst_ratio: f64,
    pub worst_t: f64,
}

/// Checks `v(t) ≤ bound(t) (1 + slack)` at every sample.
pub fn verify_bound(series: &FunctionalSeries, bound: impl Fn(f64) -> f64, slack: f64) -> BoundReport {
    let mut report = BoundReport {
        holds: true,
        worst_ratio: f64::NEG_INFINITY,
        worst_t: f64::NAN,
    };
    for &(t, v) in series.samples() {
        let b = bound(t);
        let ratio = v / b;
        if ratio > report.worst_ratio || report.worst_t.is_nan() {
            report.worst_ratio = ratio;
            report.worst_t = t;
        }
        if v > b * (1.0 + slack) {
            report.holds = false;
        }
    }
    report
}

/// Checks `v(t) ≥ bound(t) - slack(t)` at every sample; `worst_ratio` is the
/// smallest margin `v - bound + slack` found.
pub fn verify_lower_bound(
    series: &FunctionalSeries,
    bound: impl Fn(f64) -> f64,
    slack: impl Fn(f64) -> f64,
) -> BoundReport {
    let mut report = BoundReport {
        holds: true,
        worst_ratio: f64::INFINITY,
        worst_t: f64::NAN,
    };
    for &(t, v) in series.samples() {
        let margin = v - bound(t) + slack(t);
        if margin < report.worst_ratio {
            report.worst_ratio = margin;
            report.worst_t = t;
        }
        if margin < 0.0 {
            report.holds = false;
        }
    }
    report
}
