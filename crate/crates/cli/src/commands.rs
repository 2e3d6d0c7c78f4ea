//! Subcommands other than `run`. Each returns the text it prints and whether
//! its verdict is positive; `main` turns that into an exit code.

use std::fmt::Write as _;
use std::path::Path;

use pmfd_core::admissibility::{self, admissible_interval, Regime};
use pmfd_core::functionals::FunctionalKind;
use pmfd_core::params::alpha;
use pmfd_core::profiles::{quadratic_rate, sharp_exponent_trivial, weighted_gap_exponent};
use pmfd_core::ratefit::{fit, Model, Window};
use pmfd_core::series::FunctionalSeries;
use pmfd_core::{BarenblattProfile, DiffusionParams, Potential};

use crate::error::{CliError, CliResult};

pub fn parse_regime(s: &str) -> CliResult<Regime> {
    Regime::parse(s).ok_or_else(|| CliError::Usage(format!("unknown assumption '{s}' (bounded, quadratic, trivial)")))
}

/// Admissibility report. With `b` the verdict is whether `(γ, b, d)` is
/// admissible; without it, whether any `γb` is.
pub fn check(gamma: f64, dim: usize, b: Option<f64>, regime: Regime) -> CliResult<(String, bool)> {
    let mut s = String::new();
    let iv = admissible_interval(gamma, dim, regime)?;
    let _ = writeln!(s, "gamma={gamma}");
    let _ = writeln!(s, "dim={dim}");
    let _ = writeln!(s, "assumption={regime}");
    let _ = writeln!(s, "gamma_b_interval={iv}");
    let Some(b) = b else {
        let ok = !iv.is_empty();
        let _ = writeln!(s, "verdict={}", if ok { "NONEMPTY" } else { "EMPTY" });
        return Ok((s, ok));
    };
    let r = admissibility::check_regime(gamma, b, dim, regime)?;
    let c = r.coefficients;
    let _ = writeln!(s, "b={b}");
    let _ = writeln!(s, "gamma_b={}", gamma * b);
    let _ = writeln!(s, "c0={}", c.c0);
    let _ = writeln!(s, "c1={}", c.c1);
    let _ = writeln!(s, "c2={}", c.c2);
    if regime == Regime::Quadratic {
        let _ = writeln!(s, "c3={}", c.c3);
    }
    let _ = writeln!(s, "sign_convention={}", r.sign_convention);
    for v in &r.clauses {
        let _ = writeln!(s, "clause_{}={}", v.label, v.holds);
    }
    let _ = writeln!(s, "required_signs={}", r.required_signs_hold());
    let ok = r.admissible();
    let _ = writeln!(s, "verdict={}", if ok { "ADMISSIBLE" } else { "NOT_ADMISSIBLE" });
    Ok((s, ok))
}

/// Admissible-interval table over `steps` equally spaced `γ` in `[lo, hi]`.
pub fn sweep(dim: usize, regime: Regime, lo: f64, hi: f64, steps: usize) -> CliResult<String> {
    if steps < 2 || !(hi > lo) {
        return Err(CliError::Usage("sweep needs gamma_max > gamma_min and at least two steps".into()));
    }
    let mut s = String::from("gamma,lower,lower_closed,upper,upper_closed,empty\n");
    for k in 0..steps {
        let g = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
        if g == 0.0 {
            continue;
        }
        // Out-of-range gamma is a row, not an error: the table maps the plane.
        match admissible_interval(g, dim, regime) {
            Ok(iv) => {
                let _ = writeln!(
                    s,
                    "{g},{},{},{},{},{}",
                    iv.lower,
                    iv.lower_closed,
                    iv.upper,
                    iv.upper_closed,
                    iv.is_empty()
                );
            }
            Err(_) => {
                let _ = writeln!(s, "{g},NaN,false,NaN,false,true");
            }
        }
    }
    Ok(s)
}

/// Profile table with columns `r,n,p,dp_dr` at time `t`.
pub fn barenblatt(gamma: f64, dim: usize, mass: f64, t: f64, cells: usize, radius: Option<f64>) -> CliResult<String> {
    let params = DiffusionParams::new(gamma, dim, Potential::Trivial)?;
    let b = BarenblattProfile::new(params, mass)?;
    if cells == 0 {
        return Err(CliError::Usage("need at least one row".into()));
    }
    let radius = match radius {
        Some(r) if r > 0.0 => r,
        Some(r) => return Err(CliError::Usage(format!("radius must be positive, got {r}"))),
        None => {
            let supp = b.support_radius(t)?;
            if supp.is_finite() {
                1.25 * supp
            } else {
                8.0 * b.profile_constant().sqrt() * t.powf(alpha(gamma, dim))
            }
        }
    };
    let mut s = String::from("r,n,p,dp_dr\n");
    for i in 0..=cells {
        let r = radius * i as f64 / cells as f64;
        let _ = writeln!(
            s,
            "{r},{},{},{}",
            b.density(t, r)?,
            b.pressure(t, r)?,
            b.pressure_gradient(t, r)?
        );
    }
    Ok(s)
}

/// Predicted exponents and rates for `(γ, d, b)`.
pub fn reference_rates(gamma: f64, dim: usize, b: f64) -> CliResult<String> {
    DiffusionParams::new(gamma, dim, Potential::Trivial)?;
    let mut s = String::new();
    let a = alpha(gamma, dim);
    let _ = writeln!(s, "alpha={a}");
    let _ = writeln!(s, "two_alpha={}", 2.0 * a);
    let _ = writeln!(s, "sharp_trivial={}", sharp_exponent_trivial(gamma, dim, b));
    let _ = writeln!(s, "quadratic_rate={}", quadratic_rate(gamma, dim, b));
    let _ = writeln!(s, "weighted_gap={}", weighted_gap_exponent(gamma, dim, b));
    let _ = writeln!(s, "aronson_benilan={}", -1.0 / (gamma + 2.0 / dim as f64));
    Ok(s)
}

/// Fits a `t,value` CSV. With a reference, the verdict is
/// `|fit - reference| ≤ tolerance`.
pub fn fit_csv(
    path: &Path,
    model: Model,
    window: Option<(f64, f64)>,
    reference: Option<f64>,
    tolerance: f64,
) -> CliResult<(String, bool)> {
    let series = FunctionalSeries::read_csv(path, FunctionalKind::Mass)?;
    let w = window.map_or(Window::Default, |(a, b)| Window::Range(a, b));
    let f = fit(&series, model, w)?;
    let mut s = String::new();
    let _ = writeln!(s, "series={}", path.display());
    let _ = writeln!(s, "model={model}");
    let _ = writeln!(s, "observed={}", f.exponent_or_rate);
    let _ = writeln!(s, "prefactor={}", f.prefactor);
    let _ = writeln!(s, "r2={}", f.r2);
    let _ = writeln!(s, "window={}:{}", f.window.0, f.window.1);
    let _ = writeln!(s, "samples={}", f.samples);
    let mut ok = true;
    if let Some(r) = reference {
        ok = (f.exponent_or_rate - r).abs() <= tolerance;
        let _ = writeln!(s, "reference={r}");
        let _ = writeln!(s, "tolerance={tolerance}");
        let _ = writeln!(s, "verdict={}", if ok { "PASS" } else { "FAIL" });
    }
    Ok((s, ok))
}
