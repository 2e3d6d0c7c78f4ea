//! Running an experiment: solve, evaluate checks, write the output tree.
//!
//! Layout of `<out>/<name>/`:
//! - `<label>.csv` per recorded functional (`t,value`)
//! - `snapshots/snapshot_<k>.csv` (`r,n,p`) and `snapshots/index.csv` (`k,t,file`)
//! - `ledger.csv` (`t,mass,leaked`)
//! - `fits.csv`, one row per check
//! - `summary.txt`, `key=value` lines; every check line carries `model=`,
//!   `reference=` and `observed=` so downstream plots need not recompute them.
//!
//! Nothing time- or path-dependent is written, so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pmfd_core::functionals::pressure_values;
use pmfd_core::ratefit::{fit, verify_bound, verify_lower_bound, Model, RateFit, Window};
use pmfd_core::series::FunctionalSeries;
use pmfd_core::solver::{run, Boundary, Trajectory};
use pmfd_core::RadialField;

use crate::config::{Check, CheckKind, Experiment, DEFAULT_SLACK};
use crate::error::CliResult;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub pass: bool,
    /// `power`, `exponential`, `upper_bound`, `lower_bound` or `nonincreasing`.
    pub model: &'static str,
    pub reference: f64,
    pub observed: f64,
    pub fit: Option<RateFit>,
    pub detail: String,
}

#[derive(Debug)]
pub struct Report {
    pub name: String,
    pub dir: PathBuf,
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

pub fn execute(exp: &Experiment, out: &Path, slack: Option<f64>) -> CliResult<Report> {
    let tr = run(&exp.solver)?;
    let outcomes = exp
        .checks
        .iter()
        .map(|c| evaluate(c, &tr, slack))
        .collect::<Vec<_>>();
    let dir = out.join(&exp.name);
    write_outputs(exp, &tr, &outcomes, &dir)?;
    Ok(Report {
        name: exp.name.clone(),
        dir,
        outcomes,
    })
}

fn series<'a>(tr: &'a Trajectory, check: &Check) -> &'a FunctionalSeries {
    tr.series(&check.functional.label())
        .expect("checks only refer to recorded functionals")
}

pub fn evaluate(check: &Check, tr: &Trajectory, slack_override: Option<f64>) -> CheckOutcome {
    let s = series(tr, check);
    let outcome = |pass, model, reference, observed, fit, detail| CheckOutcome {
        check: check.clone(),
        pass,
        model,
        reference,
        observed,
        fit,
        detail,
    };
    match &check.kind {
        CheckKind::PowerFit {
            reference,
            tolerance,
            window,
            min_r2,
        } => fit_check(s, Model::PowerLaw, *window).map_or_else(
            |e| outcome(false, "power", *reference, f64::NAN, None, e),
            |f| {
                let pass = (f.exponent_or_rate - reference).abs() <= *tolerance && f.r2 >= *min_r2;
                let detail = format!("|exponent - reference| <= {tolerance}, r2 >= {min_r2}");
                outcome(pass, "power", *reference, f.exponent_or_rate, Some(f), detail)
            },
        ),
        CheckKind::ExponentialFit {
            reference,
            tolerance,
            at_least,
            window,
            min_r2,
        } => {
            let accept = |k: f64| {
                if *at_least {
                    k >= reference - tolerance
                } else {
                    (k - reference).abs() <= *tolerance
                }
            };
            fit_check(s, Model::Exponential, *window).map_or_else(
                |e| outcome(false, "exponential", *reference, f64::NAN, None, e),
                |f| {
                    let pass = accept(f.exponent_or_rate) && f.r2 >= *min_r2;
                    let detail = if *at_least {
                        format!("rate >= reference - {tolerance}, r2 >= {min_r2}")
                    } else {
                        format!("|rate - reference| <= {tolerance}, r2 >= {min_r2}")
                    };
                    outcome(pass, "exponential", *reference, f.exponent_or_rate, Some(f), detail)
                },
            )
        }
        CheckKind::UpperBound {
            coefficient,
            exponent,
            scale,
            slack,
        } => {
            let slack = slack_override.or(*slack).unwrap_or(DEFAULT_SLACK);
            let scaled = s
                .map(s.kind.clone(), |t, v| (t, scale * v))
                .expect("scaling keeps times increasing");
            let r = verify_bound(&scaled, |t| coefficient * t.powf(*exponent), slack);
            let detail = format!(
                "{scale} * v(t) <= {coefficient} t^{exponent} (1 + {slack}); worst at t = {}",
                r.worst_t
            );
            outcome(r.holds, "upper_bound", *coefficient, r.worst_ratio, None, detail)
        }
        CheckKind::LowerBound {
            coefficient,
            exponent,
            slack,
        } => {
            let r = verify_lower_bound(s, |t| coefficient * t.powf(*exponent), |_| *slack);
            let detail = format!(
                "v(t) >= {coefficient} t^{exponent} - {slack}; smallest margin at t = {}",
                r.worst_t
            );
            outcome(r.holds, "lower_bound", *coefficient, r.worst_ratio, None, detail)
        }
        CheckKind::Nonincreasing { tolerance } => {
            let (rise, at) = s
                .samples()
                .windows(2)
                .map(|w| (w[1].1 - w[0].1, w[1].0))
                .fold((f64::NEG_INFINITY, f64::NAN), |acc, x| if x.0 > acc.0 { x } else { acc });
            let rise = if rise.is_finite() { rise } else { 0.0 };
            let detail = format!("largest increase between samples <= {tolerance}; at t = {at}");
            outcome(rise <= *tolerance, "nonincreasing", *tolerance, rise, None, detail)
        }
    }
}

/// A fit that cannot be computed (too few samples, nonpositive values) fails
/// the check rather than aborting the run.
fn fit_check(s: &FunctionalSeries, model: Model, window: Window) -> Result<RateFit, String> {
    fit(s, model, window).map_err(|e| format!("fit failed: {e}"))
}

fn write_outputs(exp: &Experiment, tr: &Trajectory, outcomes: &[CheckOutcome], dir: &Path) -> CliResult<()> {
    let snap_dir = dir.join("snapshots");
    // Stale files from an earlier run with other settings would be misleading.
    if snap_dir.exists() {
        fs::remove_dir_all(&snap_dir).map_err(|e| pmfd_core::Error::io(&snap_dir, e))?;
    }
    fs::create_dir_all(&snap_dir).map_err(|e| pmfd_core::Error::io(&snap_dir, e))?;

    for s in &tr.series {
        s.write_csv(&dir.join(format!("{}.csv", s.kind.label())))?;
    }
    let mut index = String::from("k,t,file\n");
    for (k, f) in tr.snapshots.iter().enumerate() {
        let file = format!("snapshot_{k:04}.csv");
        write(&snap_dir.join(&file), &snapshot_csv(f, tr))?;
        let _ = writeln!(index, "{k},{},{file}", f.time);
    }
    write(&snap_dir.join("index.csv"), &index)?;

    let mut ledger = String::from("t,mass,leaked\n");
    for (t, m, l) in &tr.ledger.samples {
        let _ = writeln!(ledger, "{t},{m},{l}");
    }
    write(&dir.join("ledger.csv"), &ledger)?;

    let mut fits = String::from("check,kind,functional,model,reference,observed,r2,t_min,t_max,samples,verdict\n");
    for (i, o) in outcomes.iter().enumerate() {
        let (r2, t0, t1, n) = match &o.fit {
            Some(f) => (f.r2.to_string(), f.window.0.to_string(), f.window.1.to_string(), f.samples.to_string()),
            None => Default::default(),
        };
        let _ = writeln!(
            fits,
            "{},{},{},{},{},{},{r2},{t0},{t1},{n},{}",
            i + 1,
            o.check.kind.name(),
            o.check.functional.label(),
            o.model,
            o.reference,
            o.observed,
            verdict(o.pass)
        );
    }
    write(&dir.join("fits.csv"), &fits)?;
    write(&dir.join("summary.txt"), &summary(exp, tr, outcomes))
}

fn snapshot_csv(f: &RadialField, tr: &Trajectory) -> String {
    let p = pressure_values(f, &tr.params);
    let mut s = String::from("r,n,p\n");
    for (i, (n, p)) in f.values.iter().zip(&p).enumerate() {
        let _ = writeln!(s, "{},{n},{p}", f.grid.center(i));
    }
    s
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| pmfd_core::Error::io(path, e).into())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn summary(exp: &Experiment, tr: &Trajectory, outcomes: &[CheckOutcome]) -> String {
    let c = &exp.solver;
    let p = &c.params;
    let mut s = String::new();
    let _ = writeln!(s, "experiment={}", exp.name);
    if let Some(f) = exp.source.file_name() {
        let _ = writeln!(s, "config={}", f.to_string_lossy());
    }
    let _ = writeln!(s, "gamma={}", p.gamma());
    let _ = writeln!(s, "dim={}", p.dim());
    let _ = writeln!(s, "alpha={}", p.alpha());
    let _ = writeln!(s, "potential={}", p.potential().label());
    let _ = writeln!(s, "pressure_scale={}", c.pressure_scale);
    let _ = writeln!(s, "cells={}", c.grid.cells());
    let _ = writeln!(s, "radius={}", c.grid.outer_radius());
    let _ = writeln!(
        s,
        "boundary={}",
        match c.boundary {
            Boundary::NeumannZeroFlux => "neumann",
            Boundary::FarFieldBarenblatt(_) => "far_field",
        }
    );
    let _ = writeln!(s, "t_start={}", c.t_start);
    let _ = writeln!(s, "t_end={}", c.t_end);
    let _ = writeln!(s, "cfl={}", c.cfl);
    let _ = writeln!(s, "samples={}", tr.sample_times.len());
    let _ = writeln!(s, "steps={}", tr.steps);
    let _ = writeln!(s, "initial_mass={}", tr.ledger.initial);
    let _ = writeln!(s, "mass_defect={}", tr.ledger.conservation_defect());
    let _ = writeln!(s, "leaked={}", tr.ledger.total_leak());
    for series in &tr.series {
        let _ = writeln!(s, "series={}.csv", series.kind.label());
    }
    for (i, o) in outcomes.iter().enumerate() {
        let _ = write!(
            s,
            "check={} kind={} functional={} series={}.csv model={} reference={} observed={}",
            i + 1,
            o.check.kind.name(),
            o.check.functional.label(),
            o.check.functional.label(),
            o.model,
            o.reference,
            o.observed
        );
        if let Some(f) = &o.fit {
            let _ = write!(s, " r2={} window={}:{} samples={}", f.r2, f.window.0, f.window.1, f.samples);
        }
        if let CheckKind::UpperBound { exponent, .. } | CheckKind::LowerBound { exponent, .. } = o.check.kind {
            let _ = write!(s, " exponent={exponent}");
        }
        let _ = writeln!(s, " verdict={} line={}", verdict(o.pass), o.check.line);
        let _ = writeln!(s, "  # {}", o.detail);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let _ = writeln!(
        s,
        "result={} ({passed}/{} checks)",
        verdict(passed == outcomes.len()),
        outcomes.len()
    );
    s
}
