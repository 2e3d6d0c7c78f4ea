use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pmfd_cli::commands;
use pmfd_cli::config;
use pmfd_cli::error::{CliError, CliResult};
use pmfd_core::ratefit::Model;

/// Radial porous-medium / fast-diffusion laboratory.
///
/// Exit codes: 0 all checks pass, 1 a check fails, 2 configuration or
/// domain error, 3 a run failed numerically or could not write output.
#[derive(Parser)]
#[command(name = "pmfd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitModel {
    Power,
    Exponential,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility of (gamma, b, d) under an assumption on the potential.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// bounded, quadratic or trivial.
        #[arg(long, default_value = "trivial")]
        assumption: String,
    },
    /// Run experiment configs (files or directories of *.cfg).
    Run {
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Experiments run concurrently; each run stays sequential.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Relative slack for every upper-bound check, overriding the configs.
        #[arg(long)]
        slack: Option<f64>,
    },
    /// Table of admissible gamma*b intervals over a range of gamma.
    Sweep {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "trivial")]
        assumption: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.01)]
        gamma_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Barenblatt profile table: r, n, p, dp/dr.
    Barenblatt {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 200)]
        rows: usize,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted rates for (gamma, d, b), or a fit of a t,value CSV.
    Rates {
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Series to fit instead.
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "power")]
        model: FitModel,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true)]
        reference: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| pmfd_core::Error::io(p, e).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn dispatch(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Check { gamma, dim, b, assumption } => {
            let (text, ok) = commands::check(gamma, dim, b, commands::parse_regime(&assumption)?)?;
            print!("{text}");
            Ok(verdict(ok))
        }
        Command::Run { configs, out, jobs, slack } => {
            let paths = pmfd_cli::collect_configs(&configs)?;
            let mut experiments = Vec::new();
            for p in &paths {
                experiments.push(config::load(p)?);
            }
            let mut names: Vec<&str> = experiments.iter().map(|e| e.name.as_str()).collect();
            names.sort_unstable();
            if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
                return Err(CliError::Usage(format!("two configs share the name '{}'", w[0])));
            }
            let mut code = 0;
            for (exp, result) in experiments.iter().zip(pmfd_cli::run_all(&experiments, &out, jobs, slack)) {
                match result {
                    Ok(report) => {
                        let passed = report.outcomes.iter().filter(|o| o.pass).count();
                        println!(
                            "{}: {} ({passed}/{} checks) -> {}",
                            report.name,
                            if report.passed() { "PASS" } else { "FAIL" },
                            report.outcomes.len(),
                            report.dir.display()
                        );
                        for o in report.outcomes.iter().filter(|o| !o.pass) {
                            println!(
                                "  check at line {} ({}, {}): observed {} vs reference {}; {}",
                                o.check.line,
                                o.check.kind.name(),
                                o.check.functional.label(),
                                o.observed,
                                o.reference,
                                o.detail
                            );
                        }
                        code = code.max(verdict(report.passed()));
                    }
                    Err(e) => {
                        eprintln!("{}: error: {e}", exp.name);
                        code = code.max(e.exit_code());
                    }
                }
            }
            Ok(code)
        }
        Command::Sweep { dim, assumption, gamma_min, gamma_max, steps, out } => {
            let text = commands::sweep(dim, commands::parse_regime(&assumption)?, gamma_min, gamma_max, steps)?;
            emit(&text, out.as_ref())?;
            Ok(0)
        }
        Command::Barenblatt { gamma, dim, mass, time, rows, radius, out } => {
            emit(&commands::barenblatt(gamma, dim, mass, time, rows, radius)?, out.as_ref())?;
            Ok(0)
        }
        Command::Rates { gamma, dim, b, series, model, window, reference, tolerance } => {
            if let Some(path) = series {
                let model = match model {
                    FitModel::Power => Model::PowerLaw,
                    FitModel::Exponential => Model::Exponential,
                };
                let window = window.map(|w| (w[0], w[1]));
                let (text, ok) = commands::fit_csv(&path, model, window, reference, tolerance)?;
                print!("{text}");
                return Ok(verdict(ok));
            }
            match (gamma, dim, b) {
                (Some(g), Some(d), Some(b)) => {
                    print!("{}", commands::reference_rates(g, d, b)?);
                    Ok(0)
                }
                _ => Err(CliError::Usage("rates needs --series, or all of --gamma, --dim and --b".into())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
