//! Experiment runner for the pmfd laboratory.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use error::{CliError, CliResult};
use experiment::Report;

/// Expands directories into their `*.cfg` files, sorted by name.
pub fn collect_configs(paths: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| pmfd_core::Error::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "cfg"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no experiment configs given".into()));
    }
    Ok(out)
}

/// Runs experiments on up to `jobs` threads. Each run is sequential and
/// writes only under `<out>/<name>/`; results come back in input order.
pub fn run_all(
    experiments: &[config::Experiment],
    out: &Path,
    jobs: usize,
    slack: Option<f64>,
) -> Vec<CliResult<Report>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CliResult<Report>>>> =
        Mutex::new((0..experiments.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, experiments.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(exp) = experiments.get(i) else { break };
                let r = experiment::execute(exp, out, slack);
                results.lock().expect("no panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every index was claimed"))
        .collect()
}
