//! Time series of a recorded functional and their CSV form (`t,value`).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::functionals::FunctionalKind;

#[derive(Debug, Clone)]
pub struct FunctionalSeries {
    pub kind: FunctionalKind,
    samples: Vec<(f64, f64)>,
}

impl FunctionalSeries {
    pub fn new(kind: FunctionalKind) -> Self {
        Self {
            kind,
            samples: Vec::new(),
        }
    }

    /// Builds a series from samples; times must increase strictly.
    pub fn from_samples(kind: FunctionalKind, samples: Vec<(f64, f64)>) -> Result<Self> {
        let mut s = Self::new(kind);
        for (t, v) in samples {
            s.push(t, v)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if value.is_nan() || !t.is_finite() {
            return Err(Error::numerical(format!(
                "{} produced a non-finite sample at t = {t}",
                self.kind.label()
            )));
        }
        if let Some(&(last, _)) = self.samples.last() {
            if t <= last {
                return Err(Error::domain(format!(
                    "series times must increase strictly ({t} after {last})"
                )));
            }
        }
        self.samples.push((t, value));
        Ok(())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.samples.last().copied()
    }

    /// Value at the sample closest to `t`.
    pub fn nearest(&self, t: f64) -> Option<(f64, f64)> {
        self.samples
            .iter()
            .copied()
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
    }

    /// Samples with `t_min ≤ t ≤ t_max`.
    pub fn window(&self, t_min: f64, t_max: f64) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .copied()
            .filter(|&(t, _)| t >= t_min && t <= t_max)
            .collect()
    }

    /// Applies `f(t, v) -> (t', v')`; the result must still increase in `t'`.
    pub fn map(&self, kind: FunctionalKind, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        let samples = self.samples.iter().map(|&(t, v)| f(t, v)).collect();
        Self::from_samples(kind, samples)
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("t,value\n");
        for (t, v) in &self.samples {
            s.push_str(&format!("{t},{v}\n"));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    /// Reads a two-column `t,value` file.
    pub fn read_csv(path: &Path, kind: FunctionalKind) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut series = Self::new(kind);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if lineno == 0 || line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| parse_err("expected two comma-separated columns".into()))?;
            let t: f64 = a.trim().parse().map_err(|e| parse_err(format!("bad time: {e}")))?;
            let v: f64 = b.trim().parse().map_err(|e| parse_err(format!("bad value: {e}")))?;
            series.push(t, v).map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonincreasing_times() {
        let mut s = FunctionalSeries::new(FunctionalKind::Mass);
        s.push(1.0, 2.0).unwrap();
        assert!(s.push(1.0, 3.0).is_err());
        assert!(s.push(2.0, f64::NAN).is_err());
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let dir = std::env::temp_dir().join(format!("pmfd-series-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.csv");
        let s = FunctionalSeries::from_samples(
            FunctionalKind::LinfDensity,
            vec![(1.0, 0.1 + 0.2), (1.5, 1.0 / 3.0), (2.0, 1e-300)],
        )
        .unwrap();
        s.write_csv(&path).unwrap();
        let back = FunctionalSeries::read_csv(&path, FunctionalKind::LinfDensity).unwrap();
        assert_eq!(back.samples(), s.samples());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
