//! Scalar functionals of a radial density.
//!
//! Gradients use centred differences; at `r = 0` the symmetric ghost
//! `p₋₁ = p₀` is used, at the outer cell and at free-boundary pairs (one
//! empty cell next to an occupied one) the one-sided difference from the
//! occupied side. Maxima are taken over cell centres only.

use crate::error::{Error, Result};
use crate::grid::RadialField;
use crate::params::{sphere_area, DiffusionParams};
use crate::profiles::BarenblattProfile;

/// Signed pressure `sign(γ) n^γ` per cell; empty cells carry `0`.
pub fn pressure_values(field: &RadialField, params: &DiffusionParams) -> Vec<f64> {
    field
        .values
        .iter()
        .map(|&n| if n > 0.0 { params.pressure(n) } else { 0.0 })
        .collect()
}

/// Radial derivative of `v` per cell with the stencil policy described above.
/// `occupied[i]` marks cells where the density is positive.
pub fn radial_derivative(v: &[f64], occupied: &[bool], dr: f64) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        if !occupied[i] {
            continue;
        }
        let left = if i == 0 { Some(v[0]) } else { occupied[i - 1].then(|| v[i - 1]) };
        let right = if i + 1 < n && occupied[i + 1] { Some(v[i + 1]) } else { None };
        out[i] = match (left, right) {
            (Some(l), Some(r)) => (r - l) / (2.0 * dr),
            // Outer cell or free boundary on the right.
            (Some(l), None) => (v[i] - l) / dr,
            (None, Some(r)) => (r - v[i]) / dr,
            (None, None) => 0.0,
        };
    }
    out
}

fn occupied(field: &RadialField) -> Vec<bool> {
    field.values.iter().map(|&n| n > 0.0).collect()
}

pub fn pressure_gradient(field: &RadialField, params: &DiffusionParams) -> Vec<f64> {
    let p = pressure_values(field, params);
    radial_derivative(&p, &occupied(field), field.grid.dr())
}

/// Result of a weighted maximum over cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedMax {
    pub value: f64,
    /// Radius of the maximising cell centre.
    pub argmax: f64,
    /// Empty cells skipped because `|p|^b` is undefined there (`b ≤ 0`).
    pub excluded: usize,
}

/// `max |p|^b |∂ᵣp + shift(r)|²` over cells.
pub fn weighted_max(
    field: &RadialField,
    params: &DiffusionParams,
    b: f64,
    shift: impl Fn(f64) -> f64,
) -> WeightedMax {
    let p = pressure_values(field, params);
    let occ = occupied(field);
    let grad = radial_derivative(&p, &occ, field.grid.dr());
    let mut best = WeightedMax {
        value: 0.0,
        argmax: 0.0,
        excluded: 0,
    };
    for i in 0..p.len() {
        let r = field.grid.center(i);
        if !occ[i] {
            if b <= 0.0 {
                best.excluded += 1;
            }
            // For b > 0 the weight vanishes.
            continue;
        }
        let weight = if b == 1.0 { p[i].abs() } else { p[i].abs().powf(b) };
        let g = grad[i] + shift(r);
        let v = weight * g * g;
        if v > best.value {
            best.value = v;
            best.argmax = r;
        }
    }
    best
}

/// `max |p|^b |∂ᵣp + ∂ᵣV|²`.
pub fn lipschitz_u(field: &RadialField, params: &DiffusionParams, b: f64) -> WeightedMax {
    lipschitz_u_scaled(field, params, b, 1.0)
}

/// `max |p|^b |∂ᵣp + s ∂ᵣV|²`: the natural functional of
/// `∂ₜn = ∇·(n∇(λp + V))` with `s = 1/λ`.
pub fn lipschitz_u_scaled(field: &RadialField, params: &DiffusionParams, b: f64, potential_scale: f64) -> WeightedMax {
    let dim = params.dim();
    let pot = params.potential();
    weighted_max(field, params, b, |r| potential_scale * pot.radial_derivative(r, dim))
}

/// `max |p|^b |∂ᵣp + r/t|²` at the field's time stamp.
pub fn weighted_gradient_gap(field: &RadialField, params: &DiffusionParams, b: f64) -> Result<WeightedMax> {
    gap_with_centre(field, params, b, 1.0)
}

/// `max |p|^b |∂ᵣp + α r/t|²`: distance of the pressure gradient from that of
/// the self-similar profile.
pub fn weighted_gradient_gap_centered(field: &RadialField, params: &DiffusionParams, b: f64) -> Result<WeightedMax> {
    gap_with_centre(field, params, b, params.alpha())
}

fn gap_with_centre(field: &RadialField, params: &DiffusionParams, b: f64, c: f64) -> Result<WeightedMax> {
    let t = field.time;
    if !(t > 0.0) {
        return Err(Error::domain(format!("weighted gradient gap needs t > 0, got {t}")));
    }
    Ok(weighted_max(field, params, b, |r| c * r / t))
}

/// `∫ n |∂ᵣp + s r|² dx`.
pub fn fisher_information(field: &RadialField, params: &DiffusionParams, potential_scale: f64) -> f64 {
    let grad = pressure_gradient(field, params);
    let g = &field.grid;
    let s: f64 = field
        .values
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let v = grad[i] + potential_scale * g.center(i);
            n * v * v * g.volume(i)
        })
        .sum();
    sphere_area(g.dim()) * s
}

/// Minimum of the discrete `p'' + (d-1) p'/r` over cells whose stencil lies
/// in the positivity set. `+∞` if there is no such cell.
pub fn aronson_benilan_min(field: &RadialField, params: &DiffusionParams) -> f64 {
    let p = pressure_values(field, params);
    let occ = occupied(field);
    let dr = field.grid.dr();
    let d = params.d();
    let mut best = f64::INFINITY;
    let n = p.len();
    if n >= 2 && occ[0] && occ[1] {
        best = best.min(d * (p[1] - p[0]) / (dr * dr));
    }
    for i in 1..n.saturating_sub(1) {
        if !(occ[i - 1] && occ[i] && occ[i + 1]) {
            continue;
        }
        let r = field.grid.center(i);
        let second = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (dr * dr);
        let first = (p[i + 1] - p[i - 1]) / (2.0 * dr);
        best = best.min(second + (d - 1.0) * first / r);
    }
    best
}

pub fn linf(field: &RadialField) -> f64 {
    field.max()
}

/// `max |∂ᵣn|²`.
pub fn density_gradient_max(field: &RadialField) -> f64 {
    let occ: Vec<bool> = vec![true; field.values.len()];
    radial_derivative(&field.values, &occ, field.grid.dr())
        .iter()
        .fold(0.0, |m, g| m.max(g * g))
}

/// `max |n - B| / B` with `B` evaluated at the field's time.
pub fn relative_error(field: &RadialField, profile: &BarenblattProfile) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, &n) in field.values.iter().enumerate() {
        let r = field.grid.center(i);
        let b = profile.density(field.time, r)?;
        if b <= 0.0 {
            return Err(Error::domain(format!(
                "relative error undefined: profile vanishes at r = {r}"
            )));
        }
        worst = worst.max((n - b).abs() / b);
    }
    Ok(worst)
}

/// What lies beyond the computational radius when computing tail masses.
#[derive(Debug, Clone)]
pub enum TailModel {
    /// Nothing: the density vanishes beyond the grid.
    None,
    /// The density continues as the given profile.
    Barenblatt(BarenblattProfile),
    /// The density continues as `coefficient · r^exponent`.
    PowerLaw { coefficient: f64, exponent: f64 },
}

impl TailModel {
    fn mass_beyond(&self, t: f64, r: f64, dim: usize) -> Result<f64> {
        match self {
            TailModel::None => Ok(0.0),
            TailModel::Barenblatt(p) => p.mass_outside(t, r),
            TailModel::PowerLaw {
                coefficient,
                exponent,
            } => {
                let e = exponent + dim as f64;
                if e >= 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    Ok(sphere_area(dim) * coefficient * r.powf(e) / -e)
                }
            }
        }
    }
}

/// `sup_{R>0} R^{-2/γ-d} ∫_{|x|>R} n` over face radii and, for an analytic
/// tail, over radii beyond the grid. Returns `f64::INFINITY` when the tail is
/// too heavy for the supremum to be finite.
pub fn x_norm(field: &RadialField, params: &DiffusionParams, tail: &TailModel) -> Result<f64> {
    let g = params.gamma();
    if g >= 0.0 {
        return Err(Error::domain("the tail norm is defined for gamma < 0"));
    }
    let dim = params.dim();
    let weight_exp = -2.0 / g - params.d();
    if let TailModel::PowerLaw { exponent, .. } = tail {
        if *exponent > 2.0 / g {
            return Ok(f64::INFINITY);
        }
    }
    let grid = &field.grid;
    let omega = sphere_area(dim);
    let r_out = grid.outer_radius();
    let beyond = tail.mass_beyond(field.time, r_out, dim)?;
    if !beyond.is_finite() {
        return Ok(f64::INFINITY);
    }
    let mut tail_mass = beyond;
    let mut best: f64 = 0.0;
    for k in (1..grid.cells()).rev() {
        tail_mass += omega * field.values[k] * grid.volume(k);
        best = best.max(grid.face(k).powf(weight_exp) * tail_mass);
    }
    best = best.max(r_out.powf(weight_exp) * beyond);
    if !matches!(tail, TailModel::None) {
        let mut r = r_out;
        for _ in 0..40 {
            r *= 2.0;
            best = best.max(r.powf(weight_exp) * tail.mass_beyond(field.time, r, dim)?);
        }
    }
    Ok(best)
}

/// A functional recorded along a run.
#[derive(Debug, Clone)]
pub enum FunctionalKind {
    LipschitzU { b: f64 },
    LinfDensity,
    Mass,
    Fisher,
    AbMin,
    RelativeError(Box<BarenblattProfile>),
    Xnorm(TailModel),
    WeightedGap { b: f64 },
    WeightedGapCentered { b: f64 },
    DensityGradient,
}

impl FunctionalKind {
    /// Short identifier used in file names and reports.
    pub fn label(&self) -> String {
        match self {
            FunctionalKind::LipschitzU { b } => format!("lipschitz_u_b{}", fmt_param(*b)),
            FunctionalKind::LinfDensity => "linf".into(),
            FunctionalKind::Mass => "mass".into(),
            FunctionalKind::Fisher => "fisher".into(),
            FunctionalKind::AbMin => "ab_min".into(),
            FunctionalKind::RelativeError(_) => "relative_error".into(),
            FunctionalKind::Xnorm(_) => "x_norm".into(),
            FunctionalKind::WeightedGap { b } => format!("weighted_gap_b{}", fmt_param(*b)),
            FunctionalKind::WeightedGapCentered { b } => format!("weighted_gap_centered_b{}", fmt_param(*b)),
            FunctionalKind::DensityGradient => "density_gradient".into(),
        }
    }
}

pub(crate) fn fmt_param(x: f64) -> String {
    let s = format!("{:.4}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Evaluates a functional on one field. `potential_scale` is `1/λ` for the
/// equation `∂ₜn = ∇·(n∇(λp + V))`.
pub fn evaluate(
    kind: &FunctionalKind,
    field: &RadialField,
    params: &DiffusionParams,
    potential_scale: f64,
) -> Result<f64> {
    Ok(match kind {
        FunctionalKind::LipschitzU { b } => lipschitz_u_scaled(field, params, *b, potential_scale).value,
        FunctionalKind::LinfDensity => linf(field),
        FunctionalKind::Mass => field.mass(),
        FunctionalKind::Fisher => fisher_information(field, params, potential_scale),
        FunctionalKind::AbMin => aronson_benilan_min(field, params),
        FunctionalKind::RelativeError(p) => relative_error(field, p)?,
        FunctionalKind::Xnorm(tail) => x_norm(field, params, tail)?,
        FunctionalKind::WeightedGap { b } => weighted_gradient_gap(field, params, *b)?.value,
        FunctionalKind::WeightedGapCentered { b } => weighted_gradient_gap_centered(field, params, *b)?.value,
        FunctionalKind::DensityGradient => density_gradient_max(field),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::params::Potential;

    fn params(g: f64, d: usize) -> DiffusionParams {
        DiffusionParams::new(g, d, Potential::Trivial).unwrap()
    }

    fn sample(profile: &BarenblattProfile, t: f64, cells: usize, radius: f64) -> RadialField {
        let grid = RadialGrid::new(cells, radius, profile.params().dim()).unwrap();
        RadialField::from_fn(grid, t, |r| profile.density(t, r)).unwrap()
    }

    #[test]
    fn uniform_field_has_zero_laplacian_and_gradient() {
        let p = params(0.5, 2);
        let grid = RadialGrid::new(16, 1.0, 2).unwrap();
        let f = RadialField::new(grid, vec![0.7; 16], 1.0).unwrap();
        assert_eq!(aronson_benilan_min(&f, &p), 0.0);
        assert_eq!(lipschitz_u(&f, &p, 1.0).value, 0.0);
    }

    #[test]
    fn ab_minimum_on_barenblatt_interior() {
        let p = params(1.0, 2);
        let b = BarenblattProfile::new(p.clone(), 1.0).unwrap();
        let f = sample(&b, 1.5, 512, 3.0);
        let v = aronson_benilan_min(&f, &p);
        let exact = -2.0 * p.alpha() / 1.5;
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
        assert!((p.aronson_benilan_bound(1.5) - exact).abs() < 1e-15);
    }

    #[test]
    fn b_zero_gives_squared_lipschitz_constant() {
        let p = params(1.0, 2);
        let b = BarenblattProfile::new(p.clone(), 1.0).unwrap();
        let t = 1.0;
        let f = sample(&b, t, 4096, 3.0);
        let rs = b.support_radius(t).unwrap();
        let exact = (p.alpha() * rs / t).powi(2);
        let v = lipschitz_u(&f, &p, 0.0).value;
        assert!((v / exact - 1.0).abs() < 5e-3, "{v} vs {exact}");
    }

    #[test]
    fn empty_cells_excluded_for_nonpositive_b() {
        let p = params(0.5, 2);
        let grid = RadialGrid::new(8, 1.0, 2).unwrap();
        let f = RadialField::new(grid, vec![1.0, 0.9, 0.5, 0.1, 0.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(lipschitz_u(&f, &p, -0.5).excluded, 4);
        assert_eq!(lipschitz_u(&f, &p, 1.0).excluded, 0);
    }

    #[test]
    fn free_boundary_uses_one_sided_difference() {
        let v = [4.0, 3.0, 1.0, 0.0];
        let occ = [true, true, true, false];
        let g = radial_derivative(&v, &occ, 1.0);
        assert_eq!(g, vec![-0.5, -1.5, -2.0, 0.0]);
    }

    #[test]
    fn relative_error_of_exact_samples_vanishes() {
        let p = params(-0.5, 3);
        let b = BarenblattProfile::new(p, 1.0).unwrap();
        let f = sample(&b, 1.0, 64, 20.0);
        assert!(relative_error(&f, &b).unwrap() < 1e-14);
    }

    #[test]
    fn relative_error_rejects_vanishing_profile() {
        let p = params(0.5, 2);
        let b = BarenblattProfile::new(p, 1.0).unwrap();
        let f = sample(&b, 1.0, 64, 20.0);
        assert!(matches!(relative_error(&f, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn x_norm_flags_heavy_tails() {
        let p = params(-0.5, 3);
        let b = BarenblattProfile::new(p.clone(), 1.0).unwrap();
        let f = sample(&b, 1.0, 256, 50.0);
        let finite = x_norm(&f, &p, &TailModel::Barenblatt(b.clone())).unwrap();
        assert!(finite.is_finite() && finite > 0.0);
        let heavy = TailModel::PowerLaw {
            coefficient: 1.0,
            exponent: -3.0,
        };
        assert_eq!(x_norm(&f, &p, &heavy).unwrap(), f64::INFINITY);
    }

    #[test]
    fn labels() {
        assert_eq!(FunctionalKind::LipschitzU { b: 4.0 / 3.0 }.label(), "lipschitz_u_b1.3333");
        assert_eq!(FunctionalKind::WeightedGap { b: -1.2 }.label(), "weighted_gap_b-1.2");
        assert_eq!(FunctionalKind::LipschitzU { b: 1.0 }.label(), "lipschitz_u_b1");
    }
}
