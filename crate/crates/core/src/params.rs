//! Problem instance: exponent, dimension and potential.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Value, radial derivative and Laplacian of a radial potential at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub value: f64,
    pub radial_derivative: f64,
    pub laplacian: f64,
}

type PotentialFn = dyn Fn(f64, usize) -> PotentialSample + Send + Sync;

/// A radial potential `V(r)` with bounded derivatives, supplied as a callback
/// of `(r, d)`.
#[derive(Clone)]
pub struct GenericPotential {
    name: String,
    eval: Arc<PotentialFn>,
}

impl GenericPotential {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64, usize) -> PotentialSample + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// `V(r) = sqrt(1 + r²)`: every derivative is bounded.
    pub fn soft_cone() -> Self {
        Self::new("sqrt(1+r^2)", |r, d| {
            let s = (1.0 + r * r).sqrt();
            let second = 1.0 / (s * s * s);
            PotentialSample {
                value: s,
                radial_derivative: r / s,
                laplacian: second + (d as f64 - 1.0) / s,
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sample(&self, r: f64, dim: usize) -> PotentialSample {
        (self.eval)(r, dim)
    }
}

impl fmt::Debug for GenericPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericPotential").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum Potential {
    /// `V = 0`.
    Trivial,
    /// `V = |x|²/2`.
    Quadratic,
    BoundedGeneric(GenericPotential),
}

impl Potential {
    pub fn sample(&self, r: f64, dim: usize) -> PotentialSample {
        match self {
            Potential::Trivial => PotentialSample {
                value: 0.0,
                radial_derivative: 0.0,
                laplacian: 0.0,
            },
            Potential::Quadratic => PotentialSample {
                value: 0.5 * r * r,
                radial_derivative: r,
                laplacian: dim as f64,
            },
            Potential::BoundedGeneric(g) => g.sample(r, dim),
        }
    }

    pub fn radial_derivative(&self, r: f64, dim: usize) -> f64 {
        match self {
            Potential::Trivial => 0.0,
            Potential::Quadratic => r,
            Potential::BoundedGeneric(g) => g.sample(r, dim).radial_derivative,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Potential::Trivial)
    }

    pub fn label(&self) -> &str {
        match self {
            Potential::Trivial => "trivial",
            Potential::Quadratic => "quadratic",
            Potential::BoundedGeneric(g) => g.name(),
        }
    }
}

/// Exponent `γ` of the pressure law `p = sign(γ) n^γ`, dimension `d` and
/// potential `V`.
#[derive(Debug, Clone)]
pub struct DiffusionParams {
    gamma: f64,
    dim: usize,
    potential: Potential,
}

impl DiffusionParams {
    /// Requires `γ ≠ 0`, `γ > -2/d` and `d ≥ 1`.
    pub fn new(gamma: f64, dim: usize, potential: Potential) -> Result<Self> {
        validate_gamma(gamma, dim)?;
        Ok(Self {
            gamma,
            dim,
            potential,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn d(&self) -> f64 {
        self.dim as f64
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn with_potential(&self, potential: Potential) -> Self {
        Self {
            potential,
            ..self.clone()
        }
    }

    /// Self-similar exponent `α = 1/(dγ + 2)`.
    pub fn alpha(&self) -> f64 {
        alpha(self.gamma, self.dim)
    }

    pub fn sign(&self) -> f64 {
        self.gamma.signum()
    }

    /// Porous-medium regime (`γ > 0`).
    pub fn is_slow(&self) -> bool {
        self.gamma > 0.0
    }

    /// Coefficient of `Δ n^{γ+1}` in the drift-less equation.
    pub fn kappa(&self) -> f64 {
        self.gamma.abs() / (self.gamma + 1.0)
    }

    /// The Lipschitz theory is stated for `d ≥ 2`; `d = 1` is accepted for
    /// solver checks only.
    pub fn in_stated_range(&self) -> bool {
        self.dim >= 2
    }

    pub fn pressure(&self, n: f64) -> f64 {
        self.sign() * n.powf(self.gamma)
    }

    /// Aronson–Bénilan lower bound `-1/((γ + 2/d) t)`.
    pub fn aronson_benilan_bound(&self, t: f64) -> f64 {
        -1.0 / ((self.gamma + 2.0 / self.d()) * t)
    }
}

pub(crate) fn validate_gamma(gamma: f64, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if !gamma.is_finite() || gamma == 0.0 {
        return Err(Error::domain(format!("gamma must be finite and nonzero, got {gamma}")));
    }
    let floor = -2.0 / dim as f64;
    if gamma <= floor {
        return Err(Error::domain(format!(
            "gamma = {gamma} is at or below -2/d = {floor}; mass is not conserved there"
        )));
    }
    Ok(())
}

/// `α = 1/(dγ + 2)`.
pub fn alpha(gamma: f64, dim: usize) -> f64 {
    1.0 / (dim as f64 * gamma + 2.0)
}

/// Surface measure of the unit sphere in `ℝ^d`: `2 π^{d/2} / Γ(d/2)`.
pub fn sphere_area(dim: usize) -> f64 {
    use std::f64::consts::PI;
    // Γ(d/2) via the recursion from Γ(1/2) = √π or Γ(1) = 1.
    let mut gamma_half = if dim.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = if dim.is_multiple_of(2) { 1.0 } else { 0.5 };
    while k + 0.5 < dim as f64 / 2.0 {
        gamma_half *= k;
        k += 1.0;
    }
    2.0 * PI.powf(dim as f64 / 2.0) / gamma_half
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-15);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_invalid_exponents() {
        assert!(DiffusionParams::new(0.0, 2, Potential::Trivial).is_err());
        assert!(DiffusionParams::new(-1.0, 2, Potential::Trivial).is_err());
        assert!(DiffusionParams::new(-0.7, 3, Potential::Trivial).is_err());
        assert!(DiffusionParams::new(f64::NAN, 3, Potential::Trivial).is_err());
        assert!(DiffusionParams::new(0.5, 0, Potential::Trivial).is_err());
        let p = DiffusionParams::new(-0.5, 3, Potential::Trivial).unwrap();
        assert_eq!(p.alpha(), 2.0);
        assert!(p.alpha() > 0.0);
    }

    #[test]
    fn soft_cone_derivatives_match_finite_differences() {
        let v = GenericPotential::soft_cone();
        let h = 1e-5;
        for &r in &[0.3, 1.0, 2.5] {
            let s = v.sample(r, 3);
            let fd = (v.sample(r + h, 3).value - v.sample(r - h, 3).value) / (2.0 * h);
            assert!((s.radial_derivative - fd).abs() < 1e-9);
            let fd2 = (v.sample(r + h, 3).value - 2.0 * s.value + v.sample(r - h, 3).value) / (h * h);
            let lap = fd2 + 2.0 * fd / r;
            assert!((s.laplacian - lap).abs() < 1e-4);
        }
    }
}
