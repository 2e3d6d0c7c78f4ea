//! Closed-form self-similar solutions.
//!
//! The Barenblatt profile of mass `M` is
//! `B(t, r) = t^{-αd} F(r t^{-α})` with
//! `F(ξ) = (C - sign(γ) α ξ²/2)_+^{1/γ}`, `α = 1/(dγ + 2)`.
//! For `γ > 0` it is compactly supported; for `-2/d < γ < 0` it is positive
//! everywhere with tails `~ ξ^{2/γ}`. The constant `C` is fixed by the mass.

use crate::error::{Error, Result};
use crate::params::{alpha, sphere_area, validate_gamma, DiffusionParams};
use crate::quadrature::integrate;

const MASS_REL_TOL: f64 = 1e-14;
const CONSTANT_REL_TOL: f64 = 1e-12;
const MAX_BISECTION: usize = 200;
/// The fat-tail integrand is replaced by its power-law expansion once it is
/// within this relative distance of the leading asymptote.
const TAIL_MATCH: f64 = 0.01;

/// Mass of `F` over `ℝ^d` for a given profile constant `C`.
pub fn profile_mass(gamma: f64, dim: usize, c: f64) -> Result<f64> {
    validate_gamma(gamma, dim)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("profile constant must be positive, got {c}")));
    }
    let a = alpha(gamma, dim);
    let d = dim as f64;
    let inv = 1.0 / gamma;
    let radial = if gamma > 0.0 {
        // Support ξ ≤ sqrt(2C/α); integrate in the unit variable s = ξ/ξ_max.
        let xi_max = (2.0 * c / a).sqrt();
        let body = integrate(
            |s| (c * (1.0 - s * s)).max(0.0).powf(inv) * s.powi(dim as i32 - 1),
            0.0,
            1.0,
            0.0,
            MASS_REL_TOL,
        )?;
        body * xi_max.powi(dim as i32)
    } else {
        fat_tail_radial_mass(c, a, inv, d, 0.0)?
    };
    Ok(sphere_area(dim) * radial)
}

/// `∫_{ξ0}^∞ (C + αξ²/2)^{1/γ} ξ^{d-1} dξ` for `γ < 0`: adaptive quadrature up
/// to the matching radius, analytic power-law expansion beyond it.
fn fat_tail_radial_mass(c: f64, a: f64, inv: f64, d: f64, xi0: f64) -> Result<f64> {
    // (1 + ε)^{1/γ} ≥ 1 - TAIL_MATCH  ⇔  ε ≤ (1 - TAIL_MATCH)^γ - 1, ε = 2C/(αξ²).
    let eps_cut = (1.0 - TAIL_MATCH).powf(1.0 / inv) - 1.0;
    let xi_cut = (2.0 * c / (a * eps_cut)).sqrt().max(xi0);
    let integrand = |xi: f64| (c + 0.5 * a * xi * xi).powf(inv) * xi.powf(d - 1.0);
    let body = if xi_cut > xi0 {
        integrate(integrand, xi0, xi_cut, 0.0, MASS_REL_TOL)?
    } else {
        0.0
    };
    Ok(body + power_tail(c, a, inv, d, xi_cut))
}

/// `∫_{ξc}^∞ (αξ²/2)^{1/γ} (1 + 2C/(αξ²))^{1/γ} ξ^{d-1} dξ`, expanding the
/// second factor in its binomial series (convergent since `2C/(αξc²) < 1`).
fn power_tail(c: f64, a: f64, inv: f64, d: f64, xi_cut: f64) -> f64 {
    let lead = (0.5 * a).powf(inv);
    let ratio = 2.0 * c / a;
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..200 {
        let e = 2.0 * inv - 2.0 * k as f64 + d; // exponent after integration
        let term = binom * ratio.powi(k) * (-xi_cut.powf(e) / e);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        binom *= (inv - k as f64) / (k as f64 + 1.0);
    }
    lead * sum
}

/// Solves `mass(C) = M` by bisection on `C`.
pub fn profile_constant(gamma: f64, dim: usize, mass: f64) -> Result<f64> {
    validate_gamma(gamma, dim)?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::domain(format!("mass must be positive, got {mass}")));
    }
    let increasing = gamma > 0.0;
    let residual = |c: f64| -> Result<f64> { Ok(profile_mass(gamma, dim, c)? - mass) };

    let (mut lo, mut hi) = (1.0, 1.0);
    let mut iterations = 0;
    // Bracket the root; mass is monotone in C.
    loop {
        let r_lo = residual(lo)?;
        let r_hi = residual(hi)?;
        let lo_ok = if increasing { r_lo <= 0.0 } else { r_lo >= 0.0 };
        let hi_ok = if increasing { r_hi >= 0.0 } else { r_hi <= 0.0 };
        if lo_ok && hi_ok {
            break;
        }
        if !lo_ok {
            lo *= 0.5;
        }
        if !hi_ok {
            hi *= 2.0;
        }
        iterations += 1;
        if iterations > MAX_BISECTION {
            return Err(Error::numerical("could not bracket the profile constant"));
        }
    }
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        let r = residual(mid)?;
        if r == 0.0 {
            return Ok(mid);
        }
        let below = if increasing { r < 0.0 } else { r > 0.0 };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= CONSTANT_REL_TOL * mid {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::numerical(format!(
        "bisection for the profile constant did not converge in {MAX_BISECTION} iterations"
    )))
}

/// Barenblatt solution with mass `M`, evaluated at `t + τ`.
#[derive(Debug, Clone)]
pub struct BarenblattProfile {
    params: DiffusionParams,
    mass: f64,
    constant: f64,
    time_offset: f64,
}

impl BarenblattProfile {
    pub fn new(params: DiffusionParams, mass: f64) -> Result<Self> {
        let constant = profile_constant(params.gamma(), params.dim(), mass)?;
        Ok(Self {
            params,
            mass,
            constant,
            time_offset: 0.0,
        })
    }

    /// Shifts the time origin: the profile is evaluated at `t + τ`.
    pub fn with_time_offset(mut self, tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::domain("time offset must be finite"));
        }
        self.time_offset = tau;
        Ok(self)
    }

    pub fn params(&self) -> &DiffusionParams {
        &self.params
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn profile_constant(&self) -> f64 {
        self.constant
    }

    pub fn time_offset(&self) -> f64 {
        self.time_offset
    }

    fn shifted(&self, t: f64) -> Result<f64> {
        let ts = t + self.time_offset;
        if ts > 0.0 && ts.is_finite() {
            Ok(ts)
        } else {
            Err(Error::domain(format!(
                "Barenblatt profile evaluated at t + τ = {ts} (must be positive)"
            )))
        }
    }

    /// Self-similar profile `F(ξ)`.
    pub fn shape(&self, xi: f64) -> f64 {
        let a = self.params.alpha();
        let base = self.constant - self.params.sign() * 0.5 * a * xi * xi;
        if base <= 0.0 {
            0.0
        } else {
            base.powf(1.0 / self.params.gamma())
        }
    }

    pub fn density(&self, t: f64, r: f64) -> Result<f64> {
        let ts = self.shifted(t)?;
        let a = self.params.alpha();
        Ok(ts.powf(-a * self.params.d()) * self.shape(r * ts.powf(-a)))
    }

    /// Signed pressure `sign(γ) B^γ`, in closed form.
    pub fn pressure(&self, t: f64, r: f64) -> Result<f64> {
        let ts = self.shifted(t)?;
        let (g, a) = (self.params.gamma(), self.params.alpha());
        let s = self.params.sign();
        let inner = self.constant - s * 0.5 * a * r * r * ts.powf(-2.0 * a);
        Ok(s * ts.powf(-a * g * self.params.d()) * inner.max(0.0))
    }

    /// Radial derivative of the signed pressure: `-α r / (t + τ)` where the
    /// density is positive, zero outside the PME support.
    pub fn pressure_gradient(&self, t: f64, r: f64) -> Result<f64> {
        let ts = self.shifted(t)?;
        if self.params.is_slow() && r > self.support_radius_at_shifted(ts) {
            return Ok(0.0);
        }
        Ok(-self.params.alpha() * r / ts)
    }

    /// Support radius `sqrt(2C/α) (t+τ)^α`; infinite for `γ < 0`.
    pub fn support_radius(&self, t: f64) -> Result<f64> {
        Ok(self.support_radius_at_shifted(self.shifted(t)?))
    }

    fn support_radius_at_shifted(&self, ts: f64) -> f64 {
        if self.params.is_slow() {
            let a = self.params.alpha();
            (2.0 * self.constant / a).sqrt() * ts.powf(a)
        } else {
            f64::INFINITY
        }
    }

    /// Mass outside the ball of radius `r` at time `t`.
    pub fn mass_outside(&self, t: f64, r: f64) -> Result<f64> {
        let ts = self.shifted(t)?;
        let a = self.params.alpha();
        let xi0 = r * ts.powf(-a);
        let (g, dim) = (self.params.gamma(), self.params.dim());
        let d = dim as f64;
        let radial = if g > 0.0 {
            let xi_max = (2.0 * self.constant / a).sqrt();
            if xi0 >= xi_max {
                0.0
            } else {
                integrate(
                    |xi| self.shape(xi) * xi.powf(d - 1.0),
                    xi0,
                    xi_max,
                    0.0,
                    MASS_REL_TOL,
                )?
            }
        } else {
            fat_tail_radial_mass(self.constant, a, 1.0 / g, d, xi0)?
        };
        Ok(sphere_area(dim) * radial)
    }

    /// Time at which this profile (with `τ = 0`) is the stationary state of
    /// `∂ₜn = ∇·(n∇(λ p + |x|²/2))`: there `∇p = -α x / t = -x/λ`.
    pub fn stationary_time(&self, pressure_scale: f64) -> f64 {
        self.params.alpha() * pressure_scale
    }
}

/// Exponent of the sharp decay `t^{-1-γd(b+1)α}` of `max |p|^b |∇p|²` for `V = 0`.
pub fn sharp_exponent_trivial(gamma: f64, dim: usize, b: f64) -> f64 {
    -1.0 - gamma * dim as f64 * (b + 1.0) * alpha(gamma, dim)
}

/// Exponent `β - C/(dγ+2)` with `β = -αγdb - 2 + 2α` and `C = 1 - γbd/2`.
pub fn weighted_gap_exponent(gamma: f64, dim: usize, b: f64) -> f64 {
    let a = alpha(gamma, dim);
    let d = dim as f64;
    let beta = -a * gamma * d * b - 2.0 + 2.0 * a;
    beta - quadratic_rate(gamma, dim, b) * a
}

/// Exponential rate `C = 1 - γbd/2` of the quadratic-potential estimate.
pub fn quadratic_rate(gamma: f64, dim: usize, b: f64) -> f64 {
    1.0 - gamma * b * dim as f64 / 2.0
}

/// Separable solution `n(t, x) = a(x) b(t)` of the drift-less equation on a
/// ball with homogeneous Dirichlet data.
///
/// `ã = a^{γ+1}` solves `-Δã = ã^{1/(γ+1)}`, `ã'(0) = 0`, `ã(R) = 0`, and is
/// tabulated on the nodes `r_j = j R / steps` together with `ã'`.
#[derive(Debug, Clone)]
pub struct SeparableSolution {
    gamma: f64,
    dim: usize,
    radius: f64,
    b0: f64,
    nodes: Vec<f64>,
    a_tilde: Vec<f64>,
    a_tilde_slope: Vec<f64>,
}

const SHOOTING_STEPS: usize = 4096;
const SHOOTING_TOL: f64 = 1e-9;

pub fn dirichlet_separable(gamma: f64, dim: usize, radius: f64, b0: f64) -> Result<SeparableSolution> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain("the separable Dirichlet solution needs gamma > 0"));
    }
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if !(radius > 0.0 && b0 > 0.0) {
        return Err(Error::domain("ball radius and b0 must be positive"));
    }
    let q = 1.0 / (gamma + 1.0);
    let shoot = |center: f64| lane_emden(center, q, dim, radius, SHOOTING_STEPS);

    // y(R) is increasing in the centre value (the first zero moves outward).
    let (mut lo, mut hi) = (1.0, 1.0);
    for _ in 0..200 {
        if *shoot(lo).1.last().unwrap() < 0.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..200 {
        if *shoot(hi).1.last().unwrap() > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (nodes, y, dy) = shoot(mid);
        let end = *y.last().unwrap();
        if end.abs() < SHOOTING_TOL * mid {
            return Ok(SeparableSolution {
                gamma,
                dim,
                radius,
                b0,
                nodes,
                a_tilde: y,
                a_tilde_slope: dy,
            });
        }
        if end > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::numerical("shooting for the Dirichlet profile did not converge"))
}

/// RK4 for `y'' = -(d-1)/r y' - y_+^q`, `y(0) = center`, `y'(0) = 0`.
fn lane_emden(center: f64, q: f64, dim: usize, radius: f64, steps: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let d = dim as f64;
    let h = radius / steps as f64;
    let rhs = |r: f64, y: f64, dy: f64| -> f64 {
        let source = y.max(0.0).powf(q);
        if r == 0.0 {
            -source / d
        } else {
            -(d - 1.0) / r * dy - source
        }
    };
    let mut nodes = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut dys = Vec::with_capacity(steps + 1);
    let (mut y, mut dy) = (center, 0.0);
    nodes.push(0.0);
    ys.push(y);
    dys.push(dy);
    for j in 0..steps {
        let r = j as f64 * h;
        let k1y = dy;
        let k1v = rhs(r, y, dy);
        let k2y = dy + 0.5 * h * k1v;
        let k2v = rhs(r + 0.5 * h, y + 0.5 * h * k1y, k2y);
        let k3y = dy + 0.5 * h * k2v;
        let k3v = rhs(r + 0.5 * h, y + 0.5 * h * k2y, k3y);
        let k4y = dy + h * k3v;
        let k4v = rhs(r + h, y + h * k3y, k4y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        nodes.push((j + 1) as f64 * h);
        ys.push(y);
        dys.push(dy);
    }
    (nodes, ys, dys)
}

impl SeparableSolution {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center_value(&self) -> f64 {
        self.a_tilde[0]
    }

    pub fn boundary_value(&self) -> f64 {
        *self.a_tilde.last().unwrap()
    }

    /// `∂_ν ã` at `r = R`.
    pub fn boundary_slope(&self) -> f64 {
        *self.a_tilde_slope.last().unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn a_tilde_table(&self) -> &[f64] {
        &self.a_tilde
    }

    /// `b(t) = (b0^{-γ} + γ|γ| t/(γ+1))^{-1/γ}`.
    pub fn time_factor(&self, t: f64) -> f64 {
        let g = self.gamma;
        (self.b0.powf(-g) + g * g.abs() * t / (g + 1.0)).powf(-1.0 / g)
    }

    /// `ã(r)` by cubic Hermite interpolation of the shooting table.
    pub fn a_tilde(&self, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        let h = self.radius / (self.nodes.len() - 1) as f64;
        let j = ((r / h).floor() as usize).min(self.nodes.len() - 2);
        let s = (r - self.nodes[j]) / h;
        let (y0, y1) = (self.a_tilde[j], self.a_tilde[j + 1]);
        let (m0, m1) = (self.a_tilde_slope[j] * h, self.a_tilde_slope[j + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        v.max(0.0)
    }

    /// Spatial factor `a = ã^{1/(γ+1)}`.
    pub fn spatial_factor(&self, r: f64) -> f64 {
        self.a_tilde(r).powf(1.0 / (self.gamma + 1.0))
    }

    pub fn density(&self, t: f64, r: f64) -> f64 {
        self.spatial_factor(r) * self.time_factor(t)
    }
}
