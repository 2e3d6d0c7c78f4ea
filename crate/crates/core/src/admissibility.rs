//! Coefficient machinery and the admissibility conditions on `(γ, b, d)`.
//!
//! Each potential class comes with its own set of clauses on `γ` and on the
//! product `γb`. The clauses live in [`CLAUSES`] as data, with strictness
//! recorded per bound, so that the table can be read against the source
//! inequalities line by line.

use std::fmt;

use crate::error::{Error, Result};
use crate::params::{validate_gamma, Potential};

/// The coefficients that drive the differential inequality for `u(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub c1: f64,
    pub c2: f64,
    /// Defined as `c1 + c2`.
    pub c0: f64,
    /// Only meaningful for the quadratic potential.
    pub c3: f64,
}

pub fn coefficients(gamma: f64, b: f64, dim: usize) -> CoefficientSet {
    let g = gamma.abs();
    let ab = b.abs();
    let d = dim as f64;
    let c1 = -ab / 2.0 + g * b * b / 2.0 + gamma * ab / 2.0;
    let c2 = -gamma * ab / 2.0 + g * (d - 1.0) / 4.0 - g * b * b / 4.0;
    CoefficientSet {
        c1,
        c2,
        c0: c1 + c2,
        c3: gamma * b * d / 2.0 - 1.0,
    }
}

/// `c0` in the expanded form `-|b|/2 + |γ|b²/4 + |γ|(d-1)/4`.
pub fn c0_closed_form(gamma: f64, b: f64, dim: usize) -> f64 {
    let g = gamma.abs();
    -b.abs() / 2.0 + g * b * b / 4.0 + g * (dim as f64 - 1.0) / 4.0
}

/// Which potential class the conditions are stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Potentials with bounded gradient and Hessian.
    Bounded,
    /// `V = |x|²/2`.
    Quadratic,
    /// `V = 0`.
    Trivial,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Bounded, Regime::Quadratic, Regime::Trivial];

    pub fn for_potential(potential: &Potential) -> Regime {
        match potential {
            Potential::Trivial => Regime::Trivial,
            Potential::Quadratic => Regime::Quadratic,
            Potential::BoundedGeneric(_) => Regime::Bounded,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Bounded => "bounded",
            Regime::Quadratic => "quadratic",
            Regime::Trivial => "trivial",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bounded" | "generic" | "3" => Some(Regime::Bounded),
            "quadratic" | "4" => Some(Regime::Quadratic),
            "trivial" | "5" => Some(Regime::Trivial),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symbolic bound values appearing in the clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expr {
    AbsGamma,
    TwiceAbsGamma,
    OneMinusGamma,
    OnePlusAbsGamma,
    InvSqrtD,
    TwoOverD,
    Half,
    FourOverThreePlusD,
    InvSqrtDMinusOne,
    /// `1 - sqrt(1 - γ²(d-1))`
    OneMinusRoot,
    /// `1 + sqrt(1 - γ²(d-1))`
    OnePlusRoot,
}

impl Expr {
    /// `None` when the expression is undefined (negative radicand).
    pub fn eval(self, gamma: f64, dim: usize) -> Option<f64> {
        let g = gamma.abs();
        let d = dim as f64;
        let root = || {
            let radicand = 1.0 - gamma * gamma * (d - 1.0);
            (radicand >= 0.0).then(|| radicand.sqrt())
        };
        Some(match self {
            Expr::AbsGamma => g,
            Expr::TwiceAbsGamma => 2.0 * g,
            Expr::OneMinusGamma => 1.0 - gamma,
            Expr::OnePlusAbsGamma => 1.0 + g,
            Expr::InvSqrtD => 1.0 / d.sqrt(),
            Expr::TwoOverD => 2.0 / d,
            Expr::Half => 0.5,
            Expr::FourOverThreePlusD => 4.0 / (3.0 + d),
            Expr::InvSqrtDMinusOne => {
                if dim <= 1 {
                    f64::INFINITY
                } else {
                    1.0 / (d - 1.0).sqrt()
                }
            }
            Expr::OneMinusRoot => 1.0 - root()?,
            Expr::OnePlusRoot => 1.0 + root()?,
        })
    }
}

/// The quantity a clause constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    AbsGamma,
    GammaB,
}

/// `min(exprs)` as an upper bound or `max(exprs)` as a lower bound.
#[derive(Debug, Clone, Copy)]
pub struct Bound {
    pub exprs: &'static [Expr],
    pub strict: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Clause {
    pub regime: Regime,
    /// Applies to `γ > 0` when true, to `γ < 0` otherwise.
    pub positive_gamma: bool,
    pub label: &'static str,
    pub quantity: Quantity,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

const fn lt(exprs: &'static [Expr]) -> Option<Bound> {
    Some(Bound { exprs, strict: true })
}

const fn le(exprs: &'static [Expr]) -> Option<Bound> {
    Some(Bound { exprs, strict: false })
}

use Expr::*;
use Quantity::{AbsGamma as G, GammaB as GB};

const ROOTS_LO: &[Expr] = &[OneMinusRoot];
const ROOTS_HI: &[Expr] = &[OnePlusRoot];

pub const CLAUSES: &[Clause] = &[
    // Bounded potential, γ, b > 0.
    Clause { regime: Regime::Bounded, positive_gamma: true, label: "i", quantity: G, lower: None, upper: le(&[InvSqrtD, TwoOverD, Half]) },
    Clause { regime: Regime::Bounded, positive_gamma: true, label: "ii", quantity: GB, lower: lt(ROOTS_LO), upper: lt(ROOTS_HI) },
    Clause { regime: Regime::Bounded, positive_gamma: true, label: "iii", quantity: GB, lower: le(&[AbsGamma]), upper: le(&[OneMinusGamma]) },
    // Bounded potential, γ, b < 0.
    Clause { regime: Regime::Bounded, positive_gamma: false, label: "i", quantity: G, lower: None, upper: lt(&[TwoOverD, FourOverThreePlusD]) },
    Clause { regime: Regime::Bounded, positive_gamma: false, label: "ii", quantity: GB, lower: lt(ROOTS_LO), upper: lt(ROOTS_HI) },
    Clause { regime: Regime::Bounded, positive_gamma: false, label: "iii", quantity: GB, lower: lt(&[AbsGamma]), upper: le(&[OnePlusAbsGamma, TwiceAbsGamma]) },
    // Quadratic potential, γ, b > 0.
    Clause { regime: Regime::Quadratic, positive_gamma: true, label: "i", quantity: G, lower: None, upper: lt(&[InvSqrtD, TwoOverD]) },
    Clause { regime: Regime::Quadratic, positive_gamma: true, label: "ii", quantity: GB, lower: le(ROOTS_LO), upper: le(ROOTS_HI) },
    Clause { regime: Regime::Quadratic, positive_gamma: true, label: "iii", quantity: GB, lower: None, upper: lt(&[OneMinusGamma, TwoOverD]) },
    // Quadratic potential, γ, b < 0.
    Clause { regime: Regime::Quadratic, positive_gamma: false, label: "i", quantity: G, lower: None, upper: lt(&[TwoOverD]) },
    Clause { regime: Regime::Quadratic, positive_gamma: false, label: "ii", quantity: GB, lower: le(ROOTS_LO), upper: le(ROOTS_HI) },
    Clause { regime: Regime::Quadratic, positive_gamma: false, label: "iii", quantity: GB, lower: lt(&[AbsGamma]), upper: lt(&[OnePlusAbsGamma, TwoOverD]) },
    // Trivial potential, γ, b > 0.
    Clause { regime: Regime::Trivial, positive_gamma: true, label: "i", quantity: G, lower: None, upper: lt(&[InvSqrtDMinusOne]) },
    Clause { regime: Regime::Trivial, positive_gamma: true, label: "ii", quantity: GB, lower: lt(ROOTS_LO), upper: lt(ROOTS_HI) },
    // Trivial potential, γ < 0, b < -1 (equivalently γb > |γ|).
    Clause { regime: Regime::Trivial, positive_gamma: false, label: "i", quantity: G, lower: None, upper: lt(&[TwoOverD]) },
    Clause { regime: Regime::Trivial, positive_gamma: false, label: "ii", quantity: GB, lower: lt(ROOTS_LO), upper: lt(ROOTS_HI) },
    Clause { regime: Regime::Trivial, positive_gamma: false, label: "b<-1", quantity: GB, lower: lt(&[AbsGamma]), upper: None },
];

pub fn clauses_for(regime: Regime, gamma: f64) -> impl Iterator<Item = &'static Clause> {
    let positive = gamma > 0.0;
    CLAUSES
        .iter()
        .filter(move |c| c.regime == regime && c.positive_gamma == positive)
}

/// Resolved numeric bound; `None` value means the bound is undefined and the
/// clause cannot hold.
fn resolve(bound: &Bound, gamma: f64, dim: usize, upper: bool) -> Option<f64> {
    let mut acc = if upper { f64::INFINITY } else { f64::NEG_INFINITY };
    for e in bound.exprs {
        let v = e.eval(gamma, dim)?;
        acc = if upper { acc.min(v) } else { acc.max(v) };
    }
    Some(acc)
}

impl Clause {
    pub fn holds(&self, gamma: f64, b: f64, dim: usize) -> bool {
        let x = match self.quantity {
            Quantity::AbsGamma => gamma.abs(),
            Quantity::GammaB => gamma * b,
        };
        let lower_ok = match &self.lower {
            None => true,
            Some(bd) => match resolve(bd, gamma, dim, false) {
                None => false,
                Some(v) => {
                    if bd.strict {
                        x > v
                    } else {
                        x >= v
                    }
                }
            },
        };
        let upper_ok = match &self.upper {
            None => true,
            Some(bd) => match resolve(bd, gamma, dim, true) {
                None => false,
                Some(v) => {
                    if bd.strict {
                        x < v
                    } else {
                        x <= v
                    }
                }
            },
        };
        lower_ok && upper_ok
    }
}

/// Interval of `γb` values with per-endpoint closedness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub lower_closed: bool,
    pub upper: f64,
    pub upper_closed: bool,
}

impl Interval {
    pub fn everything() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            lower_closed: false,
            upper: f64::INFINITY,
            upper_closed: false,
        }
    }

    pub fn empty() -> Self {
        Self {
            lower: 1.0,
            lower_closed: false,
            upper: 0.0,
            upper_closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let lo = if self.lower_closed { x >= self.lower } else { x > self.lower };
        let hi = if self.upper_closed { x <= self.upper } else { x < self.upper };
        lo && hi
    }

    pub fn is_empty(&self) -> bool {
        if self.lower.is_nan() || self.upper.is_nan() {
            return true;
        }
        if self.lower < self.upper {
            false
        } else if self.lower == self.upper {
            !(self.lower_closed && self.upper_closed)
        } else {
            true
        }
    }

    /// Midpoint, or the single point of a degenerate closed interval.
    pub fn midpoint(&self) -> Option<f64> {
        (!self.is_empty() && self.lower.is_finite() && self.upper.is_finite())
            .then_some(0.5 * (self.lower + self.upper))
    }

    fn tighten_lower(&mut self, v: f64, strict: bool) {
        if v > self.lower || (v == self.lower && strict) {
            self.lower = v;
            self.lower_closed = !strict;
        }
    }

    fn tighten_upper(&mut self, v: f64, strict: bool) {
        if v < self.upper || (v == self.upper && strict) {
            self.upper = v;
            self.upper_closed = !strict;
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        write!(
            f,
            "{}{:.6}, {:.6}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

/// Intersection of all `γb` clauses for the regime, together with the sign
/// convention `γb > 0`. Empty if clause (i) fails.
pub fn admissible_interval(gamma: f64, dim: usize, regime: Regime) -> Result<Interval> {
    validate_gamma(gamma, dim)?;
    let mut iv = Interval::everything();
    iv.tighten_lower(0.0, true);
    for clause in clauses_for(regime, gamma) {
        match clause.quantity {
            Quantity::AbsGamma => {
                if !clause.holds(gamma, 0.0, dim) {
                    return Ok(Interval::empty());
                }
            }
            Quantity::GammaB => {
                if let Some(bd) = &clause.lower {
                    match resolve(bd, gamma, dim, false) {
                        Some(v) => iv.tighten_lower(v, bd.strict),
                        None => return Ok(Interval::empty()),
                    }
                }
                if let Some(bd) = &clause.upper {
                    match resolve(bd, gamma, dim, true) {
                        Some(v) => iv.tighten_upper(v, bd.strict),
                        None => return Ok(Interval::empty()),
                    }
                }
            }
        }
    }
    Ok(iv)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseVerdict {
    pub label: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignFlags {
    pub c0_nonpositive: bool,
    pub c0_negative: bool,
    pub c1_nonpositive: bool,
    pub c1_negative: bool,
    pub c3_negative: bool,
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub gamma: f64,
    pub b: f64,
    pub dim: usize,
    pub regime: Regime,
    pub clauses: Vec<ClauseVerdict>,
    /// `γb > 0`; reported rather than enforced so sweeps can cover the plane.
    pub sign_convention: bool,
    pub coefficients: CoefficientSet,
    pub gamma_b_interval: Interval,
    pub sign_flags: SignFlags,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.sign_convention && self.clauses.iter().all(|c| c.holds)
    }

    /// The coefficient signs the decay argument relies on in this regime.
    pub fn required_signs_hold(&self) -> bool {
        let s = &self.sign_flags;
        match self.regime {
            Regime::Bounded => s.c0_negative && s.c1_nonpositive,
            Regime::Quadratic => s.c0_nonpositive && s.c1_negative && s.c3_negative,
            Regime::Trivial => s.c0_negative,
        }
    }
}

pub fn check(gamma: f64, b: f64, dim: usize, potential: &Potential) -> Result<AdmissibilityReport> {
    check_regime(gamma, b, dim, Regime::for_potential(potential))
}

pub fn check_regime(gamma: f64, b: f64, dim: usize, regime: Regime) -> Result<AdmissibilityReport> {
    validate_gamma(gamma, dim)?;
    if !b.is_finite() {
        return Err(Error::domain(format!("b must be finite, got {b}")));
    }
    let clauses = clauses_for(regime, gamma)
        .map(|c| ClauseVerdict {
            label: c.label,
            holds: c.holds(gamma, b, dim),
        })
        .collect();
    let co = coefficients(gamma, b, dim);
    Ok(AdmissibilityReport {
        gamma,
        b,
        dim,
        regime,
        clauses,
        sign_convention: gamma * b > 0.0,
        coefficients: co,
        gamma_b_interval: admissible_interval(gamma, dim, regime)?,
        sign_flags: SignFlags {
            c0_nonpositive: co.c0 <= 0.0,
            c0_negative: co.c0 < 0.0,
            c1_nonpositive: co.c1 <= 0.0,
            c1_negative: co.c1 < 0.0,
            c3_negative: co.c3 < 0.0,
        },
    })
}

/// Supremum of `|γ|` allowed by clause (i) for the given sign of `γ`.
pub fn clause_one_limit(regime: Regime, positive_gamma: bool, dim: usize) -> f64 {
    let probe = if positive_gamma { 1.0 } else { -1.0 };
    let clause = clauses_for(regime, probe)
        .find(|c| c.quantity == Quantity::AbsGamma)
        .expect("every regime has a clause on gamma");
    let bound = clause.upper.expect("clause (i) is an upper bound");
    let limit = resolve(&bound, probe, dim, true).unwrap_or(f64::INFINITY);
    if positive_gamma {
        limit
    } else {
        // γ < 0 is also limited by -2/d.
        limit.min(2.0 / dim as f64)
    }
}
