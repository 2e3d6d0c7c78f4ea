//! Radially symmetric porous-medium / fast-diffusion laboratory.
//!
//! Solves `∂ₜn = ∇·(n∇(sign(γ) n^γ + V))` on balls with an explicit
//! conservative finite-volume scheme, evaluates Lipschitz-type functionals
//! along the solution and fits their decay rates.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod params;
pub mod profiles;
pub mod quadrature;
pub mod ratefit;
pub mod rescaling;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use params::{DiffusionParams, GenericPotential, Potential, PotentialSample};
pub use profiles::BarenblattProfile;
pub use grid::{RadialField, RadialGrid};
