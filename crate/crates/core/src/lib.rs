//! Radial inhomogeneous nonlinear Schrödinger laboratory.
//!
//! Solves `i u_t + Δu = ±|x|^{-b}|u|^α u` for radial data on a half-offset
//! grid, computes ground states, and evaluates virial, Morawetz and
//! scattering diagnostics along the flow.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod exponents;
pub mod field;
pub mod groundstate;
pub mod runner;
pub mod weight;

pub use error::{Error, Result};
pub use exponents::{
    classify_regime, critical_exponents, ExponentBundle, PhysParams, Regime, Sign,
};
pub use field::{RadialField, RadialGrid};
