//! Pseudospectral laboratory for traveling solitary waves of the focusing
//! half-wave equation `i u_t = sqrt(-Lap) u - |u|^{p-1} u` on periodic boxes.
//!
//! The library is organised around a [`Grid`] and complex [`Field`]s on it:
//!
//! - [`spectral`]: Fourier multipliers, Riesz transforms and the quadratic form `T_v`
//! - [`solver`]: Petviashvili iteration for traveling-wave profiles
//! - [`identities`]: virial and Pohozaev residuals, probes at `|v| >= 1`
//! - [`evolution`]: split-step time stepping and scattering diagnostics
//! - [`kernel`]: the resolvent kernel of `sqrt(-Lap) + i v.grad + 1` by quadrature
//!
//! Everything is deterministic: no global mutable state, and random seeds are
//! explicit.

pub mod config;
pub mod error;
pub mod evolution;
pub mod fft;
pub mod field;
pub mod grid;
pub mod identities;
pub mod io;
pub mod kernel;
pub mod lab;
pub mod manifest;
pub mod params;
pub mod solver;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use field::Field;
pub use grid::Grid;
pub use params::{critical_exponent, Velocity, WaveParams};
pub use solver::{ProfileResult, SeedProfile, SolverConfig};
