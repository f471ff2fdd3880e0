//! Dissipative dynamics of a probe qubit sharing a zero-temperature bosonic
//! reservoir with `N − 1` spectator qubits: reservoir spectral densities and
//! memory kernels, system–reservoir bound states, the probe's excited-state
//! amplitude, and the quantum speed limit time it implies.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundstate;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod qsl;
pub mod quadrature;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use spectral::{DensityKind, SpectralDensity};
