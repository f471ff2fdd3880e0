//! Bures angle and the open-system quantum speed limit time of the probe.
//!
//! For the initially excited probe the fidelity with the initial state is
//! `|C₁(τ)|²`, and the speed limit reads
//!
//! ```text
//! τ_QSL = τ (1 − |C₁(τ)|²) / ∫₀^τ |∂ₜ|C₁(t)|²| dt.
//! ```

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dynamics::{analytic_trajectory, solve_amplitude, AmplitudeTrajectory, SimulationConfig};
use crate::error::{Error, Result};
use crate::spectral::{DensityKind, SpectralDensity};
use crate::sweep::{opt_field, run_cells, validate_scan, SweepRow, SweepTable};

/// Minimum number of samples accepted by [`qsl_time`].
pub const MIN_SAMPLES: usize = 100;

const NORM_SLACK: f64 = 1e-8;
const FROZEN_THRESHOLD: f64 = 1e-12;

/// `arccos |C₁(τ)|`, the Bures angle between the excited initial state and
/// the evolved probe state.
pub fn bures_angle(c1_at_tau: Complex64) -> Result<f64> {
    let magnitude = c1_at_tau.norm();
    if !(magnitude <= 1.0 + NORM_SLACK) {
        return Err(Error::Domain(format!(
            "Bures angle needs |C1| <= 1, got {magnitude}"
        )));
    }
    Ok(magnitude.min(1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslResult {
    pub tau: f64,
    pub tau_qsl: f64,
    /// `tau_qsl / tau`.
    pub ratio: f64,
    /// `1 − |C₁(τ)|²`.
    pub numerator: f64,
    /// `∫₀^τ |∂ₜ|C₁|²| dt`.
    pub denominator: f64,
}

/// Speed limit time for the driving time spanned by `trajectory`.
///
/// The population is treated as piecewise linear between samples, so its
/// derivative on each interval is the centered difference at the interval
/// midpoint and the integral of its magnitude is `Σ |p_{k+1} − p_k|`. This
/// telescopes to `1 − p(τ)` whenever the samples are monotone, and never
/// falls below it.
pub fn qsl_time(trajectory: &AmplitudeTrajectory) -> Result<QslResult> {
    if trajectory.len() < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "speed limit needs at least {MIN_SAMPLES} samples, got {}",
            trajectory.len()
        )));
    }
    let population = trajectory.population();
    let tau = trajectory.horizon();
    // 1 − p(τ), telescoped in the same order as the denominator so that
    // monotone samples give a ratio of exactly one.
    let mut numerator = 1.0 - population[0];
    let mut denominator = 0.0;
    for w in population.windows(2) {
        let drop = w[0] - w[1];
        numerator += drop;
        denominator += drop.abs();
    }
    if denominator < FROZEN_THRESHOLD {
        return Err(Error::NoEvolution);
    }
    let ratio = numerator / denominator;
    Ok(QslResult {
        tau,
        tau_qsl: tau * ratio,
        ratio,
        numerator,
        denominator,
    })
}

/// One `(coupling, N)` cell of a speed-limit sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct QslRow {
    pub coupling: f64,
    pub n_qubits: usize,
    pub tau: f64,
    pub outcome: std::result::Result<QslResult, Error>,
}

impl QslRow {
    pub fn tau_qsl(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.tau_qsl)
    }

    pub fn ratio(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.ratio)
    }

    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(_) => "ok",
            Err(Error::NoEvolution) => "no_evolution",
            Err(Error::Unstable { .. }) => "unstable",
            Err(_) => "error",
        }
    }
}

impl SweepRow for QslRow {
    const HEADER: &'static str = "coupling,N,tau,tau_qsl,ratio,status";

    fn coupling(&self) -> f64 {
        self.coupling
    }

    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn write_csv(&self, out: &mut String) {
        let _ = write!(out, "{},{},{},", self.coupling, self.n_qubits, self.tau);
        opt_field(out, self.tau_qsl());
        out.push(',');
        opt_field(out, self.ratio());
        let _ = write!(out, ",{}", self.status());
    }
}

/// Amplitude for one cell: closed form for Lorentzian reservoirs, the
/// Volterra solver otherwise.
pub fn cell_trajectory(config: &SimulationConfig) -> Result<AmplitudeTrajectory> {
    match config.sd.kind() {
        DensityKind::Lorentzian { .. } => analytic_trajectory(config),
        DensityKind::Ohmic { .. } => solve_amplitude(config),
    }
}

/// Speed limit time over a coupling grid for each N at fixed driving time.
pub fn qsl_sweep(
    template: &SpectralDensity,
    couplings: &[f64],
    n_list: &[usize],
    tau: f64,
    step: f64,
) -> Result<SweepTable<QslRow>> {
    validate_scan(couplings, n_list)?;
    // Surface configuration errors once rather than in every cell.
    SimulationConfig::new(n_list[0], *template, tau, step)?;
    Ok(run_cells(couplings, n_list, |coupling, n_qubits| QslRow {
        coupling,
        n_qubits,
        tau,
        outcome: template
            .with_coupling(coupling)
            .and_then(|sd| SimulationConfig::new(n_qubits, sd, tau, step))
            .and_then(|config| cell_trajectory(&config))
            .and_then(|traj| qsl_time(&traj)),
    }))
}
