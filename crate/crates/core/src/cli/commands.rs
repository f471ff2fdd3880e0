//! Command implementations. Every file goes through [`OutputWriter`], which
//! checksums it for the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::config::{Command, ConfigError, DensityName, MethodChoice, OutputEntry, Panel, Params, RunManifest};
use super::svg::{LineChart, Series};
use crate::boundstate::{bound_energy_scan, BoundRow};
use crate::dynamics::{analytic_trajectory, decay_rate, solve_amplitude, AmplitudeTrajectory};
use crate::qsl::{qsl_sweep, QslRow};
use crate::sweep::{coupling_grid, SweepTable};

pub const MANIFEST_NAME: &str = "manifest.txt";

/// Failure of a whole run, classified by exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Usage(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(#[from] crate::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("output {name} differs from the manifest checksum (expected {expected}, got {actual})")]
    ChecksumMismatch {
        name: String,
        expected: String,
        actual: String,
    },
    #[error("manifest lists {0}, which this run did not produce")]
    MissingOutput(String),
}

impl RunError {
    /// 2 for usage errors, 3 for numeric failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(ConfigError::Io { .. }) => 1,
            RunError::Usage(_) => 2,
            RunError::Numeric(_) | RunError::ChecksumMismatch { .. } | RunError::MissingOutput(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Single funnel for output files.
#[derive(Debug)]
pub struct OutputWriter {
    dir: PathBuf,
    written: Vec<OutputEntry>,
}

impl OutputWriter {
    pub fn create(dir: &Path) -> Result<Self, RunError> {
        fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| RunError::Io { path, source })?;
        self.written.push(OutputEntry {
            name: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn entries(&self) -> &[OutputEntry] {
        &self.written
    }
}

fn density_label(p: &Params) -> String {
    match p.density {
        DensityName::Lorentzian => format!("Lorentzian, λ = {}", p.lambda.unwrap_or(1.0)),
        DensityName::Ohmic => format!("Ohmic, ω_c = {}", p.omega_c.unwrap_or(1.0)),
    }
}

fn coupling_label(p: &Params) -> &'static str {
    match p.density {
        DensityName::Lorentzian => "γ₀ (units of ω₀)",
        DensityName::Ohmic => "γ",
    }
}

fn trajectory_for(p: &Params) -> Result<AmplitudeTrajectory, RunError> {
    let config = p.simulation_config()?;
    let traj = match (p.method, p.density) {
        (MethodChoice::Analytic, _) | (MethodChoice::Auto, DensityName::Lorentzian) => {
            analytic_trajectory(&config)?
        }
        (MethodChoice::Volterra, _) | (MethodChoice::Auto, DensityName::Ohmic) => {
            solve_amplitude(&config)?
        }
    };
    Ok(traj)
}

/// `dynamics`: trajectory.csv, gamma.csv and trajectory.svg.
pub fn run_dynamics(p: &Params, out: &mut OutputWriter) -> Result<(), RunError> {
    let traj = trajectory_for(p)?;
    let rate = decay_rate(&traj);
    out.write("trajectory.csv", &traj.to_csv())?;
    out.write("gamma.csv", &rate.to_csv())?;
    let coupling = p.gamma0.or(p.gamma).unwrap_or(0.0);
    let chart = LineChart {
        title: format!(
            "|C₁(t)|², {}, coupling {}, N = {} ({})",
            density_label(p),
            coupling,
            p.n,
            traj.method().as_str()
        ),
        x_label: "t (units of 1/ω₀)".into(),
        y_label: "|C₁(t)|²".into(),
        series: vec![Series {
            label: format!("N = {}", p.n),
            points: traj
                .times()
                .iter()
                .zip(traj.population())
                .map(|(&t, &pop)| (t, Some(pop)))
                .collect(),
        }],
    };
    out.write("trajectory.svg", &chart.to_svg())
}

fn grid(p: &Params) -> Result<Vec<f64>, RunError> {
    Ok(coupling_grid(p.grid_start, p.grid_stop, p.grid_step)?)
}

pub fn bound_table(p: &Params) -> Result<SweepTable<BoundRow>, RunError> {
    Ok(bound_energy_scan(&p.spectral_density()?, &grid(p)?, &p.n_list, p.tol)?)
}

pub fn qsl_table(p: &Params) -> Result<SweepTable<QslRow>, RunError> {
    Ok(qsl_sweep(&p.spectral_density()?, &grid(p)?, &p.n_list, p.tau, p.step)?)
}

fn bound_chart(p: &Params, table: &SweepTable<BoundRow>) -> LineChart {
    LineChart {
        title: format!("Bound-state energy, {}", density_label(p)),
        x_label: coupling_label(p).into(),
        y_label: "E (units of ω₀)".into(),
        series: table
            .n_values()
            .into_iter()
            .map(|n| Series {
                label: format!("N = {n}"),
                points: table.series(n).map(|r| (r.coupling, r.energy())).collect(),
            })
            .collect(),
    }
}

fn qsl_chart(p: &Params, table: &SweepTable<QslRow>) -> LineChart {
    LineChart {
        title: format!("QSL time, {}, τ = {}", density_label(p), p.tau),
        x_label: coupling_label(p).into(),
        y_label: "τ_QSL (units of 1/ω₀)".into(),
        series: table
            .n_values()
            .into_iter()
            .map(|n| Series {
                label: format!("N = {n}"),
                points: table.series(n).map(|r| (r.coupling, r.tau_qsl())).collect(),
            })
            .collect(),
    }
}

/// `bound-scan`: bound_scan.csv and bound_scan.svg.
pub fn run_bound_scan(p: &Params, out: &mut OutputWriter) -> Result<(), RunError> {
    let table = bound_table(p)?;
    out.write("bound_scan.csv", &table.to_csv())?;
    out.write("bound_scan.svg", &bound_chart(p, &table).to_svg())
}

/// `qsl-sweep`: qsl_sweep.csv and qsl_sweep.svg.
pub fn run_qsl_sweep(p: &Params, out: &mut OutputWriter) -> Result<(), RunError> {
    let table = qsl_table(p)?;
    out.write("qsl_sweep.csv", &table.to_csv())?;
    out.write("qsl_sweep.svg", &qsl_chart(p, &table).to_svg())
}

/// `reproduce <panel>`: `<panel>.csv` and `<panel>.svg`.
pub fn run_reproduce(panel: Panel, p: &Params, out: &mut OutputWriter) -> Result<(), RunError> {
    let name = panel.as_str();
    if panel.is_energy() {
        let table = bound_table(p)?;
        out.write(&format!("{name}.csv"), &table.to_csv())?;
        out.write(&format!("{name}.svg"), &bound_chart(p, &table).to_svg())
    } else {
        let table = qsl_table(p)?;
        out.write(&format!("{name}.csv"), &table.to_csv())?;
        out.write(&format!("{name}.svg"), &qsl_chart(p, &table).to_svg())
    }
}

/// Runs a resolved manifest: writes all outputs and `manifest.txt`, then
/// checks any checksums the manifest was loaded with.
pub fn execute(mut manifest: RunManifest) -> Result<RunManifest, RunError> {
    let mut out = OutputWriter::create(&manifest.params.out)?;
    let p = manifest.params.clone();
    match manifest.command {
        Command::Dynamics => run_dynamics(&p, &mut out)?,
        Command::BoundScan => run_bound_scan(&p, &mut out)?,
        Command::QslSweep => run_qsl_sweep(&p, &mut out)?,
        Command::Reproduce(panel) => run_reproduce(panel, &p, &mut out)?,
    }
    manifest.outputs = out.entries().to_vec();
    let path = p.out.join(MANIFEST_NAME);
    fs::write(&path, manifest.to_text()).map_err(|source| RunError::Io { path, source })?;

    for expected in &manifest.expected_outputs {
        let Some(actual) = manifest.outputs.iter().find(|o| o.name == expected.name) else {
            return Err(RunError::MissingOutput(expected.name.clone()));
        };
        if actual.sha256 != expected.sha256 {
            return Err(RunError::ChecksumMismatch {
                name: expected.name.clone(),
                expected: expected.sha256.clone(),
                actual: actual.sha256.clone(),
            });
        }
    }
    Ok(manifest)
}
