//! Run configuration: flat `key = value` files, command-line flags, and the
//! run manifest that records every resolved value and emitted file.
//!
//! A written manifest is itself a valid configuration file. Its `output.*`
//! entries hold SHA-256 checksums; feeding it back with `--config` re-runs
//! the command and checks that every output is byte-identical.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use thiserror::Error;

use crate::boundstate::DEFAULT_ENERGY_TOL;
use crate::dynamics::{SimulationConfig, DEFAULT_HORIZON, DEFAULT_SOLVER_TOL, DEFAULT_STEP};
use crate::spectral::{DensityKind, SpectralDensity};

/// Usage-level problems: anything the user can fix by editing flags or the
/// configuration file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("config line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("missing required {0}")]
    Missing(String),
    #[error("invalid value for {flag}: `{value}` ({reason})")]
    BadValue {
        flag: String,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
}

impl Panel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Panel::Fig1a => "fig1a",
            Panel::Fig1b => "fig1b",
            Panel::Fig2a => "fig2a",
            Panel::Fig2b => "fig2b",
        }
    }

    pub fn density(&self) -> DensityName {
        match self {
            Panel::Fig1a | Panel::Fig1b => DensityName::Lorentzian,
            Panel::Fig2a | Panel::Fig2b => DensityName::Ohmic,
        }
    }

    /// Bound-energy panels (as opposed to speed-limit panels).
    pub fn is_energy(&self) -> bool {
        matches!(self, Panel::Fig1a | Panel::Fig2a)
    }
}

impl FromStr for Panel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig1a" => Ok(Panel::Fig1a),
            "fig1b" => Ok(Panel::Fig1b),
            "fig2a" => Ok(Panel::Fig2a),
            "fig2b" => Ok(Panel::Fig2b),
            _ => Err("expected one of fig1a, fig1b, fig2a, fig2b".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dynamics,
    BoundScan,
    QslSweep,
    Reproduce(Panel),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dynamics => "dynamics",
            Command::BoundScan => "bound-scan",
            Command::QslSweep => "qsl-sweep",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityName {
    Lorentzian,
    Ohmic,
}

impl DensityName {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityName::Lorentzian => "lorentzian",
            DensityName::Ohmic => "ohmic",
        }
    }
}

impl FromStr for DensityName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lorentzian" => Ok(DensityName::Lorentzian),
            "ohmic" => Ok(DensityName::Ohmic),
            _ => Err("expected lorentzian or ohmic".into()),
        }
    }
}

/// Which amplitude path the `dynamics` command uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    /// Closed form for Lorentzian, Volterra solver otherwise.
    Auto,
    Analytic,
    Volterra,
}

impl MethodChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Analytic => "analytic",
            MethodChoice::Volterra => "volterra",
        }
    }
}

impl FromStr for MethodChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "analytic" => Ok(MethodChoice::Analytic),
            "volterra" => Ok(MethodChoice::Volterra),
            _ => Err("expected auto, analytic or volterra".into()),
        }
    }
}

/// Command-line flags shared by every command. All optional: unset flags
/// fall back to the config file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Reservoir spectral density: lorentzian or ohmic.
    #[arg(long)]
    pub density: Option<String>,
    /// Qubit transition frequency (all other frequencies share its unit).
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Lorentzian coupling strength.
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Lorentzian spectral width.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Ohmic dimensionless coupling.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Ohmic cutoff frequency.
    #[arg(long = "omega-c")]
    pub omega_c: Option<f64>,
    /// Number of qubits N (probe plus N-1 spectators).
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated N values for scans.
    #[arg(long = "n-list")]
    pub n_list: Option<String>,
    /// Driving time / integration horizon.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Time step.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long = "grid-start")]
    pub grid_start: Option<f64>,
    #[arg(long = "grid-stop")]
    pub grid_stop: Option<f64>,
    #[arg(long = "grid-step")]
    pub grid_step: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value configuration file (a previous manifest works).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Bound-state energy resolution.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Amplitude tolerance for the Volterra solver.
    #[arg(long = "solver-tol")]
    pub solver_tol: Option<f64>,
    /// Amplitude path for `dynamics`: auto, analytic or volterra.
    #[arg(long)]
    pub method: Option<String>,
}

// (config key, flag spelling)
const KEYS: [(&str, &str); 19] = [
    ("command", "command"),
    ("panel", "panel"),
    ("density", "--density"),
    ("omega0", "--omega0"),
    ("gamma0", "--gamma0"),
    ("lambda", "--lambda"),
    ("gamma", "--gamma"),
    ("omega_c", "--omega-c"),
    ("n", "--n"),
    ("n_list", "--n-list"),
    ("tau", "--tau"),
    ("step", "--step"),
    ("grid_start", "--grid-start"),
    ("grid_stop", "--grid-stop"),
    ("grid_step", "--grid-step"),
    ("tol", "--tol"),
    ("solver_tol", "--solver-tol"),
    ("out", "--out"),
    ("method", "--method"),
];

const OUTPUT_PREFIX: &str = "output.";

fn flag_for(key: &str) -> &'static str {
    KEYS.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, f)| *f)
        .unwrap_or("?")
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut push = |key: &'static str, value: Option<String>| {
            if let Some(value) = value {
                v.push((key, value));
            }
        };
        push("density", self.density.clone());
        push("omega0", self.omega0.map(|x| x.to_string()));
        push("gamma0", self.gamma0.map(|x| x.to_string()));
        push("lambda", self.lambda.map(|x| x.to_string()));
        push("gamma", self.gamma.map(|x| x.to_string()));
        push("omega_c", self.omega_c.map(|x| x.to_string()));
        push("n", self.n.map(|x| x.to_string()));
        push("n_list", self.n_list.clone());
        push("tau", self.tau.map(|x| x.to_string()));
        push("step", self.step.map(|x| x.to_string()));
        push("grid_start", self.grid_start.map(|x| x.to_string()));
        push("grid_stop", self.grid_stop.map(|x| x.to_string()));
        push("grid_step", self.grid_step.map(|x| x.to_string()));
        push("tol", self.tol.map(|x| x.to_string()));
        push("solver_tol", self.solver_tol.map(|x| x.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("method", self.method.clone());
        v
    }
}

/// One `key = value` entry of a configuration file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses flat `key = value` text: one entry per line, `#` starts a
/// comment line, blank lines ignored, keys unique. Keys are not checked
/// against the known set here.
pub fn parse_kv(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                reason: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
        {
            return Err(ConfigError::Syntax {
                line,
                reason: format!("malformed key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                reason: format!("empty value for `{key}`"),
            });
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::Syntax {
                line,
                reason: format!("duplicate key `{key}`"),
            });
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(entries)
}

/// Where a resolved value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Default,
    File,
    Flag,
    /// A flag replaced this value from the file.
    FlagOverFile(String),
    /// Fixed by the reproduced panel.
    Panel,
}

/// Fully resolved parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub density: DensityName,
    pub omega0: f64,
    pub gamma0: Option<f64>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub omega_c: Option<f64>,
    pub n: usize,
    pub n_list: Vec<usize>,
    pub tau: f64,
    pub step: f64,
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_step: f64,
    pub tol: f64,
    pub solver_tol: f64,
    pub out: PathBuf,
    pub method: MethodChoice,
}

impl Params {
    /// Spectral density with the configured coupling (zero if unset, as in
    /// scan templates).
    pub fn spectral_density(&self) -> crate::Result<SpectralDensity> {
        let kind = match self.density {
            DensityName::Lorentzian => DensityKind::Lorentzian {
                gamma0: self.gamma0.unwrap_or(0.0),
                lambda: self.lambda.unwrap_or(1.0),
            },
            DensityName::Ohmic => DensityKind::Ohmic {
                gamma: self.gamma.unwrap_or(0.0),
                omega_c: self.omega_c.unwrap_or(1.0),
            },
        };
        SpectralDensity::new(self.omega0, kind)
    }

    pub fn simulation_config(&self) -> crate::Result<SimulationConfig> {
        SimulationConfig::new(self.n, self.spectral_density()?, self.tau, self.step)?
            .with_solver_tol(self.solver_tol)
    }
}

/// A checksummed output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputEntry {
    pub name: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub params: Params,
    pub provenance: BTreeMap<String, Provenance>,
    /// Files written by this run. Runs are seedless, so these checksums are
    /// a pure function of `command` and `params`.
    pub outputs: Vec<OutputEntry>,
    /// Checksums carried in by a manifest used as config; checked after the run.
    pub expected_outputs: Vec<OutputEntry>,
}

struct Resolver {
    values: BTreeMap<&'static str, (String, Provenance)>,
}

impl Resolver {
    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| ConfigError::BadValue {
                flag: flag_for(key).to_string(),
                value: v.to_string(),
                reason: e.to_string(),
            }),
        }
    }

    fn or_default<T: FromStr>(
        &self,
        key: &'static str,
        default: T,
        provenance: &mut BTreeMap<String, Provenance>,
    ) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.parsed(key)? {
            Some(v) => Ok(v),
            None => {
                provenance.insert(key.to_string(), Provenance::Default);
                Ok(default)
            }
        }
    }
}

fn parse_n_list(raw: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = |reason: &str| ConfigError::BadValue {
        flag: "--n-list".into(),
        value: raw.to_string(),
        reason: reason.to_string(),
    };
    let mut list = Vec::new();
    for part in raw.split(',') {
        let n: usize = part.trim().parse().map_err(|_| bad("expected comma-separated integers"))?;
        if n == 0 {
            return Err(bad("N must be >= 1"));
        }
        list.push(n);
    }
    list.sort_unstable();
    list.dedup();
    Ok(list)
}

fn panel_grid(density: DensityName) -> (f64, f64, f64) {
    match density {
        DensityName::Lorentzian => (0.0, 4.0, 0.05),
        DensityName::Ohmic => (0.0, 8.0, 0.1),
    }
}

/// Default N set for scans and reproduced panels.
pub const DEFAULT_N_LIST: [usize; 4] = [1, 2, 4, 10];

/// Reads the optional config file, then resolves it with the flags.
pub fn parse_config(command: Command, flags: &Flags) -> Result<RunManifest, ConfigError> {
    let text = match &flags.config {
        Some(path) => Some(read_config(path)?),
        None => None,
    };
    parse_config_text(command, text.as_deref(), flags)
}

fn read_config(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Resolves a configuration from file text (if any) and flags. Flags win
/// over the file; every value left unset is filled with its default and
/// marked as such.
pub fn parse_config_text(
    command: Command,
    file_text: Option<&str>,
    flags: &Flags,
) -> Result<RunManifest, ConfigError> {
    let mut values: BTreeMap<&'static str, (String, Provenance)> = BTreeMap::new();
    let mut expected_outputs = Vec::new();

    if let Some(text) = file_text {
        for entry in parse_kv(text)? {
            if let Some(name) = entry.key.strip_prefix(OUTPUT_PREFIX) {
                if name.is_empty() || name.contains('/') || name.contains('\\') || name.starts_with('.') {
                    return Err(ConfigError::Syntax {
                        line: entry.line,
                        reason: format!("bad output name `{name}`"),
                    });
                }
                if entry.value.len() != 64 || !entry.value.bytes().all(|b| b.is_ascii_hexdigit()) {
                    return Err(ConfigError::Syntax {
                        line: entry.line,
                        reason: format!("`{}` is not a SHA-256 digest", entry.key),
                    });
                }
                expected_outputs.push(OutputEntry {
                    name: name.to_string(),
                    sha256: entry.value.to_ascii_lowercase(),
                });
                continue;
            }
            let Some((key, _)) = KEYS.iter().find(|(k, _)| *k == entry.key) else {
                return Err(ConfigError::UnknownKey {
                    line: entry.line,
                    key: entry.key,
                });
            };
            values.insert(key, (entry.value, Provenance::File));
        }
    }

    // The command cannot be changed by a file.
    if let Some((file_cmd, _)) = values.remove("command") {
        if file_cmd != command.name() {
            return Err(ConfigError::Conflict(format!(
                "config file is for `{file_cmd}`, but `{}` was requested",
                command.name()
            )));
        }
    }
    let file_panel = values.remove("panel").map(|(v, _)| v);
    if let Command::Reproduce(panel) = command {
        if let Some(p) = file_panel.filter(|p| p != panel.as_str()) {
            return Err(ConfigError::Conflict(format!(
                "config file is for panel `{p}`, but `{}` was requested",
                panel.as_str()
            )));
        }
    }

    for (key, value) in flags.pairs() {
        let provenance = match values.get(key) {
            Some((old, _)) => Provenance::FlagOverFile(old.clone()),
            None => Provenance::Flag,
        };
        values.insert(key, (value, provenance));
    }

    let mut provenance: BTreeMap<String, Provenance> = values
        .iter()
        .map(|(k, (_, p))| (k.to_string(), p.clone()))
        .collect();
    let r = Resolver { values };

    // Density: mandatory except for reproduced panels, which fix it.
    let density = match command {
        Command::Reproduce(panel) => {
            let fixed = panel.density();
            if let Some(d) = r.parsed::<DensityName>("density")? {
                if d != fixed {
                    return Err(ConfigError::Conflict(format!(
                        "panel {} uses the {} density; --density {} conflicts",
                        panel.as_str(),
                        fixed.as_str(),
                        d.as_str()
                    )));
                }
            }
            provenance.insert("density".into(), Provenance::Panel);
            fixed
        }
        _ => r
            .parsed::<DensityName>("density")?
            .ok_or_else(|| ConfigError::Missing("--density (lorentzian or ohmic)".into()))?,
    };

    let (lorentz_keys, ohmic_keys) = (["gamma0", "lambda"], ["gamma", "omega_c"]);
    let foreign = match density {
        DensityName::Lorentzian => ohmic_keys,
        DensityName::Ohmic => lorentz_keys,
    };
    for key in foreign {
        if r.raw(key).is_some() {
            return Err(ConfigError::Conflict(format!(
                "{} does not apply to the {} density",
                flag_for(key),
                density.as_str()
            )));
        }
    }

    let is_scan = !matches!(command, Command::Dynamics);
    let coupling_key = match density {
        DensityName::Lorentzian => "gamma0",
        DensityName::Ohmic => "gamma",
    };
    let coupling: Option<f64> = r.parsed(coupling_key)?;
    match (is_scan, coupling) {
        (false, None) => return Err(ConfigError::Missing(flag_for(coupling_key).to_string())),
        (true, Some(_)) => {
            return Err(ConfigError::Conflict(format!(
                "{} is scanned by `{}`; use --grid-start/--grid-stop/--grid-step",
                flag_for(coupling_key),
                command.name()
            )))
        }
        _ => {}
    }

    let (gamma0, gamma) = match density {
        DensityName::Lorentzian => (coupling, None),
        DensityName::Ohmic => (None, coupling),
    };
    let width_key = match density {
        DensityName::Lorentzian => "lambda",
        DensityName::Ohmic => "omega_c",
    };
    let width: f64 = if matches!(command, Command::Reproduce(_)) && r.raw(width_key).is_none() {
        provenance.insert(width_key.into(), Provenance::Panel);
        1.0
    } else {
        r.or_default(width_key, 1.0, &mut provenance)?
    };
    let (lambda, omega_c) = match density {
        DensityName::Lorentzian => (Some(width), None),
        DensityName::Ohmic => (None, Some(width)),
    };

    if matches!(command, Command::Dynamics) {
        if r.raw("n_list").is_some() {
            return Err(ConfigError::Conflict("--n-list applies to scans; use --n".into()));
        }
        if let Some(key) = ["grid_start", "grid_stop", "grid_step"].into_iter().find(|k| r.raw(k).is_some()) {
            return Err(ConfigError::Conflict(format!("{} applies only to scans", flag_for(key))));
        }
    }
    if is_scan && r.raw("n").is_some() {
        return Err(ConfigError::Conflict(format!(
            "`{}` takes --n-list, not --n",
            command.name()
        )));
    }
    let n = r.or_default("n", 1usize, &mut provenance)?;
    let n_list = match r.raw("n_list") {
        Some(raw) => parse_n_list(raw)?,
        None => {
            provenance.insert("n_list".into(), Provenance::Default);
            DEFAULT_N_LIST.to_vec()
        }
    };
    if n == 0 {
        return Err(ConfigError::Invariant("invariant N >= 1 violated (--n 0)".into()));
    }

    let (gs, ge, gd) = panel_grid(density);
    let method_raw: Option<MethodChoice> = r.parsed("method")?;
    if method_raw.is_some() && is_scan {
        return Err(ConfigError::Conflict("--method applies only to `dynamics`".into()));
    }
    let params = Params {
        density,
        omega0: r.or_default("omega0", 1.0, &mut provenance)?,
        gamma0,
        lambda,
        gamma,
        omega_c,
        n,
        n_list,
        tau: r.or_default("tau", DEFAULT_HORIZON, &mut provenance)?,
        step: r.or_default("step", DEFAULT_STEP, &mut provenance)?,
        grid_start: r.or_default("grid_start", gs, &mut provenance)?,
        grid_stop: r.or_default("grid_stop", ge, &mut provenance)?,
        grid_step: r.or_default("grid_step", gd, &mut provenance)?,
        tol: r.or_default("tol", DEFAULT_ENERGY_TOL, &mut provenance)?,
        solver_tol: r.or_default("solver_tol", DEFAULT_SOLVER_TOL, &mut provenance)?,
        out: r.or_default("out", PathBuf::from("out"), &mut provenance)?,
        method: method_raw.unwrap_or_else(|| {
            provenance.insert("method".into(), Provenance::Default);
            MethodChoice::Auto
        }),
    };
    if !is_scan {
        provenance.remove("n_list");
        provenance.remove("grid_start");
        provenance.remove("grid_stop");
        provenance.remove("grid_step");
    } else {
        provenance.remove("n");
        provenance.remove("method");
    }

    validate(&params, command)?;
    Ok(RunManifest {
        command,
        params,
        provenance,
        outputs: Vec::new(),
        expected_outputs,
    })
}

fn validate(p: &Params, command: Command) -> Result<(), ConfigError> {
    let invariant = |e: crate::Error| ConfigError::Invariant(e.to_string());
    p.spectral_density().map_err(invariant)?;
    // Timing invariants are checked for every command so that a bad --step
    // is reported the same way everywhere.
    SimulationConfig::new(p.n, p.spectral_density().map_err(invariant)?, p.tau, p.step)
        .and_then(|c| c.with_solver_tol(p.solver_tol))
        .map_err(invariant)?;
    if !(p.tol > 0.0) || !p.tol.is_finite() {
        return Err(ConfigError::Invariant(format!(
            "invariant 0 < tol violated (tol = {})",
            p.tol
        )));
    }
    if !matches!(command, Command::Dynamics) {
        crate::sweep::coupling_grid(p.grid_start, p.grid_stop, p.grid_step).map_err(invariant)?;
    }
    if matches!(command, Command::Dynamics) && p.method == MethodChoice::Analytic && p.density != DensityName::Lorentzian {
        return Err(ConfigError::Conflict(
            "--method analytic needs the Lorentzian density".into(),
        ));
    }
    Ok(())
}

fn provenance_note(key: &str, p: &Provenance) -> Option<String> {
    match p {
        Provenance::Default => Some(format!("# default: {key}")),
        Provenance::Panel => Some(format!("# fixed by panel: {key}")),
        Provenance::FlagOverFile(old) => Some(format!(
            "# override: {key} set by {} (config file had {old})",
            flag_for(key)
        )),
        Provenance::File | Provenance::Flag => None,
    }
}

impl RunManifest {
    /// Renders the manifest as a flat key-value file that [`parse_config`]
    /// accepts for the same command.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::from("# qslsim run manifest (deterministic, no random seeds)\n");
        let mut kv = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        kv("command", self.command.name().into());
        let is_scan = !matches!(self.command, Command::Dynamics);
        if let Command::Reproduce(panel) = self.command {
            kv("panel", panel.as_str().into());
        } else {
            kv("density", p.density.as_str().into());
        }
        kv("omega0", p.omega0.to_string());
        match p.density {
            DensityName::Lorentzian => {
                if let Some(g) = p.gamma0 {
                    kv("gamma0", g.to_string());
                }
                kv("lambda", p.lambda.unwrap_or(1.0).to_string());
            }
            DensityName::Ohmic => {
                if let Some(g) = p.gamma {
                    kv("gamma", g.to_string());
                }
                kv("omega_c", p.omega_c.unwrap_or(1.0).to_string());
            }
        }
        if is_scan {
            let list: Vec<String> = p.n_list.iter().map(|n| n.to_string()).collect();
            kv("n_list", list.join(","));
        } else {
            kv("n", p.n.to_string());
            kv("method", p.method.as_str().into());
        }
        kv("tau", p.tau.to_string());
        kv("step", p.step.to_string());
        if is_scan {
            kv("grid_start", p.grid_start.to_string());
            kv("grid_stop", p.grid_stop.to_string());
            kv("grid_step", p.grid_step.to_string());
        }
        kv("tol", p.tol.to_string());
        kv("solver_tol", p.solver_tol.to_string());
        kv("out", p.out.display().to_string());
        for (key, prov) in &self.provenance {
            if let Some(note) = provenance_note(key, prov) {
                out.push_str(&note);
                out.push('\n');
            }
        }
        for o in &self.outputs {
            let _ = writeln!(out, "{OUTPUT_PREFIX}{} = {}", o.name, o.sha256);
        }
        out
    }
}
