use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qslsim::cli::{execute, parse_config, Command, Flags, Panel};

/// Bound states, non-Markovian decay and quantum speed limits for a probe
/// qubit sharing a zero-temperature reservoir with N-1 spectator qubits.
///
/// Frequencies are in units of omega0 (set --omega0 to change it), times in
/// units of 1/omega0. QSLSIM_THREADS caps sweep parallelism.
#[derive(Debug, Parser)]
#[command(name = "qslsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Probe amplitude C1(t), decay rate and population plot.
    Dynamics(Flags),
    /// Bound-state energy over a coupling grid for each N.
    BoundScan(Flags),
    /// QSL time over a coupling grid for each N.
    QslSweep(Flags),
    /// Regenerate a figure panel: fig1a, fig1b (Lorentzian, lambda = 1),
    /// fig2a, fig2b (Ohmic, omega_c = 1); tau = 10, N in {1, 2, 4, 10}.
    Reproduce {
        #[arg(value_parser = |s: &str| s.parse::<Panel>())]
        panel: Panel,
        #[command(flatten)]
        flags: Flags,
    },
}

fn init_threads() {
    let Ok(raw) = std::env::var("QSLSIM_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("qslsim: ignoring QSLSIM_THREADS={raw:?} (expected a positive integer)"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let (command, flags) = match cli.command {
        Cmd::Dynamics(f) => (Command::Dynamics, f),
        Cmd::BoundScan(f) => (Command::BoundScan, f),
        Cmd::QslSweep(f) => (Command::QslSweep, f),
        Cmd::Reproduce { panel, flags } => (Command::Reproduce(panel), flags),
    };
    let result = parse_config(command, &flags)
        .map_err(Into::into)
        .and_then(execute);
    match result {
        Ok(manifest) => {
            for o in &manifest.outputs {
                println!("{}", manifest.params.out.join(&o.name).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qslsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
