//! `pbec`: command-line driver for photon condensate kernels, steady
//! states and excitation spectra.

mod commands;
mod config;
mod error;
mod figures;
mod output;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use photon_bec::bogoliubov::{KernelMode, ScanAxis};
use photon_bec::steady_state::Geometry;

use crate::commands::{KernelDump, KernelKind};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};
use crate::figures::FigureId;
use crate::range::Range;

#[derive(Parser)]
#[command(name = "pbec", version, about = "Thermo-optic photon condensate: kernels, steady states, Bogoliubov spectra")]
struct Cli {
    /// Configuration file: `key = value` lines or a JSON manifest.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Start from the built-in default cavity.
    #[arg(long, global = true)]
    defaults: bool,
    /// Output directory; without it tables go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Relative truncation tolerance of the kernel series.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Configuration overrides.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Static,
    Delayed,
}

impl From<ModeArg> for KernelMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Static => KernelMode::Static,
            ModeArg::Delayed => KernelMode::Delayed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriticalModeArg {
    Static,
    Delayed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    Flat,
    Curved,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    #[value(name = "alpha_in")]
    AlphaIn,
    #[value(name = "L")]
    Length,
    #[value(name = "N")]
    PhotonNumber,
}

#[derive(Subcommand)]
enum Command {
    /// Configuration and derived single-photon quantities.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Heat Green's functions and their transforms.
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Self-consistent stationary condensate.
    Steady {
        /// Photon number of a single solve.
        #[arg(long = "N", conflicts_with = "sweep")]
        photons: Option<f64>,
        /// Photon numbers as start:end:count[:log].
        #[arg(long)]
        sweep: Option<Range>,
        /// Mirror geometry; curved when a mirror radius is configured.
        #[arg(long, value_enum)]
        geometry: Option<GeometryArg>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Bogoliubov dispersion of a uniform condensate.
    Dispersion {
        #[arg(long, value_enum, default_value = "static")]
        mode: ModeArg,
        #[arg(long = "N", default_value_t = 6e4)]
        photons: f64,
        /// Wavenumbers [1/m] as start:end:count[:log].
        #[arg(long = "k-grid", default_value = "1e3:1e7:200:log")]
        k_grid: Range,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Critical momentum and critical velocity.
    Critical {
        #[arg(long, value_enum, default_value = "both")]
        mode: CriticalModeArg,
        #[arg(long = "N", default_value_t = 6e4)]
        photons: f64,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Critical momentum and velocity against one parameter.
    Scan {
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Parameter values as start:end:count[:log], in SI units.
        #[arg(long)]
        range: Range,
        #[arg(long, value_enum, default_value = "static")]
        mode: ModeArg,
        /// Photon number when it is not the scanned axis.
        #[arg(long = "N", default_value_t = 6e4)]
        photons: f64,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Regenerate the data of one figure into <out>/<id>/.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Subcommand)]
enum ParamsAction {
    /// Print the configuration and derived quantities.
    Show {
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Subcommand)]
enum KernelAction {
    /// Tabulate a kernel on a grid of separations or wavenumbers.
    Dump {
        #[arg(long, value_enum)]
        kernel: KernelKind,
        /// Grid as start:end:count[:log]; rho [m] or k [1/m].
        #[arg(long)]
        grid: Option<Range>,
        /// Field point height for g3d [m].
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z: f64,
        /// Source height for g3d [m].
        #[arg(long = "z-src", default_value_t = 0.0, allow_negative_numbers = true)]
        z_src: f64,
        /// Real part of the frequency for the delayed kernel [rad/s].
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega: f64,
        /// Imaginary part of the frequency for the delayed kernel [rad/s].
        #[arg(long = "omega-im", default_value_t = 0.0, allow_negative_numbers = true)]
        omega_im: f64,
        #[command(flatten)]
        overrides: Overrides,
    },
}

impl Command {
    fn overrides(&self) -> &[String] {
        let o = match self {
            Command::Params { action: ParamsAction::Show { overrides } } => overrides,
            Command::Kernel { action: KernelAction::Dump { overrides, .. } } => overrides,
            Command::Steady { overrides, .. }
            | Command::Dispersion { overrides, .. }
            | Command::Critical { overrides, .. }
            | Command::Scan { overrides, .. }
            | Command::Figure { overrides, .. } => overrides,
        };
        &o.overrides
    }
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut overrides = cli.command.overrides().to_vec();
    if let Some(t) = cli.tol {
        overrides.push(format!("tol={t:e}"));
    }
    let mut config = config::parse_config(cli.config.as_deref(), cli.defaults, &overrides)?;
    if let Some(dir) = &cli.out {
        config.output_dir = Some(dir.clone());
    }
    if cli.json {
        config.format = Format::Json;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::config("jobs", "must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("jobs", e.to_string()))?;
    }
    let config = load(&cli)?;
    match &cli.command {
        Command::Params { .. } => commands::params_show(&config, cli.json),
        Command::Kernel {
            action: KernelAction::Dump { kernel, grid, z, z_src, omega, omega_im, .. },
        } => commands::kernel_dump(
            &config,
            &KernelDump {
                kind: *kernel,
                grid: grid.unwrap_or_else(|| kernel.default_grid()),
                z: *z,
                z_src: *z_src,
                omega: Complex::new(*omega, *omega_im),
            },
        ),
        Command::Steady { photons, sweep, geometry, .. } => {
            let values = match (photons, sweep) {
                (_, Some(r)) => r.values(),
                (Some(n), None) => vec![*n],
                (None, None) => vec![6e4],
            };
            let geometry = match geometry {
                Some(GeometryArg::Flat) => Geometry::Flat,
                Some(GeometryArg::Curved) => Geometry::Curved,
                None => commands::default_geometry(&config),
            };
            commands::steady(&config, &values, geometry)
        }
        Command::Dispersion { mode, photons, k_grid, .. } => commands::dispersion(&config, *photons, (*mode).into(), &k_grid.values()),
        Command::Critical { mode, photons, .. } => {
            let modes: &[KernelMode] = match mode {
                CriticalModeArg::Static => &[KernelMode::Static],
                CriticalModeArg::Delayed => &[KernelMode::Delayed],
                CriticalModeArg::Both => &[KernelMode::Static, KernelMode::Delayed],
            };
            commands::critical(&config, *photons, modes)
        }
        Command::Scan { axis, range, mode, photons, .. } => {
            let axis = match axis {
                AxisArg::AlphaIn => ScanAxis::AlphaIn,
                AxisArg::Length => ScanAxis::Length,
                AxisArg::PhotonNumber => ScanAxis::PhotonNumber,
            };
            commands::scan(&config, *photons, axis, (*mode).into(), &range.values())
        }
        Command::Figure { id, .. } => figures::run_figure(*id, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
