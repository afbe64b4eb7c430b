//! Self-consistent stationary condensate and temperature profiles.
//!
//! The condensate is treated in the paraxial effective-2D picture: a fixed
//! longitudinal mode times a radial wavefunction `ψ(r)` governed by
//!
//! `ħμ ψ = [-(ħ²/2m)∇² + ½ m Ω² r² - ħω_c (β/n0) ΔT] ψ`,
//!
//! with `ΔT` the mode-averaged temperature rise produced by `|ψ|²`. The
//! trap term is present only for curved mirrors. The nonlinear problem is
//! solved by under-relaxed fixed-point iteration on the density.

pub mod grid;
pub mod heat;
pub mod imaginary_time;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::greens::KernelSpec;
use crate::linalg::SymTridiagonal;
use crate::params::{condensate_radius, photon_mass, reference_radius, trap_frequency, CavityConfig};

pub use grid::RadialGrid;
pub use heat::{temperature_from_density, HeatField, HeatOperator};
pub use imaginary_time::{imaginary_time_ground_state, ImaginaryTimeOptions, ImaginaryTimeResult};

/// Mirror geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Flat,
    Curved,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Flat => "flat",
            Geometry::Curved => "curved",
        })
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(Geometry::Flat),
            "curved" => Ok(Geometry::Curved),
            other => Err(Error::config("geometry", format!("expected flat or curved, got {other:?}"))),
        }
    }
}

/// Fixed-point iteration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Fraction of the new density mixed in per iteration.
    pub relaxation: f64,
    /// Relative change in `μ` and density at convergence.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            relaxation: 0.3,
            tolerance: 1e-8,
            max_iterations: 500,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::config("relaxation", "must lie in (0, 1]"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::config("solver_tol", "must lie in (0, 1)"));
        }
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations", "must be >= 1"));
        }
        Ok(())
    }
}

/// A converged stationary state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensateState {
    pub grid: RadialGrid,
    /// Photon density averaged over the cavity length [1/m³].
    pub density: Vec<f64>,
    /// Reported temperature rise [K]: mode-averaged for flat mirrors,
    /// midplane for curved mirrors.
    pub delta_t: Vec<f64>,
    /// Mode-averaged temperature rise entering the potential [K].
    pub delta_t_effective: Vec<f64>,
    /// Chemical potential relative to the non-interacting state [rad/s].
    pub mu: f64,
    /// Eigenvalue of the non-interacting state [rad/s].
    pub mu_reference: f64,
    /// `1/√e` density radius of the non-interacting state [m].
    pub reference_radius: f64,
    pub n_bec: f64,
    /// Photons on the whole grid; differs from `n_bec` for flat mirrors.
    pub photons_on_grid: f64,
    pub geometry: Geometry,
    pub iterations: usize,
    /// `‖(H - ħμ)ψ‖ / ‖ħμψ‖` of the returned state.
    pub gpe_residual: f64,
}

impl CondensateState {
    /// Chemical potential relative to the non-interacting state [J].
    pub fn mu_energy(&self) -> f64 {
        HBAR * self.mu
    }

    /// `1/√e` density radius [m]; `None` for an empty condensate.
    pub fn radius(&self) -> Option<f64> {
        self.grid.e_half_radius(&self.density)
    }

    /// Photon number recovered by integrating the density over the
    /// grid volume.
    pub fn integrated_photons(&self, length: f64) -> f64 {
        length * self.grid.integrate(&self.density)
    }
}

/// Quantities plotted against photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Chemical potential shift [J].
    pub mu: f64,
    /// Radius change relative to the non-interacting state [m].
    pub delta_r: f64,
    /// Maximum temperature rise [K].
    pub delta_t_max: f64,
}

pub fn observables(state: &CondensateState) -> Observables {
    let delta_r = state.radius().map_or(0.0, |r| r - state.reference_radius);
    let delta_t_max = state.delta_t.iter().copied().fold(0.0, f64::max);
    Observables {
        mu: state.mu_energy(),
        delta_r,
        delta_t_max,
    }
}

#[derive(Debug, Clone)]
struct Reference {
    mu: f64,
    mode: Vec<f64>,
    radius: f64,
}

/// Stationary solver for one configuration, grid and geometry.
///
/// The non-interacting reference state is computed on first use and shared
/// by every subsequent solve, including concurrent ones.
#[derive(Debug)]
pub struct SteadyStateSolver {
    config: CavityConfig,
    grid: RadialGrid,
    geometry: Geometry,
    options: SolverOptions,
    heat: HeatOperator,
    /// `H/ħ` without the thermal term, acting on `√r ψ`.
    bare: SymTridiagonal<f64>,
    /// `-ω_c β / n0` [rad/(s K)].
    thermal_shift: f64,
    /// Photons on the grid per photon in the reference area.
    area_factor: f64,
    /// Kinetic frequency scale `ħ/(2m r_max²)` used as a floor for `|μ|`.
    frequency_floor: f64,
    reference: OnceLock<Reference>,
}

impl SteadyStateSolver {
    pub fn new(config: &CavityConfig, spec: &KernelSpec, grid: &RadialGrid, geometry: Geometry, options: SolverOptions) -> Result<Self> {
        config.validate()?;
        grid.validate()?;
        options.validate()?;
        let mass = photon_mass(config)?;
        let trap = match geometry {
            Geometry::Curved => {
                let omega = trap_frequency(config)?;
                let r_bec = condensate_radius(config)?;
                if grid.r_max < 4.0 * r_bec {
                    return Err(Error::config("r_max", format!("must be >= 4 r_BEC = {:.3e} m for a trapped run", 4.0 * r_bec)));
                }
                0.5 * mass * omega * omega / HBAR
            }
            Geometry::Flat => 0.0,
        };
        let area_factor = match geometry {
            Geometry::Curved => 1.0,
            Geometry::Flat => (grid.r_max / reference_radius(config)?).powi(2),
        };
        let kinetic = HBAR / (2.0 * mass);
        let (lap_diag, lap_off) = grid.negative_laplacian_symmetric();
        let diag = grid
            .radii()
            .iter()
            .zip(&lap_diag)
            .map(|(r, d)| kinetic * d + trap * r * r)
            .collect();
        let off = lap_off.iter().map(|o| kinetic * o).collect();
        Ok(Self {
            config: *config,
            grid: *grid,
            geometry,
            options,
            heat: HeatOperator::new(config, spec, grid, geometry)?,
            bare: SymTridiagonal::new(diag, off),
            thermal_shift: -config.cutoff_frequency() * config.beta / config.n0,
            area_factor,
            frequency_floor: kinetic / (grid.r_max * grid.r_max),
            reference: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &CavityConfig {
        &self.config
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    fn reference(&self) -> &Reference {
        self.reference.get_or_init(|| {
            let (mu, mode) = self.bare.lowest_eigenpair();
            let density = self.density_from_mode(&mode, 1.0);
            let radius = self.grid.e_half_radius(&density).unwrap_or(f64::NAN);
            Reference { mu, mode, radius }
        })
    }

    /// Non-interacting eigenvalue [rad/s] and `1/√e` radius [m].
    pub fn reference_state(&self) -> (f64, f64) {
        let r = self.reference();
        (r.mu, r.radius)
    }

    /// `H/ħ` for a given mode-averaged temperature rise.
    fn hamiltonian(&self, delta_t: &[f64]) -> SymTridiagonal<f64> {
        let diag = self
            .bare
            .diag
            .iter()
            .zip(delta_t)
            .map(|(d, t)| d + self.thermal_shift * t)
            .collect();
        SymTridiagonal::new(diag, self.bare.off.clone())
    }

    /// Length-averaged density `|ψ|²/L` carrying `photons` on the grid,
    /// from a mode vector expressed in `√r ψ`.
    fn density_from_mode(&self, mode: &[f64], photons: f64) -> Vec<f64> {
        let norm: f64 = mode.iter().map(|x| x * x).sum();
        let h = self.grid.spacing();
        let volume = 2.0 * std::f64::consts::PI * h * self.config.length;
        self.grid
            .radii()
            .iter()
            .zip(mode)
            .map(|(r, x)| photons * x * x / (norm * r * volume))
            .collect()
    }

    fn mode_from_density(&self, density: &[f64]) -> Vec<f64> {
        self.grid.radii().iter().zip(density).map(|(r, d)| (d * r).sqrt()).collect()
    }

    pub(crate) fn photons_on_grid(&self, n_bec: f64) -> f64 {
        n_bec * self.area_factor
    }

    pub(crate) fn heat(&self) -> &HeatOperator {
        &self.heat
    }

    pub(crate) fn thermal_hamiltonian(&self, delta_t: &[f64]) -> SymTridiagonal<f64> {
        self.hamiltonian(delta_t)
    }

    pub(crate) fn reference_mode(&self) -> (&[f64], f64) {
        let r = self.reference();
        (&r.mode, r.mu)
    }

    pub(crate) fn density_of(&self, mode: &[f64], photons: f64) -> Vec<f64> {
        self.density_from_mode(mode, photons)
    }

    fn check_collapse(&self, density: &[f64]) -> Result<()> {
        match self.grid.e_half_radius(density) {
            Some(r) if r >= 3.0 * self.grid.spacing() => Ok(()),
            Some(r) => Err(Error::Instability(format!(
                "density collapsed to radius {r:.3e} m on a grid of spacing {:.3e} m",
                self.grid.spacing()
            ))),
            None => Err(Error::Instability("density lost its central peak".to_string())),
        }
    }

    fn empty_state(&self, n_bec: f64) -> CondensateState {
        let reference = self.reference();
        let n = self.grid.n_points;
        CondensateState {
            grid: self.grid,
            density: vec![0.0; n],
            delta_t: vec![0.0; n],
            delta_t_effective: vec![0.0; n],
            mu: 0.0,
            mu_reference: reference.mu,
            reference_radius: reference.radius,
            n_bec,
            photons_on_grid: 0.0,
            geometry: self.geometry,
            iterations: 0,
            gpe_residual: 0.0,
        }
    }

    /// Converged stationary state for `n_bec` photons.
    pub fn solve(&self, n_bec: f64) -> Result<CondensateState> {
        if !(n_bec >= 0.0) || !n_bec.is_finite() {
            return Err(Error::Input(format!("photon number must be finite and >= 0, got {n_bec}")));
        }
        if n_bec == 0.0 {
            return Ok(self.empty_state(n_bec));
        }
        let reference = self.reference();
        let photons = self.photons_on_grid(n_bec);
        let tol = self.options.tolerance;
        let mix = self.options.relaxation;

        let mut density = self.density_from_mode(&reference.mode, photons);
        let mut mu_prev = reference.mu;
        let mut history = Vec::new();
        for iteration in 1..=self.options.max_iterations {
            let heat = self.heat.apply(&density)?;
            let (mu, mode) = self.hamiltonian(&heat.mode_averaged).lowest_eigenpair();
            let fresh = self.density_from_mode(&mode, photons);
            if fresh.iter().any(|x| !x.is_finite()) || !mu.is_finite() {
                return Err(Error::Instability("non-finite density during iteration".to_string()));
            }
            self.check_collapse(&fresh)?;
            let peak = fresh.iter().copied().fold(0.0, f64::max);
            let change = density.iter().zip(&fresh).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak;
            let mu_change = (mu - mu_prev).abs() / mu.abs().max(self.frequency_floor);
            history.push(change.max(mu_change));
            if change <= tol && mu_change <= tol {
                return self.finish(n_bec, photons, fresh, mu, iteration);
            }
            for (d, f) in density.iter_mut().zip(&fresh) {
                *d += mix * (f - *d);
            }
            mu_prev = mu;
        }
        Err(Error::Convergence {
            iterations: self.options.max_iterations,
            last: history.last().copied().unwrap_or(f64::NAN),
            history,
        })
    }

    fn finish(&self, n_bec: f64, photons: f64, density: Vec<f64>, mu: f64, iterations: usize) -> Result<CondensateState> {
        let reference = self.reference();
        let heat = self.heat.apply(&density)?;
        let h = self.hamiltonian(&heat.mode_averaged);
        // Same photon scaling as the state, so a non-interacting solve
        // reproduces the reference radius bit for bit.
        let reference_radius = self
            .grid
            .e_half_radius(&self.density_from_mode(&reference.mode, photons))
            .unwrap_or(reference.radius);
        let psi = self.mode_from_density(&density);
        let hpsi = h.apply(&psi);
        let num: f64 = hpsi.iter().zip(&psi).map(|(a, b)| (a - mu * b).powi(2)).sum();
        let den: f64 = psi.iter().map(|b| (mu * b).powi(2)).sum();
        Ok(CondensateState {
            grid: self.grid,
            density,
            delta_t: heat.reported(self.geometry).to_vec(),
            delta_t_effective: heat.mode_averaged,
            mu: mu - reference.mu,
            mu_reference: reference.mu,
            reference_radius,
            n_bec,
            photons_on_grid: photons,
            geometry: self.geometry,
            iterations,
            gpe_residual: (num / den).sqrt(),
        })
    }

    /// Solves for every photon number concurrently; results keep the input
    /// order.
    pub fn sweep(&self, n_values: &[f64]) -> Vec<Result<CondensateState>> {
        self.reference();
        n_values.par_iter().map(|&n| self.solve(n)).collect()
    }
}

fn default_spec(config: &CavityConfig) -> KernelSpec {
    KernelSpec::from_config(config)
}

/// Stationary state between flat mirrors.
///
/// `n_bec` counts photons within the reference area `π r_BEC²`; the grid
/// disk holds `n_bec (r_max / r_BEC)²` photons. Only the reference radius
/// is taken from the mirror curvature (or its override); no trap is applied.
pub fn solve_flat(config: &CavityConfig, n_bec: f64, grid: &RadialGrid) -> Result<CondensateState> {
    SteadyStateSolver::new(config, &default_spec(config), grid, Geometry::Flat, SolverOptions::default())?.solve(n_bec)
}

/// Stationary state in the harmonic trap of curved mirrors.
pub fn solve_curved(config: &CavityConfig, n_bec: f64, grid: &RadialGrid) -> Result<CondensateState> {
    SteadyStateSolver::new(config, &default_spec(config), grid, Geometry::Curved, SolverOptions::default())?.solve(n_bec)
}
