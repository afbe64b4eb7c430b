//! Stationary heat transport between the mirrors.
//!
//! The absorbed photon flux heats the solvent with source density
//! `s |ψ|²`, `s = α_in c ħω_c / n0`, and the temperature rise obeys
//! `κ ∇²ΔT = -s |ψ|²` with `ΔT = 0` on both mirrors and at `r_max`.
//! The photon density factorises as `n(r) f(z)`, where `f = 2 sin²(qπw/L)`,
//! `w = z + L/2`, has unit mean, so the problem separates into
//! longitudinal sine modes and one radial Helmholtz solve per mode.

use crate::error::{Error, Result};
use crate::greens::{kernel_static, mode_coefficient, KernelSpec};
use crate::linalg::solve_tridiagonal;
use crate::params::CavityConfig;
use crate::steady_state::grid::RadialGrid;
use crate::steady_state::Geometry;
use crate::constants::{C, HBAR};

/// Temperature rise on the radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatField {
    /// `ΔT` on the cavity midplane [K].
    pub midplane: Vec<f64>,
    /// `ΔT` averaged over the longitudinal photon profile `f(z)` [K];
    /// this is what the condensate feels.
    pub mode_averaged: Vec<f64>,
}

impl HeatField {
    /// Field reported for a geometry: the mode average for flat mirrors,
    /// the midplane value for curved ones.
    pub fn reported(&self, geometry: Geometry) -> &[f64] {
        match geometry {
            Geometry::Flat => &self.mode_averaged,
            Geometry::Curved => &self.midplane,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct HeatMode {
    order: usize,
    /// Longitudinal eigenvalue `κ_m²` of `-∂z²`.
    lambda: f64,
    /// Projection of `f` on the mode.
    source: f64,
    /// Mode value on the midplane.
    midplane: f64,
}

/// Precomputed longitudinal decomposition for repeated heat solves.
#[derive(Debug, Clone)]
pub struct HeatOperator {
    grid: RadialGrid,
    modes: Vec<HeatMode>,
    /// `s / κ` [K m]: converts photon density into `-∇²ΔT`.
    strength: f64,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

/// Longitudinal nodes for the finite-difference heat route: 16 per
/// wavelength of the photon profile, odd so a node sits on the midplane.
pub fn longitudinal_nodes(mode_order: u32) -> usize {
    16 * mode_order as usize + 1
}

impl HeatOperator {
    pub fn new(config: &CavityConfig, spec: &KernelSpec, grid: &RadialGrid, geometry: Geometry) -> Result<Self> {
        config.validate()?;
        spec.validate()?;
        grid.validate()?;
        let omega_c = config.cutoff_frequency();
        let source = config.alpha_in * C * HBAR * omega_c / config.n0;
        let modes = match geometry {
            Geometry::Flat => spectral_modes(spec)?,
            Geometry::Curved => finite_difference_modes(config.length, config.mode_order, longitudinal_nodes(config.mode_order)),
        };
        let (lower, diag, upper) = grid.negative_laplacian();
        Ok(Self {
            grid: *grid,
            modes,
            strength: source / config.kappa,
            lower,
            diag,
            upper,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Longitudinal orders of the retained modes.
    pub fn mode_orders(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.order).collect()
    }

    pub fn apply(&self, density: &[f64]) -> Result<HeatField> {
        let n = self.grid.n_points;
        if density.len() != n {
            return Err(Error::Input(format!("density has {} nodes, grid has {n}", density.len())));
        }
        if let Some(bad) = density.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::Input(format!("density must be finite and non-negative, found {bad}")));
        }
        let mut midplane = vec![0.0; n];
        let mut mode_averaged = vec![0.0; n];
        let mut diag = vec![0.0; n];
        for mode in &self.modes {
            for (d, d0) in diag.iter_mut().zip(&self.diag) {
                *d = d0 + mode.lambda;
            }
            let v = solve_tridiagonal(&self.lower, &diag, &self.upper, density)
                .ok_or_else(|| Error::Input("singular radial heat operator".to_string()))?;
            let amp = self.strength * mode.source;
            let avg = 0.5 * mode.source;
            for i in 0..n {
                let theta = amp * v[i];
                midplane[i] += theta * mode.midplane;
                mode_averaged[i] += theta * avg;
            }
        }
        // Round-off can leave tiny negative values far from the source.
        for x in midplane.iter_mut().chain(mode_averaged.iter_mut()) {
            *x = x.max(0.0);
        }
        Ok(HeatField { midplane, mode_averaged })
    }
}

/// Continuous sine modes of the slab, truncated where the static kernel
/// series converges.
fn spectral_modes(spec: &KernelSpec) -> Result<Vec<HeatMode>> {
    let terms = kernel_static(0.0, spec)?.terms_used;
    let kappa1 = std::f64::consts::PI / spec.length;
    Ok((0..terms)
        .map(|j| {
            let m = 2 * j + 1;
            let km = kappa1 * m as f64;
            HeatMode {
                order: m,
                lambda: km * km,
                source: -2.0 * mode_coefficient::<f64>(m, spec.mode_order),
                midplane: if j % 2 == 0 { 1.0 } else { -1.0 },
            }
        })
        .collect())
}

/// Discrete sine modes of the second-difference operator on `nz` interior
/// nodes.
fn finite_difference_modes(length: f64, q: u32, nz: usize) -> Vec<HeatMode> {
    use std::f64::consts::PI;
    let cells = (nz + 1) as f64;
    let hz = length / cells;
    let profile: Vec<f64> = (1..=nz)
        .map(|j| {
            let s = (q as f64 * PI * j as f64 / cells).sin();
            2.0 * s * s
        })
        .collect();
    let mid = nz.div_ceil(2);
    let mut modes = Vec::new();
    let mut largest: f64 = 0.0;
    for m in 1..=nz {
        let phase = PI * m as f64 / cells;
        let source = 2.0 / cells * profile.iter().enumerate().map(|(j, f)| f * (phase * (j + 1) as f64).sin()).sum::<f64>();
        largest = largest.max(source.abs());
        let half = (0.5 * phase).sin();
        modes.push(HeatMode {
            order: m,
            lambda: 4.0 / (hz * hz) * half * half,
            source,
            midplane: (phase * mid as f64).sin(),
        });
    }
    modes.retain(|m| m.source.abs() > 1e-13 * largest);
    modes
}

/// Temperature rise produced by a radial photon density.
///
/// `density` is the photon number per volume averaged over the cavity
/// length [1/m³]. Flat geometry uses the continuous longitudinal modes
/// (equivalent to convolving with the effective 2D Green's function);
/// curved geometry solves the axisymmetric Poisson problem by finite
/// differences in `z`.
pub fn temperature_from_density(
    density: &[f64],
    grid: &RadialGrid,
    config: &CavityConfig,
    spec: &KernelSpec,
    geometry: Geometry,
) -> Result<HeatField> {
    HeatOperator::new(config, spec, grid, geometry)?.apply(density)
}
