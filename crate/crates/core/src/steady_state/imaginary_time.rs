//! Ground state by imaginary-time propagation.
//!
//! Each step applies backward Euler, `(1 + Δτ H[ψ]) ψ' = ψ`, with the
//! temperature recomputed from the current density, then renormalises.
//! This is an independent route to the same stationary state as the
//! fixed-point solver and is used to cross-check it.

use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::steady_state::SteadyStateSolver;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryTimeOptions {
    /// Imaginary-time step `Δτ` [s].
    pub time_step: f64,
    /// Relative change of `μ` between steps at convergence.
    pub tolerance: f64,
    pub max_steps: usize,
}

impl ImaginaryTimeOptions {
    pub fn new(time_step: f64) -> Self {
        Self {
            time_step,
            tolerance: 1e-12,
            max_steps: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryTimeResult {
    /// Chemical potential relative to the non-interacting state [rad/s].
    pub mu: f64,
    /// Length-averaged density [1/m³].
    pub density: Vec<f64>,
    pub steps: usize,
}

pub fn imaginary_time_ground_state(solver: &SteadyStateSolver, n_bec: f64, options: &ImaginaryTimeOptions) -> Result<ImaginaryTimeResult> {
    if !(options.time_step > 0.0) || !options.time_step.is_finite() {
        return Err(Error::config("time_step", "must be > 0"));
    }
    if !(n_bec >= 0.0) || !n_bec.is_finite() {
        return Err(Error::Input(format!("photon number must be finite and >= 0, got {n_bec}")));
    }
    let photons = solver.photons_on_grid(n_bec);
    let (start, mu_reference) = solver.reference_mode();
    let mut mode = start.to_vec();
    let mut mu_prev = f64::NAN;
    let mut history = Vec::new();
    let dt = options.time_step;
    for step in 1..=options.max_steps {
        let density = solver.density_of(&mode, photons);
        let heat = solver.heat().apply(&density)?;
        let h = solver.thermal_hamiltonian(&heat.mode_averaged);
        let mu = h.rayleigh_quotient(&mode);
        let change = (mu - mu_prev).abs() / mu.abs();
        history.push(change);
        if change <= options.tolerance {
            return Ok(ImaginaryTimeResult {
                mu: mu - mu_reference,
                density,
                steps: step,
            });
        }
        mu_prev = mu;
        let diag: Vec<f64> = h.diag.iter().map(|d| 1.0 + dt * d).collect();
        let off: Vec<f64> = h.off.iter().map(|o| dt * o).collect();
        let next = solve_tridiagonal(&off, &diag, &off, &mode)
            .ok_or_else(|| Error::Instability("singular backward-Euler step".to_string()))?;
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        mode = next.into_iter().map(|x| x / norm).collect();
    }
    Err(Error::Convergence {
        iterations: options.max_steps,
        last: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}
