//! Elementary excitations of a uniform photon condensate.
//!
//! With areal density `n₂`, the thermo-optic interaction has Fourier
//! transform `g Ĝ(k)`, `g = (ħω_c)² c β α_in / (n0² κ)`, and the
//! excitation branch reads
//!
//! `Ω² = ω₀ (ω₀ + ν(k))`, `ω₀ = ħk²/2m`, `ν = 2 n₂ g Ĝ / ħ`,
//!
//! all in angular-frequency units. With the delayed kernel `ν` depends on
//! `Ω` itself and the branch becomes a complex root.

mod critical;
mod scan;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::greens::{kernel_delayed_with_derivative, kernel_static, KernelSpec};
use crate::params::{reference_radius, CavityConfig, DerivedQuantities};
use crate::Complex;

pub use critical::{critical_momentum, critical_velocity, dispersion_terms, low_k_fit, CriticalVelocity, FIT_LIMIT};
pub use scan::{scan, scan_points, ScanAxis, ScanRow, ScanTable};

/// Which interaction kernel drives the dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    /// Instantaneous heat response.
    Static,
    /// Diffusive, frequency-dependent heat response.
    Delayed,
}

impl fmt::Display for KernelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelMode::Static => "static",
            KernelMode::Delayed => "delayed",
        })
    }
}

impl FromStr for KernelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(KernelMode::Static),
            "delayed" => Ok(KernelMode::Delayed),
            other => Err(Error::config("mode", format!("expected static or delayed, got {other:?}"))),
        }
    }
}

/// Photon density `N / (π r_BEC² L)` at the centre of the condensate
/// [1/m³].
pub fn peak_density(n_bec: f64, config: &CavityConfig) -> Result<f64> {
    if !(n_bec >= 0.0) || !n_bec.is_finite() {
        return Err(Error::Input(format!("photon number must be finite and >= 0, got {n_bec}")));
    }
    let r = reference_radius(config)?;
    Ok(n_bec / (std::f64::consts::PI * r * r * config.length))
}

/// Homogeneous condensate used for the excitation analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformCondensate {
    /// Photon density [1/m³].
    pub peak_density: f64,
    pub config: CavityConfig,
    pub derived: DerivedQuantities,
}

impl UniformCondensate {
    pub fn new(config: &CavityConfig, n_bec: f64) -> Result<Self> {
        Self::with_density(config, peak_density(n_bec, config)?)
    }

    pub fn with_density(config: &CavityConfig, peak_density: f64) -> Result<Self> {
        config.validate()?;
        if !(peak_density >= 0.0) || !peak_density.is_finite() {
            return Err(Error::Input(format!("peak density must be finite and >= 0, got {peak_density}")));
        }
        Ok(Self {
            peak_density,
            config: *config,
            derived: DerivedQuantities::from_config(config)?,
        })
    }

    /// Photons per transverse area [1/m²].
    pub fn areal_density(&self) -> f64 {
        self.peak_density * self.config.length
    }

    /// Interaction strength `g` multiplying `Ĝ` [J m].
    pub fn coupling(&self) -> f64 {
        let c = &self.config;
        let energy = HBAR * self.derived.omega_c;
        energy * energy * C * c.beta * c.alpha_in / (c.n0 * c.n0 * c.kappa)
    }

    /// Free-particle frequency `ħk²/2m` [rad/s].
    pub fn free_frequency(&self, k: f64) -> f64 {
        HBAR * k * k / (2.0 * self.derived.m_ph)
    }

    /// `ν = 2 n₂ g Ĝ / ħ` [rad/s] for a kernel value `Ĝ` [m].
    pub fn interaction_frequency(&self, kernel: f64) -> f64 {
        self.interaction_scale() * kernel
    }

    fn interaction_scale(&self) -> f64 {
        2.0 * self.areal_density() * self.coupling() / HBAR
    }
}

/// One point of an excitation branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    /// Transverse wavenumber [1/m].
    pub k: f64,
    /// Excitation frequency [rad/s].
    pub omega: Complex,
    pub branch: KernelMode,
    /// Relative residual of `Ω² - ω₀(ω₀ + ν)`.
    pub residual: f64,
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::Input(format!("wavenumber must be finite and >= 0, got {k}")));
    }
    Ok(())
}

/// Excitation frequency with the instantaneous kernel.
pub fn dispersion_static(k: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<DispersionPoint> {
    check_k(k)?;
    let w0 = cond.free_frequency(k);
    let nu = if cond.peak_density == 0.0 {
        0.0
    } else {
        cond.interaction_frequency(kernel_static(k, spec)?.value)
    };
    let point = |omega: f64, residual| DispersionPoint {
        k,
        omega: Complex::new(omega, 0.0),
        branch: KernelMode::Static,
        residual,
    };
    if w0 == 0.0 {
        return Ok(point(0.0, 0.0));
    }
    if w0 + nu < 0.0 {
        return Err(Error::ImaginaryBranch { k });
    }
    let omega = w0 * (1.0 + nu / w0).sqrt();
    let residual = (omega * omega - w0 * (w0 + nu)).abs() / (w0 * (w0 + nu.abs()));
    Ok(point(omega, residual))
}

pub(crate) const NEWTON_TOLERANCE: f64 = 1e-10;
const NEWTON_ITERATIONS: usize = 80;

struct Residual {
    value: Complex,
    derivative: Complex,
    scale: f64,
    nu: Complex,
}

fn delayed_equation(omega: Complex, k: f64, w0: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<Residual> {
    let kernel = kernel_delayed_with_derivative(omega, k, spec)?;
    let a = cond.interaction_scale();
    let nu = kernel.eval.value * a;
    let dnu = kernel.derivative * a;
    Ok(Residual {
        value: omega * omega - (nu + w0) * w0,
        derivative: omega * 2.0 - dnu * w0,
        scale: omega.norm_sqr().max(w0 * (w0 + nu.norm())),
        nu,
    })
}

/// `Ω² - ω₀(ω₀ + ν(Ω))` for the delayed kernel; zero on the branch.
pub fn delayed_residual(omega: Complex, k: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<Complex> {
    check_k(k)?;
    Ok(delayed_equation(omega, k, cond.free_frequency(k), cond, spec)?.value)
}

/// Complex root of the delayed dispersion relation near `seed`.
///
/// Without a seed the static frequency is used, which is adequate where the
/// interaction is a perturbation; deep in the sonic region use
/// [`dispersion_sweep`], which follows the branch by continuation. The root
/// with non-negative real part is returned (`Ω` and `-Ω*` both solve).
pub fn dispersion_delayed(k: f64, cond: &UniformCondensate, spec: &KernelSpec, seed: Option<Complex>) -> Result<DispersionPoint> {
    check_k(k)?;
    let w0 = cond.free_frequency(k);
    if w0 == 0.0 {
        return Ok(DispersionPoint {
            k,
            omega: Complex::new(0.0, 0.0),
            branch: KernelMode::Delayed,
            residual: 0.0,
        });
    }
    let seed = match seed {
        Some(s) => s,
        None => dispersion_static(k, cond, spec)?.omega,
    };
    let (omega, residual) = newton(seed, k, w0, cond, spec)?;
    let omega = if omega.re < 0.0 { -omega.conj() } else { omega };
    Ok(DispersionPoint {
        k,
        omega,
        branch: KernelMode::Delayed,
        residual,
    })
}

fn newton(seed: Complex, k: f64, w0: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<(Complex, f64)> {
    let mut omega = seed;
    let mut current = delayed_equation(omega, k, w0, cond, spec)?;
    let mut trace = Vec::new();
    for iteration in 0..NEWTON_ITERATIONS {
        let rel = current.value.norm() / current.scale;
        trace.push((omega.norm(), rel));
        if rel <= NEWTON_TOLERANCE {
            return Ok((omega, rel));
        }
        if current.derivative.norm() == 0.0 {
            break;
        }
        let step = -current.value / current.derivative;
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda > 1e-8 {
            let candidate = omega + step * lambda;
            if let Ok(next) = delayed_equation(candidate, k, w0, cond, spec) {
                if next.value.norm() < current.value.norm() {
                    accepted = Some((candidate, next));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((candidate, next)) => {
                omega = candidate;
                current = next;
            }
            None => {
                return Err(Error::RootNotFound {
                    k,
                    iterations: iteration + 1,
                    residual: rel,
                    trace,
                })
            }
        }
    }
    let rel = current.value.norm() / current.scale;
    Err(Error::RootNotFound {
        k,
        iterations: NEWTON_ITERATIONS,
        residual: rel,
        trace,
    })
}

/// Interaction frequency `ν(Ω, k)` on the delayed branch.
pub(crate) fn delayed_interaction(omega: Complex, k: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<Complex> {
    Ok(delayed_equation(omega, k, cond.free_frequency(k), cond, spec)?.nu)
}

const MAX_BISECTIONS: usize = 24;

/// Follows the delayed branch from a known root at `from` to wavenumber
/// `to`, subdividing the step geometrically when Newton fails or lands far
/// from the predicted frequency.
pub(crate) fn track(from: (f64, Complex), to: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<DispersionPoint> {
    track_inner(from, to, cond, spec, 0)
}

fn track_inner(from: (f64, Complex), to: f64, cond: &UniformCondensate, spec: &KernelSpec, depth: usize) -> Result<DispersionPoint> {
    let (k0, omega0) = from;
    let predicted = predict(k0, omega0, to, cond, spec)?;
    let attempt = dispersion_delayed(to, cond, spec, Some(predicted));
    let reason = match &attempt {
        Ok(p) if (p.omega - predicted).norm() <= 0.5 * predicted.norm() => return attempt,
        Ok(p) => format!("root {} strays from continuation estimate {}", p.omega, predicted),
        Err(e) => e.to_string(),
    };
    if depth >= MAX_BISECTIONS || to == k0 {
        return Err(Error::Branch { k: to, reason });
    }
    let mid = (k0 * to).sqrt();
    let middle = track_inner(from, mid, cond, spec, depth + 1)?;
    track_inner((mid, middle.omega), to, cond, spec, depth + 1)
}

/// Seed for `k` from a root at `k0`, scaled like the static branch.
fn predict(k0: f64, omega0: Complex, k: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<Complex> {
    let a = dispersion_static(k0, cond, spec)?.omega.re;
    let b = dispersion_static(k, cond, spec)?.omega.re;
    Ok(if a > 0.0 { omega0 * (b / a) } else { omega0 })
}

/// Ratio between successive wavenumbers when walking a branch.
pub(crate) const WALK_RATIO: f64 = 1.189_207_115_002_721; // 2^(1/4)

/// Wavenumber above which the static frequency seeds the delayed root
/// reliably: a few critical momenta.
pub(crate) fn anchor_wavenumber(cond: &UniformCondensate, spec: &KernelSpec) -> Result<f64> {
    Ok(4.0 * critical_momentum(cond, spec, KernelMode::Static)?)
}

/// Branch evaluated on a set of wavenumbers; output order follows input.
///
/// The static branch is evaluated pointwise in parallel. The delayed branch
/// is followed by continuation from large `k` downwards.
pub fn dispersion_sweep(ks: &[f64], cond: &UniformCondensate, spec: &KernelSpec, mode: KernelMode) -> Result<Vec<DispersionPoint>> {
    for &k in ks {
        check_k(k)?;
    }
    match mode {
        KernelMode::Static => ks.par_iter().map(|&k| dispersion_static(k, cond, spec)).collect(),
        KernelMode::Delayed => {
            if cond.peak_density == 0.0 {
                return ks.iter().map(|&k| dispersion_delayed(k, cond, spec, None)).collect();
            }
            let mut order: Vec<usize> = (0..ks.len()).collect();
            order.sort_by(|&a, &b| ks[b].total_cmp(&ks[a]));
            let top = order.first().map_or(0.0, |&i| ks[i]);
            let anchor_k = anchor_wavenumber(cond, spec)?.max(top);
            let anchor = dispersion_delayed(anchor_k, cond, spec, None)?;
            let mut last = (anchor_k, anchor.omega);
            let mut out = vec![None; ks.len()];
            for i in order {
                let point = if ks[i] == 0.0 {
                    dispersion_delayed(0.0, cond, spec, None)?
                } else {
                    let p = track(last, ks[i], cond, spec)?;
                    last = (ks[i], p.omega);
                    p
                };
                out[i] = Some(point);
            }
            Ok(out.into_iter().map(|p| p.expect("every index visited")).collect())
        }
    }
}
