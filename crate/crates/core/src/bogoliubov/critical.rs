//! Critical momentum and critical velocity.
//!
//! The critical momentum is where the free-particle frequency `ω₀(k)`
//! equals the interaction frequency `ν(k)`; below it the branch is sonic,
//! above it particle-like. The critical velocity is the low-`k` slope of
//! `Re Ω(k)`.

use serde::{Deserialize, Serialize};

use super::{anchor_wavenumber, delayed_interaction, dispersion_delayed, dispersion_sweep, track, KernelMode, UniformCondensate, WALK_RATIO};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::greens::{kernel_static, KernelSpec};
use crate::linalg::fit_through_origin;
use crate::Complex;

/// Largest relative RMS residual accepted for the low-`k` linear fit.
pub const FIT_LIMIT: f64 = 0.05;
const FIT_POINTS: usize = 20;
const FIT_WINDOW: (f64, f64) = (0.01, 0.1);
const ROOT_TOLERANCE: f64 = 1e-13;

/// The two terms of the static dispersion, `(ω₀(k), ν(k))` [rad/s].
///
/// At the static critical momentum they coincide.
pub fn dispersion_terms(k: f64, cond: &UniformCondensate, spec: &KernelSpec) -> Result<(f64, f64)> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::Input(format!("wavenumber must be finite and >= 0, got {k}")));
    }
    let nu = cond.interaction_frequency(kernel_static(k, spec)?.value);
    Ok((cond.free_frequency(k), nu))
}

/// Illinois-modified regula falsi on a sign-changing bracket.
fn illinois(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, tol: f64) -> Result<f64> {
    debug_assert!(fa * fb <= 0.0);
    let mut side = 0i8;
    for _ in 0..200 {
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 || (b - a).abs() <= tol * a.abs().max(b.abs()) {
            return Ok(b);
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = f(c)?;
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            side = 0;
        } else {
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        b = c;
        fb = fc;
    }
    Ok(b)
}

/// Critical momentum [1/m].
///
/// Static mode solves `ħk²/2m = ν(k)`; delayed mode solves
/// `ħk²/2m = |ν(Ω(k), k)|` along the delayed branch. Returns zero for an
/// empty condensate.
pub fn critical_momentum(cond: &UniformCondensate, spec: &KernelSpec, mode: KernelMode) -> Result<f64> {
    if cond.peak_density == 0.0 {
        return Ok(0.0);
    }
    match mode {
        KernelMode::Static => static_critical(cond, spec),
        KernelMode::Delayed => delayed_critical(cond, spec),
    }
}

fn static_critical(cond: &UniformCondensate, spec: &KernelSpec) -> Result<f64> {
    let (_, nu0) = dispersion_terms(0.0, cond, spec)?;
    if !(nu0 > 0.0) {
        return Err(Error::DegenerateInteraction(format!(
            "interaction frequency at k = 0 is {nu0:e} rad/s; a critical momentum needs repulsion (beta and the kernel of equal sign)"
        )));
    }
    // ν decreases with k, so ω₀(k_hi) = ν(0) ≥ ν(k_hi) brackets the root.
    let k_hi = (2.0 * cond.derived.m_ph * nu0 / HBAR).sqrt();
    let gap = |k: f64| dispersion_terms(k, cond, spec).map(|(w0, nu)| w0 - nu);
    let f_hi = gap(k_hi)?;
    illinois(gap, 0.0, -nu0, k_hi, f_hi, ROOT_TOLERANCE)
}

fn delayed_critical(cond: &UniformCondensate, spec: &KernelSpec) -> Result<f64> {
    let start = anchor_wavenumber(cond, spec)?;
    let floor = start * 1e-8;
    let gap = |k: f64, omega: Complex| -> Result<f64> { Ok(cond.free_frequency(k) - delayed_interaction(omega, k, cond, spec)?.norm()) };

    let mut hi = (start, dispersion_delayed(start, cond, spec, None)?.omega);
    let mut g_hi = gap(hi.0, hi.1)?;
    if g_hi <= 0.0 {
        return Err(Error::DegenerateInteraction("delayed interaction dominates at the anchor wavenumber".to_string()));
    }
    let (lo, g_lo) = loop {
        let k = hi.0 / WALK_RATIO;
        if k < floor {
            return Err(Error::DegenerateInteraction(
                "free-particle and delayed interaction terms never cross".to_string(),
            ));
        }
        let p = track(hi, k, cond, spec)?;
        let g = gap(k, p.omega)?;
        if g <= 0.0 {
            break ((k, p.omega), g);
        }
        hi = (k, p.omega);
        g_hi = g;
    };
    if g_lo == 0.0 {
        return Ok(lo.0);
    }
    let anchor = hi;
    let x = illinois(
        |x| {
            let k = x.exp();
            let p = track(anchor, k, cond, spec)?;
            gap(k, p.omega)
        },
        lo.0.ln(),
        g_lo,
        hi.0.ln(),
        g_hi,
        ROOT_TOLERANCE,
    )?;
    Ok(x.exp())
}

/// Low-`k` slope of `Re Ω(k)` with its fit quality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalVelocity {
    /// Slope [m/s].
    pub v_c: f64,
    /// Relative RMS residual of the zero-intercept fit.
    pub residual: f64,
    /// Critical momentum that set the fit window [1/m].
    pub k_c: f64,
}

/// Zero-intercept least-squares slope of `Re Ω` over twenty wavenumbers
/// spread evenly across `[0.01, 0.1] k_c`, without a quality check.
pub fn low_k_fit(cond: &UniformCondensate, spec: &KernelSpec, mode: KernelMode) -> Result<CriticalVelocity> {
    fit_at(critical_momentum(cond, spec, mode)?, cond, spec, mode)
}

pub(crate) fn fit_at(k_c: f64, cond: &UniformCondensate, spec: &KernelSpec, mode: KernelMode) -> Result<CriticalVelocity> {
    if k_c == 0.0 {
        return Ok(CriticalVelocity { v_c: 0.0, residual: 0.0, k_c });
    }
    let (a, b) = FIT_WINDOW;
    let ks: Vec<f64> = (0..FIT_POINTS)
        .map(|i| k_c * (a + (b - a) * i as f64 / (FIT_POINTS - 1) as f64))
        .collect();
    let points = dispersion_sweep(&ks, cond, spec, mode)?;
    let re: Vec<f64> = points.iter().map(|p| p.omega.re).collect();
    let fit = fit_through_origin(&ks, &re);
    Ok(CriticalVelocity {
        v_c: fit.slope,
        residual: fit.residual,
        k_c,
    })
}

/// Critical (sound) velocity [m/s]; fails when the low-`k` branch is not
/// linear to within [`FIT_LIMIT`].
pub fn critical_velocity(cond: &UniformCondensate, spec: &KernelSpec, mode: KernelMode) -> Result<CriticalVelocity> {
    let fit = low_k_fit(cond, spec, mode)?;
    if fit.residual > FIT_LIMIT {
        return Err(Error::FitQuality {
            residual: fit.residual,
            limit: FIT_LIMIT,
        });
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CavityConfig;

    fn setup(n: f64) -> (UniformCondensate, KernelSpec) {
        let c = CavityConfig::default();
        (UniformCondensate::new(&c, n).unwrap(), KernelSpec::from_config(&c))
    }

    #[test]
    fn illinois_finds_cubic_root() {
        let r = illinois(|x| Ok(x * x * x - 2.0), 0.0, -2.0, 2.0, 6.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn static_terms_balance_at_critical_momentum() {
        let (cond, spec) = setup(6e4);
        let k = critical_momentum(&cond, &spec, KernelMode::Static).unwrap();
        let (w0, nu) = dispersion_terms(k, &cond, &spec).unwrap();
        assert!((w0 - nu).abs() <= 1e-10 * w0);
    }

    #[test]
    fn delayed_terms_balance_at_critical_momentum() {
        let (cond, spec) = setup(6e4);
        let k = critical_momentum(&cond, &spec, KernelMode::Delayed).unwrap();
        let anchor = anchor_wavenumber(&cond, &spec).unwrap();
        let top = dispersion_delayed(anchor, &cond, &spec, None).unwrap();
        let p = track((anchor, top.omega), k, &cond, &spec).unwrap();
        let nu = delayed_interaction(p.omega, k, &cond, &spec).unwrap().norm();
        assert!((cond.free_frequency(k) - nu).abs() <= 1e-8 * nu);
    }

    #[test]
    fn empty_condensate_has_no_critical_scale() {
        let (cond, spec) = setup(0.0);
        for mode in [KernelMode::Static, KernelMode::Delayed] {
            assert_eq!(critical_momentum(&cond, &spec, mode).unwrap(), 0.0);
            assert_eq!(critical_velocity(&cond, &spec, mode).unwrap().v_c, 0.0);
        }
    }

    #[test]
    fn attractive_interaction_is_degenerate() {
        let c = CavityConfig { beta: 4.8e-4, ..Default::default() };
        let cond = UniformCondensate::new(&c, 6e4).unwrap();
        let spec = KernelSpec::from_config(&c);
        assert!(matches!(
            critical_momentum(&cond, &spec, KernelMode::Static),
            Err(Error::DegenerateInteraction(_))
        ));
    }
}
