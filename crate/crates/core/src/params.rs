//! Cavity and material parameters, and the single-photon quantities derived
//! from them.

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};

/// Geometry and material inputs, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    /// Mirror spacing `L` [m].
    pub length: f64,
    /// Mirror radius of curvature `R` [m]; `None` for flat mirrors.
    pub mirror_radius: Option<f64>,
    /// Longitudinal mode order `q`.
    pub mode_order: u32,
    /// Refractive index of the solution.
    pub n0: f64,
    /// Thermo-optic coefficient dn/dT [1/K].
    pub beta: f64,
    /// Thermal conductivity [W/(m K)].
    pub kappa: f64,
    /// Volumetric heat capacity [J/(K m³)].
    pub cv: f64,
    /// Inelastic absorption coefficient [1/m].
    pub alpha_in: f64,
    /// Bath temperature [K].
    pub temperature: f64,
    /// Reference condensate radius [m] used when there is no trap to
    /// derive one from (flat mirrors).
    pub r_bec_override: Option<f64>,
}

impl Default for CavityConfig {
    /// Rhodamine 6G in methanol, `L = 2 µm`, `q = 9`, `R = 1 m`, room temperature.
    fn default() -> Self {
        Self {
            length: 2e-6,
            mirror_radius: Some(1.0),
            mode_order: 9,
            n0: 1.33,
            beta: -4.8e-4,
            kappa: 0.168,
            cv: 1.9e6,
            alpha_in: 0.63,
            temperature: 300.0,
            r_bec_override: None,
        }
    }
}

fn require(ok: bool, key: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(key, reason))
    }
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        require(finite(self.length) && self.length > 0.0, "L", "must be > 0")?;
        if let Some(r) = self.mirror_radius {
            require(finite(r) && r > 0.0, "R", "must be > 0 when present")?;
        }
        require(self.mode_order >= 1, "q", "must be >= 1")?;
        require(finite(self.n0) && self.n0 >= 1.0, "n0", "must be >= 1")?;
        require(finite(self.beta), "beta", "must be finite")?;
        require(finite(self.kappa) && self.kappa > 0.0, "kappa", "must be > 0")?;
        require(finite(self.cv) && self.cv > 0.0, "cv", "must be > 0")?;
        require(finite(self.alpha_in) && self.alpha_in >= 0.0, "alpha_in", "must be >= 0")?;
        require(finite(self.temperature) && self.temperature > 0.0, "T", "must be > 0")?;
        if let Some(r) = self.r_bec_override {
            require(finite(r) && r > 0.0, "r_bec", "must be > 0 when present")?;
        }
        Ok(())
    }

    /// Longitudinal wavevector `qπ/L` [1/m].
    pub fn k_z(&self) -> f64 {
        self.mode_order as f64 * std::f64::consts::PI / self.length
    }

    /// Cutoff angular frequency `c k_z / n0` [rad/s].
    pub fn cutoff_frequency(&self) -> f64 {
        C * self.k_z() / self.n0
    }

    /// Thermal diffusivity `κ / C_v` [m²/s].
    pub fn diffusivity(&self) -> f64 {
        self.kappa / self.cv
    }

    fn mirror_radius_or_err(&self) -> Result<f64> {
        self.mirror_radius.ok_or_else(|| {
            Error::UnsupportedGeometry("flat mirrors have no harmonic trap".to_string())
        })
    }
}

/// Effective photon mass `ħ k_z n0 / c` [kg].
pub fn photon_mass(config: &CavityConfig) -> Result<f64> {
    config.validate()?;
    Ok(HBAR * config.k_z() * config.n0 / C)
}

/// Trap angular frequency `(c/n0) / sqrt(L R / 2)` [rad/s].
pub fn trap_frequency(config: &CavityConfig) -> Result<f64> {
    config.validate()?;
    let r = config.mirror_radius_or_err()?;
    Ok((C / config.n0) / (config.length * r / 2.0).sqrt())
}

/// BEC threshold of the two-dimensional harmonically trapped photon gas,
/// `(π²/3) (k_B T / ħΩ)²`, polarization degeneracy included.
pub fn critical_photon_number(config: &CavityConfig) -> Result<f64> {
    let omega = trap_frequency(config)?;
    let x = K_B * config.temperature / (HBAR * omega);
    Ok(std::f64::consts::PI.powi(2) / 3.0 * x * x)
}

/// Interaction-free condensate radius `sqrt(ħ / (2 m Ω))` [m]: the radius
/// at which the Gaussian ground-state density drops to `1/√e` of its peak.
pub fn condensate_radius(config: &CavityConfig) -> Result<f64> {
    let omega = trap_frequency(config)?;
    let m = photon_mass(config)?;
    Ok((HBAR / (2.0 * m * omega)).sqrt())
}

/// Radius that sets the photon density convention: the explicit override
/// if given, otherwise the interaction-free trapped radius.
pub fn reference_radius(config: &CavityConfig) -> Result<f64> {
    config.validate()?;
    match config.r_bec_override {
        Some(r) => Ok(r),
        None => condensate_radius(config).map_err(|_| {
            Error::config(
                "r_bec",
                "is required for flat mirrors (no trap to derive the condensate radius from)",
            )
        }),
    }
}

/// Quantities derived from a [`CavityConfig`]. Trap-dependent entries are
/// `None` for flat mirrors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub m_ph: f64,
    pub omega_c: f64,
    pub k_z: f64,
    pub omega_trap: Option<f64>,
    pub n_c: Option<f64>,
    pub r_bec: Option<f64>,
    pub diffusivity: f64,
}

impl DerivedQuantities {
    pub fn from_config(config: &CavityConfig) -> Result<Self> {
        let m_ph = photon_mass(config)?;
        let curved = config.mirror_radius.is_some();
        Ok(Self {
            m_ph,
            omega_c: config.cutoff_frequency(),
            k_z: config.k_z(),
            omega_trap: if curved { Some(trap_frequency(config)?) } else { None },
            n_c: if curved { Some(critical_photon_number(config)?) } else { None },
            r_bec: if curved { Some(condensate_radius(config)?) } else { None },
            diffusivity: config.diffusivity(),
        })
    }

    /// `(name, unit, value)` rows in display order.
    pub fn rows(&self) -> Vec<(&'static str, &'static str, Option<f64>)> {
        vec![
            ("m_ph", "kg", Some(self.m_ph)),
            ("omega_c", "rad/s", Some(self.omega_c)),
            ("k_z", "1/m", Some(self.k_z)),
            ("omega_trap", "rad/s", self.omega_trap),
            ("n_c", "1", self.n_c),
            ("r_bec", "m", self.r_bec),
            ("diffusivity", "m^2/s", Some(self.diffusivity)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn photon_mass_for_default_cavity() {
        // ħ (9π / 2 µm) 1.33 / c, evaluated by hand.
        let expected = 1.054_571_817e-34 * (9.0 * PI / 2e-6) * 1.33 / 299_792_458.0;
        let m = photon_mass(&CavityConfig::default()).unwrap();
        assert!(rel(m, expected) < 1e-15);
        assert!(rel(m, 6.614e-36) < 1e-3);
    }

    #[test]
    fn photon_mass_unit_wavevector() {
        let cfg = CavityConfig {
            length: PI,
            mode_order: 1,
            n0: 1.0,
            ..CavityConfig::default()
        };
        assert!(rel(photon_mass(&cfg).unwrap(), HBAR / C) < 1e-15);
    }

    #[test]
    fn photon_mass_linear_in_mode_order() {
        let a = CavityConfig::default();
        let b = CavityConfig { mode_order: 18, ..a };
        assert!(rel(photon_mass(&b).unwrap(), 2.0 * photon_mass(&a).unwrap()) < 1e-15);
    }

    #[test]
    fn trap_frequency_for_default_cavity() {
        let omega = trap_frequency(&CavityConfig::default()).unwrap();
        assert!(rel(omega, 2.0 * PI * 3.6e10) < 0.01);
    }

    #[test]
    fn trap_frequency_scaling() {
        let a = CavityConfig::default();
        let b = CavityConfig { mirror_radius: Some(4.0), ..a };
        let c = CavityConfig { length: 8e-6, ..a };
        let wa = trap_frequency(&a).unwrap();
        assert!(rel(trap_frequency(&b).unwrap(), wa / 2.0) < 1e-14);
        assert!(rel(trap_frequency(&c).unwrap(), wa / 2.0) < 1e-14);
    }

    #[test]
    fn flat_mirrors_have_no_trap() {
        let cfg = CavityConfig { mirror_radius: None, ..CavityConfig::default() };
        assert!(matches!(trap_frequency(&cfg), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(critical_photon_number(&cfg), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(condensate_radius(&cfg), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(reference_radius(&cfg), Err(Error::Config { .. })));
        let with_override = CavityConfig { r_bec_override: Some(6e-6), ..cfg };
        assert_eq!(reference_radius(&with_override).unwrap(), 6e-6);
    }

    #[test]
    fn critical_number_for_default_cavity() {
        let nc = critical_photon_number(&CavityConfig::default()).unwrap();
        assert!(rel(nc, 99_000.0) < 0.02, "N_c = {nc}");
    }

    #[test]
    fn critical_number_temperature_scaling() {
        let a = CavityConfig::default();
        let b = CavityConfig { temperature: 600.0, ..a };
        let na = critical_photon_number(&a).unwrap();
        assert!(rel(critical_photon_number(&b).unwrap(), 4.0 * na) < 1e-14);
        let cold = CavityConfig { temperature: 1e-9, ..a };
        assert!(critical_photon_number(&cold).unwrap() < 1e-15);
    }

    #[test]
    fn condensate_radius_near_six_microns() {
        let cfg = CavityConfig::default();
        let r = condensate_radius(&cfg).unwrap();
        assert!(rel(r, 6e-6) < 0.05, "r = {r}");
        let m = photon_mass(&cfg).unwrap();
        let w = trap_frequency(&cfg).unwrap();
        assert!((r * (2.0 * m * w / HBAR).sqrt() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_configs_name_the_key() {
        let bad = CavityConfig { kappa: -1.0, ..CavityConfig::default() };
        match photon_mass(&bad) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "kappa"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = CavityConfig { mode_order: 0, ..CavityConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::Config { key, .. }) if key == "q"));
    }

    proptest! {
        #[test]
        fn mass_identity(l in 0.5e-6f64..20e-6, q in 1u32..40, n0 in 1.0f64..2.0) {
            let cfg = CavityConfig { length: l, mode_order: q, n0, ..CavityConfig::default() };
            let d = DerivedQuantities::from_config(&cfg).unwrap();
            let lhs = d.m_ph * C * C;
            let rhs = HBAR * d.omega_c * n0 * n0;
            prop_assert!(((lhs - rhs) / rhs).abs() < 4.0 * f64::EPSILON);
        }

        #[test]
        fn critical_number_scale_invariant(s in 0.1f64..10.0, r in 0.1f64..10.0) {
            // T -> sT together with Ω -> sΩ (R -> R/s²).
            let a = CavityConfig { mirror_radius: Some(r), ..CavityConfig::default() };
            let b = CavityConfig {
                mirror_radius: Some(r / (s * s)),
                temperature: a.temperature * s,
                ..a
            };
            let na = critical_photon_number(&a).unwrap();
            let nb = critical_photon_number(&b).unwrap();
            prop_assert!(((na - nb) / na).abs() < 1e-12);
        }
    }
}
