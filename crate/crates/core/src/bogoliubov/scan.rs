//! Critical momentum and velocity along one parameter axis.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::critical::fit_at;
use super::{critical_momentum, KernelMode, UniformCondensate};
use crate::error::{Error, Result};
use crate::greens::KernelSpec;
use crate::params::CavityConfig;

/// Parameter swept by [`scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanAxis {
    #[serde(rename = "alpha_in")]
    AlphaIn,
    #[serde(rename = "L")]
    Length,
    #[serde(rename = "N")]
    PhotonNumber,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::AlphaIn => "alpha_in",
            ScanAxis::Length => "L",
            ScanAxis::PhotonNumber => "N",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            ScanAxis::AlphaIn => "1/m",
            ScanAxis::Length => "m",
            ScanAxis::PhotonNumber => "1",
        }
    }

    /// Configuration and photon number with the swept value substituted.
    /// Mirror spacing is varied at fixed mode order.
    pub fn apply(self, config: &CavityConfig, n_bec: f64, value: f64) -> (CavityConfig, f64) {
        let mut c = *config;
        let mut n = n_bec;
        match self {
            ScanAxis::AlphaIn => c.alpha_in = value,
            ScanAxis::Length => c.length = value,
            ScanAxis::PhotonNumber => n = value,
        }
        (c, n)
    }
}

impl fmt::Display for ScanAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha_in" => Ok(ScanAxis::AlphaIn),
            "L" => Ok(ScanAxis::Length),
            "N" => Ok(ScanAxis::PhotonNumber),
            other => Err(Error::config("axis", format!("expected alpha_in, L or N, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// Swept parameter value, in the axis unit.
    pub value: f64,
    /// Critical momentum [1/m].
    pub k_critical: f64,
    /// Low-`k` slope of `Re Ω` [m/s].
    pub v_critical: f64,
    /// Relative RMS residual of that slope fit; above
    /// [`FIT_LIMIT`](super::FIT_LIMIT) the branch is not linear and the
    /// slope is not a sound velocity.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub axis: ScanAxis,
    pub mode: KernelMode,
    /// Rows in increasing order of the swept value.
    pub rows: Vec<ScanRow>,
}

fn point(axis: ScanAxis, value: f64, config: &CavityConfig, n_bec: f64, spec: &KernelSpec, mode: KernelMode) -> Result<ScanRow> {
    let (c, n) = axis.apply(config, n_bec, value);
    let spec = KernelSpec {
        rel_tol: spec.rel_tol,
        max_terms: spec.max_terms,
        ..KernelSpec::from_config(&c)
    };
    let cond = UniformCondensate::new(&c, n)?;
    let k_critical = critical_momentum(&cond, &spec, mode)?;
    let fit = fit_at(k_critical, &cond, &spec, mode)?;
    Ok(ScanRow {
        value,
        k_critical,
        v_critical: fit.v_c,
        fit_residual: fit.residual,
    })
}

/// Evaluates every point in parallel; each result carries the offending
/// value on failure. Output order follows `values`.
pub fn scan_points(
    axis: ScanAxis,
    values: &[f64],
    config: &CavityConfig,
    n_bec: f64,
    spec: &KernelSpec,
    mode: KernelMode,
) -> Vec<Result<ScanRow>> {
    values
        .par_iter()
        .map(|&v| {
            point(axis, v, config, n_bec, spec, mode).map_err(|e| Error::ScanPoint {
                value: v,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Scan over strictly increasing positive `values`; the first failing point
/// aborts the scan.
///
/// `spec` supplies the truncation controls; geometry and diffusivity
/// follow each point's configuration.
pub fn scan(axis: ScanAxis, values: &[f64], config: &CavityConfig, n_bec: f64, spec: &KernelSpec, mode: KernelMode) -> Result<ScanTable> {
    if values.is_empty() {
        return Err(Error::Input("scan range is empty".to_string()));
    }
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Input("scan values must be finite and positive".to_string()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("scan values must be strictly increasing".to_string()));
    }
    let rows = scan_points(axis, values, config, n_bec, spec, mode)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable { axis, mode, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::critical_velocity;

    #[test]
    fn axis_names_round_trip() {
        for a in [ScanAxis::AlphaIn, ScanAxis::Length, ScanAxis::PhotonNumber] {
            assert_eq!(a.name().parse::<ScanAxis>().unwrap(), a);
        }
    }

    #[test]
    fn single_point_matches_direct_call() {
        let c = CavityConfig::default();
        let spec = KernelSpec::from_config(&c);
        let table = scan(ScanAxis::PhotonNumber, &[6e4], &c, 1.0, &spec, KernelMode::Static).unwrap();
        let cond = UniformCondensate::new(&c, 6e4).unwrap();
        let v = critical_velocity(&cond, &spec, KernelMode::Static).unwrap();
        assert_eq!(table.rows[0].k_critical, critical_momentum(&cond, &spec, KernelMode::Static).unwrap());
        assert_eq!(table.rows[0].v_critical, v.v_c);
    }

    #[test]
    fn unordered_range_rejected() {
        let c = CavityConfig::default();
        let spec = KernelSpec::from_config(&c);
        assert!(matches!(
            scan(ScanAxis::AlphaIn, &[1.0, 0.5], &c, 6e4, &spec, KernelMode::Static),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn failing_point_names_value() {
        let c = CavityConfig::default();
        let spec = KernelSpec::from_config(&c);
        // A negative absorption is rejected by configuration validation.
        let out = scan_points(ScanAxis::AlphaIn, &[0.5, -1.0], &c, 6e4, &spec, KernelMode::Static);
        assert!(out[0].is_ok());
        assert!(matches!(&out[1], Err(Error::ScanPoint { value, .. }) if *value == -1.0));
    }
}
