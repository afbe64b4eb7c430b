//! Run configuration: flat `key = value` files, command-line overrides and
//! JSON manifests.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use photon_bec::greens::KernelSpec;
use photon_bec::params::CavityConfig;
use photon_bec::steady_state::{RadialGrid, SolverOptions};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub kernel: KernelSpec,
    pub grid: RadialGrid,
    pub solver: SolverOptions,
    /// Directory for data files and the manifest; `None` prints the primary
    /// table to stdout.
    pub output_dir: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cavity = CavityConfig::default();
        Self {
            cavity,
            kernel: KernelSpec::from_config(&cavity),
            grid: RadialGrid { r_max: 30e-6, n_points: 256 },
            solver: SolverOptions::default(),
            output_dir: None,
            format: Format::Csv,
        }
    }
}

/// `(key, unit, description)` for every accepted key.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("L", "m", "mirror spacing"),
    ("R", "m", "mirror radius of curvature, or `flat`"),
    ("q", "1", "longitudinal mode order"),
    ("n0", "1", "refractive index"),
    ("beta", "1/K", "thermo-optic coefficient dn/dT"),
    ("kappa", "W/(m K)", "thermal conductivity"),
    ("cv", "J/(K m^3)", "volumetric heat capacity"),
    ("alpha_in", "1/m", "inelastic absorption coefficient"),
    ("T", "K", "bath temperature"),
    ("r_bec", "m", "reference condensate radius for flat mirrors, or `none`"),
    ("tol", "1", "relative truncation tolerance of the kernel series"),
    ("max_terms", "1", "cap on summed series terms"),
    ("r_max", "m", "outer radius of the radial grid"),
    ("n_points", "1", "radial grid points"),
    ("relaxation", "1", "fixed-point mixing fraction"),
    ("solver_tol", "1", "fixed-point convergence tolerance"),
    ("max_iterations", "1", "fixed-point iteration cap"),
    ("out", "", "output directory"),
    ("format", "", "data file format, `csv` or `json`"),
];

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::config(key, format!("expected a number in SI units, got {value:?}")))
}

fn optional(key: &str, value: &str, none: &[&str]) -> Result<Option<f64>> {
    if none.contains(&value) {
        Ok(None)
    } else {
        number(key, value).map(Some)
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = &mut self.cavity;
        match key {
            "L" => c.length = number(key, value)?,
            "R" => c.mirror_radius = optional(key, value, &["flat", "none"])?,
            "q" => c.mode_order = number(key, value)?,
            "n0" => c.n0 = number(key, value)?,
            "beta" => c.beta = number(key, value)?,
            "kappa" => c.kappa = number(key, value)?,
            "cv" => c.cv = number(key, value)?,
            "alpha_in" => c.alpha_in = number(key, value)?,
            "T" => c.temperature = number(key, value)?,
            "r_bec" => c.r_bec_override = optional(key, value, &["none"])?,
            "tol" => self.kernel.rel_tol = number(key, value)?,
            "max_terms" => self.kernel.max_terms = number(key, value)?,
            "r_max" => self.grid.r_max = number(key, value)?,
            "n_points" => self.grid.n_points = number(key, value)?,
            "relaxation" => self.solver.relaxation = number(key, value)?,
            "solver_tol" => self.solver.tolerance = number(key, value)?,
            "max_iterations" => self.solver.max_iterations = number(key, value)?,
            "out" => self.output_dir = Some(PathBuf::from(value)),
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(CliError::config(key, format!("expected csv or json, got {value:?}"))),
                }
            }
            _ => {
                let known: Vec<&str> = KEYS.iter().map(|k| k.0).collect();
                return Err(CliError::config(key, format!("is not a known key (expected one of {})", known.join(", "))));
            }
        }
        Ok(())
    }

    /// Re-derives the kernel geometry from the cavity and checks every
    /// nested invariant.
    pub fn finalize(mut self) -> Result<Self> {
        self.cavity.validate()?;
        self.kernel = KernelSpec {
            rel_tol: self.kernel.rel_tol,
            max_terms: self.kernel.max_terms,
            ..KernelSpec::from_config(&self.cavity)
        };
        self.kernel.validate()?;
        self.grid.validate()?;
        self.solver.validate()?;
        Ok(self)
    }
}

/// Splits `key=value`, trimming both sides.
pub fn split_assignment(text: &str) -> Result<(&str, &str)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::config(text.trim(), "expected key=value"))?;
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() {
        return Err(CliError::config("", format!("missing key in {text:?}")));
    }
    Ok((key, value))
}

fn from_json(text: &str, path: &Path) -> Result<RunConfig> {
    let invalid = |e: serde_json::Error| CliError::config("config", format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(text).map_err(invalid)?;
    let config = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(config).map_err(invalid)
}

fn from_key_value(text: &str, path: &Path) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_assignment(line).map_err(|e| match e {
            CliError::Config(photon_bec::Error::Config { key, reason }) => {
                CliError::config(&key, format!("{reason} ({}:{})", path.display(), i + 1))
            }
            other => other,
        })?;
        config.set(key, value)?;
    }
    Ok(config)
}

/// Builds a validated configuration from a file (key=value text or a JSON
/// manifest) or the built-in defaults, then applies `key=value` overrides.
pub fn parse_config(file: Option<&Path>, defaults: bool, overrides: &[String]) -> Result<RunConfig> {
    let mut config = match (file, defaults) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
            if text.trim_start().starts_with('{') {
                from_json(&text, path)?
            } else {
                from_key_value(&text, path)?
            }
        }
        (None, true) => RunConfig::default(),
        (None, false) => return Err(CliError::config("config", "pass --config <file> or --defaults")),
    };
    for o in overrides {
        let (key, value) = split_assignment(o)?;
        config.set(key, value)?;
    }
    config.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn key_of(e: CliError) -> String {
        match e {
            CliError::Config(photon_bec::Error::Config { key, .. }) => key,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn defaults_are_the_reference_cavity() {
        let c = parse_config(None, true, &[]).unwrap();
        assert_eq!(c.cavity, CavityConfig::default());
        assert_eq!(c.cavity.length, 2e-6);
        assert_eq!(c.cavity.alpha_in, 0.63);
        assert_eq!(c.cavity.kappa, 0.168);
    }

    #[test]
    fn override_replaces_one_value() {
        let c = parse_config(None, true, &["L=4e-6".to_string()]).unwrap();
        assert_eq!(c.cavity, CavityConfig { length: 4e-6, ..Default::default() });
        assert_eq!(c.kernel.length, 4e-6);
    }

    #[test]
    fn errors_name_the_key() {
        assert_eq!(key_of(parse_config(None, true, &["kappa=-1".into()]).unwrap_err()), "kappa");
        assert_eq!(key_of(parse_config(None, true, &["colour=red".into()]).unwrap_err()), "colour");
        assert_eq!(key_of(parse_config(None, true, &["L=2um".into()]).unwrap_err()), "L");
        assert_eq!(key_of(parse_config(None, true, &["n_points=10".into()]).unwrap_err()), "n_points");
        assert_eq!(key_of(parse_config(None, false, &[]).unwrap_err()), "config");
    }

    #[test]
    fn flat_mirrors_and_comments() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# flat cavity\nR = flat\nr_bec = 6e-6  # reference radius\n\nalpha_in=1.2").unwrap();
        let c = parse_config(Some(f.path()), false, &[]).unwrap();
        assert_eq!(c.cavity.mirror_radius, None);
        assert_eq!(c.cavity.r_bec_override, Some(6e-6));
        assert_eq!(c.cavity.alpha_in, 1.2);
    }

    #[test]
    fn json_round_trip() {
        let c = parse_config(None, true, &["q=7".into(), "format=json".into(), "tol=1e-9".into()]).unwrap();
        let manifest = serde_json::json!({ "tool": "pbec", "config": c });
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "{manifest}").unwrap();
        assert_eq!(parse_config(Some(f.path()), false, &[]).unwrap(), c);
    }
}
