//! Single-shot subcommands.

use std::fmt::Write as _;

use num_complex::Complex;
use photon_bec::bogoliubov::{
    critical_momentum, dispersion_static, dispersion_sweep, low_k_fit, scan_points, KernelMode, ScanAxis, UniformCondensate, FIT_LIMIT,
};
use photon_bec::greens::{greens_2d_effective, greens_3d, kernel_delayed, kernel_static, KernelEval};
use photon_bec::params::DerivedQuantities;
use photon_bec::steady_state::{observables, Geometry, SteadyStateSolver};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, KEYS};
use crate::error::{CliError, Result};
use crate::output::{print, Cell, Sink, Table, Tally};
use crate::range::Range;

#[derive(Serialize)]
struct ParamsReport<'a> {
    config: &'a RunConfig,
    derived: DerivedQuantities,
}

fn config_value(config: &RunConfig, key: &str) -> String {
    let c = &config.cavity;
    let opt = |v: Option<f64>, none: &str| v.map_or(none.to_string(), |x| format!("{x:e}"));
    match key {
        "L" => format!("{:e}", c.length),
        "R" => opt(c.mirror_radius, "flat"),
        "q" => c.mode_order.to_string(),
        "n0" => format!("{:e}", c.n0),
        "beta" => format!("{:e}", c.beta),
        "kappa" => format!("{:e}", c.kappa),
        "cv" => format!("{:e}", c.cv),
        "alpha_in" => format!("{:e}", c.alpha_in),
        "T" => format!("{:e}", c.temperature),
        "r_bec" => opt(c.r_bec_override, "none"),
        "tol" => format!("{:e}", config.kernel.rel_tol),
        "max_terms" => config.kernel.max_terms.to_string(),
        "r_max" => format!("{:e}", config.grid.r_max),
        "n_points" => config.grid.n_points.to_string(),
        "relaxation" => format!("{:e}", config.solver.relaxation),
        "solver_tol" => format!("{:e}", config.solver.tolerance),
        "max_iterations" => config.solver.max_iterations.to_string(),
        "out" => config.output_dir.as_ref().map_or("-".to_string(), |p| p.display().to_string()),
        "format" => config.format.to_string(),
        _ => unreachable!("unlisted key {key}"),
    }
}

pub fn params_show(config: &RunConfig, json: bool) -> Result<()> {
    let derived = DerivedQuantities::from_config(&config.cavity)?;
    if json {
        let mut text = serde_json::to_string_pretty(&ParamsReport { config, derived }).expect("report serializes");
        text.push('\n');
        return print(&text);
    }
    let mut out = String::new();
    for (key, unit, _) in KEYS {
        let unit = if unit.is_empty() { String::new() } else { format!("[{unit}]") };
        writeln!(out, "{key:<16}{:>14} {unit}", config_value(config, key)).unwrap();
    }
    out.push('\n');
    for (name, unit, value) in derived.rows() {
        let v = value.map_or("-".to_string(), |x| format!("{x:.6e}"));
        writeln!(out, "{name:<16}{v:>14} [{unit}]").unwrap();
    }
    print(&out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelKind {
    G3d,
    G2d,
    Static,
    Delayed,
}

impl KernelKind {
    fn name(self) -> &'static str {
        match self {
            KernelKind::G3d => "g3d",
            KernelKind::G2d => "g2d",
            KernelKind::Static => "static",
            KernelKind::Delayed => "delayed",
        }
    }

    /// Abscissa name and unit, and value unit.
    fn units(self) -> (&'static str, &'static str, &'static str) {
        match self {
            KernelKind::G3d | KernelKind::G2d => ("rho", "m", "1/m"),
            KernelKind::Static | KernelKind::Delayed => ("k", "1/m", "m"),
        }
    }

    pub fn default_grid(self) -> Range {
        match self {
            KernelKind::G3d | KernelKind::G2d => Range { start: 5e-8, end: 1e-5, count: 200, log: true },
            KernelKind::Static | KernelKind::Delayed => Range { start: 1e3, end: 1e8, count: 200, log: true },
        }
    }
}

pub struct KernelDump {
    pub kind: KernelKind,
    pub grid: Range,
    pub z: f64,
    pub z_src: f64,
    pub omega: Complex<f64>,
}

pub fn kernel_dump(config: &RunConfig, job: &KernelDump) -> Result<()> {
    let spec = config.kernel;
    let xs = job.grid.values();
    let evals: Vec<photon_bec::Result<KernelEval<Complex<f64>, f64>>> = xs
        .par_iter()
        .map(|&x| {
            let real = |e: KernelEval<f64>| KernelEval {
                value: Complex::new(e.value, 0.0),
                terms_used: e.terms_used,
                truncation_bound: e.truncation_bound,
            };
            match job.kind {
                KernelKind::G3d => greens_3d(x, job.z, job.z_src, &spec).map(real),
                KernelKind::G2d => greens_2d_effective(x, &spec).map(real),
                KernelKind::Static => kernel_static(x, &spec).map(real),
                KernelKind::Delayed => kernel_delayed(job.omega, x, &spec),
            }
        })
        .collect();
    let (x_name, x_unit, v_unit) = job.kind.units();
    let mut table = Table::new(&[
        (x_name, x_unit),
        ("value_re", v_unit),
        ("value_im", v_unit),
        ("terms_used", "1"),
        ("truncation_bound", v_unit),
    ]);
    let mut tally = Tally::default();
    for (x, e) in xs.iter().zip(evals) {
        let row = match e {
            Ok(e) => {
                tally.succeed(1);
                vec![Cell::Num(*x), e.value.re.into(), e.value.im.into(), e.terms_used.into(), e.truncation_bound.into()]
            }
            Err(err) => {
                tally.fail(job.kind.name(), *x, &err);
                vec![Cell::Num(*x), f64::NAN.into(), f64::NAN.into(), 0usize.into(), f64::NAN.into()]
            }
        };
        table.push(row);
    }
    let mut sink = Sink::new(config, format!("kernel dump --kernel {}", job.kind.name()), config.output_dir.clone())?;
    if job.kind == KernelKind::Delayed {
        sink.note(format!("delayed kernel at omega = {:e} + {:e} i rad/s", job.omega.re, job.omega.im));
    }
    if job.kind == KernelKind::G3d {
        sink.note(format!("field point z = {:e} m, source z = {:e} m", job.z, job.z_src));
    }
    sink.primary(&format!("kernel_{}", job.kind.name()), &table)?;
    sink.finish(&tally)
}

/// Trapped geometry when a mirror radius is configured.
pub fn default_geometry(config: &RunConfig) -> Geometry {
    if config.cavity.mirror_radius.is_some() {
        Geometry::Curved
    } else {
        Geometry::Flat
    }
}

pub fn steady(config: &RunConfig, photons: &[f64], geometry: Geometry) -> Result<()> {
    let solver = SteadyStateSolver::new(&config.cavity, &config.kernel, &config.grid, geometry, config.solver)?;
    let states = solver.sweep(photons);
    let mut summary = Table::new(&[
        ("N", "1"),
        ("mu", "J"),
        ("delta_r", "m"),
        ("delta_t_max", "K"),
        ("iterations", "1"),
    ]);
    let mut profiles = Table::new(&[("N", "1"), ("r", "m"), ("density", "1/m^3"), ("delta_t", "K")]);
    let mut tally = Tally::default();
    for (&n, state) in photons.iter().zip(states) {
        match state {
            Ok(s) => {
                tally.succeed(1);
                let o = observables(&s);
                summary.push(vec![n.into(), o.mu.into(), o.delta_r.into(), o.delta_t_max.into(), s.iterations.into()]);
                for ((r, d), t) in s.grid.radii().iter().zip(&s.density).zip(&s.delta_t) {
                    profiles.push(vec![n.into(), (*r).into(), (*d).into(), (*t).into()]);
                }
            }
            Err(e) => {
                tally.fail(&format!("steady {geometry}"), n, &e);
                summary.push(vec![n.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), 0usize.into()]);
            }
        }
    }
    let mut sink = Sink::new(config, format!("steady --geometry {geometry}"), config.output_dir.clone())?;
    sink.note(match geometry {
        Geometry::Curved => "delta_t is the midplane temperature rise",
        Geometry::Flat => "delta_t is the temperature rise averaged over the longitudinal mode",
    });
    sink.primary("steady", &summary)?;
    sink.secondary("steady_profiles", &profiles)?;
    sink.finish(&tally)
}

fn condensate(config: &RunConfig, photons: f64) -> Result<UniformCondensate> {
    Ok(UniformCondensate::new(&config.cavity, photons)?)
}

pub fn dispersion(config: &RunConfig, photons: f64, mode: KernelMode, ks: &[f64]) -> Result<()> {
    let cond = condensate(config, photons)?;
    let spec = config.kernel;
    let mut tally = Tally::default();
    let omegas: Vec<Option<(Complex<f64>, f64)>> = match mode {
        KernelMode::Static => ks
            .par_iter()
            .map(|&k| dispersion_static(k, &cond, &spec))
            .collect::<Vec<_>>()
            .into_iter()
            .zip(ks)
            .map(|(p, &k)| match p {
                Ok(p) => {
                    tally.succeed(1);
                    Some((p.omega, p.residual))
                }
                Err(e) => {
                    tally.fail("static", k, &e);
                    None
                }
            })
            .collect(),
        KernelMode::Delayed => match dispersion_sweep(ks, &cond, &spec, mode) {
            Ok(points) => {
                tally.succeed(points.len());
                points.into_iter().map(|p| Some((p.omega, p.residual))).collect()
            }
            Err(e) => {
                for &k in ks {
                    tally.fail("delayed", k, &e);
                }
                vec![None; ks.len()]
            }
        },
    };
    let mut table = Table::new(&[
        ("k", "1/m"),
        ("omega_re", "rad/s"),
        ("omega_im", "rad/s"),
        ("free", "rad/s"),
        ("residual", "1"),
    ]);
    for (&k, w) in ks.iter().zip(omegas) {
        let (omega, residual) = w.unwrap_or((Complex::new(f64::NAN, f64::NAN), f64::NAN));
        table.push(vec![k.into(), omega.re.into(), omega.im.into(), cond.free_frequency(k).into(), residual.into()]);
    }
    let mut sink = Sink::new(config, format!("dispersion --mode {mode} --N {photons:e}"), config.output_dir.clone())?;
    sink.note("k in 1/m and Omega in rad/s (SI)");
    sink.primary("dispersion", &table)?;
    sink.finish(&tally)
}

pub fn critical(config: &RunConfig, photons: f64, modes: &[KernelMode]) -> Result<()> {
    let cond = condensate(config, photons)?;
    let spec = config.kernel;
    let mut table = Table::new(&[
        ("mode", "-"),
        ("k_c", "1/m"),
        ("v_c", "m/s"),
        ("fit_residual", "1"),
        ("sonic", "-"),
    ]);
    let mut tally = Tally::default();
    let mut sink = Sink::new(config, format!("critical --N {photons:e}"), config.output_dir.clone())?;
    for &mode in modes {
        let k_c = tally.record(mode.to_string().as_str(), photons, critical_momentum(&cond, &spec, mode));
        let fit = if k_c.is_nan() {
            None
        } else {
            let fit = low_k_fit(&cond, &spec, mode);
            if let Err(e) = &fit {
                tally.fail(&format!("{mode} v_c"), photons, e);
            }
            fit.ok()
        };
        let (v_c, residual) = fit.map_or((f64::NAN, f64::NAN), |f| (f.v_c, f.residual));
        let sonic = if residual <= FIT_LIMIT { "true" } else { "false" };
        if residual > FIT_LIMIT {
            sink.note(format!(
                "{mode}: low-k branch is not linear (fit residual {residual:.3} > {FIT_LIMIT}); v_c is the fitted slope only"
            ));
        }
        table.push(vec![mode.to_string().as_str().into(), k_c.into(), v_c.into(), residual.into(), sonic.into()]);
    }
    sink.primary("critical", &table)?;
    sink.finish(&tally)
}

pub fn scan(config: &RunConfig, photons: f64, axis: ScanAxis, mode: KernelMode, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(CliError::config("range", "scan values must be positive"));
    }
    let mut table = Table::new(&[
        (axis.name(), axis.unit()),
        ("k_critical", "1/m"),
        ("v_critical", "m/s"),
        ("fit_residual", "1"),
    ]);
    let mut tally = Tally::default();
    for (&v, row) in values.iter().zip(scan_points(axis, values, &config.cavity, photons, &config.kernel, mode)) {
        match row {
            Ok(r) => {
                tally.succeed(1);
                table.push(vec![v.into(), r.k_critical.into(), r.v_critical.into(), r.fit_residual.into()]);
            }
            Err(e) => {
                tally.fail(&format!("{axis} {mode}"), v, &e);
                table.push(vec![v.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into()]);
            }
        }
    }
    let mut sink = Sink::new(config, format!("scan --axis {axis} --mode {mode}"), config.output_dir.clone())?;
    if axis == ScanAxis::Length {
        sink.note("mirror spacing varies at fixed longitudinal mode order");
    }
    sink.primary("scan", &table)?;
    sink.finish(&tally)
}
