//! Figure data sets, one CSV per panel.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex;
use photon_bec::bogoliubov::{dispersion_sweep, scan_points, KernelMode, ScanAxis, ScanRow, UniformCondensate, FIT_LIMIT};
use photon_bec::greens::{greens_3d, KernelSpec};
use photon_bec::steady_state::{observables, Geometry, Observables, SteadyStateSolver};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::Result;
use crate::output::{Cell, Sink, Table, Tally};
use crate::range::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

/// Photon number of the single-condensate panels.
const PHOTONS: f64 = 6e4;
const PHOTON_RANGE: Range = Range { start: 1e4, end: 1e5, count: 19, log: false };
const SPECTRUM_PHOTONS: [f64; 5] = [2e4, 4e4, 6e4, 8e4, 1e5];
const LENGTHS_3D: [f64; 4] = [1e-6, 2e-6, 4e-6, 10e-6];

pub fn run_figure(id: FigureId, config: &RunConfig) -> Result<()> {
    let dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("figures")).join(id.name());
    let mut sink = Sink::new(config, format!("figure {}", id.name()), Some(dir))?;
    let mut tally = Tally::default();
    match id {
        FigureId::Fig2 => fig2(config, &mut sink, &mut tally)?,
        FigureId::Fig3 => fig3(config, &mut sink, &mut tally)?,
        FigureId::Fig4 => fig4(config, &mut sink, &mut tally)?,
        FigureId::Fig5 => fig5(config, &mut sink, &mut tally)?,
    }
    let dir = sink.dir().map(|d| d.display().to_string()).unwrap_or_default();
    let verdict = sink.finish(&tally);
    if verdict.is_ok() {
        eprintln!("{}: {} points, {} failed, written to {dir}", id.name(), tally.total, tally.failures.len());
    }
    verdict
}

fn fig2(config: &RunConfig, sink: &mut Sink, tally: &mut Tally) -> Result<()> {
    let photons = PHOTON_RANGE.values();
    let mut series: Vec<Vec<Option<Observables>>> = Vec::new();
    for geometry in [Geometry::Curved, Geometry::Flat] {
        let solver = SteadyStateSolver::new(&config.cavity, &config.kernel, &config.grid, geometry, config.solver)?;
        let obs = solver
            .sweep(&photons)
            .into_iter()
            .zip(&photons)
            .map(|(s, &n)| match s {
                Ok(s) => {
                    tally.succeed(1);
                    Some(observables(&s))
                }
                Err(e) => {
                    tally.fail(&format!("steady {geometry}"), n, &e);
                    None
                }
            })
            .collect();
        series.push(obs);
    }
    let get = |o: &Option<Observables>, f: fn(&Observables) -> f64| o.as_ref().map_or(f64::NAN, f);
    let mut a = Table::new(&[
        ("N", "1"),
        ("mu_curved", "J"),
        ("delta_r_curved", "m"),
        ("mu_flat", "J"),
        ("delta_r_flat", "m"),
    ]);
    let mut b = Table::new(&[("N", "1"), ("delta_t_max_curved", "K"), ("delta_t_max_flat", "K")]);
    for (i, &n) in photons.iter().enumerate() {
        let (c, f) = (&series[0][i], &series[1][i]);
        a.push(vec![
            n.into(),
            get(c, |o| o.mu).into(),
            get(c, |o| o.delta_r).into(),
            get(f, |o| o.mu).into(),
            get(f, |o| o.delta_r).into(),
        ]);
        b.push(vec![n.into(), get(c, |o| o.delta_t_max).into(), get(f, |o| o.delta_t_max).into()]);
    }
    sink.note("mu and delta_r are relative to the interaction-free state");
    sink.note("curved: trapped solve with midplane temperature; flat: untrapped solve with mode-averaged temperature");
    sink.primary("fig2a", &a)?;
    sink.primary("fig2b", &b)
}

fn fig3(config: &RunConfig, sink: &mut Sink, tally: &mut Tally) -> Result<()> {
    let rhos = Range { start: 5e-8, end: 1e-5, count: 200, log: true }.values();
    for l in LENGTHS_3D {
        let spec = KernelSpec {
            length: l,
            ..config.kernel
        };
        let values: Vec<_> = rhos.par_iter().map(|&rho| greens_3d(rho, 0.0, 0.0, &spec)).collect();
        let mut table = Table::new(&[("rho", "m"), ("greens", "1/m"), ("coulomb", "1/m")]);
        for (&rho, g) in rhos.iter().zip(values) {
            let g = tally.record(&format!("greens L={l:e}"), rho, g.map(|e| e.value));
            table.push(vec![rho.into(), g.into(), (-1.0 / (4.0 * PI * rho)).into()]);
        }
        sink.primary(&format!("fig3_L{:.0}um", l * 1e6), &table)?;
    }
    sink.note("field and source on the midplane; G solves laplacian G = delta, so the unbounded limit is -1/(4 pi rho)");
    Ok(())
}

fn spectrum(cond: &UniformCondensate, spec: &KernelSpec, ks: &[f64], mode: KernelMode) -> photon_bec::Result<Vec<Complex<f64>>> {
    Ok(dispersion_sweep(ks, cond, spec, mode)?.into_iter().map(|p| p.omega).collect())
}

fn fig4(config: &RunConfig, sink: &mut Sink, tally: &mut Tally) -> Result<()> {
    let grids = [
        ("wide", Range { start: 1e3, end: 1e7, count: 200, log: true }.values()),
        ("low", Range { start: 1e2, end: 1e4, count: 100, log: false }.values()),
    ];
    let conds = SPECTRUM_PHOTONS
        .iter()
        .map(|&n| UniformCondensate::new(&config.cavity, n))
        .collect::<photon_bec::Result<Vec<_>>>()?;
    let free = conds[0];
    for ((real_stem, imag_stem), (_, ks)) in [("fig4a", "fig4b"), ("fig4c", "fig4d")].into_iter().zip(&grids) {
        let jobs: Vec<(usize, KernelMode)> = (0..conds.len())
            .flat_map(|i| [(i, KernelMode::Delayed), (i, KernelMode::Static)])
            .collect();
        let curves: Vec<_> = jobs
            .par_iter()
            .map(|&(i, mode)| spectrum(&conds[i], &config.kernel, ks, mode))
            .collect();
        let mut real_cols = vec![("k".to_string(), "1/m"), ("free".to_string(), "rad/s")];
        let mut imag_cols = vec![("k".to_string(), "1/m")];
        let mut re: Vec<Vec<f64>> = Vec::new();
        let mut im: Vec<Vec<f64>> = Vec::new();
        for (&(i, mode), curve) in jobs.iter().zip(curves) {
            let n = SPECTRUM_PHOTONS[i];
            let omegas = match curve {
                Ok(c) => {
                    tally.succeed(c.len());
                    c
                }
                Err(e) => {
                    for &k in ks {
                        tally.fail(&format!("{mode} N={n:e}"), k, &e);
                    }
                    vec![Complex::new(f64::NAN, f64::NAN); ks.len()]
                }
            };
            real_cols.push((format!("{mode}_re_N{n:.0}"), "rad/s"));
            re.push(omegas.iter().map(|w| w.re).collect());
            if mode == KernelMode::Delayed {
                imag_cols.push((format!("{mode}_im_N{n:.0}"), "rad/s"));
                im.push(omegas.iter().map(|w| w.im).collect());
            }
        }
        let mut real = Table::new(&real_cols);
        let mut imag = Table::new(&imag_cols);
        for (j, &k) in ks.iter().enumerate() {
            let mut row: Vec<Cell> = vec![k.into(), free.free_frequency(k).into()];
            row.extend(re.iter().map(|c| Cell::Num(c[j])));
            real.push(row);
            let mut row: Vec<Cell> = vec![k.into()];
            row.extend(im.iter().map(|c| Cell::Num(c[j])));
            imag.push(row);
        }
        sink.primary(real_stem, &real)?;
        sink.primary(imag_stem, &imag)?;
    }
    sink.note("axes in SI units: k in 1/m, Omega in rad/s");
    sink.note("panels c and d repeat a and b on a linear low-k grid");
    Ok(())
}

fn fig5(config: &RunConfig, sink: &mut Sink, tally: &mut Tally) -> Result<()> {
    let axes = [
        (ScanAxis::AlphaIn, Range { start: 0.1, end: 10.0, count: 21, log: true }, "a", "d"),
        (ScanAxis::Length, Range { start: 1e-6, end: 6e-6, count: 26, log: false }, "b", "e"),
        (ScanAxis::PhotonNumber, PHOTON_RANGE, "c", "f"),
    ];
    let mut worst_delayed: f64 = 0.0;
    for (axis, range, k_panel, v_panel) in axes {
        let values = range.values();
        let mut rows: Vec<Vec<Option<ScanRow>>> = Vec::new();
        for mode in [KernelMode::Delayed, KernelMode::Static] {
            let points = scan_points(axis, &values, &config.cavity, PHOTONS, &config.kernel, mode);
            rows.push(
                points
                    .into_iter()
                    .zip(&values)
                    .map(|(r, &v)| match r {
                        Ok(r) => {
                            tally.succeed(1);
                            Some(r)
                        }
                        Err(e) => {
                            tally.fail(&format!("{axis} {mode}"), v, &e);
                            None
                        }
                    })
                    .collect(),
            );
        }
        let get = |r: &Option<ScanRow>, f: fn(&ScanRow) -> f64| r.as_ref().map_or(f64::NAN, f);
        let mut k_table = Table::new(&[(axis.name(), axis.unit()), ("k_c_delayed", "1/m"), ("k_c_static", "1/m")]);
        let mut v_table = Table::new(&[
            (axis.name(), axis.unit()),
            ("v_c_delayed", "m/s"),
            ("fit_residual_delayed", "1"),
            ("v_c_static", "m/s"),
            ("fit_residual_static", "1"),
        ]);
        for (i, &v) in values.iter().enumerate() {
            let (d, s) = (&rows[0][i], &rows[1][i]);
            worst_delayed = worst_delayed.max(get(d, |r| r.fit_residual));
            k_table.push(vec![v.into(), get(d, |r| r.k_critical).into(), get(s, |r| r.k_critical).into()]);
            v_table.push(vec![
                v.into(),
                get(d, |r| r.v_critical).into(),
                get(d, |r| r.fit_residual).into(),
                get(s, |r| r.v_critical).into(),
                get(s, |r| r.fit_residual).into(),
            ]);
        }
        sink.primary(&format!("fig5{k_panel}"), &k_table)?;
        sink.primary(&format!("fig5{v_panel}"), &v_table)?;
    }
    sink.note(format!("base point N = {PHOTONS:e}; panel b varies L at fixed q"));
    if worst_delayed > FIT_LIMIT {
        sink.note(format!(
            "delayed low-k branch is not linear (fit residual up to {worst_delayed:.3} > {FIT_LIMIT}); v_c_delayed is the fitted slope, v_c_static is the sound velocity"
        ));
    }
    Ok(())
}
