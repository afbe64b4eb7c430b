mod support;

use std::f64::consts::PI;

use photon_bec::constants::{C, HBAR};
use photon_bec::greens::{greens_3d, KernelSpec};
use photon_bec::linalg::fit_line;
use photon_bec::params::{condensate_radius, CavityConfig};
use photon_bec::steady_state::*;
use support::*;

fn grid(n: usize) -> RadialGrid {
    RadialGrid::new(30e-6, n).unwrap()
}

fn solver(config: &CavityConfig, n: usize, geometry: Geometry) -> SteadyStateSolver {
    SteadyStateSolver::new(config, &KernelSpec::from_config(config), &grid(n), geometry, SolverOptions::default()).unwrap()
}

fn photon_numbers() -> Vec<f64> {
    (1..=10).map(|i| 1e4 * i as f64).collect()
}

/// Largest deviation from a least-squares line, relative to each value.
fn line_deviation(x: &[f64], y: &[f64]) -> f64 {
    let (a, b) = fit_line(x, y);
    x.iter().zip(y).map(|(x, y)| ((y - a - b * x) / y).abs()).fold(0.0, f64::max)
}

/// Relative RMS residual of a least-squares line.
fn line_residual(x: &[f64], y: &[f64]) -> f64 {
    let (a, b) = fit_line(x, y);
    let res: f64 = x.iter().zip(y).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let norm: f64 = y.iter().map(|y| y * y).sum();
    (res / norm).sqrt()
}

#[test]
fn states_are_normalised_and_physical() {
    let c = CavityConfig::default();
    for geometry in [Geometry::Flat, Geometry::Curved] {
        let s = solver(&c, 256, geometry);
        for (n, state) in photon_numbers().iter().zip(s.sweep(&photon_numbers())) {
            let state = state.unwrap();
            let total = state.integrated_photons(c.length);
            assert!((total / state.photons_on_grid - 1.0).abs() < 1e-6, "{geometry} N = {n}");
            assert!(state.density.iter().all(|d| *d >= 0.0));
            assert!(state.delta_t.iter().all(|t| *t >= 0.0));
            assert!(state.gpe_residual <= 1e-6, "{geometry} N = {n}: {}", state.gpe_residual);
            let o = observables(&state);
            assert!(o.mu > 0.0 && o.delta_r > 0.0, "{geometry} N = {n}: {o:?}");
        }
    }
}

#[test]
fn flat_normalisation_counts_reference_area() {
    let c = CavityConfig::default();
    let state = solve_flat(&c, 6e4, &grid(128)).unwrap();
    let r_ref = condensate_radius(&c).unwrap();
    let areal_grid = state.photons_on_grid / (PI * 30e-6 * 30e-6);
    let areal_ref = 6e4 / (PI * r_ref * r_ref);
    assert!((areal_grid / areal_ref - 1.0).abs() < 1e-12);
}

#[test]
fn trapped_reference_radius() {
    let c = CavityConfig { beta: 0.0, ..Default::default() };
    let state = solve_curved(&c, 6e4, &grid(256)).unwrap();
    let r = state.radius().unwrap();
    let analytic = condensate_radius(&c).unwrap();
    assert!((r / 6e-6 - 1.0).abs() < 0.05);
    assert!((r / analytic - 1.0).abs() < 0.02, "{r} vs {analytic}");
    assert_eq!(state.mu, 0.0);
}

#[test]
fn no_absorption_means_reference_observables() {
    let c = CavityConfig { alpha_in: 0.0, ..Default::default() };
    for geometry in [Geometry::Flat, Geometry::Curved] {
        let o = observables(&solver(&c, 128, geometry).solve(6e4).unwrap());
        assert_eq!((o.mu, o.delta_r, o.delta_t_max), (0.0, 0.0, 0.0));
    }
}

#[test]
fn curved_trends_with_photon_number() {
    let c = CavityConfig::default();
    let s = solver(&c, 256, Geometry::Curved);
    let obs: Vec<Observables> = s.sweep(&photon_numbers()).into_iter().map(|r| observables(&r.unwrap())).collect();
    for w in obs.windows(2) {
        assert!(w[1].mu > w[0].mu);
        assert!(w[1].delta_r > w[0].delta_r);
        assert!(w[1].delta_t_max > w[0].delta_t_max);
    }
    let mu: Vec<f64> = obs.iter().map(|o| o.mu).collect();
    assert!(line_deviation(&photon_numbers(), &mu) < 0.1);
}

#[test]
fn flat_chemical_potential_nearly_linear() {
    let c = CavityConfig::default();
    let s = solver(&c, 256, Geometry::Flat);
    let mu: Vec<f64> = s.sweep(&photon_numbers()).into_iter().map(|r| r.unwrap().mu_energy()).collect();
    assert!(mu.windows(2).all(|w| w[1] > w[0]));
    let dev = line_residual(&photon_numbers(), &mu);
    assert!(dev < 0.1, "residual {dev}");
}

#[test]
fn grid_refinement_changes_mu_little() {
    let c = CavityConfig::default();
    for geometry in [Geometry::Flat, Geometry::Curved] {
        let coarse = solver(&c, 256, geometry).solve(6e4).unwrap().mu;
        let fine = solver(&c, 512, geometry).solve(6e4).unwrap().mu;
        assert!(((coarse - fine) / fine).abs() < 1e-3, "{geometry}: {coarse} vs {fine}");
    }
}

#[test]
fn imaginary_time_agrees_with_fixed_point() {
    let c = CavityConfig::default();
    for geometry in [Geometry::Flat, Geometry::Curved] {
        let s = solver(&c, 64, geometry);
        let fixed = s.solve(6e4).unwrap();
        let relaxed = imaginary_time_ground_state(&s, 6e4, &ImaginaryTimeOptions::new(1e-11)).unwrap();
        assert!(((fixed.mu - relaxed.mu) / fixed.mu).abs() < 1e-4, "{geometry}: {} vs {}", fixed.mu, relaxed.mu);
        assert!(max_rel(&relaxed.density[..32], &fixed.density[..32]) < 1e-3);
    }
}

#[test]
fn sweep_is_deterministic() {
    let c = CavityConfig::default();
    let s = solver(&c, 128, Geometry::Curved);
    let ns = [2e4, 5e4, 8e4];
    let parallel: Vec<CondensateState> = s.sweep(&ns).into_iter().map(Result::unwrap).collect();
    for (n, p) in ns.iter().zip(&parallel) {
        assert_eq!(&s.solve(*n).unwrap(), p);
    }
}

/// Midplane temperature on the axis by direct 3D quadrature of the image
/// Green's function against a Gaussian photon density.
fn convolution_temperature(config: &CavityConfig, n_bec: f64, r_bec: f64) -> f64 {
    let l = config.length;
    let q = config.mode_order as f64;
    let spec = KernelSpec::from_config(config).with_tolerance(1e-8);
    let source = config.alpha_in * C * HBAR * config.cutoff_frequency() / config.n0 / config.kappa;
    let peak = n_bec / (2.0 * PI * r_bec * r_bec * l);

    let mut radial = vec![0.0];
    let mut r = 1e-10;
    while r < 0.5e-6 {
        radial.push(r);
        r *= 2.0;
    }
    radial.extend(uniform_edges(0.5e-6, 40e-6, 120));
    let mut axial = vec![-0.5 * l];
    axial.extend(uniform_edges(-0.5 * l, 0.0, 18).into_iter().skip(1).take(17));
    let mut near: Vec<f64> = (0..30).map(|i| -0.5 * l / 18.0 * 0.5f64.powi(i)).collect();
    axial.append(&mut near);
    axial.push(0.0);
    let upper: Vec<f64> = axial.iter().rev().skip(1).map(|z| -z).collect();
    axial.extend(upper);
    let rho_rule = composite_rule(&radial, 8);
    let z_rule = composite_rule(&axial, 8);

    let mut total = 0.0;
    for &(rho, wr) in &rho_rule {
        let density = peak * (-rho * rho / (2.0 * r_bec * r_bec)).exp();
        for &(z, wz) in &z_rule {
            let s = (q * PI * (z + 0.5 * l) / l).sin();
            let g = greens_3d(rho, 0.0, z, &spec).unwrap().value;
            total += wr * wz * 2.0 * PI * rho * density * 2.0 * s * s * g;
        }
    }
    -source * total
}

#[test]
fn temperature_matches_direct_convolution() {
    let c = CavityConfig::default();
    let (n_bec, r_bec) = (6e4, 6e-6);
    let g = grid(512);
    let peak = n_bec / (2.0 * PI * r_bec * r_bec * c.length);
    let density: Vec<f64> = g.radii().iter().map(|r| peak * (-r * r / (2.0 * r_bec * r_bec)).exp()).collect();
    let want = convolution_temperature(&c, n_bec, r_bec);
    for geometry in [Geometry::Flat, Geometry::Curved] {
        let field = temperature_from_density(&density, &g, &c, &KernelSpec::from_config(&c), geometry).unwrap();
        let got = field.midplane.iter().copied().fold(0.0, f64::max);
        assert!((got / want - 1.0).abs() < 0.02, "{geometry}: {got} vs {want}");
    }
}
