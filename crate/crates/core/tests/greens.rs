mod support;

use std::f64::consts::PI;

use num_complex::Complex;
use photon_bec::greens::*;
use proptest::prelude::*;
use support::*;

const L: f64 = 2e-6;

fn spec(l: f64) -> KernelSpec {
    KernelSpec::new(l, 9, 0.168 / 1.9e6)
}

#[test]
fn image_sum_matches_direct_summation() {
    let s = spec(L).with_tolerance(1e-12);
    for &(rho, z, zs) in &[(1e-6, 0.0, 0.0), (0.3e-6, 0.4e-6, -0.2e-6), (2.5e-6, -0.9e-6, 0.7e-6), (0.05e-6, 0.1e-6, 0.0)] {
        let got = greens_3d(rho, z, zs, &s).unwrap().value;
        let want = image_sum_extrapolated(rho, z, zs, L, 10_000);
        assert!(((got - want) / want).abs() < 1e-10, "({rho}, {z}, {zs}): {got} vs {want}");
    }
}

#[test]
fn truncation_bound_within_tolerance() {
    let s = spec(L);
    for i in 0..20 {
        let rho = 0.05e-6 * 1.4f64.powi(i);
        let e = greens_3d(rho, 0.2e-6, -0.3e-6, &s).unwrap();
        assert!(e.truncation_bound <= s.rel_tol * e.value.abs(), "rho = {rho}: {e:?}");
    }
}

#[test]
fn discrete_laplacian_vanishes_away_from_source() {
    let s = spec(L).with_tolerance(1e-13);
    let g = |x: f64, y: f64, z: f64| greens_3d((x * x + y * y).sqrt(), z, 0.1e-6, &s).unwrap().value;
    let (x0, y0, z0) = (0.6e-6, 0.3e-6, -0.2e-6);
    let residual = |h: f64| {
        let lap = (g(x0 + h, y0, z0) + g(x0 - h, y0, z0) + g(x0, y0 + h, z0) + g(x0, y0 - h, z0) + g(x0, y0, z0 + h) + g(x0, y0, z0 - h)
            - 6.0 * g(x0, y0, z0))
            / (h * h);
        lap.abs()
    };
    let scale = g(x0, y0, z0).abs() / (0.6e-6f64).powi(2);
    let (r1, r2) = (residual(0.04e-6), residual(0.02e-6));
    assert!(r1 < 2e-2 * scale, "{r1} vs {scale}");
    // Second-order convergence.
    assert!(r2 < r1 / 3.0, "{r1} -> {r2}");
}

/// Outward flux of `∇G` through the surface of a cube centred on the
/// source; `∇²G = δ` makes it one.
fn flux_through_cube(half: f64, zs: f64, l: f64) -> f64 {
    let s = spec(l).with_tolerance(1e-12);
    let g = |x: f64, y: f64, z: f64| greens_3d((x * x + y * y).sqrt(), z, zs, &s).unwrap().value;
    let d = half * 1e-4;
    let rule = composite_rule(&uniform_edges(-half, half, 4), 10);
    let mut total = 0.0;
    for &(u, wu) in &rule {
        for &(v, wv) in &rule {
            let w = wu * wv;
            // ±x, ±y and ±z faces.
            total += w * (g(half + d, u, zs + v) - g(half - d, u, zs + v)) / (2.0 * d);
            total -= w * (g(-half + d, u, zs + v) - g(-half - d, u, zs + v)) / (2.0 * d);
            total += w * (g(u, half + d, zs + v) - g(u, half - d, zs + v)) / (2.0 * d);
            total -= w * (g(u, -half + d, zs + v) - g(u, -half - d, zs + v)) / (2.0 * d);
            total += w * (g(u, v, zs + half + d) - g(u, v, zs + half - d)) / (2.0 * d);
            total -= w * (g(u, v, zs - half + d) - g(u, v, zs - half - d)) / (2.0 * d);
        }
    }
    total
}

#[test]
fn unit_source_strength() {
    let flux = flux_through_cube(0.2e-6, 0.1e-6, L);
    assert!((flux - 1.0).abs() < 0.02, "flux = {flux}");
}

/// Mode-averaged kernel by direct double quadrature over `greens_3d`,
/// with the squared longitudinal mode `(2/L) sin²(qπ(z + L/2)/L)`.
fn effective_by_quadrature(rho: f64, l: f64, q: u32) -> f64 {
    let s = spec(l).with_tolerance(1e-12);
    let rule = composite_rule(&uniform_edges(-0.5 * l, 0.5 * l, 4 * q as usize), 8);
    let weight = |z: f64| {
        let v = (q as f64 * PI * (z + 0.5 * l) / l).sin();
        2.0 / l * v * v
    };
    let mut total = 0.0;
    for &(z, wz) in &rule {
        for &(zs, ws) in &rule {
            total += wz * ws * weight(z) * weight(zs) * greens_3d(rho, z, zs, &s).unwrap().value;
        }
    }
    total
}

#[test]
fn effective_kernel_matches_double_quadrature() {
    let s = spec(L).with_tolerance(1e-12);
    for i in 0..10 {
        let rho = 0.5e-6 + 0.5e-6 * i as f64;
        let want = effective_by_quadrature(rho, L, 9);
        let got = greens_2d_effective(rho, &s).unwrap().value;
        assert!(((got - want) / want).abs() < 1e-4, "rho = {rho}: {got} vs {want}");
    }
}

#[test]
fn static_kernel_is_hankel_transform_of_effective_kernel() {
    let s = spec(L).with_tolerance(1e-12);
    // Geometric panels resolve the logarithm at the origin, uniform ones
    // the Bessel oscillation; the kernel is negligible beyond 30 L.
    let mut edges = vec![0.0];
    let mut r = 1e-4 * L;
    while r < L / 20.0 {
        edges.push(r);
        r *= 2.0;
    }
    edges.extend(uniform_edges(L / 20.0, 30.0 * L, 600));
    let rule = composite_rule(&edges, 10);
    let values: Vec<f64> = rule.iter().map(|&(rho, _)| greens_2d_effective(rho, &s).unwrap().value).collect();
    for i in 0..=20 {
        let k = 10.0 * PI / L * i as f64 / 20.0;
        let transform: f64 = rule
            .iter()
            .zip(&values)
            .map(|(&(rho, w), g)| w * 2.0 * PI * rho * g * bessel_j0(k * rho))
            .sum();
        let direct = kernel_static(k, &s).unwrap().value;
        assert!(((transform - direct) / direct).abs() < 1e-3, "k = {k}: {transform} vs {direct}");
    }
}

#[test]
fn static_kernel_matches_long_partial_sum() {
    let s = spec(L).with_tolerance(1e-13);
    let mut sum = 0.0;
    for j in (0..1_000_000usize).rev() {
        let n = 2 * j + 1;
        let c = mode_coefficient::<f64>(n, 9);
        let kn = n as f64 * PI / L;
        sum += c * c / (kn * kn);
    }
    let want = -2.0 / L * sum;
    let got = kernel_static(0.0, &s).unwrap().value;
    assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
}

#[test]
fn static_kernel_lorentzian_tail() {
    let s = spec(L);
    let mut prev = kernel_static(1e9, &s).unwrap().value * 1e18;
    for i in 1..6 {
        let k = 1e9 * 10f64.powi(i);
        let scaled = kernel_static(k, &s).unwrap().value * k * k;
        assert!((scaled - prev).abs() < 0.1 * prev.abs());
        prev = scaled;
    }
    assert!((prev / (-1.5 / L) - 1.0).abs() < 1e-6);
}

#[test]
fn delayed_kernel_is_complex_off_axis() {
    let s = spec(L);
    let g = kernel_delayed(Complex::new(1e6, 0.0), 1e5, &s).unwrap().value;
    assert!(g.im != 0.0);
    assert!(g.re < 0.0);
}

#[test]
fn delayed_kernel_high_frequency_decay() {
    // Leading order for |Ω|/D ≫ κ_n² + k²: Ĝ ≈ -(3/(2L)) i D / Ω.
    let s = spec(L);
    for &w in &[1e13, 1e14, 1e15] {
        let omega = Complex::new(w, 0.3 * w);
        let g = kernel_delayed(omega, 1e5, &s).unwrap().value;
        let lead = Complex::new(0.0, -1.5 / L * s.diffusivity) / omega;
        assert!((g - lead).norm() / lead.norm() < 1e-3, "{w}: {g} vs {lead}");
    }
}

#[test]
fn delayed_kernel_conjugate_symmetry() {
    let s = spec(L);
    let omega = Complex::new(3e6, 2e5);
    let a = kernel_delayed(omega, 4e4, &s).unwrap().value;
    let b = kernel_delayed(-omega.conj(), 4e4, &s).unwrap().value;
    assert!((a.conj() - b).norm() <= 1e-14 * a.norm());
}

#[test]
fn field_extends_further_in_longer_cavities() {
    for &rho in &[0.5e-6, 1e-6, 2e-6] {
        let mut prev = 0.0;
        for &l in &[1e-6, 2e-6, 4e-6, 10e-6] {
            let g = greens_3d(rho, 0.0, 0.0, &spec(l)).unwrap().value.abs();
            assert!(g > prev, "rho = {rho}, L = {l}");
            prev = g;
        }
    }
}

#[test]
fn thick_cavity_expansion() {
    // Midplane, L ≫ ρ: 4πG = -(1/ρ - 2 ln2 / L + (3ζ(3)/4) ρ²/L³ + O(ρ⁴/L⁵)).
    const ZETA3: f64 = 1.202_056_903_159_594_2;
    let l = 10e-6;
    let s = spec(l).with_tolerance(1e-12);
    for i in 0..=16 {
        let rho = 0.2e-6 + 0.05e-6 * i as f64;
        let g = greens_3d(rho, 0.0, 0.0, &s).unwrap().value;
        let series = -(1.0 / rho - 2.0 * std::f64::consts::LN_2 / l + 0.75 * ZETA3 * rho * rho / l.powi(3)) / (4.0 * PI);
        assert!(((g - series) / series).abs() < 1e-4, "rho = {rho}: {g} vs {series}");
    }
    let rho = 0.5e-6;
    let free = -1.0 / (4.0 * PI * rho);
    assert!(((greens_3d(rho, 0.0, 0.0, &s).unwrap().value - free) / free).abs() < 0.1);
}

fn slab_point(l: f64) -> impl Strategy<Value = (f64, f64, f64)> {
    (0.01e-6..5e-6f64, -0.5..0.5f64, -0.5..0.5f64).prop_map(move |(r, a, b)| (r, a * l, b * l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn source_field_symmetry((rho, z, zs) in slab_point(L)) {
        let s = spec(L);
        let a = greens_3d(rho, z, zs, &s).unwrap().value;
        let b = greens_3d(rho, zs, z, &s).unwrap().value;
        prop_assert!(((a - b) / a).abs() < 1e-10);
    }

    #[test]
    fn negative_inside_slab((rho, z, zs) in slab_point(L)) {
        prop_assume!(z.abs() < 0.49 * L);
        prop_assert!(greens_3d(rho, z, zs, &spec(L)).unwrap().value < 0.0);
    }

    #[test]
    fn vanishes_on_both_mirrors(rho in 0.01e-6..5e-6f64, zs in -0.49..0.49f64, upper in any::<bool>()) {
        let s = spec(L);
        let zs = zs * L;
        let zb = if upper { 0.5 * L } else { -0.5 * L };
        let scale = 1.0 / (4.0 * PI * (rho * rho + (zb - zs).powi(2)).sqrt());
        prop_assert!(greens_3d(rho, zb, zs, &s).unwrap().value.abs() < 1e-6 * scale);
    }

    #[test]
    fn static_kernel_negative(k in 0.0..1e9f64) {
        prop_assert!(kernel_static(k, &spec(L)).unwrap().value < 0.0);
    }

    #[test]
    fn static_kernel_bound_respected(k in 0.0..1e9f64, q in 1u32..20) {
        let s = KernelSpec::new(L, q, 1e-7);
        let e = kernel_static(k, &s).unwrap();
        prop_assert!(e.truncation_bound <= s.rel_tol * e.value.abs());
    }
}
