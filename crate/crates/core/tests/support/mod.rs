//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre rule over consecutive panels.
pub fn composite_rule(edges: &[f64], order: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(order);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        out.extend(base.iter().map(|(x, wt)| (mid + half * x, half * wt)));
    }
    out
}

pub fn uniform_edges(a: f64, b: f64, panels: usize) -> Vec<f64> {
    (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect()
}

/// `J0(x) = (1/2π) ∫₀^{2π} cos(x sin θ) dθ` by the periodic trapezoid rule.
pub fn bessel_j0(x: f64) -> f64 {
    let m = 64 + 2 * x.abs().ceil() as usize;
    let s: f64 = (0..m).map(|j| (x * (2.0 * PI * j as f64 / m as f64).sin()).cos()).sum();
    s / m as f64
}

/// Direct image sum with `|n| ≤ n_max`: positive images at `z' + 2nL`,
/// negative images at `(2n + 1)L - z'`.
pub fn image_sum(rho: f64, z: f64, zs: f64, l: f64, n_max: i64) -> f64 {
    let dist = |zi: f64| (rho * rho + (z - zi) * (z - zi)).sqrt();
    let mut s = 0.0;
    // Outermost terms first to limit round-off.
    for m in (1..=n_max).rev() {
        for n in [m, -m] {
            let nf = n as f64;
            s += 1.0 / dist(zs + 2.0 * nf * l) - 1.0 / dist((2.0 * nf + 1.0) * l - zs);
        }
    }
    s += 1.0 / dist(zs) - 1.0 / dist(l - zs);
    -s / (4.0 * PI)
}

/// Image sum with the `1/N²` truncation error removed by Richardson
/// extrapolation.
pub fn image_sum_extrapolated(rho: f64, z: f64, zs: f64, l: f64, n_max: i64) -> f64 {
    let a = image_sum(rho, z, zs, l, n_max);
    let b = image_sum(rho, z, zs, l, n_max / 2);
    (4.0 * a - b) / 3.0
}

/// Maximum of |a - b| / |b| over paired slices.
pub fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max)
}
