//! Heat-problem Green's functions between two flat Dirichlet mirrors.
//!
//! Four related kernels are provided:
//!
//! * [`greens_3d`]: the method-of-images sum for `∇²G = δ` on the slab
//!   `|z| < L/2` with `G = 0` on both mirrors.
//! * [`greens_2d_effective`]: the same kernel averaged over the squared
//!   longitudinal mode `(2/L) sin²(qπ(z + L/2)/L)` at source and field
//!   point, a series of `K0` terms.
//! * [`kernel_static`]: its 2D Fourier transform
//!   `Ĝ(k) = ∫ d²ρ e^{-ik·ρ} G(ρ)`.
//! * [`kernel_delayed`]: the frequency-domain kernel of the diffusive heat
//!   response; reduces to [`kernel_static`] at zero frequency.
//!
//! Every series is truncated against an explicit remainder bound, reported
//! in [`KernelEval::truncation_bound`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::bessel_k0;

/// Geometry of the slab plus truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec<T = f64> {
    /// Mirror spacing `L` [m].
    pub length: T,
    /// Longitudinal mode order `q`.
    pub mode_order: u32,
    /// Thermal diffusivity `κ / C_v` [m²/s]; only the delayed kernel uses it.
    pub diffusivity: T,
    /// Relative truncation tolerance, in `(0, 1)`.
    pub rel_tol: T,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl<T: Scalar> KernelSpec<T> {
    pub fn new(length: T, mode_order: u32, diffusivity: T) -> Self {
        Self {
            length,
            mode_order,
            diffusivity,
            rel_tol: T::lit(1e-10),
            max_terms: 1_000_000,
        }
    }

    pub fn with_tolerance(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, reason: &str| Err(Error::config(key, reason));
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return bad("L", "must be > 0");
        }
        if self.mode_order < 1 {
            return bad("q", "must be >= 1");
        }
        if !(self.rel_tol > T::zero() && self.rel_tol < T::one()) {
            return bad("tol", "must lie in (0, 1)");
        }
        if self.max_terms < 1 {
            return bad("max_terms", "must be >= 1");
        }
        if !(self.diffusivity > T::zero()) || !self.diffusivity.is_finite() {
            return bad("diffusivity", "must be > 0");
        }
        Ok(())
    }
}

impl KernelSpec<f64> {
    pub fn from_config(config: &crate::params::CavityConfig) -> Self {
        Self::new(config.length, config.mode_order, config.diffusivity())
    }
}

/// A truncated series value with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval<V, T = V> {
    pub value: V,
    pub terms_used: usize,
    /// Estimated absolute remainder of the truncated series.
    pub truncation_bound: T,
}

/// Projection coefficient `8q² / (nπ(n² - 4q²))` of the squared longitudinal
/// mode onto the odd heat mode `n`.
pub fn mode_coefficient<T: Scalar>(n: usize, q: u32) -> T {
    // Only odd n enter; 2q is even so the denominator never vanishes.
    assert!(n % 2 == 1, "mode coefficient defined for odd n only");
    let n = T::from_count(n);
    let q = T::from_count(q as usize);
    let four_q2 = T::lit(4.0) * q * q;
    T::lit(8.0) * q * q / (n * T::PI() * (n * n - four_q2))
}

// ---------------------------------------------------------------------------
// Image sum
// ---------------------------------------------------------------------------

/// Fraction of the direct-source term below which the image-sum tolerance
/// stops tracking `|G|`.
const MIRROR_FLOOR: f64 = 1e-6;

struct ImageTerms<T> {
    rho2: T,
}

impl<T: Scalar> ImageTerms<T> {
    #[inline]
    fn g(&self, u: T) -> T {
        (self.rho2 + u * u).sqrt().recip()
    }

    #[inline]
    fn g1(&self, u: T) -> T {
        let s = (self.rho2 + u * u).sqrt();
        -u / (s * s * s)
    }

    #[inline]
    fn g3(&self, u: T) -> T {
        let s2 = self.rho2 + u * u;
        let s = s2.sqrt();
        let s7 = s2 * s2 * s2 * s;
        (T::lit(9.0) * u * self.rho2 - T::lit(6.0) * u * u * u) / s7
    }

    /// `asinh(u2/ρ) - asinh(u1/ρ)` for positive `u1, u2`, cancellation-free.
    fn log_ratio(&self, u1: T, u2: T) -> T {
        let s1 = (self.rho2 + u1 * u1).sqrt();
        let s2 = (self.rho2 + u2 * u2).sqrt();
        let du = u2 - u1;
        let ds = du * (u2 + u1) / (s1 + s2);
        ((du + ds) / (u1 + s1)).ln_1p()
    }
}

/// Method-of-images Green's function of the Dirichlet slab.
///
/// `rho_sep` is the transverse source–field separation, `z` and `z_src`
/// the longitudinal coordinates measured from the midplane. The image sum
/// is accumulated in symmetric pairs `n, -n`; the pair tail, which decays
/// like `1/n³`, is added in closed form via Euler–Maclaurin (exact integral
/// plus endpoint corrections through the third derivative) and the last
/// correction is reported as the truncation bound.
///
/// For `ρ ≥ L` the images cancel to many digits, and the equivalent
/// longitudinal-mode expansion `-(1/πL) Σ sin(nπw/L) sin(nπw'/L) K0(nπρ/L)`,
/// `w = z + L/2`, is summed instead; it converges geometrically there.
///
/// On the mirrors `G` vanishes while individual terms do not, so the
/// tolerance is applied relative to `max(|G|, 10⁻⁶/(4π d))`, `d` the direct
/// source–field distance.
pub fn greens_3d<T: Scalar>(rho_sep: T, z: T, z_src: T, spec: &KernelSpec<T>) -> Result<KernelEval<T>> {
    spec.validate()?;
    let l = spec.length;
    let half = l * T::lit(0.5);
    let slack = half * T::lit(1e-12);
    if !(rho_sep >= T::zero()) || z.abs() > half + slack || z_src.abs() > half + slack {
        return Err(Error::Input(format!(
            "greens_3d point outside slab: rho = {rho_sep}, z = {z}, z_src = {z_src}, L = {l}"
        )));
    }
    let a = z - z_src;
    let b = z + z_src + l;
    let rho2 = rho_sep * rho_sep;
    if rho2 == T::zero() && (a == T::zero() || b == T::zero() || b == l + l) {
        return Err(Error::Singularity(
            "field point coincides with the source or one of its images".to_string(),
        ));
    }
    let four_pi = T::lit(4.0) * T::PI();
    let floor = T::lit(MIRROR_FLOOR) / (four_pi * (rho2 + a * a).sqrt());
    if rho_sep >= l {
        return mode_expansion(rho_sep, z + half, z_src + half, floor, spec);
    }
    let img = ImageTerms { rho2 };
    let two_l = l + l;
    let pair = |m: usize| {
        let x = two_l * T::from_count(m);
        img.g(x + a) + img.g(x - a) - img.g(x + b) - img.g(x - b)
    };

    let mut sum = img.g(a) - img.g(b);
    let mut summed = 0usize;
    let mut n = ((rho_sep + two_l) / l).ceil().to_usize().unwrap_or(usize::MAX).max(2);
    loop {
        if 2 * n + 1 > spec.max_terms {
            return Err(Error::Truncation {
                terms: spec.max_terms,
                achieved: f64::NAN,
                target: spec.rel_tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        for m in summed + 1..=n {
            sum += pair(m);
        }
        summed = n;

        let x = two_l * T::from_count(n);
        let integral = (img.log_ratio(x + a, x + b) + img.log_ratio(x - a, x - b)) / two_l;
        let p0 = pair(n);
        let p1 = two_l * (img.g1(x + a) + img.g1(x - a) - img.g1(x + b) - img.g1(x - b));
        let p3 = two_l.powi(3) * (img.g3(x + a) + img.g3(x - a) - img.g3(x + b) - img.g3(x - b));
        let tail = integral - p0 * T::lit(0.5) - p1 / T::lit(12.0) + p3 / T::lit(720.0);

        let value = -(sum + tail) / four_pi;
        let bound = (p3 / T::lit(720.0)).abs() / four_pi;
        let scale = value.abs().max(floor);
        if bound <= spec.rel_tol * scale {
            return Ok(KernelEval {
                value,
                terms_used: 2 * n + 1,
                truncation_bound: bound,
            });
        }
        n *= 2;
    }
}

/// Longitudinal-mode form of [`greens_3d`] with `w`, `w_src` measured from
/// the lower mirror. The remainder after mode `n` is bounded by
/// `K0(nx) e^{-x} / (1 - e^{-x})`, `x = πρ/L`.
fn mode_expansion<T: Scalar>(rho_sep: T, w: T, w_src: T, floor: T, spec: &KernelSpec<T>) -> Result<KernelEval<T>> {
    let l = spec.length;
    let step = T::PI() * rho_sep / l;
    let ratio = (-step).exp();
    let prefactor = (T::PI() * l).recip();
    let mut sum = T::zero();
    let mut n = 1usize;
    loop {
        let phase = T::PI() * T::from_count(n) / l;
        let k0 = bessel_k0(step * T::from_count(n));
        sum += (phase * w).sin() * (phase * w_src).sin() * k0;
        let value = -prefactor * sum;
        let bound = prefactor * k0 * ratio / (T::one() - ratio);
        if bound <= spec.rel_tol * value.abs().max(floor) {
            return Ok(KernelEval {
                value,
                terms_used: n,
                truncation_bound: bound,
            });
        }
        if n >= spec.max_terms {
            return Err(Error::Truncation {
                terms: n,
                achieved: bound.to_f64().unwrap_or(f64::NAN),
                target: (spec.rel_tol * value.abs().max(floor)).to_f64().unwrap_or(f64::NAN),
            });
        }
        n += 1;
    }
}

// ---------------------------------------------------------------------------
// Mode-averaged kernel and its transforms
// ---------------------------------------------------------------------------

/// First odd index from which `|c_n|` decreases monotonically and obeys
/// `|c_n| ≤ 16q²/(π n³)`.
fn monotone_start(q: u32) -> usize {
    let n = (3 * q as usize) | 1;
    n.max(3)
}

/// Effective transverse kernel
/// `-(1/πL) Σ_{n odd} c_n² K0(nπρ/L)` with `c_n` from [`mode_coefficient`].
///
/// The tail is bounded using the monotone decay of `c_n²` beyond `n = 2q`
/// and `K0(x + δ) ≤ K0(x) e^{-δ}`.
pub fn greens_2d_effective<T: Scalar>(rho_sep: T, spec: &KernelSpec<T>) -> Result<KernelEval<T>> {
    spec.validate()?;
    if !(rho_sep > T::zero()) {
        return Err(Error::Singularity(
            "effective 2D kernel diverges logarithmically at zero separation".to_string(),
        ));
    }
    let l = spec.length;
    let q = spec.mode_order;
    let step = T::PI() * rho_sep / l;
    let ratio = (-(step + step)).exp();
    let prefactor = (T::PI() * l).recip();
    let start = monotone_start(q).min(2 * q as usize + 1);
    let mut sum = T::zero();
    let mut count = 0usize;
    let mut n = 1usize;
    loop {
        let c: T = mode_coefficient(n, q);
        let term = c * c * bessel_k0(step * T::from_count(n));
        sum += term;
        count += 1;
        if n >= start {
            let bound = prefactor * term * ratio / (T::one() - ratio);
            if bound <= spec.rel_tol * prefactor * sum {
                return Ok(KernelEval {
                    value: -prefactor * sum,
                    terms_used: count,
                    truncation_bound: bound,
                });
            }
        }
        if count >= spec.max_terms {
            let achieved = prefactor * term * ratio / (T::one() - ratio);
            return Err(Error::Truncation {
                terms: count,
                achieved: achieved.to_f64().unwrap_or(f64::NAN),
                target: (spec.rel_tol * prefactor * sum).to_f64().unwrap_or(f64::NAN),
            });
        }
        n += 2;
    }
}

/// Remainder bound for `Σ_{m>n, odd} c_m² / |d_m|` given `|d_m| ≥ d_min`.
fn lorentz_tail<T: Scalar>(n: usize, q: u32, d_min: T) -> T {
    let q = T::from_count(q as usize);
    let nf = T::from_count(n);
    let pi2 = T::PI() * T::PI();
    T::lit(256.0) * q.powi(4) / (T::lit(10.0) * pi2 * nf.powi(5) * d_min)
}

/// Static transverse kernel
/// `Ĝ(k) = -(2/L) Σ_{n odd} c_n² / ((nπ/L)² + k²)` [m].
pub fn kernel_static<T: Scalar>(k: T, spec: &KernelSpec<T>) -> Result<KernelEval<T>> {
    spec.validate()?;
    if !(k >= T::zero()) {
        return Err(Error::Input(format!("kernel_static requires k >= 0, got {k}")));
    }
    let l = spec.length;
    let q = spec.mode_order;
    let k2 = k * k;
    let kappa1 = T::PI() / l;
    let prefactor = T::lit(2.0) / l;
    let start = monotone_start(q);
    let mut sum = T::zero();
    let mut count = 0usize;
    let mut n = 1usize;
    loop {
        let c: T = mode_coefficient(n, q);
        let kn = kappa1 * T::from_count(n);
        let d = kn * kn + k2;
        sum += c * c / d;
        count += 1;
        if n >= start {
            let bound = prefactor * lorentz_tail(n, q, d);
            if bound <= spec.rel_tol * prefactor * sum {
                return Ok(KernelEval {
                    value: -prefactor * sum,
                    terms_used: count,
                    truncation_bound: bound,
                });
            }
            if count >= spec.max_terms {
                return Err(Error::Truncation {
                    terms: count,
                    achieved: bound.to_f64().unwrap_or(f64::NAN),
                    target: (spec.rel_tol * prefactor * sum).to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        n += 2;
    }
}

/// Delayed kernel value together with `dĜ/dΩ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayedKernel<T> {
    pub eval: KernelEval<Complex<T>, T>,
    pub derivative: Complex<T>,
}

/// Frequency-dependent transverse kernel
/// `Ĝ(Ω, k) = -(2/L) Σ_{n odd} c_n² / ((nπ/L)² + k² - iΩ/D)` [m].
///
/// `D` is the thermal diffusivity of `spec`: the frequency-domain heat
/// propagator is `1/(D(k² + (nπ/L)²) - iΩ)` times `D`.
pub fn kernel_delayed<T: Scalar>(omega: Complex<T>, k: T, spec: &KernelSpec<T>) -> Result<KernelEval<Complex<T>, T>> {
    kernel_delayed_with_derivative(omega, k, spec).map(|d| d.eval)
}

pub fn kernel_delayed_with_derivative<T: Scalar>(
    omega: Complex<T>,
    k: T,
    spec: &KernelSpec<T>,
) -> Result<DelayedKernel<T>> {
    spec.validate()?;
    if !(k >= T::zero()) {
        return Err(Error::Input(format!("kernel_delayed requires k >= 0, got {k}")));
    }
    if !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::Input("non-finite frequency".to_string()));
    }
    let l = spec.length;
    let q = spec.mode_order;
    let k2 = k * k;
    let kappa1 = T::PI() / l;
    let pole_guard = T::lit(1e-12) * kappa1 * kappa1;
    let shift = Complex::new(omega.im, -omega.re) / spec.diffusivity; // -iΩ/D
    let i_over_d = Complex::new(T::zero(), spec.diffusivity.recip());
    let prefactor = T::lit(2.0) / l;
    let start = monotone_start(q);
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut dsum = Complex::new(T::zero(), T::zero());
    let mut count = 0usize;
    let mut n = 1usize;
    loop {
        let c: T = mode_coefficient(n, q);
        let kn = kappa1 * T::from_count(n);
        let d = Complex::new(kn * kn + k2, T::zero()) + shift;
        let dn = d.norm();
        if dn < pole_guard {
            return Err(Error::NearPole {
                mode: n,
                distance: dn.to_f64().unwrap_or(f64::NAN),
            });
        }
        let inv = d.inv();
        sum += inv * (c * c);
        dsum += inv * inv * (c * c);
        count += 1;
        if n >= start && d.re >= T::zero() {
            let bound = prefactor * lorentz_tail(n, q, dn);
            if bound <= spec.rel_tol * prefactor * sum.norm() {
                return Ok(DelayedKernel {
                    eval: KernelEval {
                        value: -sum * prefactor,
                        terms_used: count,
                        truncation_bound: bound,
                    },
                    derivative: -(dsum * i_over_d) * prefactor,
                });
            }
        }
        if count >= spec.max_terms {
            return Err(Error::Truncation {
                terms: count,
                achieved: f64::NAN,
                target: (spec.rel_tol * prefactor * sum.norm()).to_f64().unwrap_or(f64::NAN),
            });
        }
        n += 2;
    }
}
