//! Photon Bose–Einstein condensate in a dye-filled optical microcavity with
//! a thermo-optic photon–photon interaction.
//!
//! The crate covers the chain from cavity parameters to excitation spectra:
//!
//! * [`params`]: cavity configuration and derived quantities.
//! * [`greens`]: heat Green's functions of the mirror slab and their
//!   transverse transforms.
//! * [`steady_state`]: self-consistent condensate and temperature profiles.
//! * [`bogoliubov`]: excitation spectra, critical momentum and critical
//!   velocity, including parameter scans.
//!
//! Generic numerical building blocks ([`special`], [`linalg`], [`greens`])
//! accept any [`Scalar`] (`f32` or `f64`). The physics layers work in
//! [`Real`] because SI products such as `ħ²` underflow single precision.

pub mod bogoliubov;
pub mod constants;
pub mod error;
pub mod greens;
pub mod linalg;
pub mod params;
pub mod scalar;
pub mod special;
pub mod steady_state;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Floating-point type of the physics layers.
pub type Real = f64;
/// Complex counterpart of [`Real`].
pub type Complex = num_complex::Complex<Real>;
