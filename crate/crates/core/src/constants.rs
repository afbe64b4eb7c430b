//! CODATA 2018 exact SI constants.

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum [m/s].
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
