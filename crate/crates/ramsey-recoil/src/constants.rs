//! Physical constants (CODATA 2018 exact / recommended values).

use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Standard gravity, m/s².
pub const G_STANDARD: f64 = 9.806_65;

/// Mass of ¹³³Cs, kg.
pub const CS_MASS: f64 = 2.206_946_95e-25;
/// Cs ground-state hyperfine frequency, Hz (SI second definition).
pub const CS_HFS_HZ: f64 = 9_192_631_770.0;

/// Free-space microwave wave number 2π f / c for the Cs clock transition, m⁻¹.
pub const CS_FREE_SPACE_K: f64 = 2.0 * PI * CS_HFS_HZ / 299_792_458.0;
/// In-cavity longitudinal wave number of the standing wave, m⁻¹.
pub const CAVITY_K: f64 = 135.04;
/// Transverse cavity wave number setting the pulse length, m⁻¹.
pub const CAVITY_KX: f64 = 137.43;
