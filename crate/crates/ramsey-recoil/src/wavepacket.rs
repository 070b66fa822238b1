//! Free Gaussian wave packets.
//!
//! A packet is fixed by its waist `Δz`, central position `z_i` and central
//! velocity `v_i` at `t = 0`.  In momentum space
//!
//! ```text
//! ⟨p|φ(t)⟩ = (2Δz²/πħ²)^{1/4} exp[−Δz²(p − p_i)²/ħ²] exp[−i(p z_i + p² t/2M)/ħ]
//! ```
//!
//! and the position representation is its exact Fourier transform, a complex
//! Gaussian `pref · exp(c₂ z² + c₁ z + c₀)` (see [`GaussianExponent`]).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::{CS_HFS_HZ, CS_MASS, HBAR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpecies {
    /// kg
    pub mass: f64,
    /// Transition angular frequency, rad/s.
    pub omega_eg: f64,
}

impl AtomSpecies {
    pub fn new(mass: f64, omega_eg: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !(omega_eg.is_finite() && omega_eg > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "transition frequency must be positive, got {omega_eg}"
            )));
        }
        Ok(Self { mass, omega_eg })
    }

    pub fn caesium() -> Self {
        Self {
            mass: CS_MASS,
            omega_eg: 2.0 * PI * CS_HFS_HZ,
        }
    }

    /// Recoil velocity ħk/M.
    pub fn recoil_velocity(&self, k: f64) -> f64 {
        HBAR * k / self.mass
    }

    /// Recoil shift δ = ħk²/2M, rad/s.
    pub fn recoil_shift(&self, k: f64) -> f64 {
        HBAR * k * k / (2.0 * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketParams {
    /// Waist Δz (rms width of |φ|² at t = 0), m.
    pub waist: f64,
    pub z_init: f64,
    pub v_init: f64,
}

impl PacketParams {
    pub fn new(waist: f64, z_init: f64, v_init: f64) -> Result<Self> {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "waist must be positive, got {waist}"
            )));
        }
        if !(z_init.is_finite() && v_init.is_finite()) {
            return Err(Error::InvalidParameter(
                "packet centre must be finite".into(),
            ));
        }
        Ok(Self {
            waist,
            z_init,
            v_init,
        })
    }

    /// Central wave number p_i/ħ.
    pub fn wave_number(&self, species: &AtomSpecies) -> f64 {
        species.mass * self.v_init / HBAR
    }
}

/// Momentum-space amplitude ⟨p|φ(t)⟩, normalised in `p`.
pub fn eval_momentum(species: &AtomSpecies, packet: &PacketParams, t: f64, p: f64) -> Complex64 {
    let dz = packet.waist;
    let u = p / HBAR;
    let ui = packet.wave_number(species);
    let norm = (2.0 * dz * dz / (PI * HBAR * HBAR)).powf(0.25);
    let re = -dz * dz * (u - ui) * (u - ui);
    let im = -(u * packet.z_init + HBAR * u * u * t / (2.0 * species.mass));
    norm * Complex64::new(re, im).exp()
}

/// Position amplitude as `prefactor · exp(c2 z² + c1 z + c0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianExponent {
    pub prefactor: Complex64,
    pub c2: Complex64,
    pub c1: Complex64,
    pub c0: Complex64,
}

impl GaussianExponent {
    pub fn eval(&self, z: f64) -> Complex64 {
        self.prefactor * (self.c2 * z * z + self.c1 * z + self.c0).exp()
    }
}

/// `A = Δz² + iħt/2M`, the complex width parameter shared by all packets of
/// a given waist at time `t`.
pub fn width_parameter(species: &AtomSpecies, waist: f64, t: f64) -> Complex64 {
    Complex64::new(waist * waist, HBAR * t / (2.0 * species.mass))
}

/// Normalisation prefactor `(2π)^{-1/2} (2Δz²/π)^{1/4} √(π/A)`.
pub fn position_prefactor(species: &AtomSpecies, waist: f64, t: f64) -> Complex64 {
    let a = width_parameter(species, waist, t);
    let s = (2.0 * waist * waist / PI).powf(0.25) / (2.0 * PI).sqrt();
    s * (Complex64::new(PI, 0.0) / a).sqrt()
}

pub fn position_exponent(species: &AtomSpecies, packet: &PacketParams, t: f64) -> GaussianExponent {
    let dz2 = packet.waist * packet.waist;
    let a = width_parameter(species, packet.waist, t);
    let u = packet.wave_number(species);
    let zi = packet.z_init;
    let i = Complex64::i();
    // B = b0 + i z with b0 = 2Δz²u − i z_i; exponent B²/4A − Δz²u².
    let b0 = Complex64::new(2.0 * dz2 * u, -zi);
    GaussianExponent {
        prefactor: position_prefactor(species, packet.waist, t),
        c2: -1.0 / (4.0 * a),
        c1: i * b0 / (2.0 * a),
        c0: b0 * b0 / (4.0 * a) - dz2 * u * u,
    }
}

/// Position-space amplitude φ(t, z), normalised in `z`.
pub fn eval_position(species: &AtomSpecies, packet: &PacketParams, t: f64, z: f64) -> Complex64 {
    let dz2 = packet.waist * packet.waist;
    let a = width_parameter(species, packet.waist, t);
    let u = packet.wave_number(species);
    let b = Complex64::new(2.0 * dz2 * u, z - packet.z_init);
    position_prefactor(species, packet.waist, t) * (b * b / (4.0 * a) - dz2 * u * u).exp()
}

/// Rms width of |φ(t, z)|².
pub fn spread_sigma(species: &AtomSpecies, waist: f64, t: f64) -> f64 {
    let s = HBAR * t / (2.0 * species.mass * waist);
    (waist * waist + s * s).sqrt()
}

/// Centre of |φ(t, z)|².
pub fn packet_position(packet: &PacketParams, t: f64) -> f64 {
    packet.z_init + packet.v_init * t
}

/// Closed form of `∫ φ_a*(t,z) φ_b(t,z) e^{iqz} dz` for two packets of equal
/// waist.
pub fn overlap_with_plane_factor(
    species: &AtomSpecies,
    a: &PacketParams,
    b: &PacketParams,
    t: f64,
    q: f64,
) -> Result<Complex64> {
    if (a.waist - b.waist).abs() > 1e-12 * a.waist {
        return Err(Error::InvalidParameter(format!(
            "overlap requires equal waists, got {} and {}",
            a.waist, b.waist
        )));
    }
    let dz2 = a.waist * a.waist;
    let ua = a.wave_number(species);
    let ub = b.wave_number(species);
    let r = HBAR * t / species.mass;
    // Gaussian momentum integral: exp(β²/8Δz² + γ)
    let beta = Complex64::new(2.0 * dz2 * (ua + ub + q), a.z_init - b.z_init + r * q);
    let gamma = Complex64::new(
        -dz2 * (ua * ua + (ub + q) * (ub + q)),
        q * b.z_init - 0.5 * r * q * q,
    );
    Ok((beta * beta / (8.0 * dz2) + gamma).exp())
}
