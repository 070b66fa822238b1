//! Thermal cloud as an incoherent mixture of Gaussian packets.
//!
//! Packet centres are distributed with momentum weight
//! `q(p) ∝ exp[−p²/(2Mk_Bθ − ħ²/2Δz²)]` and position weight
//! `s(z) ∝ exp[−z²/2(w² − Δz²)]`.  Convolved with the packet's own
//! |φ|² these reproduce the measured cloud: momentum variance `Mk_Bθ` and
//! position variance `w²`, whatever the admissible waist
//! `ħ²/(4Mk_Bθ) ≤ Δz² ≤ w²`.

use statrs::function::erf::{erf, erfc, erfc_inv};
use std::f64::consts::{PI, SQRT_2};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::wavepacket::AtomSpecies;

/// Relative slack on the waist bounds to absorb rounding.
const WAIST_SLACK: f64 = 1e-9;

/// Waist for which the momentum weight collapses to a delta at `p = 0`.
pub fn delta_waist(species: &AtomSpecies, temperature: f64) -> f64 {
    HBAR / (2.0 * (K_B * temperature * species.mass).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    /// θ, K
    pub temperature: f64,
    /// Cloud rms width w, m.
    pub cloud_width: f64,
    /// Packet waist Δz, m.
    pub waist: f64,
    /// Half-width of the hole truncating the position weight, m (may be ∞).
    pub aperture: f64,
}

impl EnsembleSpec {
    pub fn new(
        species: &AtomSpecies,
        temperature: f64,
        cloud_width: f64,
        waist: f64,
        aperture: f64,
    ) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !(cloud_width.is_finite() && cloud_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cloud width must be positive, got {cloud_width}"
            )));
        }
        if !(aperture > 0.0) {
            return Err(Error::InvalidAperture(format!(
                "aperture must be positive, got {aperture}"
            )));
        }
        let dmin = delta_waist(species, temperature);
        if !(waist.is_finite() && waist >= dmin * (1.0 - WAIST_SLACK)) {
            return Err(Error::InvalidParameter(format!(
                "waist {waist:.6e} m below the momentum bound ħ/(2√(Mk_Bθ)) = {dmin:.6e} m"
            )));
        }
        if waist > cloud_width * (1.0 + WAIST_SLACK) {
            return Err(Error::InvalidParameter(format!(
                "waist {waist:.6e} m exceeds the cloud width {cloud_width:.6e} m"
            )));
        }
        Ok(Self {
            temperature,
            cloud_width,
            waist,
            aperture,
        })
    }

    /// Cloud with the delta-velocity waist and the given aperture.
    pub fn with_delta_waist(
        species: &AtomSpecies,
        temperature: f64,
        cloud_width: f64,
        aperture: f64,
    ) -> Result<Self> {
        let dz = delta_waist(species, temperature);
        Self::new(species, temperature, cloud_width, dz, aperture)
    }

    /// Variance of the centre-momentum weight, `Mk_Bθ − ħ²/4Δz²`.
    pub fn momentum_variance(&self, species: &AtomSpecies) -> f64 {
        let v =
            species.mass * K_B * self.temperature - HBAR * HBAR / (4.0 * self.waist * self.waist);
        let scale = species.mass * K_B * self.temperature;
        if v < WAIST_SLACK * 2.0 * scale {
            0.0
        } else {
            v
        }
    }

    /// Variance of the centre-position weight, `w² − Δz²` (before truncation).
    pub fn position_variance(&self) -> f64 {
        let v = self.cloud_width * self.cloud_width - self.waist * self.waist;
        if v < WAIST_SLACK * 2.0 * self.cloud_width * self.cloud_width {
            0.0
        } else {
            v
        }
    }
}

fn gaussian(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Normalised q(p)/Z_p.
pub fn momentum_weight(spec: &EnsembleSpec, species: &AtomSpecies, p: f64) -> Result<f64> {
    let var = spec.momentum_variance(species);
    if var == 0.0 {
        return Err(Error::DegenerateDistribution(
            "momentum weight is a delta at p = 0 for the delta waist".into(),
        ));
    }
    Ok(gaussian(p, var))
}

/// Normalised s(z)/Z_z (untruncated).
pub fn position_weight(spec: &EnsembleSpec, z: f64) -> Result<f64> {
    let var = spec.position_variance();
    if var == 0.0 {
        return Err(Error::DegenerateDistribution(
            "position weight is a delta at z = 0 for waist equal to the cloud width".into(),
        ));
    }
    Ok(gaussian(z, var))
}

/// Momentum density of the whole cloud: variance `Mk_Bθ`.
pub fn momentum_marginal(spec: &EnsembleSpec, species: &AtomSpecies, p: f64) -> f64 {
    gaussian(p, species.mass * K_B * spec.temperature)
}

/// Position density of the whole (untruncated) cloud: variance `w²`.
pub fn position_marginal(spec: &EnsembleSpec, z: f64) -> f64 {
    gaussian(z, spec.cloud_width * spec.cloud_width)
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

fn normal_quantile(u: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * u)
}

/// Equal-weight stratified samples of the truncated position weight: the
/// inverse CDF evaluated at the stratum midpoints `(j + ½)/count`.
///
/// A degenerate weight yields the single point `z = 0`.
pub fn sample_positions(spec: &EnsembleSpec, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".into(),
        ));
    }
    if !(spec.aperture > 0.0) {
        return Err(Error::InvalidAperture(format!(
            "aperture must be positive, got {}",
            spec.aperture
        )));
    }
    let var = spec.position_variance();
    if var == 0.0 {
        return Ok(vec![0.0]);
    }
    let sigma = var.sqrt();
    let cut = spec.aperture / sigma;
    let (lo, hi) = if cut.is_finite() {
        (normal_cdf(-cut), normal_cdf(cut))
    } else {
        (0.0, 1.0)
    };
    if hi - lo <= 0.0 {
        return Err(Error::InvalidAperture(
            "aperture leaves no probability mass".into(),
        ));
    }
    Ok((0..count)
        .map(|j| {
            let u = lo + (j as f64 + 0.5) / count as f64 * (hi - lo);
            (sigma * normal_quantile(u)).clamp(-spec.aperture, spec.aperture)
        })
        .collect())
}

/// Variance of a centred Gaussian of variance `var` truncated to `±a`.
pub fn truncated_variance(var: f64, a: f64) -> f64 {
    if !a.is_finite() {
        return var;
    }
    let s = var.sqrt();
    let c = a / s;
    let mass = erf(c / SQRT_2);
    var * (1.0 - 2.0 * c * (-c * c / 2.0).exp() / ((2.0 * PI).sqrt() * mass))
}
