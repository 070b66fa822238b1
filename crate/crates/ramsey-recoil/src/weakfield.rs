//! First-order (single-photon) analytic results for Gaussian pulses.
//!
//! In the weak-field limit only four excited packets reach the detector:
//! `(a, n) = (0, ±1)` from the first pulse and `(∓1, ±1)` from the second.
//! Their Δ-dependent interference splits into a co-propagating pair (equal
//! velocities, phase `ΔT − δT`) and a counter-propagating pair (opposite
//! velocities, phase `ΔT + δT`).  The latter pulls the fringe the other way,
//! partially cancelling the recoil shift.
//!
//! The common proportionality constant of the interference terms is 1:
//! `P_e ⊃ 2a₀²(co + counter)` with `a₀ = √(π/2) Ω₀τ/4`, and each term is
//! summed over its two mirror-image (±) contributions.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::{HBAR, K_B};
use crate::detection::Setup;
use crate::dynamics::{FountainTiming, PulseIndex};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::wavepacket::{overlap_with_plane_factor, AtomSpecies, PacketParams};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilConstants {
    /// ħk/M, m/s
    pub v_r: f64,
    /// ħk²/2M, rad/s
    pub delta: f64,
    /// ħω_eg/(2Mc²): the free-space recoil shift relative to ω_eg.
    pub free_space_fraction: f64,
}

pub fn recoil_constants(species: &AtomSpecies, k: f64) -> Result<RecoilConstants> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "k must be positive, got {k}"
        )));
    }
    Ok(RecoilConstants {
        v_r: species.recoil_velocity(k),
        delta: species.recoil_shift(k),
        free_space_fraction: HBAR * species.omega_eg
            / (2.0 * species.mass * SPEED_OF_LIGHT * SPEED_OF_LIGHT),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFieldInputs {
    pub species: AtomSpecies,
    pub spec: EnsembleSpec,
    pub timing: FountainTiming,
    /// Gaussian pulse duration parameter τ, s.
    pub tau: f64,
    /// Peak Rabi frequency Ω₀, rad/s.
    pub omega0: f64,
}

impl WeakFieldInputs {
    pub fn new(
        species: AtomSpecies,
        spec: EnsembleSpec,
        timing: FountainTiming,
        tau: f64,
        omega0: f64,
    ) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        Ok(Self {
            species,
            spec,
            timing,
            tau,
            omega0,
        })
    }

    pub fn from_setup(setup: &Setup) -> Result<Self> {
        Self::new(
            setup.species,
            setup.ensemble,
            setup.timing,
            setup.first.tau,
            setup.first.omega0,
        )
    }

    /// δ = ħk²/2M.
    pub fn delta_recoil(&self) -> f64 {
        self.species.recoil_shift(self.timing.k)
    }

    /// `1/a = (2Mk_Bθ − ħ²/2Δz²)/M²`: twice the variance of the centre
    /// velocities; zero for the delta waist.
    pub fn inverse_a(&self) -> f64 {
        2.0 * self.spec.momentum_variance(&self.species) / (self.species.mass * self.species.mass)
    }

    /// `a = M²/(2Mk_Bθ − ħ²/2Δz²)`, s²/m²; infinite for the delta waist.
    pub fn a_param(&self) -> f64 {
        1.0 / self.inverse_a()
    }

    /// `a₀ = √(π/2) Ω₀τ/4`, modulus of a resonant first-order amplitude.
    pub fn first_order_scale(&self) -> f64 {
        (PI / 2.0).sqrt() * self.omega0 * self.tau / 4.0
    }

    fn thermal(&self) -> f64 {
        self.timing.k * self.timing.k * K_B * self.spec.temperature / (2.0 * self.species.mass)
    }
}

/// Interference terms (each summed over its ± pair).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceTerms {
    pub co: f64,
    pub counter: f64,
}

/// First-order excited amplitude `ẽ_{±1}^0` (first pulse) or
/// `ẽ_{±1}^{∓1}` (second pulse) from `g_0^0 = 1`, Gaussian pulses.
pub fn first_order_amplitude(
    inputs: &WeakFieldInputs,
    which: PulseIndex,
    z_init: f64,
    v_init: f64,
    sign: i32,
    detuning: f64,
) -> Complex64 {
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    let k = inputs.timing.k;
    let tc = match which {
        PulseIndex::First => inputs.timing.t_b,
        PulseIndex::Second => inputs.timing.t_b + inputs.timing.t_sep,
    };
    let x = detuning - s * k * v_init;
    let env = (-x * x * inputs.tau * inputs.tau / 8.0).exp();
    let ph = -detuning * tc + s * k * z_init + s * k * v_init * tc;
    Complex64::new(0.0, -inputs.first_order_scale() * env) * Complex64::from_polar(1.0, ph)
}

/// Interference terms of a single packet released at `(z_i, v_i)`.
pub fn single_packet_terms(
    inputs: &WeakFieldInputs,
    z_init: f64,
    v_init: f64,
    detuning: f64,
) -> InterferenceTerms {
    let k = inputs.timing.k;
    let t = inputs.timing.t_sep;
    let tb = inputs.timing.t_b;
    let tau2 = inputs.tau * inputs.tau;
    let d = inputs.delta_recoil();
    let dz = inputs.spec.waist;
    let m = inputs.species.mass;
    let hk = HBAR * k / m;

    let co_env = (-hk * hk * t * t / (8.0 * dz * dz)).exp();
    let mut co = 0.0;
    let mut counter = 0.0;
    let ctr_env = (-(detuning * detuning + k * k * v_init * v_init) * tau2 / 4.0).exp()
        * (-2.0 * dz * dz * k * k - hk * hk * (tb + t / 2.0).powi(2) / (2.0 * dz * dz)).exp();
    for s in [1.0, -1.0] {
        let x = detuning - s * k * v_init;
        co += (-x * x * tau2 / 4.0).exp()
            * co_env
            * (-s * k * v_init * t + detuning * t - d * t).cos();
        counter += ctr_env
            * (s * (2.0 * k * z_init + 2.0 * k * v_init * tb + k * v_init * t)
                + detuning * t
                + d * t)
                .cos();
    }
    InterferenceTerms { co, counter }
}

/// Single-packet terms averaged over the centre-velocity distribution
/// (no expansion in `k²τ²/4a`).
pub fn velocity_averaged_terms(
    inputs: &WeakFieldInputs,
    z_init: f64,
    detuning: f64,
) -> InterferenceTerms {
    let k = inputs.timing.k;
    let t = inputs.timing.t_sep;
    let tb = inputs.timing.t_b;
    let tau2 = inputs.tau * inputs.tau;
    let d = inputs.delta_recoil();
    let dz = inputs.spec.waist;
    let hk = HBAR * k / inputs.species.mass;
    let ia = inputs.inverse_a();
    let den = 4.0 + k * k * tau2 * ia;
    // normalisation of the Gaussian velocity average
    let norm = (4.0 / den).sqrt();

    let co = 2.0
        * norm
        * (-(k * k * t * t * ia + detuning * detuning * tau2) / den).exp()
        * (-hk * hk * t * t / (8.0 * dz * dz)).exp()
        * (-k * k * detuning * t * tau2 * ia / den + detuning * t - d * t).cos();
    let counter = norm
        * (-detuning * detuning * tau2 / 4.0).exp()
        * (-k * k * (2.0 * tb + t).powi(2) * ia / den).exp()
        * (-2.0 * dz * dz * k * k - hk * hk * (tb + t / 2.0).powi(2) / (2.0 * dz * dz)).exp()
        * 2.0
        * (2.0 * k * z_init).cos()
        * (detuning * t + d * t).cos();
    InterferenceTerms { co, counter }
}

/// Leading order of [`velocity_averaged_terms`] in `k²τ²/4a`.
pub fn velocity_averaged_terms_expanded(
    inputs: &WeakFieldInputs,
    z_init: f64,
    detuning: f64,
) -> InterferenceTerms {
    let k = inputs.timing.k;
    let t = inputs.timing.t_sep;
    let tb = inputs.timing.t_b;
    let e = (-detuning * detuning * inputs.tau * inputs.tau / 4.0).exp();
    let d = inputs.delta_recoil();
    let th = inputs.thermal();
    let dz = inputs.spec.waist;
    InterferenceTerms {
        co: 2.0 * e * (-th * t * t).exp() * (detuning * t - d * t).cos(),
        counter: 2.0
            * e
            * (-2.0 * dz * dz * k * k - th * (2.0 * tb + t).powi(2)).exp()
            * (2.0 * k * z_init).cos()
            * (detuning * t + d * t).cos(),
    }
}

/// Δ-independent envelopes `(A, B)` of the cloud-averaged terms.
pub fn ensemble_envelopes(inputs: &WeakFieldInputs) -> (f64, f64) {
    let k = inputs.timing.k;
    let t = inputs.timing.t_sep;
    let tb = inputs.timing.t_b;
    let w = inputs.spec.cloud_width;
    let th = inputs.thermal();
    (
        (-th * t * t).exp(),
        (-2.0 * w * w * k * k - th * (2.0 * tb + t).powi(2)).exp(),
    )
}

/// Cloud-averaged interference terms; independent of the packet waist.
pub fn ensemble_terms(inputs: &WeakFieldInputs, detuning: f64) -> InterferenceTerms {
    let (a, b) = ensemble_envelopes(inputs);
    let t = inputs.timing.t_sep;
    let d = inputs.delta_recoil();
    let e = 2.0 * (-detuning * detuning * inputs.tau * inputs.tau / 4.0).exp();
    InterferenceTerms {
        co: e * a * (detuning * t - d * t).cos(),
        counter: e * b * (detuning * t + d * t).cos(),
    }
}

/// Counter/co envelope ratio `exp[−2w²k² − 2k²k_BθT_b(T_b + T)/M]`.
pub fn cancellation_factor(
    species: &AtomSpecies,
    spec: &EnsembleSpec,
    timing: &FountainTiming,
) -> f64 {
    let k = timing.k;
    let w = spec.cloud_width;
    (-2.0 * w * w * k * k
        - 2.0 * k * k * K_B * spec.temperature * timing.t_b * (timing.t_b + timing.t_sep)
            / species.mass)
        .exp()
}

/// Extremum `Δ*` of `A cos(ΔT − δT) + B cos(ΔT + δT)` relative to ω_eg.
pub fn predicted_shift(inputs: &WeakFieldInputs) -> Result<f64> {
    let (a, b) = ensemble_envelopes(inputs);
    shift_from_envelopes(a, b, inputs.delta_recoil(), inputs.timing.t_sep)
        .map(|d| d / inputs.species.omega_eg)
}

/// `(1/T)·atan[((A − B)/(A + B))·tan(δT)]`, rad/s.
pub fn shift_from_envelopes(a: f64, b: f64, delta: f64, t_sep: f64) -> Result<f64> {
    if !(a + b > 0.0) {
        return Err(Error::DegenerateEnvelopes(format!("A + B = {} ≤ 0", a + b)));
    }
    Ok(((a - b) / (a + b) * (delta * t_sep).tan()).atan() / t_sep)
}

/// `(Δ − ħk²/2M)·L/v_x`.
pub fn classical_ramsey_phase(
    detuning: f64,
    k: f64,
    species: &AtomSpecies,
    length: f64,
    v_x: f64,
) -> Result<f64> {
    if !(v_x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "v_x must be positive, got {v_x}"
        )));
    }
    Ok((detuning - species.recoil_shift(k)) * length / v_x)
}

/// Fringe visibility in the weak-field model: the co-propagating envelope.
pub fn weak_field_contrast(setup: &Setup) -> Result<f64> {
    let inputs = WeakFieldInputs::from_setup(setup)?;
    Ok(ensemble_envelopes(&inputs).0)
}

/// Physical first-order packets `(a, n, coefficient)` at detection for a
/// packet released at `z_i` (comoving frame, `v_i = 0`).
pub fn first_order_packets(
    inputs: &WeakFieldInputs,
    z_init: f64,
    detuning: f64,
) -> Vec<(i32, i32, Complex64)> {
    let r = inputs.timing.recoil_rate();
    let tb = inputs.timing.t_b;
    let t = inputs.timing.t_sep;
    let mut out = Vec::with_capacity(4);
    for s in [1i32, -1] {
        let first = first_order_amplitude(inputs, PulseIndex::First, z_init, 0.0, s, detuning);
        let second = first_order_amplitude(inputs, PulseIndex::Second, z_init, 0.0, s, detuning);
        // The first-pulse amplitude passes through the second transform in
        // both directions, so only the first one is undone.
        let nf = s as f64;
        let first_ph = -0.5 * r * nf * nf * tb;
        let second_ph = r * (-nf * nf * t - 0.5 * nf * nf * tb) + 0.5 * r * nf * nf * t;
        out.push((0, s, first * Complex64::from_polar(1.0, first_ph)));
        out.push((-s, s, second * Complex64::from_polar(1.0, second_ph)));
    }
    out
}

/// Δ-independent part of the first-order `P_e` of a single packet at the
/// origin: diagonal terms plus the static cross terms between the two
/// first-pulse and the two second-pulse packets (unbounded detection).
pub fn single_packet_background(inputs: &WeakFieldInputs, detuning: f64) -> Result<f64> {
    let pk = first_order_packets(inputs, 0.0, detuning);
    let packet = |a: i32, n: i32| {
        let tm = &inputs.timing;
        PacketParams::new(
            inputs.spec.waist,
            tm.v_r * (a as f64 * tm.t_sep - n as f64 * tm.t_b),
            n as f64 * tm.v_r,
        )
    };
    let mut p = 0.0;
    for &(a1, n1, c1) in &pk {
        for &(a2, n2, c2) in &pk {
            // same-velocity pairs belong to the co-propagating interference,
            // (0,±1)–(±1,∓1) pairs to the counter-propagating one.
            let static_pair = (a1 == a2 && n1 == n2) || (a1 == -a2 && n1 == -n2);
            if !static_pair {
                continue;
            }
            let o = overlap_with_plane_factor(
                &inputs.species,
                &packet(a1, n1)?,
                &packet(a2, n2)?,
                inputs.timing.t_d,
                0.0,
            )?;
            p += (c1.conj() * c2 * o).re;
        }
    }
    Ok(p)
}

/// Full first-order `P_e` of a single packet at the origin, unbounded
/// detection: background plus `2a₀²(co + counter)`.
pub fn single_packet_probability(inputs: &WeakFieldInputs, detuning: f64) -> Result<f64> {
    let a0 = inputs.first_order_scale();
    let t = single_packet_terms(inputs, 0.0, 0.0, detuning);
    Ok(single_packet_background(inputs, detuning)? + 2.0 * a0 * a0 * (t.co + t.counter))
}
