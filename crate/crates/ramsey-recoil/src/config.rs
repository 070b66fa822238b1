//! Run configuration: TOML with unit-suffixed keys, named presets and
//! conversion to a resolved [`Setup`].
//!
//! A config file names a `preset` (default `standard-a`); every key present
//! in the file overrides the preset value.  All keys carry their unit:
//!
//! ```toml
//! preset = "fig3b"
//! mode = "ensemble"            # ensemble | plane-wave | weak-field
//!
//! [ensemble]
//! theta_uK = 0.8
//! w_mm = 1.0
//! aperture_mm = 5.0
//! samples = 32
//!
//! [pulse]
//! power = 3                    # Ω̄τ = Nπ/2
//! ```

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::constants::{CAVITY_K, CAVITY_KX, G_STANDARD};
use crate::detection::{DetectionRegion, Mode, Setup};
use crate::dynamics::{
    cosine_omega0, DetuningPhase, EvolveOptions, FountainTiming, PulseProfile, PulseSpec,
};
use crate::ensemble::{delta_waist, EnsembleSpec};
use crate::error::{Error, Result};
use crate::ode::OdeOptions;
use crate::quadrature::QuadOptions;
use crate::wavepacket::AtomSpecies;

pub const DEFAULT_PRESET: &str = "standard-a";

/// Presets accepted by [`preset`].
pub const PRESETS: &[&str] = &[
    "standard-a",
    "table1",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig4",
    "tb-zero",
    "detection-x2",
    "weakfield-compare",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Ensemble,
    PlaneWave,
    WeakField,
}

impl From<ModeName> for Mode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Ensemble => Mode::Ensemble,
            ModeName::PlaneWave => Mode::PlaneWave,
            ModeName::WeakField => Mode::WeakField,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileName {
    Gaussian,
    Cosine,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetuningPhaseName {
    Running,
    PulseCenter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    #[serde(rename = "theta_uK")]
    pub theta_uk: f64,
    pub w_mm: f64,
    /// Packet waist; the delta-velocity waist when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waist_m: Option<f64>,
    /// Single packet at the origin with `w = Δz` = delta waist.
    pub pure_state: bool,
    pub aperture_mm: f64,
    pub samples: usize,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self {
            theta_uk: 0.8,
            w_mm: 1.0,
            waist_m: None,
            pure_state: false,
            aperture_mm: 5.0,
            samples: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingSection {
    #[serde(rename = "T_b_s")]
    pub t_b_s: f64,
    #[serde(rename = "T_s")]
    pub t_s: f64,
    #[serde(rename = "T_d_s")]
    pub t_d_s: f64,
    pub k_per_m: f64,
    pub kx_per_m: f64,
    /// Gravity; the speed through the cavity is `gT/2`.
    pub g_m_per_s2: f64,
}

impl Default for TimingSection {
    fn default() -> Self {
        Self {
            t_b_s: 0.15,
            t_s: 0.5,
            t_d_s: 0.8,
            k_per_m: CAVITY_K,
            kx_per_m: CAVITY_KX,
            g_m_per_s2: G_STANDARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseSection {
    /// N in Ω̄τ = Nπ/2.
    pub power: u32,
    pub profile: ProfileName,
    /// Overrides the peak Rabi frequency derived from `power`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0_tau_rad: Option<f64>,
    pub detuning_phase: DetuningPhaseName,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            power: 1,
            profile: ProfileName::Cosine,
            omega0_tau_rad: None,
            detuning_phase: DetuningPhaseName::PulseCenter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectionSection {
    /// Half-width along the recoil axis; `inf` for no boundary.
    pub half_width_mm: f64,
    pub center_mm: f64,
}

impl Default for DetectionSection {
    fn default() -> Self {
        Self {
            half_width_mm: 5.0,
            center_mm: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    /// Momentum cutoff; `max(9, 2N + 9)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nrec: Option<usize>,
    /// Coefficients below this modulus are dropped before detection.
    pub prune: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            nrec: None,
            prune: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TolerancesSection {
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub quadrature: f64,
    pub shift_rad_s: f64,
    /// Largest population allowed at the cutoff.
    pub boundary: f64,
    /// Largest norm drift allowed per pulse.
    pub norm: f64,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        let ode = OdeOptions::default();
        let ev = EvolveOptions::default();
        Self {
            ode_rtol: ode.rtol,
            ode_atol: ode.atol,
            quadrature: QuadOptions::default().rel_tol,
            shift_rad_s: 1e-9,
            boundary: ev.boundary_tol,
            norm: ev.norm_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub preset: String,
    pub mode: ModeName,
    pub ensemble: EnsembleSection,
    pub timing: TimingSection,
    pub pulse: PulseSection,
    pub detection: DetectionSection,
    pub numerics: NumericsSection,
    pub tolerances: TolerancesSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: DEFAULT_PRESET.to_string(),
            mode: ModeName::Ensemble,
            ensemble: EnsembleSection::default(),
            timing: TimingSection::default(),
            pulse: PulseSection::default(),
            detection: DetectionSection::default(),
            numerics: NumericsSection::default(),
            tolerances: TolerancesSection::default(),
        }
    }
}

/// Base configuration of a named preset.
pub fn preset(name: &str) -> Result<RunConfig> {
    let mut c = RunConfig {
        preset: name.to_string(),
        ..RunConfig::default()
    };
    match name {
        "standard-a" | "fig3a" | "fig4" => {}
        "table1" => c.mode = ModeName::PlaneWave,
        "fig3b" => {
            c.timing.t_b_s = 0.21;
            c.timing.t_s = 0.25;
            c.timing.t_d_s = 0.67;
        }
        "fig3c" => c.ensemble.theta_uk = 3.2,
        "tb-zero" => c.timing.t_b_s = 0.0,
        "detection-x2" => c.detection.half_width_mm = 10.0,
        "weakfield-compare" => {
            c.ensemble.pure_state = true;
            c.ensemble.samples = 1;
            c.pulse.profile = ProfileName::Gaussian;
            c.pulse.omega0_tau_rad = Some(std::f64::consts::PI / 20.0);
            c.pulse.detuning_phase = DetuningPhaseName::Running;
            c.detection.half_width_mm = f64::INFINITY;
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    }
    Ok(c)
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Parse config text: the named preset overlaid with the keys present.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    let name = match table.get("preset") {
        None => DEFAULT_PRESET.to_string(),
        Some(toml::Value::String(s)) => s.clone(),
        Some(v) => return Err(Error::Parse(format!("preset must be a string, got {v}"))),
    };
    let base = preset(&name)?;
    let mut merged = match toml::Value::try_from(&base).map_err(|e| Error::Parse(e.to_string()))? {
        toml::Value::Table(t) => t,
        _ => unreachable!("config serialises to a table"),
    };
    merge(&mut merged, table);
    let cfg: RunConfig = toml::Value::Table(merged)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    cfg.setup()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

fn invalid(what: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter(m) | Error::InvalidAperture(m) => {
            Error::Validation(format!("{what}: {m}"))
        }
        other => other,
    }
}

impl RunConfig {
    /// The effective configuration as TOML; parsing it gives back `self`.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Momentum cutoff in use.
    pub fn cutoff(&self) -> usize {
        self.numerics
            .nrec
            .unwrap_or_else(|| (2 * self.pulse.power as usize + 9).max(9))
    }

    /// Validate and resolve into a simulation setup.
    pub fn setup(&self) -> Result<Setup> {
        let species = AtomSpecies::caesium();
        let e = &self.ensemble;
        if e.samples < 1 {
            return Err(Error::Validation("ensemble.samples must be ≥ 1".into()));
        }
        if self.pulse.power < 1 {
            return Err(Error::Validation("pulse.power must be ≥ 1".into()));
        }
        if self.cutoff() < 1 {
            return Err(Error::Validation("numerics.nrec must be ≥ 1".into()));
        }
        let theta = e.theta_uk * 1e-6;
        let aperture = e.aperture_mm * 1e-3;
        let ensemble = if e.pure_state {
            let dz = delta_waist(&species, theta);
            EnsembleSpec::new(&species, theta, dz, dz, aperture)
        } else {
            let waist = e.waist_m.unwrap_or_else(|| delta_waist(&species, theta));
            EnsembleSpec::new(&species, theta, e.w_mm * 1e-3, waist, aperture)
        }
        .map_err(|err| {
            invalid(
                "ensemble (waist constraint Δz ≤ w and Δz ≥ ħ/2√(Mk_Bθ))",
                err,
            )
        })?;

        let t = &self.timing;
        if !(t.g_m_per_s2 > 0.0) {
            return Err(Error::Validation(
                "timing.g_m_per_s2 must be positive".into(),
            ));
        }
        let timing = FountainTiming::new(
            &species,
            t.t_b_s,
            t.t_s,
            t.t_d_s,
            t.k_per_m,
            t.kx_per_m,
            t.g_m_per_s2 * t.t_s / 2.0,
        )
        .map_err(|err| invalid("timing", err))?;

        let tau = timing.pulse_duration();
        let omega0 = match self.pulse.omega0_tau_rad {
            Some(a) => a / tau,
            None => cosine_omega0(self.pulse.power, tau),
        };
        let profile = match self.pulse.profile {
            ProfileName::Gaussian => PulseProfile::Gaussian,
            ProfileName::Cosine => PulseProfile::Cosine,
            ProfileName::Constant => PulseProfile::Constant,
        };
        let dp = match self.pulse.detuning_phase {
            DetuningPhaseName::Running => DetuningPhase::Running,
            DetuningPhaseName::PulseCenter => DetuningPhase::PulseCenter,
        };
        let pulse = |center: f64| {
            PulseSpec::new(profile, omega0, tau, center, timing.k)
                .map(|p| p.with_detuning_phase(dp))
                .map_err(|err| invalid("pulse", err))
        };
        let region = DetectionRegion::new(
            self.detection.center_mm * 1e-3,
            self.detection.half_width_mm * 1e-3,
        )
        .map_err(|err| invalid("detection", err))?;

        let tol = &self.tolerances;
        for (name, v) in [
            ("tolerances.ode_rtol", tol.ode_rtol),
            ("tolerances.ode_atol", tol.ode_atol),
            ("tolerances.quadrature", tol.quadrature),
            ("tolerances.shift_rad_s", tol.shift_rad_s),
            ("tolerances.boundary", tol.boundary),
            ("tolerances.norm", tol.norm),
        ] {
            if !(v > 0.0) {
                return Err(Error::Validation(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.numerics.prune >= 0.0) {
            return Err(Error::Validation("numerics.prune must be ≥ 0".into()));
        }
        let evolve = EvolveOptions {
            ode: OdeOptions {
                rtol: tol.ode_rtol,
                atol: tol.ode_atol,
                ..OdeOptions::default()
            },
            boundary_tol: tol.boundary,
            norm_tol: tol.norm,
        };
        Ok(Setup {
            mode: self.mode.into(),
            species,
            ensemble,
            timing,
            first: pulse(timing.first_center())?,
            second: pulse(timing.second_center())?,
            region,
            samples: e.samples,
            cutoff: self.cutoff(),
            evolve,
            quad: QuadOptions {
                rel_tol: tol.quadrature,
                ..QuadOptions::default()
            },
            shift_tol: tol.shift_rad_s,
            prune: self.numerics.prune,
        })
    }
}
