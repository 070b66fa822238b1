//! Detection-region projection, ensemble averaging and shift extraction.
//!
//! After the second pulse every coefficient `c_n^a` is attached to a packet
//! of velocity `n·v_r` focused at `v_r(aT − nT_b)`.  All packets share the
//! waist, hence the same quadratic exponent `c₂`; their linear exponents are
//! `a·L_a + n·L_n`.  The coherent sum therefore factorises as
//!
//! ```text
//! Σ c φ = pref · e^{c₂z²} · Σ_a X^a Σ_n C_{a,n} Y^n,   X = e^{L_a z}, Y = e^{L_n z}
//! ```
//!
//! and the large common chirp `Im c₂` drops out of `|Σ|²`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::dynamics::{
    plane_wave_probabilities, run_sequence, untransform, AmplitudeLadder, EvolveOptions,
    FountainTiming, Interaction, PulseDiagnostics, PulseSpec,
};
use crate::ensemble::{sample_positions, EnsembleSpec};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::sum::Neumaier;
use crate::wavepacket::{position_prefactor, spread_sigma, width_parameter, AtomSpecies};

/// Density of the packet cluster is below e^{-32} of its peak beyond this
/// many spreads.
const CLIP_SIGMAS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionRegion {
    /// Lab-frame centre, m.
    pub center: f64,
    /// Half-width along z, m; `f64::INFINITY` for an unbounded region.
    pub half_width: f64,
}

impl DetectionRegion {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detection half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self { center, half_width })
    }

    pub fn unbounded() -> Self {
        Self {
            center: 0.0,
            half_width: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum State {
    Excited,
    Ground,
}

/// Centre of packet `(a, n)` in the frame comoving with `z_i + v_i t`.
pub fn packet_center(timing: &FountainTiming, a: i32, n: i32, t: f64) -> f64 {
    timing.v_r * (a as f64 * timing.t_sep + n as f64 * (t - timing.t_b))
}

struct Row {
    a: i32,
    n_lo: i32,
    ce: Vec<Complex64>,
    cg: Vec<Complex64>,
}

/// Packet superposition at detection time, ready for repeated evaluation.
pub struct PacketSum {
    k: f64,
    weight: f64,
    re_c2: f64,
    la: Complex64,
    ln: Complex64,
    rows: Vec<Row>,
    sigma: f64,
    reach: f64,
}

impl PacketSum {
    /// `ladder` holds physical (untransformed) coefficients; entries with
    /// modulus below `prune` in both states are dropped.
    pub fn new(
        ladder: &AmplitudeLadder,
        species: &AtomSpecies,
        timing: &FountainTiming,
        waist: f64,
        prune: f64,
    ) -> Self {
        let t = timing.t_d;
        let a_w = width_parameter(species, waist, t);
        let dz2 = waist * waist;
        let k = timing.k;
        let vr = timing.v_r;
        let i = Complex64::i();
        let inv = 1.0 / a_w;

        let mut rows: Vec<Row> = Vec::new();
        let mut reach = 0.0f64;
        for (a, n, e, g) in ladder.entries() {
            if e.norm() < prune && g.norm() < prune {
                continue;
            }
            // constant exponent of packet (a, n)
            let zc = vr * (a as f64 * timing.t_sep - n as f64 * timing.t_b);
            let u = n as f64 * k;
            let c0 = -zc * zc * 0.25 * inv - i * dz2 * u * zc * inv + dz2 * dz2 * u * u * inv
                - dz2 * u * u;
            let f = c0.exp();
            reach = reach.max(packet_center(timing, a, n, t).abs());
            match rows.last_mut() {
                Some(r) if r.a == a => {
                    let len = (n - r.n_lo) as usize + 1;
                    r.ce.resize(len, Complex64::new(0.0, 0.0));
                    r.cg.resize(len, Complex64::new(0.0, 0.0));
                    r.ce[len - 1] = e * f;
                    r.cg[len - 1] = g * f;
                }
                _ => rows.push(Row {
                    a,
                    n_lo: n,
                    ce: vec![e * f],
                    cg: vec![g * f],
                }),
            }
        }
        let pref = position_prefactor(species, waist, t);
        Self {
            k,
            weight: pref.norm_sqr(),
            re_c2: (-0.25 * inv).re,
            la: vr * timing.t_sep * 0.5 * inv,
            ln: -vr * timing.t_b * 0.5 * inv + i * dz2 * k * inv,
            rows,
            sigma: spread_sigma(species, waist, t),
            reach,
        }
    }

    pub fn packet_count(&self) -> usize {
        self.rows.iter().map(|r| r.ce.len()).sum()
    }

    /// `|Ψ_e(z)|²`, `|Ψ_g(z)|²` in the comoving frame, for the ladder moved
    /// to packet centre `z_gauge` (`c_n^a → c_n^a e^{inkz_gauge}`).
    pub fn densities(&self, z: f64, z_gauge: f64) -> [f64; 2] {
        let x = (self.la * z).exp();
        let y = (self.ln * z).exp() * Complex64::from_polar(1.0, self.k * z_gauge);
        let mut se = Complex64::new(0.0, 0.0);
        let mut sg = Complex64::new(0.0, 0.0);
        for r in &self.rows {
            let mut pe = Complex64::new(0.0, 0.0);
            let mut pg = Complex64::new(0.0, 0.0);
            for j in (0..r.ce.len()).rev() {
                pe = pe * y + r.ce[j];
                pg = pg * y + r.cg[j];
            }
            let m = x.powi(r.a) * y.powi(r.n_lo);
            se += m * pe;
            sg += m * pg;
        }
        let w = self.weight * (2.0 * self.re_c2 * z * z).exp();
        [w * se.norm_sqr(), w * sg.norm_sqr()]
    }

    /// Integrated `[P_e, P_g]` over `region` (lab frame), for a packet
    /// released at `z_i` with velocity `v_i`; returns the estimate of the
    /// absolute quadrature error as well.
    pub fn probabilities(
        &self,
        region: &DetectionRegion,
        z_init: f64,
        lab_offset: f64,
        opts: &QuadOptions,
    ) -> Result<([f64; 2], f64)> {
        let clip = CLIP_SIGMAS * self.sigma + self.reach;
        let lo = (region.center - region.half_width - lab_offset).max(-clip);
        let hi = (region.center + region.half_width - lab_offset).min(clip);
        if hi <= lo {
            return Ok(([0.0, 0.0], 0.0));
        }
        let r = integrate(|z| self.densities(z, z_init), lo, hi, opts)?;
        Ok((r.value, r.error))
    }
}

/// Probability of finding the atom in `state` inside `region`.
#[allow(clippy::too_many_arguments)]
pub fn detect_probability(
    ladder: &AmplitudeLadder,
    species: &AtomSpecies,
    timing: &FountainTiming,
    waist: f64,
    z_init: f64,
    v_init: f64,
    region: &DetectionRegion,
    state: State,
    opts: &QuadOptions,
) -> Result<f64> {
    let sum = PacketSum::new(ladder, species, timing, waist, 0.0);
    let (p, _) = sum.probabilities(region, 0.0, z_init + v_init * timing.t_d, opts)?;
    Ok(match state {
        State::Excited => p[0],
        State::Ground => p[1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub detuning: f64,
    pub o_e: f64,
    pub o_g: f64,
    pub p_e_raw: f64,
    pub p_g_raw: f64,
}

impl FringePoint {
    pub fn from_raw(detuning: f64, p_e: f64, p_g: f64) -> Self {
        let tot = p_e + p_g;
        let o_e = p_e / tot;
        Self {
            detuning,
            o_e,
            o_g: 1.0 - o_e,
            p_e_raw: p_e,
            p_g_raw: p_g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Wave packets averaged over the cloud, finite detection region.
    Ensemble,
    /// Coefficients only (no envelopes): coherent sums.
    PlaneWave,
    /// First-order analytic interference terms.
    WeakField,
}

/// Fully resolved physical and numerical setup of one simulation.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub mode: Mode,
    pub species: AtomSpecies,
    pub ensemble: EnsembleSpec,
    pub timing: FountainTiming,
    pub first: PulseSpec,
    pub second: PulseSpec,
    pub region: DetectionRegion,
    pub samples: usize,
    pub cutoff: usize,
    pub evolve: EvolveOptions,
    pub quad: QuadOptions,
    /// Convergence threshold of the extremum search, rad/s.
    pub shift_tol: f64,
    /// Coefficients below this modulus are left out of the packet sum.
    pub prune: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Largest |P_e^PW + P_g^PW − 1| over the evaluated detunings.
    pub epsilon: f64,
    pub max_boundary_population: f64,
    pub max_norm_drift: f64,
    /// Largest absolute quadrature error estimate of a single integral.
    pub max_quad_error: f64,
    pub fringe_evaluations: usize,
    pub iterations: usize,
}

impl Diagnostics {
    fn absorb_pulse(&mut self, p: &PulseDiagnostics) {
        self.max_boundary_population = self.max_boundary_population.max(p.max_boundary_population);
        self.max_norm_drift = self.max_norm_drift.max(p.norm_drift);
    }
}

/// Signed largest-magnitude ε seen so far.
fn note_epsilon(d: &mut Diagnostics, eps: f64) {
    if eps.abs() > d.epsilon.abs() {
        d.epsilon = eps;
    }
}

/// Fringe point at one detuning, updating `diag`.
pub fn fringe_point(setup: &Setup, detuning: f64, diag: &mut Diagnostics) -> Result<FringePoint> {
    if setup.mode == Mode::WeakField {
        let co = crate::weakfield::WeakFieldInputs::from_setup(setup)?;
        let t = crate::weakfield::ensemble_terms(&co, detuning);
        // background 1 plus interference; only ratios are meaningful
        let pe = 1.0 + 0.5 * (t.co + t.counter);
        diag.fringe_evaluations += 1;
        return Ok(FringePoint::from_raw(detuning, pe, 2.0 - pe));
    }
    let inter = Interaction::new(detuning, 0.0, 0.0);
    let (ladder, pd) = run_sequence(
        &setup.timing,
        &setup.first,
        &setup.second,
        &inter,
        setup.cutoff,
        &setup.evolve,
    )?;
    diag.absorb_pulse(&pd);
    diag.fringe_evaluations += 1;
    let pw = plane_wave_probabilities(&ladder);
    note_epsilon(diag, pw.epsilon);
    if setup.mode == Mode::PlaneWave {
        return Ok(FringePoint::from_raw(detuning, pw.excited, pw.ground));
    }

    let phys = untransform(&ladder, &setup.timing);
    let sum = PacketSum::new(
        &phys,
        &setup.species,
        &setup.timing,
        setup.ensemble.waist,
        setup.prune,
    );
    let zs = sample_positions(&setup.ensemble, setup.samples)?;
    let per: Vec<Result<([f64; 2], f64)>> = zs
        .par_iter()
        .map(|&z| sum.probabilities(&setup.region, z, z, &setup.quad))
        .collect();
    let mut acc = [Neumaier::new(), Neumaier::new()];
    for r in per {
        let (p, err) = r?;
        acc[0].add(p[0]);
        acc[1].add(p[1]);
        diag.max_quad_error = diag.max_quad_error.max(err);
    }
    let n = zs.len() as f64;
    Ok(FringePoint::from_raw(
        detuning,
        acc[0].value() / n,
        acc[1].value() / n,
    ))
}

/// Fringe point without diagnostics.
pub fn ensemble_observables(setup: &Setup, detuning: f64) -> Result<FringePoint> {
    fringe_point(setup, detuning, &mut Diagnostics::default())
}

/// |O_e − O_g| at resonance.
pub fn contrast(setup: &Setup) -> Result<f64> {
    if setup.mode == Mode::WeakField {
        return crate::weakfield::weak_field_contrast(setup);
    }
    let p = ensemble_observables(setup, 0.0)?;
    Ok((p.o_e - p.o_g).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct ExtremumOptions {
    /// Half-spacing of the three-point stencil, rad/s.
    pub step: f64,
    /// Stop when the update falls below this, rad/s.
    pub tol: f64,
    pub max_iterations: usize,
}

impl ExtremumOptions {
    /// Stencil `h = π/(10T)`.
    pub fn for_separation(t_sep: f64, tol: f64) -> Self {
        Self {
            step: PI / (10.0 * t_sep),
            tol,
            max_iterations: 60,
        }
    }
}

/// Iterated three-point parabola search for the extremum of `f` near
/// `start`; returns the detuning and the number of iterations.
pub fn find_extremum<F>(mut f: F, start: f64, opts: &ExtremumOptions) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = opts.step;
    let mut c = start;
    let mut last = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let om = f(c - h)?;
        let o0 = f(c)?;
        let op = f(c + h)?;
        let den = om - 2.0 * o0 + op;
        let scale = om.abs().max(o0.abs()).max(op.abs());
        if !(den.abs() > 1e-14 * scale) {
            return Err(Error::DegenerateCurvature { detuning: c });
        }
        let upd = h * (om - op) / (2.0 * den);
        c += upd;
        last = upd;
        if upd.abs() < opts.tol {
            return Ok((c, it));
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        last_update: last,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioResult {
    /// Fringe-centre offset relative to the transition frequency.
    pub shift: f64,
    pub contrast: f64,
    pub diagnostics: Diagnostics,
}

/// Contrast and fringe-centre shift for one setup.
pub fn run_scenario(setup: &Setup) -> Result<ScenarioResult> {
    if setup.mode == Mode::WeakField {
        let inputs = crate::weakfield::WeakFieldInputs::from_setup(setup)?;
        return Ok(ScenarioResult {
            shift: crate::weakfield::predicted_shift(&inputs)?,
            contrast: crate::weakfield::weak_field_contrast(setup)?,
            diagnostics: Diagnostics::default(),
        });
    }
    let mut diag = Diagnostics::default();
    let mut cache: HashMap<u64, FringePoint> = HashMap::new();
    let mut eval = |d: f64, diag: &mut Diagnostics| -> Result<FringePoint> {
        if let Some(p) = cache.get(&d.to_bits()) {
            return Ok(*p);
        }
        let p = fringe_point(setup, d, diag)?;
        cache.insert(d.to_bits(), p);
        Ok(p)
    };
    let p0 = eval(0.0, &mut diag)?;
    let contrast = (p0.o_e - p0.o_g).abs();
    let opts = ExtremumOptions::for_separation(setup.timing.t_sep, setup.shift_tol);
    let (centre, iterations) = find_extremum(|d| eval(d, &mut diag).map(|p| p.o_e), 0.0, &opts)?;
    diag.iterations = iterations;
    Ok(ScenarioResult {
        shift: centre / setup.species.omega_eg,
        contrast,
        diagnostics: diag,
    })
}

/// Relative shift of the fringe centre (see [`run_scenario`]).
pub fn extract_shift(setup: &Setup) -> Result<f64> {
    Ok(run_scenario(setup)?.shift)
}
