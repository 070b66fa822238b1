//! Momentum-ladder amplitudes during and between the two standing-wave
//! interactions.
//!
//! The state is a set of complex coefficients `e_n^a`, `g_n^a` attached to
//! Gaussian packets with velocity `n·v_r` whose trajectories cross at the
//! second interaction when they share `a` (see [`crate::detection`]).  During
//! a pulse only the coefficients change (Raman–Nath regime); the recoil
//! phases accumulated in free flight are moved into the coefficients by
//! [`transform_first`] and [`transform_second`].
//!
//! The first pulse couples `(a, n) ↔ (a, n ± 1)`, the second
//! `(a, n) ↔ (a ± 1, n ∓ 1)`.  Both are therefore one-dimensional chains in
//! `n`: per row `a` for the first pulse, per sector `s = a + n` for the second.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bessel::bessel_j_table;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, OdeStats};
use crate::wavepacket::AtomSpecies;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense `(a, n)` amplitude table with `|n| ≤ cutoff`; entries outside the
/// stored `a` range read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeLadder {
    cutoff: usize,
    a_min: i32,
    rows: usize,
    e: Vec<Complex64>,
    g: Vec<Complex64>,
}

impl AmplitudeLadder {
    pub fn zeros(cutoff: usize, a_min: i32, a_max: i32) -> Self {
        assert!(a_max >= a_min);
        let rows = (a_max - a_min + 1) as usize;
        let w = 2 * cutoff + 1;
        Self {
            cutoff,
            a_min,
            rows,
            e: vec![ZERO; rows * w],
            g: vec![ZERO; rows * w],
        }
    }

    /// Initial state before the first pulse: `g_0^0 = 1`.
    pub fn ground(cutoff: usize) -> Self {
        let mut l = Self::zeros(cutoff, 0, 0);
        l.set(0, 0, ZERO, Complex64::new(1.0, 0.0));
        l
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn a_range(&self) -> (i32, i32) {
        (self.a_min, self.a_min + self.rows as i32 - 1)
    }

    fn width(&self) -> usize {
        2 * self.cutoff + 1
    }

    fn index(&self, a: i32, n: i32) -> Option<usize> {
        let c = self.cutoff as i32;
        if n.abs() > c || a < self.a_min || a >= self.a_min + self.rows as i32 {
            return None;
        }
        Some((a - self.a_min) as usize * self.width() + (n + c) as usize)
    }

    pub fn get(&self, a: i32, n: i32) -> (Complex64, Complex64) {
        match self.index(a, n) {
            Some(i) => (self.e[i], self.g[i]),
            None => (ZERO, ZERO),
        }
    }

    /// Panics if `(a, n)` lies outside the stored table.
    pub fn set(&mut self, a: i32, n: i32, e: Complex64, g: Complex64) {
        let i = self
            .index(a, n)
            .unwrap_or_else(|| panic!("entry ({a}, {n}) outside ladder"));
        self.e[i] = e;
        self.g[i] = g;
    }

    /// All non-zero entries as `(a, n, e, g)`, ordered by `a` then `n`.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, Complex64, Complex64)> + '_ {
        let w = self.width();
        let c = self.cutoff as i32;
        (0..self.rows * w).filter_map(move |i| {
            let (e, g) = (self.e[i], self.g[i]);
            if e == ZERO && g == ZERO {
                None
            } else {
                Some((self.a_min + (i / w) as i32, (i % w) as i32 - c, e, g))
            }
        })
    }

    /// Incoherent norm Σ(|e|² + |g|²).
    pub fn norm(&self) -> f64 {
        crate::sum::sum(self.e.iter().chain(&self.g).map(|v| v.norm_sqr()))
    }

    /// Population at `|n| = cutoff`.
    pub fn boundary_population(&self) -> f64 {
        let c = self.cutoff as i32;
        self.entries()
            .filter(|(_, n, _, _)| n.abs() == c)
            .map(|(_, _, e, g)| e.norm_sqr() + g.norm_sqr())
            .sum()
    }

    /// Multiply entry `(a, n)` by `f(a, n)`.
    fn map_phases(&self, f: impl Fn(i32, i32) -> Complex64) -> Self {
        let mut out = self.clone();
        let w = self.width();
        let c = self.cutoff as i32;
        for i in 0..self.rows * w {
            let a = self.a_min + (i / w) as i32;
            let n = (i % w) as i32 - c;
            let m = f(a, n);
            out.e[i] *= m;
            out.g[i] *= m;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseProfile {
    /// `Ω₀ exp[−2(t − t_j)²/τ²]`
    Gaussian,
    /// `Ω₀ cos(π(t − t_j)/τ)` over one half-period
    Cosine,
    Constant,
}

/// How the detuning phase `e^{−iΔt}` of the coupling is evaluated inside a
/// pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningPhase {
    /// Exact running phase `e^{−iΔt}`.
    Running,
    /// Frozen at the pulse centre, `e^{−iΔt_j}`: the short-pulse limit in
    /// which all packets receive the interaction phase at the same instant.
    PulseCenter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub profile: PulseProfile,
    /// Peak Rabi frequency Ω₀, rad/s.
    pub omega0: f64,
    /// Interaction duration τ, s.
    pub tau: f64,
    /// Pulse centre t_j, s.
    pub t_center: f64,
    /// Field phase φ, rad.
    pub phase: f64,
    /// Standing-wave wave number k, 1/m.
    pub k: f64,
    pub detuning_phase: DetuningPhase,
}

impl PulseSpec {
    pub fn new(
        profile: PulseProfile,
        omega0: f64,
        tau: f64,
        t_center: f64,
        k: f64,
    ) -> Result<Self> {
        if !(omega0.is_finite() && omega0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be ≥ 0, got {omega0}"
            )));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "k must be positive, got {k}"
            )));
        }
        Ok(Self {
            profile,
            omega0,
            tau,
            t_center,
            phase: 0.0,
            k,
            detuning_phase: DetuningPhase::Running,
        })
    }

    pub fn with_detuning_phase(mut self, dp: DetuningPhase) -> Self {
        self.detuning_phase = dp;
        self
    }

    pub fn at(mut self, t_center: f64) -> Self {
        self.t_center = t_center;
        self
    }

    /// Integration window `[t_j − Sτ/2, t_j + Sτ/2]`, S = 3 for Gaussian tails.
    pub fn window(&self) -> (f64, f64) {
        let half = match self.profile {
            PulseProfile::Gaussian => 1.5 * self.tau,
            PulseProfile::Cosine | PulseProfile::Constant => 0.5 * self.tau,
        };
        (self.t_center - half, self.t_center + half)
    }

    /// Pulse area ∫Ω dt over the window.
    pub fn area(&self) -> f64 {
        match self.profile {
            PulseProfile::Constant => self.omega0 * self.tau,
            PulseProfile::Cosine => 2.0 / PI * self.omega0 * self.tau,
            PulseProfile::Gaussian => {
                // ∫_{-1.5τ}^{1.5τ} e^{-2t²/τ²} dt = τ√(π/2) erf(1.5√2)
                self.omega0
                    * self.tau
                    * (PI / 2.0).sqrt()
                    * statrs::function::erf::erf(1.5 * 2f64.sqrt())
            }
        }
    }
}

/// Peak Rabi frequency giving mean area `Ω̄τ = Nπ/2` for the cosine profile.
pub fn cosine_omega0(power: u32, tau: f64) -> f64 {
    power as f64 * PI * PI / (4.0 * tau)
}

/// Ω(t); zero outside the pulse window.
pub fn rabi_at(pulse: &PulseSpec, t: f64) -> f64 {
    let (lo, hi) = pulse.window();
    if t < lo || t > hi {
        return 0.0;
    }
    let x = t - pulse.t_center;
    match pulse.profile {
        PulseProfile::Gaussian => pulse.omega0 * (-2.0 * x * x / (pulse.tau * pulse.tau)).exp(),
        PulseProfile::Cosine => pulse.omega0 * (PI * x / pulse.tau).cos().max(0.0),
        PulseProfile::Constant => pulse.omega0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FountainTiming {
    /// Release to first pulse, s.
    pub t_b: f64,
    /// Pulse separation T, s.
    pub t_sep: f64,
    /// Release to detection, s.
    pub t_d: f64,
    /// Standing-wave wave number, 1/m.
    pub k: f64,
    /// Profile wave number along the trajectory, 1/m.
    pub k_x: f64,
    /// Speed through the cavity, m/s.
    pub v_x: f64,
    /// Recoil velocity ħk/M, m/s.
    pub v_r: f64,
}

impl FountainTiming {
    pub fn new(
        species: &AtomSpecies,
        t_b: f64,
        t_sep: f64,
        t_d: f64,
        k: f64,
        k_x: f64,
        v_x: f64,
    ) -> Result<Self> {
        if !(t_b.is_finite() && t_b >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T_b must be ≥ 0, got {t_b}"
            )));
        }
        if !(t_sep.is_finite() && t_sep > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {t_sep}"
            )));
        }
        if !(t_d.is_finite() && t_d > t_b + t_sep) {
            return Err(Error::InvalidParameter(format!(
                "T_d = {t_d} must exceed T_b + T = {}",
                t_b + t_sep
            )));
        }
        for (name, v) in [("k", k), ("k_x", k_x), ("v_x", v_x)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            t_b,
            t_sep,
            t_d,
            k,
            k_x,
            v_x,
            v_r: species.recoil_velocity(k),
        })
    }

    /// Interaction time of one cavity passage, π/(k_x v_x).
    pub fn pulse_duration(&self) -> f64 {
        PI / (self.k_x * self.v_x)
    }

    /// `M v_r²/ħ = k v_r = 2δ`, rad/s.
    pub fn recoil_rate(&self) -> f64 {
        self.k * self.v_r
    }

    /// δ = ħk²/2M, rad/s.
    pub fn recoil_shift(&self) -> f64 {
        0.5 * self.recoil_rate()
    }

    pub fn first_center(&self) -> f64 {
        self.t_b
    }

    pub fn second_center(&self) -> f64 {
        self.t_b + self.t_sep
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseIndex {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToTilde,
    FromTilde,
}

fn sign(dir: Direction) -> f64 {
    match dir {
        Direction::ToTilde => -1.0,
        Direction::FromTilde => 1.0,
    }
}

/// Moves the recoil phase accumulated up to the first pulse:
/// `× exp[∓i(Mv_r²/ħ)(anT − n²T_b/2)]`.
pub fn transform_first(
    ladder: &AmplitudeLadder,
    timing: &FountainTiming,
    dir: Direction,
) -> AmplitudeLadder {
    let r = timing.recoil_rate();
    let s = sign(dir);
    ladder.map_phases(|a, n| {
        let (a, n) = (a as f64, n as f64);
        Complex64::from_polar(
            1.0,
            s * r * (a * n * timing.t_sep - 0.5 * n * n * timing.t_b),
        )
    })
}

/// Moves the recoil phase accumulated between the pulses:
/// `× exp[∓i(Mv_r²/ħ) n²T/2]`.
pub fn transform_second(
    ladder: &AmplitudeLadder,
    timing: &FountainTiming,
    dir: Direction,
) -> AmplitudeLadder {
    let r = timing.recoil_rate();
    let s = sign(dir);
    ladder.map_phases(|_, n| {
        let n = n as f64;
        Complex64::from_polar(1.0, s * r * 0.5 * n * n * timing.t_sep)
    })
}

/// Coupling point of the interaction: detuning and packet centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    /// Δ, rad/s.
    pub detuning: f64,
    pub z_init: f64,
    pub v_init: f64,
}

impl Interaction {
    pub fn new(detuning: f64, z_init: f64, v_init: f64) -> Self {
        Self {
            detuning,
            z_init,
            v_init,
        }
    }

    /// `(Ω/4)e^{−i(Δt+φ)}`, `e^{ik(z_i + v_i t)}` at time `t`.
    fn coefficients(&self, pulse: &PulseSpec, t: f64) -> (Complex64, Complex64) {
        let om = rabi_at(pulse, t);
        let tp = match pulse.detuning_phase {
            DetuningPhase::Running => t,
            DetuningPhase::PulseCenter => pulse.t_center,
        };
        let c = Complex64::from_polar(0.25 * om, -(self.detuning * tp + pulse.phase));
        let s = Complex64::from_polar(1.0, pulse.k * (self.z_init + self.v_init * t));
        (c, s)
    }
}

/// Chain derivative; `y = [e_{−N..N}, g_{−N..N}]`.
fn chain_rhs(c: Complex64, s: Complex64, y: &[Complex64], dy: &mut [Complex64]) {
    let w = y.len() / 2;
    let (e, g) = y.split_at(w);
    let (de, dg) = dy.split_at_mut(w);
    let mi = Complex64::new(0.0, -1.0);
    let ce = mi * c; // −i(Ω/4)e^{−iΔt}
    let cg = mi * c.conj(); // −i(Ω/4)e^{+iΔt}
    let sc = s.conj();
    for j in 0..w {
        let gm = if j > 0 { g[j - 1] } else { ZERO };
        let gp = if j + 1 < w { g[j + 1] } else { ZERO };
        let em = if j > 0 { e[j - 1] } else { ZERO };
        let ep = if j + 1 < w { e[j + 1] } else { ZERO };
        de[j] = ce * (s * gm + sc * gp);
        dg[j] = cg * (s * em + sc * ep);
    }
}

/// Derivative for the first interaction; `a` is unchanged.
pub fn rhs_first(
    ladder: &AmplitudeLadder,
    t: f64,
    inter: &Interaction,
    pulse: &PulseSpec,
) -> AmplitudeLadder {
    let (c, s) = inter.coefficients(pulse, t);
    let mut out = ladder.clone();
    let w = ladder.width();
    for r in 0..ladder.rows {
        let mut y = Vec::with_capacity(2 * w);
        y.extend_from_slice(&ladder.e[r * w..(r + 1) * w]);
        y.extend_from_slice(&ladder.g[r * w..(r + 1) * w]);
        let mut dy = vec![ZERO; 2 * w];
        chain_rhs(c, s, &y, &mut dy);
        out.e[r * w..(r + 1) * w].copy_from_slice(&dy[..w]);
        out.g[r * w..(r + 1) * w].copy_from_slice(&dy[w..]);
    }
    out
}

/// Widen the `a` range so that every sector reachable by the second pulse
/// fits.
fn widened_for_second(ladder: &AmplitudeLadder) -> AmplitudeLadder {
    let (lo, hi) = ladder.a_range();
    let c = ladder.cutoff as i32;
    let mut out = AmplitudeLadder::zeros(ladder.cutoff, lo - 2 * c, hi + 2 * c);
    for (a, n, e, g) in ladder.entries() {
        out.set(a, n, e, g);
    }
    out
}

fn sector_bounds(ladder: &AmplitudeLadder) -> (i32, i32) {
    let (lo, hi) = ladder.a_range();
    let c = ladder.cutoff as i32;
    (lo - c, hi + c)
}

fn gather_sector(ladder: &AmplitudeLadder, s: i32) -> Vec<Complex64> {
    let c = ladder.cutoff as i32;
    let w = ladder.width();
    let mut y = vec![ZERO; 2 * w];
    for n in -c..=c {
        let (e, g) = ladder.get(s - n, n);
        y[(n + c) as usize] = e;
        y[w + (n + c) as usize] = g;
    }
    y
}

fn scatter_sector(ladder: &mut AmplitudeLadder, s: i32, y: &[Complex64]) {
    let c = ladder.cutoff as i32;
    let w = ladder.width();
    for n in -c..=c {
        if let Some(i) = ladder.index(s - n, n) {
            ladder.e[i] = y[(n + c) as usize];
            ladder.g[i] = y[w + (n + c) as usize];
        } else {
            debug_assert!(y[(n + c) as usize] == ZERO && y[w + (n + c) as usize] == ZERO);
        }
    }
}

/// Derivative for the second interaction; `a + n` is conserved.
pub fn rhs_second(
    ladder: &AmplitudeLadder,
    t: f64,
    inter: &Interaction,
    pulse: &PulseSpec,
) -> AmplitudeLadder {
    let (c, s) = inter.coefficients(pulse, t);
    let mut out = AmplitudeLadder::zeros(
        ladder.cutoff,
        ladder.a_min,
        ladder.a_min + ladder.rows as i32 - 1,
    );
    let (s_lo, s_hi) = sector_bounds(ladder);
    let w = ladder.width();
    for sec in s_lo..=s_hi {
        let y = gather_sector(ladder, sec);
        let mut dy = vec![ZERO; 2 * w];
        chain_rhs(c, s, &y, &mut dy);
        // Couplings leaving the stored a-range are dropped like |n| > cutoff.
        let c_ = ladder.cutoff as i32;
        for n in -c_..=c_ {
            if let Some(i) = out.index(sec - n, n) {
                out.e[i] = dy[(n + c_) as usize];
                out.g[i] = dy[w + (n + c_) as usize];
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub ode: OdeOptions,
    /// Largest population tolerated at `|n| = cutoff` at any accepted step.
    pub boundary_tol: f64,
    /// Largest tolerated drift of the incoherent norm over one pulse.
    pub norm_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            ode: OdeOptions::default(),
            boundary_tol: 1e-10,
            norm_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PulseDiagnostics {
    pub max_boundary_population: f64,
    pub norm_drift: f64,
    pub stats: OdeStats,
}

impl PulseDiagnostics {
    pub fn merge(&mut self, other: &PulseDiagnostics) {
        self.max_boundary_population = self
            .max_boundary_population
            .max(other.max_boundary_population);
        self.norm_drift = self.norm_drift.max(other.norm_drift);
        self.stats.accepted += other.stats.accepted;
        self.stats.rejected += other.stats.rejected;
        self.stats.evaluations += other.stats.evaluations;
    }
}

fn evolve_chain(
    y: &mut [Complex64],
    inter: &Interaction,
    pulse: &PulseSpec,
    cutoff: usize,
    opts: &EvolveOptions,
    diag: &mut PulseDiagnostics,
) -> Result<()> {
    let w = y.len() / 2;
    let norm0: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    if norm0 == 0.0 {
        return Ok(());
    }
    let (t0, t1) = pulse.window();
    let boundary = |y: &[Complex64]| {
        y[0].norm_sqr() + y[w - 1].norm_sqr() + y[w].norm_sqr() + y[2 * w - 1].norm_sqr()
    };
    let mut worst = boundary(y);
    let stats = integrate(
        |t, y, dy| {
            let (c, s) = inter.coefficients(pulse, t);
            chain_rhs(c, s, y, dy)
        },
        t0,
        t1,
        y,
        &opts.ode,
        |_, y| {
            let b = boundary(y);
            worst = worst.max(b);
            if b > opts.boundary_tol {
                Err(Error::CutoffTooSmall {
                    cutoff,
                    population: b,
                    limit: opts.boundary_tol,
                })
            } else {
                Ok(())
            }
        },
    )?;
    let norm1: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    let drift = (norm1 - norm0).abs();
    if drift > opts.norm_tol {
        return Err(Error::ToleranceNotMet(format!(
            "norm drift {drift:.3e} over pulse exceeds {:.1e}",
            opts.norm_tol
        )));
    }
    diag.merge(&PulseDiagnostics {
        max_boundary_population: worst,
        norm_drift: drift,
        stats,
    });
    Ok(())
}

/// Integrate one interaction over its window.
pub fn evolve_pulse(
    ladder: &AmplitudeLadder,
    which: PulseIndex,
    inter: &Interaction,
    pulse: &PulseSpec,
    opts: &EvolveOptions,
) -> Result<(AmplitudeLadder, PulseDiagnostics)> {
    let mut diag = PulseDiagnostics::default();
    let w = ladder.width();
    match which {
        PulseIndex::First => {
            let mut out = ladder.clone();
            for r in 0..ladder.rows {
                let mut y = Vec::with_capacity(2 * w);
                y.extend_from_slice(&ladder.e[r * w..(r + 1) * w]);
                y.extend_from_slice(&ladder.g[r * w..(r + 1) * w]);
                evolve_chain(&mut y, inter, pulse, ladder.cutoff, opts, &mut diag)?;
                out.e[r * w..(r + 1) * w].copy_from_slice(&y[..w]);
                out.g[r * w..(r + 1) * w].copy_from_slice(&y[w..]);
            }
            Ok((out, diag))
        }
        PulseIndex::Second => {
            let mut out = widened_for_second(ladder);
            let (s_lo, s_hi) = sector_bounds(ladder);
            for sec in s_lo..=s_hi {
                let mut y = gather_sector(&out, sec);
                evolve_chain(&mut y, inter, pulse, ladder.cutoff, opts, &mut diag)?;
                scatter_sector(&mut out, sec, &y);
            }
            Ok((out, diag))
        }
    }
}

/// Full interferometer sequence for one packet centre: first pulse, phase
/// transfer, second pulse.  Returns the doubly transformed ladder.
pub fn run_sequence(
    timing: &FountainTiming,
    first: &PulseSpec,
    second: &PulseSpec,
    inter: &Interaction,
    cutoff: usize,
    opts: &EvolveOptions,
) -> Result<(AmplitudeLadder, PulseDiagnostics)> {
    // g_0^0 = 1 is invariant under the first transform.
    let start = AmplitudeLadder::ground(cutoff);
    let (l1, mut diag) = evolve_pulse(&start, PulseIndex::First, inter, first, opts)?;
    let l1 = transform_second(&l1, timing, Direction::ToTilde);
    let (l2, d2) = evolve_pulse(&l1, PulseIndex::Second, inter, second, opts)?;
    diag.merge(&d2);
    Ok((l2, diag))
}

/// Undo both transforms, giving the physical coefficients `e_n^a`, `g_n^a`.
pub fn untransform(ladder: &AmplitudeLadder, timing: &FountainTiming) -> AmplitudeLadder {
    let l = transform_second(ladder, timing, Direction::FromTilde);
    transform_first(&l, timing, Direction::FromTilde)
}

/// Resonant constant-field solution starting from `g_0^0 = 1`:
/// `ẽ_{2m+1} = i(−1)^{m+1} J_{2m+1}(Ωt/2)`, `g̃_{2m} = (−1)^m J_{2m}(Ωt/2)`.
pub fn bessel_solution(omega: f64, duration: f64, cutoff: usize) -> AmplitudeLadder {
    let x = 0.5 * omega * duration;
    let j = bessel_j_table(cutoff, x);
    let mut l = AmplitudeLadder::zeros(cutoff, 0, 0);
    let c = cutoff as i32;
    for n in -c..=c {
        let m_abs = n.unsigned_abs() as usize;
        // J_n for negative n
        let jn = if n < 0 && m_abs % 2 == 1 {
            -j[m_abs]
        } else {
            j[m_abs]
        };
        if n.rem_euclid(2) == 1 {
            let m = (n - 1) / 2;
            let s = if (m + 1).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            l.set(0, n, Complex64::new(0.0, s * jn), ZERO);
        } else {
            let m = n / 2;
            let s = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            l.set(0, n, ZERO, Complex64::new(s * jn, 0.0));
        }
    }
    l
}

/// sin²(Ωτ/2).
pub fn rabi_probability(omega_tau: f64) -> f64 {
    (0.5 * omega_tau).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveProbabilities {
    pub excited: f64,
    pub ground: f64,
    /// `P_e + P_g − 1`
    pub epsilon: f64,
}

/// Coherent sums `|Σ ẽ|²`, `|Σ g̃|²` over a doubly transformed ladder.
pub fn plane_wave_probabilities(ladder: &AmplitudeLadder) -> PlaneWaveProbabilities {
    let mut se = [crate::sum::Neumaier::new(), crate::sum::Neumaier::new()];
    let mut sg = [crate::sum::Neumaier::new(), crate::sum::Neumaier::new()];
    for (_, _, e, g) in ladder.entries() {
        se[0].add(e.re);
        se[1].add(e.im);
        sg[0].add(g.re);
        sg[1].add(g.im);
    }
    let pe = se[0].value().powi(2) + se[1].value().powi(2);
    let pg = sg[0].value().powi(2) + sg[1].value().powi(2);
    PlaneWaveProbabilities {
        excited: pe,
        ground: pg,
        epsilon: pe + pg - 1.0,
    }
}

/// Smallest Ω₀ unit helper: mean Rabi frequency `Nπ/(2τ)`.
pub fn mean_rabi(power: u32, tau: f64) -> f64 {
    power as f64 * PI / (2.0 * tau)
}

/// ħ-free check value used by tests: `Mv_r²/ħ` computed from the species.
pub fn recoil_rate_from_species(species: &AtomSpecies, k: f64) -> f64 {
    let vr = species.recoil_velocity(k);
    species.mass * vr * vr / HBAR
}
