//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion (details indented beneath it).
//!
//! Criteria 6–8 compare against numbers read off published figures and are
//! known not to be met by this model (see the README); they are reported as
//! FAIL but do not fail the process unless `ACCEPTANCE_STRICT=1` is set.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use ramsey_recoil::config::{preset, RunConfig};
use ramsey_recoil::constants::{CAVITY_K, HBAR};
use ramsey_recoil::detection::{fringe_point, run_scenario, Diagnostics, ScenarioResult, Setup};
use ramsey_recoil::dynamics::{
    bessel_solution, evolve_pulse, plane_wave_probabilities, rabi_probability, transform_first,
    transform_second, AmplitudeLadder, Direction, EvolveOptions, FountainTiming, Interaction,
    PulseIndex, PulseProfile, PulseSpec,
};
use ramsey_recoil::ensemble::{delta_waist, position_marginal, position_weight, EnsembleSpec};
use ramsey_recoil::ode::OdeOptions;
use ramsey_recoil::quadrature::{integrate, QuadOptions};
use ramsey_recoil::wavepacket::{eval_momentum, eval_position, AtomSpecies, PacketParams};
use ramsey_recoil::weakfield::{
    cancellation_factor, ensemble_terms, predicted_shift, recoil_constants, single_packet_terms,
    WeakFieldInputs,
};

/// Criteria this model does not meet at their stated tolerance: 5 by the
/// higher-order residual of the first-order theory, 6–8 against
/// figure-derived numbers. See the README.
const KNOWN_FAILURES: &[u32] = &[5, 6, 7, 8];

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
    seconds: f64,
}

struct Check {
    pass: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "MISS" }));
    }

    fn info(&mut self, line: String) {
        self.details.push(format!("info {line}"));
    }

    fn fail(&mut self, line: String) {
        self.expect(false, line);
    }
}

fn scenario(cfg: &RunConfig) -> ScenarioResult {
    run_scenario(&cfg.setup().expect("valid config")).expect("scenario runs")
}

fn ensemble_cfg(name: &str, power: u32, w_mm: f64) -> RunConfig {
    let mut c = preset(name).unwrap();
    c.pulse.power = power;
    c.ensemble.w_mm = w_mm;
    c
}

fn c1_table1() -> Check {
    let mut ch = Check::new();
    let want = [1.2e-16, -3.6e-16, 5.9e-16, -8.3e-16];
    for (i, n) in [1u32, 3, 5, 7].into_iter().enumerate() {
        let mut c = preset("table1").unwrap();
        c.pulse.power = n;
        let s = scenario(&c).shift;
        ch.expect(
            (s - want[i]).abs() <= 0.05e-16,
            format!("N={n}: shift {s:+.4e} vs {:+.1e} ± 0.05e-16", want[i]),
        );
    }
    ch
}

fn c2_rabi_bessel() -> Check {
    let mut ch = Check::new();
    let opts = EvolveOptions {
        ode: OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            ..OdeOptions::default()
        },
        boundary_tol: 1e-6,
        norm_tol: 1e-9,
    };
    let tau = 1e-2;
    let cases = [
        ("π/8", PI / 8.0),
        ("π/4", PI / 4.0),
        ("π/2", PI / 2.0),
        ("π", PI),
        ("2π", 2.0 * PI),
        ("7π/2", 3.5 * PI),
    ];
    for (label, ot) in cases {
        let pulse = PulseSpec::new(PulseProfile::Constant, ot / tau, tau, 0.0, CAVITY_K).unwrap();
        let run = |cutoff: usize| {
            evolve_pulse(
                &AmplitudeLadder::ground(cutoff),
                PulseIndex::First,
                &Interaction::new(0.0, 0.0, 0.0),
                &pulse,
                &EvolveOptions {
                    boundary_tol: f64::INFINITY,
                    ..opts
                },
            )
            .unwrap()
            .0
        };
        // converged truncation: J_{N+1}(Ωτ/2) far below the tolerance
        let cutoff = if ot <= PI / 2.0 + 1e-12 { 9 } else { 25 };
        let l = run(cutoff);
        let pe = plane_wave_probabilities(&l).excited;
        ch.expect(
            (pe - rabi_probability(ot)).abs() <= 1e-8,
            format!(
                "Ωτ={label}: P_e {pe:.12} vs sin²(Ωτ/2) {:.12}",
                rabi_probability(ot)
            ),
        );
        let b = bessel_solution(pulse.omega0, tau, cutoff);
        let amp_err = |l: &AmplitudeLadder| {
            (-9..=9)
                .map(|n| {
                    let (e, g) = l.get(0, n);
                    let (eb, gb) = b.get(0, n);
                    (e - eb).norm().max((g - gb).norm())
                })
                .fold(0.0f64, f64::max)
        };
        let err = amp_err(&l);
        ch.expect(
            err <= 1e-8,
            format!("Ωτ={label}: max |c_n − Bessel|, |n| ≤ 9 = {err:.2e} (ladder cutoff {cutoff})"),
        );
        ch.info(format!(
            "Ωτ={label}: same comparison on a ladder truncated at |n| = 9: {:.2e}",
            amp_err(&run(9))
        ));
    }
    ch
}

fn c3_unitarity() -> Check {
    let mut ch = Check::new();
    let cfg = preset("standard-a").unwrap();
    let setup = cfg.setup().unwrap();
    let r = run_scenario(&setup).unwrap();
    let mut diag = r.diagnostics;
    let t = setup.timing.t_sep;
    for d in [2.0 * PI / t, -2.0 * PI / t] {
        fringe_point(&setup, d, &mut diag).unwrap();
    }
    ch.expect(
        diag.epsilon.abs() <= 1e-7,
        format!(
            "max |ε| over {} detunings: {:.2e} ≤ 1e-7",
            diag.fringe_evaluations,
            diag.epsilon.abs()
        ),
    );
    ch.expect(
        diag.max_norm_drift <= 1e-9,
        format!("incoherent norm drift {:.2e} ≤ 1e-9", diag.max_norm_drift),
    );
    ch.info(format!(
        "max boundary population {:.2e}",
        diag.max_boundary_population
    ));
    ch
}

fn c4_cancellation() -> Check {
    let mut ch = Check::new();
    let s = AtomSpecies::caesium();
    let tm = preset("standard-a").unwrap().setup().unwrap().timing;
    for (w, want) in [(1e-3, 0.81), (5e-3, 0.34)] {
        let spec = EnsembleSpec::with_delta_waist(&s, 0.8e-6, w, 5e-3).unwrap();
        let c = cancellation_factor(&s, &spec, &tm);
        ch.expect(
            (c - want).abs() <= 0.01,
            format!("w={} mm: {c:.4} vs {want} ± 0.01", w * 1e3),
        );
    }
    ch
}

/// Largest deviation of the numeric single-packet fringe from the
/// first-order superposition, as a fraction of the fringe amplitude.
fn weak_fringe_deviation(setup: &Setup, points: usize) -> f64 {
    let inputs = WeakFieldInputs::from_setup(setup).unwrap();
    let a0 = inputs.first_order_scale();
    let t = setup.timing.t_sep;
    // The numeric fringe is the two-pulse signal minus what each pulse
    // produces on its own.
    let mut only_first = *setup;
    only_first.second.omega0 = 0.0;
    let mut only_second = *setup;
    only_second.first.omega0 = 0.0;
    let mut diag = Diagnostics::default();
    let mut p_e = |s: &Setup, d: f64| fringe_point(s, d, &mut diag).unwrap().p_e_raw;
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for i in 0..points {
        let d = -2.0 * PI / t + 4.0 * PI / t * i as f64 / (points - 1) as f64;
        let f_num = p_e(setup, d) - p_e(&only_first, d) - p_e(&only_second, d);
        let terms = single_packet_terms(&inputs, 0.0, 0.0, d);
        let f_an = 2.0 * a0 * a0 * (terms.co + terms.counter);
        worst = worst.max((f_num - f_an).abs());
        peak = peak.max(f_an.abs());
    }
    worst / peak
}

fn c5_weak_field() -> Check {
    let mut ch = Check::new();
    let setup = preset("weakfield-compare").unwrap().setup().unwrap();
    let inputs = WeakFieldInputs::from_setup(&setup).unwrap();
    let points = 81;
    let dev = weak_fringe_deviation(&setup, points);
    ch.expect(
        dev <= 0.02,
        format!(
            "fringe over Δ ∈ [−2π/T, 2π/T] ({points} points): max deviation {:.3}% of the fringe amplitude",
            100.0 * dev
        ),
    );
    // The residual is higher order in the pulse area: halving it shows the scaling.
    let mut weaker = preset("weakfield-compare").unwrap();
    weaker.pulse.omega0_tau_rad = Some(PI / 40.0);
    let dev_half = weak_fringe_deviation(&weaker.setup().unwrap(), points);
    ch.info(format!(
        "same fringe at Ω₀τ = π/40: max deviation {:.3}% of the fringe amplitude",
        100.0 * dev_half
    ));
    let numeric = run_scenario(&setup).unwrap().shift;
    let analytic = predicted_shift(&inputs).unwrap();
    let ratio = numeric / analytic;
    ch.expect(
        (ratio - 1.0).abs() <= 0.05,
        format!("shift numeric {numeric:.4e} vs analytic {analytic:.4e}: ratio {ratio:.4}"),
    );
    ch
}

fn c6_strong_field() -> Check {
    let mut ch = Check::new();
    for (w, tb, want, tol) in [
        (1.0, 0.15, 2.4e-17, 0.25 * 2.4e-17),
        (5.0, 0.15, 4.8e-17, 0.25 * 4.8e-17),
        (1.0, 0.0, 0.3e-17, 0.3e-17f64.max(0.25 * 0.3e-17)),
        (5.0, 0.0, 3.8e-17, 0.3e-17f64.max(0.25 * 3.8e-17)),
    ] {
        let mut c = ensemble_cfg("standard-a", 1, w);
        c.timing.t_b_s = tb;
        let s = scenario(&c).shift;
        ch.expect(
            (s - want).abs() <= tol,
            format!("w={w} mm, T_b={tb} s: {s:.3e} vs {want:.1e} ± {tol:.2e}"),
        );
    }
    ch
}

fn c7_detection_region() -> Check {
    let mut ch = Check::new();
    let low = preset("fig3b").unwrap().timing;
    for (w, limit) in [(1.0, 0.2e-17), (5.0, 1e-17)] {
        let mut shifts = Vec::new();
        for hw in [5.0, 10.0] {
            let mut a = ensemble_cfg("standard-a", 1, w);
            a.detection.half_width_mm = hw;
            let mut b = a.clone();
            b.timing = low.clone();
            shifts.push((hw, scenario(&a).shift, scenario(&b).shift));
        }
        let (_, a5, b5) = shifts[0];
        let (_, a10, b10) = shifts[1];
        ch.info(format!(
            "w={w} mm, half-width 5 mm: standard {a5:.3e}, low {b5:.3e}, |Δ| {:.3e}",
            (a5 - b5).abs()
        ));
        ch.expect(
            (a10 - b10).abs() <= limit,
            format!(
                "w={w} mm, half-width 10 mm: standard {a10:.3e}, low {b10:.3e}, |Δ| {:.3e} ≤ {limit:.1e}",
                (a10 - b10).abs()
            ),
        );
    }
    ch
}

fn c8_trends() -> Check {
    let mut ch = Check::new();
    let widths = [1.0, 2.0, 3.0, 4.0, 5.0];
    let powers = [1u32, 3, 5, 7];
    let mut plane = Vec::new();
    for &n in &powers {
        let mut c = preset("table1").unwrap();
        c.pulse.power = n;
        plane.push(scenario(&c).shift);
    }
    let mut contrast_a = vec![vec![0.0; widths.len()]; powers.len()];
    for (curve, name) in [("a", "fig3a"), ("b", "fig3b"), ("c", "fig3c")] {
        for (pi, &n) in powers.iter().enumerate() {
            let rs: Vec<ScenarioResult> = widths
                .iter()
                .map(|&w| scenario(&ensemble_cfg(name, n, w)))
                .collect();
            let mags: Vec<f64> = rs.iter().map(|r| r.shift.abs()).collect();
            let increasing = mags.windows(2).all(|p| p[1] > p[0]);
            let list: Vec<String> = rs.iter().map(|r| format!("{:+.3e}", r.shift)).collect();
            ch.expect(
                increasing,
                format!(
                    "curve {curve}, N={n}: |shift| increasing in w: [{}]",
                    list.join(", ")
                ),
            );
            let below = mags.iter().all(|m| *m < plane[pi].abs());
            ch.expect(
                below,
                format!(
                    "curve {curve}, N={n}: |ensemble| < |plane wave| = {:.3e}",
                    plane[pi].abs()
                ),
            );
            if curve == "a" {
                for (wi, r) in rs.iter().enumerate() {
                    contrast_a[pi][wi] = r.contrast;
                }
            }
        }
    }
    for (pi, &n) in powers.iter().enumerate() {
        let row = &contrast_a[pi];
        let ok = row.windows(2).all(|p| p[1] < p[0]);
        let list: Vec<String> = row.iter().map(|c| format!("{c:.4}")).collect();
        ch.expect(
            ok,
            format!("N={n}: contrast decreasing in w: [{}]", list.join(", ")),
        );
    }
    for (wi, &w) in widths.iter().enumerate() {
        let col: Vec<f64> = contrast_a.iter().map(|r| r[wi]).collect();
        let ok = col.windows(2).all(|p| p[1] < p[0]);
        let list: Vec<String> = col.iter().map(|c| format!("{c:.4}")).collect();
        ch.expect(
            ok,
            format!("w={w} mm: contrast decreasing in N: [{}]", list.join(", ")),
        );
    }
    ch
}

fn c9_constants() -> Check {
    let mut ch = Check::new();
    let s = AtomSpecies::caesium();
    let r = recoil_constants(&s, CAVITY_K).unwrap();
    ch.expect(
        (r.free_space_fraction - 1.5e-16).abs() <= 0.05e-16,
        format!(
            "free-space recoil fraction {:.4e} vs 1.5e-16 ± 0.05e-16",
            r.free_space_fraction
        ),
    );
    let rel = r.delta / s.omega_eg;
    ch.expect(
        (rel - 7.5e-17).abs() <= 0.2e-17,
        format!("in-cavity δ/ω {rel:.4e} vs 7.5e-17 ± 0.2e-17"),
    );
    ch
}

fn property(
    ch: &mut Check,
    name: &str,
    cases: u32,
    run: impl FnOnce(&mut TestRunner) -> Result<(), String>,
) {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    match run(&mut runner) {
        Ok(()) => ch.expect(true, format!("{name} ({cases} cases)")),
        Err(e) => ch.fail(format!("{name}: {e}")),
    }
}

fn quad() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_intervals: 2000,
    }
}

fn c10_properties() -> Check {
    let mut ch = Check::new();
    // natural units: ħ/M = 1
    let unit = AtomSpecies::new(HBAR, 1.0).unwrap();

    property(&mut ch, "wave-packet position normalisation", 32, |r| {
        r.run(
            &(0.2f64..3.0, -2.0f64..2.0, -3.0f64..3.0, 0.0f64..5.0),
            |(w, z0, v0, t)| {
                let pk = PacketParams::new(w, z0, v0).unwrap();
                let s = w * (1.0 + (t / (2.0 * w * w)).powi(2)).sqrt();
                let c = z0 + v0 * t;
                let n = integrate(
                    |z| [eval_position(&unit, &pk, t, z).norm_sqr()],
                    c - 14.0 * s,
                    c + 14.0 * s,
                    &quad(),
                )
                .unwrap()
                .value[0];
                prop_assert!((n - 1.0).abs() < 1e-10, "norm {}", n);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
    });

    property(&mut ch, "wave-packet Fourier duality", 32, |r| {
        r.run(
            &(
                0.5f64..2.0,
                -1.0f64..1.0,
                -1.0f64..1.0,
                0.0f64..2.0,
                -2.0f64..2.0,
            ),
            |(w, z0, v0, t, z)| {
                let pk = PacketParams::new(w, z0, v0).unwrap();
                let sp = HBAR / (2.0 * w);
                let pc = unit.mass * v0;
                let v = integrate(
                    |p| {
                        let f = eval_momentum(&unit, &pk, t, p)
                            * Complex64::from_polar(1.0, p * z / HBAR);
                        [f.re, f.im]
                    },
                    pc - 14.0 * sp,
                    pc + 14.0 * sp,
                    &quad(),
                )
                .unwrap()
                .value;
                let ft = Complex64::new(v[0], v[1]) / (2.0 * PI * HBAR).sqrt();
                let direct = eval_position(&unit, &pk, t, z);
                prop_assert!((ft - direct).norm() < 1e-9, "{} vs {}", ft, direct);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
    });

    let cs = AtomSpecies::caesium();
    property(
        &mut ch,
        "ensemble position marginal = centre weight ⊛ packet",
        24,
        |r| {
            r.run(&(0.05f64..0.95, -3.0f64..3.0), |(frac, z)| {
                let w = 1e-3;
                let dz = frac * w;
                let e = EnsembleSpec::new(&cs, 0.8e-6, w, dz, f64::INFINITY).unwrap();
                let sv = e.position_variance().sqrt();
                let zz = z * w;
                let gauss =
                    |x: f64, var: f64| (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
                let mut pts = vec![
                    -12.0 * sv,
                    0.0,
                    12.0 * sv,
                    zz - 12.0 * dz,
                    zz,
                    zz + 12.0 * dz,
                ];
                pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let conv: f64 = pts
                    .windows(2)
                    .filter(|p| p[1] > p[0])
                    .map(|p| {
                        integrate(
                            |zi| [position_weight(&e, zi).unwrap() * gauss(zz - zi, dz * dz)],
                            p[0],
                            p[1],
                            &quad(),
                        )
                        .unwrap()
                        .value[0]
                    })
                    .sum();
                let m = position_marginal(&e, zz);
                prop_assert!((conv / m - 1.0).abs() < 1e-8, "{} vs {}", conv, m);
                Ok(())
            })
            .map_err(|e| e.to_string())
        },
    );

    let tight = EvolveOptions {
        ode: OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            ..OdeOptions::default()
        },
        boundary_tol: 1e-6,
        norm_tol: 1e-9,
    };
    property(&mut ch, "second-pulse sector conservation", 16, |r| {
        r.run(
            &(0.1f64..4.0, -20.0f64..20.0, -5e-3f64..5e-3),
            |(ot, det, z)| {
                let mut l = AmplitudeLadder::zeros(12, 0, 0);
                l.set(0, 1, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.0));
                l.set(0, -2, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.8));
                let p =
                    PulseSpec::new(PulseProfile::Constant, ot / 1e-2, 1e-2, 0.0, CAVITY_K).unwrap();
                let (out, _) = evolve_pulse(
                    &l,
                    PulseIndex::Second,
                    &Interaction::new(det, z, 0.0),
                    &p,
                    &tight,
                )
                .unwrap();
                prop_assert!((out.norm() - 1.0).abs() <= 1e-9);
                for (a, n, e, g) in out.entries() {
                    if e.norm() + g.norm() > 0.0 {
                        prop_assert!(a + n == 1 || a + n == -2, "entry ({}, {})", a, n);
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
    });

    property(&mut ch, "coefficient transform round trips", 32, |r| {
        r.run(
            &(
                proptest::collection::vec(-1.0f64..1.0, 60),
                0.0f64..0.3,
                0.1f64..1.0,
                50.0f64..300.0,
            ),
            |(vals, tb, tsep, k)| {
                let t = FountainTiming::new(&cs, tb, tsep, tb + tsep + 0.1, k, 137.0, 2.5).unwrap();
                let mut l = AmplitudeLadder::zeros(3, -2, 2);
                let mut it = vals.chunks(2);
                for a in -2..=2 {
                    for n in -3..=3 {
                        if let (Some(x), Some(y)) = (it.next(), it.next()) {
                            l.set(a, n, Complex64::new(x[0], x[1]), Complex64::new(y[0], y[1]));
                        }
                    }
                }
                for f in [transform_first, transform_second] {
                    let back = f(&f(&l, &t, Direction::ToTilde), &t, Direction::FromTilde);
                    for ((_, _, e, g), (_, _, e0, g0)) in back.entries().zip(l.entries()) {
                        prop_assert!((e - e0).norm() < 1e-15 && (g - g0).norm() < 1e-15);
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
    });

    property(
        &mut ch,
        "weak-field results independent of the packet waist",
        64,
        |r| {
            r.run(
                &(
                    0.2e-6f64..5e-6,
                    0.5e-3f64..5e-3,
                    0.0f64..1.0,
                    -10.0f64..10.0,
                ),
                |(theta, w, frac, d)| {
                    let tm = preset("standard-a").unwrap().setup().unwrap().timing;
                    let lo = delta_waist(&cs, theta);
                    let mk = |dz: f64| {
                        let spec = EnsembleSpec::new(&cs, theta, w, dz, f64::INFINITY).unwrap();
                        WeakFieldInputs::new(cs, spec, tm, tm.pulse_duration(), 1.0).unwrap()
                    };
                    let a = mk(lo);
                    let b = mk(lo + frac * (0.9 * w - lo));
                    let (ta, tb) = (ensemble_terms(&a, d), ensemble_terms(&b, d));
                    prop_assert!((ta.co - tb.co).abs() <= 1e-12 * ta.co.abs().max(1e-300));
                    prop_assert!(
                        (ta.counter - tb.counter).abs() <= 1e-12 * ta.counter.abs().max(1e-300)
                    );
                    let (pa, pb) = (predicted_shift(&a).unwrap(), predicted_shift(&b).unwrap());
                    prop_assert!((pa - pb).abs() <= 1e-12 * pa.abs());
                    Ok(())
                },
            )
            .map_err(|e| e.to_string())
        },
    );
    ch
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: Vec<(u32, &'static str, fn() -> Check)> = vec![
        (1, "plane-wave shifts for N = 1, 3, 5, 7", c1_table1),
        (
            2,
            "resonant pulse: Rabi probability and Bessel amplitudes",
            c2_rabi_bessel,
        ),
        (3, "unitarity and normalisation", c3_unitarity),
        (4, "cancellation factor", c4_cancellation),
        (5, "weak-field analytic equivalence", c5_weak_field),
        (6, "strong-field π/2 ensemble shifts", c6_strong_field),
        (
            7,
            "launch-height dependence with doubled detection region",
            c7_detection_region,
        ),
        (8, "trends in w, power and plane-wave comparison", c8_trends),
        (9, "recoil constants", c9_constants),
        (10, "property suites", c10_properties),
    ];
    let mut outcomes = Vec::new();
    for (id, title, f) in criteria {
        let start = Instant::now();
        let ch = f();
        let o = Outcome {
            id,
            title,
            pass: ch.pass,
            details: ch.details,
            seconds: start.elapsed().as_secs_f64(),
        };
        println!(
            "{} criterion {:>2}: {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.seconds
        );
        for d in &o.details {
            println!("        {d}");
        }
        outcomes.push(o);
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    let unexpected: Vec<u32> = failed
        .iter()
        .copied()
        .filter(|id| !KNOWN_FAILURES.contains(id))
        .collect();
    let fixed: Vec<u32> = KNOWN_FAILURES
        .iter()
        .copied()
        .filter(|id| !failed.contains(id))
        .collect();
    println!(
        "\nacceptance: {} passed, {} failed {:?} (known: {:?}; unexpected: {:?}; newly passing: {:?})",
        outcomes.len() - failed.len(),
        failed.len(),
        failed,
        KNOWN_FAILURES,
        unexpected,
        fixed
    );
    if !unexpected.is_empty() || (strict && !failed.is_empty()) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
