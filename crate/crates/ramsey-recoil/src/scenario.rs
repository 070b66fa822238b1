//! Preset grids and their batch execution.

use rayon::prelude::*;
use std::time::Instant;

use crate::config::{preset, ModeName, RunConfig};
use crate::detection::{run_scenario, Diagnostics, Mode};
use crate::error::{Error, Result};
use crate::weakfield::{predicted_shift, WeakFieldInputs};

/// Grid presets accepted by [`preset_grid`].
pub const GRID_PRESETS: &[&str] = &[
    "table1",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig4",
    "tb-zero",
    "detection-x2",
    "weakfield-compare",
];

const POWERS: [u32; 4] = [1, 3, 5, 7];
const WIDTHS_MM: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

/// Numeric-versus-analytic weak-field comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakComparison {
    pub shift_numeric: f64,
    pub shift_analytic: f64,
    pub ratio: f64,
}

/// One grid point: parameters, results and status.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub preset: String,
    pub power: u32,
    pub w_mm: f64,
    pub theta_uk: f64,
    pub t_b_s: f64,
    pub t_s: f64,
    pub half_width_mm: f64,
    pub shift_rel: Option<f64>,
    pub contrast: Option<f64>,
    pub epsilon_47: Option<f64>,
    pub samples: usize,
    pub runtime_s: f64,
    pub comparison: Option<WeakComparison>,
    /// `ok`, or `error: …` for a failed grid point.
    pub status: String,
    pub diagnostics: Option<Diagnostics>,
}

impl Row {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }

    /// Whether the weak-field comparison columns are present.
    pub fn has_comparison(&self) -> bool {
        self.rows.iter().any(|r| r.comparison.is_some())
    }
}

/// Optional overrides applied to every grid point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub nrec: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) {
        if let Some(s) = self.samples {
            c.ensemble.samples = s;
        }
        if let Some(n) = self.nrec {
            c.numerics.nrec = Some(n);
        }
    }
}

fn width_power_grid(base: &RunConfig) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for &n in &POWERS {
        for &w in &WIDTHS_MM {
            let mut c = base.clone();
            c.pulse.power = n;
            c.ensemble.w_mm = w;
            out.push(c);
        }
    }
    out
}

/// Configurations of a grid preset, in output order.
pub fn preset_grid(name: &str) -> Result<Vec<RunConfig>> {
    let base = preset(name)?;
    Ok(match name {
        "table1" => POWERS
            .iter()
            .map(|&n| {
                let mut c = base.clone();
                c.pulse.power = n;
                c
            })
            .collect(),
        "fig3a" | "fig3b" | "fig3c" | "fig4" => width_power_grid(&base),
        "tb-zero" => {
            let mut out = Vec::new();
            for &w in &[1.0, 5.0] {
                for &tb in &[0.15, 0.0] {
                    let mut c = base.clone();
                    c.ensemble.w_mm = w;
                    c.timing.t_b_s = tb;
                    out.push(c);
                }
            }
            out
        }
        "detection-x2" => {
            // both launch heights at the enlarged and the standard size
            let mut out = Vec::new();
            let low = preset("fig3b")?;
            for &w in &[1.0, 5.0] {
                for &hw in &[5.0, base.detection.half_width_mm] {
                    for t in [&base.timing, &low.timing] {
                        let mut c = base.clone();
                        c.ensemble.w_mm = w;
                        c.detection.half_width_mm = hw;
                        c.timing = t.clone();
                        out.push(c);
                    }
                }
            }
            out
        }
        "weakfield-compare" => vec![base],
        _ => return Err(Error::UnknownPreset(name.to_string())),
    })
}

fn execute(cfg: &RunConfig) -> Result<(crate::detection::ScenarioResult, Option<WeakComparison>)> {
    let setup = cfg.setup()?;
    let r = run_scenario(&setup)?;
    let cmp = if cfg.preset == "weakfield-compare" && setup.mode != Mode::WeakField {
        let analytic = predicted_shift(&WeakFieldInputs::from_setup(&setup)?)?;
        Some(WeakComparison {
            shift_numeric: r.shift,
            shift_analytic: analytic,
            ratio: r.shift / analytic,
        })
    } else {
        None
    };
    Ok((r, cmp))
}

/// Run one configuration into a row; failures are recorded, not raised.
pub fn run_config(cfg: &RunConfig) -> Row {
    let start = Instant::now();
    let out = execute(cfg);
    let runtime_s = start.elapsed().as_secs_f64();
    let mut row = Row {
        preset: cfg.preset.clone(),
        power: cfg.pulse.power,
        w_mm: cfg.ensemble.w_mm,
        theta_uk: cfg.ensemble.theta_uk,
        t_b_s: cfg.timing.t_b_s,
        t_s: cfg.timing.t_s,
        half_width_mm: cfg.detection.half_width_mm,
        shift_rel: None,
        contrast: None,
        epsilon_47: None,
        samples: if cfg.mode == ModeName::Ensemble {
            cfg.ensemble.samples
        } else {
            0
        },
        runtime_s,
        comparison: None,
        status: "ok".into(),
        diagnostics: None,
    };
    if cfg.ensemble.pure_state {
        row.w_mm = f64::NAN;
    }
    match out {
        Ok((r, cmp)) => {
            row.shift_rel = Some(r.shift);
            row.contrast = Some(r.contrast);
            row.epsilon_47 = (cfg.mode != ModeName::WeakField).then_some(r.diagnostics.epsilon);
            row.comparison = cmp;
            row.diagnostics = Some(r.diagnostics);
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Run a list of configurations (in parallel, output in input order).
pub fn run_configs(name: &str, configs: &[RunConfig]) -> Dataset {
    Dataset {
        name: name.to_string(),
        rows: configs.par_iter().map(run_config).collect(),
    }
}

/// Run every grid point of a preset.
pub fn run_preset(name: &str, overrides: &Overrides) -> Result<Dataset> {
    let mut grid = preset_grid(name)?;
    for c in &mut grid {
        overrides.apply(c);
    }
    Ok(run_configs(name, &grid))
}
