//! Command-line driver: run a preset grid or a single config file and write
//! the results as CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use ramsey_recoil::config::{load_config, preset};
use ramsey_recoil::report::{emit_report, summary, to_csv};
use ramsey_recoil::scenario::{run_configs, run_preset, Dataset, Overrides, GRID_PRESETS};

#[derive(Debug, Parser)]
#[command(
    name = "simulate",
    version,
    about = "Recoil shift of Ramsey fringes in an atomic fountain"
)]
struct Cli {
    /// Grid preset to run (table1, fig3a, fig3b, fig3c, fig4, tb-zero,
    /// detection-x2, weakfield-compare).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,

    /// Config file describing a single run.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (never changes the results).
    #[arg(long, env = "SIM_THREADS")]
    threads: Option<usize>,

    /// Override the number of cloud samples.
    #[arg(long)]
    samples: Option<usize>,

    /// Override the momentum cutoff.
    #[arg(long)]
    nrec: Option<usize>,

    /// Print the effective configuration(s) as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

enum Failure {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

fn run(cli: &Cli) -> std::result::Result<Dataset, Failure> {
    let overrides = Overrides {
        samples: cli.samples,
        nrec: cli.nrec,
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")
            .map_err(Failure::Config)?;
    }
    let configs = match (&cli.preset, &cli.config) {
        (Some(name), _) => {
            if !GRID_PRESETS.contains(&name.as_str()) {
                return Err(Failure::Config(anyhow::anyhow!(
                    "unknown preset `{name}`; choose one of {}",
                    GRID_PRESETS.join(", ")
                )));
            }
            let mut grid = ramsey_recoil::scenario::preset_grid(name)
                .map_err(|e| Failure::Config(e.into()))?;
            for c in &mut grid {
                overrides.apply(c);
            }
            grid
        }
        (None, Some(path)) => {
            let mut c = load_config(path)
                .with_context(|| format!("loading {}", path.display()))
                .map_err(Failure::Config)?;
            overrides.apply(&mut c);
            c.setup().map_err(|e| Failure::Config(e.into()))?;
            vec![c]
        }
        (None, None) => unreachable!("clap requires --preset or --config"),
    };
    if cli.dump_config {
        for c in &configs {
            println!("{}", c.to_toml().map_err(|e| Failure::Config(e.into()))?);
        }
        return Ok(Dataset {
            name: String::new(),
            rows: vec![],
        });
    }
    let data = match &cli.preset {
        Some(name) => run_preset(name, &overrides).map_err(|e| Failure::Run(e.into()))?,
        None => run_configs(&configs[0].preset, &configs),
    };
    match &cli.out {
        Some(path) => {
            emit_report(&data, path)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(Failure::Run)?;
        }
        None => print!("{}", to_csv(&data).map_err(|e| Failure::Run(e.into()))?),
    }
    eprint!("{}", summary(&data));
    Ok(data)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    // unknown presets are reported before any work starts
    if let Some(p) = &cli.preset {
        if let Err(e) = preset(p) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(d) if d.failures() > 0 => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
