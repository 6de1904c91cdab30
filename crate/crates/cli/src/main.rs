use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thzmc::channel::AbsorptionTable;
use thzmc_cli::checks::{self, Settings};
use thzmc_cli::error::{CliError, Result};
use thzmc_cli::output::write_csv;
use thzmc_cli::plots::emit_plots;
use thzmc_cli::{ExperimentConfig, Figure, Runner};

#[derive(Parser)]
#[command(
    name = "thzmc",
    version,
    about = "Multi-connectivity sweeps and cross-checks for indoor THz links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Usable bandwidth and path loss versus distance.
    Fig3(Common),
    /// Connection probability versus AP density.
    Fig4(Common),
    /// Ergodic capacity of closest-LOS multi-connectivity in W1.
    Fig5(Common),
    /// Capacity gains in W1.
    Fig6(Common),
    /// Capacity gains in W2.
    Fig7(Common),
    /// Runs the analytic-versus-simulation cross-checks; exits nonzero on
    /// any failed check.
    Validate(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Absorption table, `frequency_hz<TAB>k_abs_per_m` per line.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Snapshot drops per sweep point.
    #[arg(long)]
    trials: Option<usize>,
    /// Monte Carlo samples for analytic values above two APs.
    #[arg(long)]
    samples: Option<usize>,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(t) = self.trials {
            cfg.sampling.trials = t;
        }
        if let Some(n) = self.samples {
            cfg.sampling.samples = n;
        }
        Ok(cfg)
    }

    fn table(&self) -> Result<AbsorptionTable> {
        match &self.spectrum {
            Some(path) => AbsorptionTable::read(path).map_err(|source| CliError::Spectrum {
                path: path.clone(),
                source,
            }),
            None => {
                eprintln!("note: no --spectrum given, using the bundled synthetic absorption table");
                Ok(AbsorptionTable::bundled())
            }
        }
    }
}

fn run_figure(fig: Figure, args: &Common) -> Result<ExitCode> {
    let runner = Runner::new(args.config()?, args.table()?)?;
    let rows = runner.run(fig)?;
    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    let csv = args.out.join(format!("{}.csv", fig.name()));
    write_csv(&csv, &rows)?;
    let scripts = emit_plots(std::slice::from_ref(&csv))?;
    println!("{} rows -> {}", rows.len(), csv.display());
    for s in scripts {
        println!("plot script -> {}", s.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(args: &Common) -> Result<ExitCode> {
    let defaults = Settings::default();
    let settings = Settings {
        seed: args.seed.unwrap_or(defaults.seed),
        snapshot_trials: args.trials.unwrap_or(defaults.snapshot_trials),
        samples: args.samples.unwrap_or(defaults.samples),
        table: args.table()?,
        ..defaults
    };
    let results = checks::run_all(&settings, |c| print!("{}", c.report()))?;
    println!();
    for c in &results {
        println!("{}", c.verdict_line());
    }
    Ok(if results.iter().all(|c| c.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, fig) = match &cli.command {
        Command::Fig3(a) => (a, Some(Figure::Fig3)),
        Command::Fig4(a) => (a, Some(Figure::Fig4)),
        Command::Fig5(a) => (a, Some(Figure::Fig5)),
        Command::Fig6(a) => (a, Some(Figure::Fig6)),
        Command::Fig7(a) => (a, Some(Figure::Fig7)),
        Command::Validate(a) => (a, None),
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let outcome = match fig {
        Some(fig) => run_figure(fig, args),
        None => validate(args),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
