use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adiabatic_train::datasets::BandProbability;
use adiabatic_train::experiments::{self, ExperimentConfig, Overrides};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aqc", version, about = "Adiabatic training experiments on a simulated register")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (default: out/<config file stem>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replaces the config's primary seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replaces the band labelling probability.
    #[arg(long, global = true, value_enum)]
    band_prob: Option<BandArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Runs one experiment config.
    Run { config: PathBuf },
    /// Checks a config and prints its effective parameters.
    Validate { config: PathBuf },
    /// Lists experiment kinds.
    ListExperiments,
}

#[derive(Clone, Copy, ValueEnum)]
enum BandArg {
    Min,
    Max,
}

impl From<BandArg> for BandProbability {
    fn from(b: BandArg) -> Self {
        match b {
            BandArg::Min => BandProbability::Min,
            BandArg::Max => BandProbability::Max,
        }
    }
}

fn default_out(config: &Path) -> PathBuf {
    let stem = config.file_stem().map(|s| s.to_string_lossy().into_owned());
    PathBuf::from("out").join(stem.unwrap_or_else(|| "run".into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        band_prob: cli.band_prob.map(Into::into),
    };
    match cli.command {
        Command::ListExperiments => {
            for (kind, about) in experiments::list_experiments() {
                println!("{kind:<18} {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let diag = match std::fs::read_to_string(&config) {
                Ok(text) => experiments::validate(&text, &overrides),
                Err(e) => experiments::Diagnostics {
                    errors: vec![format!("{}: {e}", config.display())],
                    ..Default::default()
                },
            };
            println!("{}", serde_json::to_string_pretty(&diag).expect("diagnostics serialize"));
            if diag.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Run { config } => {
            let out = cli.out.clone().unwrap_or_else(|| default_out(&config));
            let result = ExperimentConfig::load(&config).and_then(|mut cfg| {
                for note in cfg.apply(&overrides) {
                    eprintln!("note: {note}");
                }
                experiments::run(&cfg, &out)
            });
            match result {
                Ok(summary) => {
                    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
                    eprintln!("wrote {} files to {}", summary.files.len() + 1, out.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
