use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msd_core::ranking::{Phase, RankingVariant};
use msd_eval::commands::{self, CliError, Selection, EXIT_CONFIG, EXIT_DATA};

#[derive(Parser)]
#[command(name = "msd-eval", version, about = "Segmentation challenge evaluation and ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Challenge manifest (TOML).
    #[arg(long)]
    manifest: PathBuf,
    /// Root of the output tree; later stages read earlier outputs from here.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand)]
enum Command {
    /// Compute DSC and NSD for every case.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        task: Option<String>,
        #[arg(long)]
        phase: Option<Phase>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Significance ranking per ROI, task and phase.
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phase: Option<Phase>,
        /// Significance level [manifest value, else 0.05]
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated ranking variants to add to the leaderboard.
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<RankingVariant>>,
    },
    /// Bootstrap ranking stability.
    Bootstrap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        task: Option<String>,
        #[arg(long)]
        phase: Option<Phase>,
        /// Significance level [manifest value, else 0.05]
        #[arg(long)]
        alpha: Option<f64>,
        /// Bootstrap samples [manifest value, else 1000]
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Plots and tables from whatever the earlier stages produced.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phase: Option<Phase>,
    },
    /// Check a submission directory for completeness and geometry.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        task: String,
        #[arg(long)]
        submission: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evaluate { common, task, phase, jobs } => {
            let m = commands::load_manifest(&common.manifest)?;
            commands::cmd_evaluate(&m, &Selection { task, phase }, jobs, &common.out_dir).map(drop)
        }
        Command::Rank { common, phase, alpha, variants } => {
            let m = commands::load_manifest(&common.manifest)?;
            commands::cmd_rank(&m, phase, alpha, variants, &common.out_dir).map(drop)
        }
        Command::Bootstrap { common, task, phase, alpha, samples, seed, jobs } => {
            let m = commands::load_manifest(&common.manifest)?;
            commands::cmd_bootstrap(&m, &Selection { task, phase }, alpha, samples, seed, jobs, &common.out_dir).map(drop)
        }
        Command::Report { common, phase } => {
            let m = commands::load_manifest(&common.manifest)?;
            commands::cmd_report(&m, phase, &common.out_dir).map(drop)
        }
        Command::Validate { common, task, submission } => {
            let m = commands::load_manifest(&common.manifest)?;
            let report = commands::cmd_validate(&m, &task, &submission, &common.out_dir)?;
            if report.valid {
                Ok(())
            } else {
                Err(CliError::data(anyhow::anyhow!("submission invalid: {} failing cases", report.failures)))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            debug_assert!(e.code == EXIT_CONFIG || e.code == EXIT_DATA);
            ExitCode::from(e.code)
        }
    }
}
