use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use combwalk::harness::{self, ExperimentConfig, Format, Outcome, Scale};
use combwalk::Error;

#[derive(Parser)]
#[command(name = "combwalk", version, about = "Random walkers on Z^d and the comb")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (flat TOML); defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed; overrides `master_seed` from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true, env = "COMBWALK_OUT")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = ["csv", "json", "both"])]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate walker ensembles and summarize them at dyadic checkpoints.
    Simulate,
    /// Exact kernel table and first-passage pmf.
    Exact,
    /// Run the configured experiment and apply its verdicts.
    Experiment,
    /// Run every acceptance criterion.
    VerifyAll {
        #[arg(long, value_parser = ["full", "smoke"], default_value = "full")]
        scale: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.display().to_string();
    }
    if let Some(f) = &cli.format {
        cfg.format = match f.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            _ => Format::Both,
        };
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = load(cli)?;
    let threads = cli.threads;
    match &cli.command {
        Command::Simulate => harness::with_threads(threads, || harness::simulate(&cfg, true))?,
        Command::Exact => harness::with_threads(threads, || harness::exact(&cfg, true))?,
        Command::Experiment => harness::with_threads(threads, || harness::run_experiment(&cfg, true))?,
        Command::VerifyAll { scale } => {
            let scale = if scale == "smoke" { Scale::Smoke } else { Scale::Full };
            let dir = PathBuf::from(&cfg.output_dir);
            harness::with_threads(threads, || {
                harness::verify_all(scale, cfg.master_seed, Some((dir.as_path(), cfg.format)))
            })?
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            for r in &outcome.reports {
                for v in &r.verdicts {
                    println!("{} {}: {} ({})", if v.passed { "PASS" } else { "FAIL" }, r.experiment, v.rule, v.detail);
                }
            }
            for p in &outcome.written {
                eprintln!("wrote {}", p.display());
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
