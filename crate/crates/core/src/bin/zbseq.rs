use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zero_boundary::harness::{self, ExperimentConfig, Settings};
use zero_boundary::Result;

#[derive(Parser)]
#[command(
    name = "zbseq",
    version,
    about = "Zero-boundary sequence anomaly detection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write training, test and anomaly corpora with manifests.
    Generate(Common),
    /// Train the zero-boundary and baseline networks, one checkpoint per epoch.
    Train(Common),
    /// Fit and calibrate the per-symbol SVMs for every zero-boundary checkpoint.
    Calibrate(Common),
    /// Score all detectors on the test and anomaly corpora.
    Evaluate(Common),
    /// Write detection and stability tables from evaluated counts.
    Report(Common),
    /// generate, train, calibrate, evaluate and report in one go.
    RunAll(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["paper", "desk"])]
    profile: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// ipv4, json or both.
    #[arg(long)]
    family: Option<String>,
}

impl Common {
    fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        if let Some(p) = &self.profile {
            s.set("profile", p.as_str())?;
        }
        if let Some(seed) = self.seed {
            s.set("seed", seed.to_string())?;
        }
        if let Some(out) = &self.out {
            s.set("out", out.to_string_lossy())?;
        }
        if let Some(f) = &self.family {
            s.set("family", f.as_str())?;
        }
        s.families()?.into_iter().map(|f| s.resolve(f)).collect()
    }
}

fn run(cli: Cli) -> Result<()> {
    let (common, step): (&Common, fn(&ExperimentConfig) -> Result<()>) = match &cli.command {
        Command::Generate(c) => (c, |x| harness::cmd_generate(x).map(drop)),
        Command::Train(c) => (c, |x| {
            let r = harness::cmd_train(x)?;
            for (e, (a, b)) in r
                .zero_boundary_losses
                .iter()
                .zip(&r.baseline_losses)
                .enumerate()
            {
                println!(
                    "{} epoch {}: zero-boundary loss {a:.4}, lstm loss {b:.4}",
                    x.family,
                    e + 1
                );
            }
            Ok(())
        }),
        Command::Calibrate(c) => (c, |x| {
            for p in harness::cmd_calibrate(x)? {
                println!("{}", p.display());
            }
            Ok(())
        }),
        Command::Evaluate(c) => (c, |x| {
            harness::cmd_evaluate(x)?;
            println!("{}", x.counts_path().display());
            Ok(())
        }),
        Command::Report(c) => (c, report),
        Command::RunAll(c) => (c, |x| {
            harness::run_all(x)?;
            report(x)
        }),
    };
    for config in common.configs()? {
        step(&config)?;
    }
    Ok(())
}

fn report(x: &ExperimentConfig) -> Result<()> {
    for p in harness::cmd_report(x)? {
        println!("{}", p.display());
        if let Ok(text) = std::fs::read_to_string(&p) {
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
