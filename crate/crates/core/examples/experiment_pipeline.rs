//! Runs the whole desk-profile experiment pipeline for IPv4 and prints the
//! report tables it writes.
//!
//! cargo run --release --example experiment_pipeline

use zero_boundary::datagen::Family;
use zero_boundary::harness::{cmd_report, run_all, ExperimentConfig, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("zbseq-example-run");
    let config = ExperimentConfig {
        seed: 11,
        out: out.clone(),
        ..ExperimentConfig::preset(Profile::Desk, Family::Ipv4)
    };
    run_all(&config)?;
    for path in cmd_report(&config)? {
        println!("== {}", path.display());
        print!("{}", std::fs::read_to_string(&path)?);
    }
    println!("artifacts under {}", out.display());
    Ok(())
}
