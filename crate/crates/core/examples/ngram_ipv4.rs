//! The n-gram baseline on IPv4 addresses: a sequence is anomalous when any
//! window of the framed sequence never occurred in training.
//!
//! cargo run --release --example ngram_ipv4

use zero_boundary::baselines::NgramModel;
use zero_boundary::datagen::{gen_corpus, Family, Kind};

fn main() -> zero_boundary::Result<()> {
    let train = gen_corpus(Family::Ipv4, Kind::Normal, 10_000, 1)?.sequences();
    let mut eval = gen_corpus(Family::Ipv4, Kind::Normal, 1000, 2)?;
    for (i, &kind) in Family::Ipv4.anomaly_kinds().iter().enumerate() {
        eval.entries
            .extend(gen_corpus(Family::Ipv4, kind, 1000, 3 + i as u64)?.entries);
    }

    for window in 2..=6 {
        let model = NgramModel::train(&train, window)?;
        let counts = model.evaluate(&eval)?;
        let line: Vec<String> = counts
            .classes
            .iter()
            .map(|(label, c)| format!("{} {:>4}", label.kind(), c.reported(*label)))
            .collect();
        println!("w={window} windows={:>6}  {}", model.len(), line.join("  "));
    }
    Ok(())
}
