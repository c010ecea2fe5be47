//! The probability-threshold baseline: flag a sequence when the network
//! gives any of its symbols a probability below the cutoff.
//!
//! cargo run --release --example lstm_threshold

use zero_boundary::baselines::{LstmThresholdDetector, DEFAULT_CUTOFF};
use zero_boundary::datagen::{gen_corpus, Family, Kind};
use zero_boundary::numeric::RngStream;
use zero_boundary::seqnn::{NetConfig, SequenceNet, TrainOptions};

fn main() -> zero_boundary::Result<()> {
    let train = gen_corpus(Family::Json, Kind::Normal, 1800, 1)?.sequences();
    let mut rng = RngStream::new(2);
    let mut net = SequenceNet::new(NetConfig::desk_baseline(), &mut rng)?;
    let opts = TrainOptions {
        epochs: 1,
        batch_size: 2,
        learning_rate: 0.002,
        clip_norm: Some(5.0),
    };
    net.train(&train, &opts, &mut rng)?;

    let mut eval = gen_corpus(Family::Json, Kind::Normal, 300, 3)?;
    for (i, &kind) in Family::Json.anomaly_kinds().iter().enumerate() {
        eval.entries
            .extend(gen_corpus(Family::Json, kind, 300, 4 + i as u64)?.entries);
    }
    for cutoff in [1e-2, 1e-3, DEFAULT_CUTOFF, 1e-5] {
        let detector = LstmThresholdDetector::new(net.clone(), cutoff)?;
        let counts = detector.evaluate(&eval)?;
        let line: Vec<String> = counts
            .classes
            .iter()
            .map(|(label, c)| format!("{} {}", label.kind(), c.reported(*label)))
            .collect();
        println!("cutoff {cutoff:.2e}: {}", line.join("  "));
    }
    Ok(())
}
