//! The zero-boundary detector end to end on IPv4: train the bottleneck
//! network, fit one SVM per symbol on the context vectors, calibrate the
//! thresholds on the normal corpus and explain a few verdicts.
//!
//! cargo run --release --example zero_boundary_ipv4

use zero_boundary::datagen::{gen_corpus, Family, Kind};
use zero_boundary::numeric::RngStream;
use zero_boundary::ocsvm::KernelParams;
use zero_boundary::seqnn::{NetConfig, SequenceNet, SymbolAlphabet, TrainOptions};
use zero_boundary::zbdetector::{build_context_sets, ArrayOptions, OcsvmArray, ScanMode};

fn main() -> zero_boundary::Result<()> {
    let normal = gen_corpus(Family::Ipv4, Kind::Normal, 2000, 1)?.sequences();
    let train = &normal[..1800];
    let mut rng = RngStream::new(2);
    let mut net = SequenceNet::new(NetConfig::desk(), &mut rng)?;
    let opts = TrainOptions {
        epochs: 2,
        batch_size: 2,
        learning_rate: 0.002,
        clip_norm: Some(5.0),
    };
    net.train(train, &opts, &mut rng)?;

    let sets = build_context_sets(&net, train)?;
    let kernel = KernelParams::for_dimension(net.context_dim())?;
    let array = OcsvmArray::train(&sets, &ArrayOptions::new(0.001, kernel), &RngStream::new(3))?
        .calibrate(&net, &normal)?;
    for (symbol, t) in array.thresholds() {
        println!("threshold {:<8} {t:+.4}", SymbolAlphabet::describe(*symbol));
    }

    let mut eval = gen_corpus(Family::Ipv4, Kind::Normal, 500, 4)?;
    for (i, &kind) in Family::Ipv4.anomaly_kinds().iter().enumerate() {
        eval.entries
            .extend(gen_corpus(Family::Ipv4, kind, 500, 5 + i as u64)?.entries);
    }
    let counts = array.evaluate(&net, &eval)?;
    for (label, c) in &counts.classes {
        println!(
            "{:<9} {}/{}",
            label.kind().title(),
            c.reported(*label),
            c.total
        );
    }

    let probes: Vec<Vec<u8>> = [
        "172.16.254.1",
        "172.16.254.301",
        "172.16..254.1",
        "172.16.254",
        "172.16.254.1.9",
        "172.16.x.1",
    ]
    .iter()
    .map(|s| s.as_bytes().to_vec())
    .collect();
    for (x, v) in probes
        .iter()
        .zip(array.detect_batch(&net, &probes, ScanMode::FirstOffense)?)
    {
        let at = match (v.first_offending_position, v.offending_symbol) {
            (Some(p), Some(s)) => format!(" at {p} ({})", SymbolAlphabet::describe(s)),
            _ => String::new(),
        };
        let verdict = if v.is_anomaly { "anomaly" } else { "normal" };
        println!("{:<15} {verdict}{at}", String::from_utf8_lossy(x));
    }
    Ok(())
}
