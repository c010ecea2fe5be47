//! Trains the desk-sized next-symbol network on IPv4 addresses and prints
//! its most likely continuations after a few prefixes.
//!
//! cargo run --release --example train_sequence_net

use zero_boundary::datagen::{gen_corpus, Family, Kind};
use zero_boundary::numeric::{softmax, RngStream};
use zero_boundary::seqnn::{frame, NetConfig, SequenceNet, SymbolAlphabet, TrainOptions};

fn main() -> zero_boundary::Result<()> {
    let corpus = gen_corpus(Family::Ipv4, Kind::Normal, 1800, 1)?.sequences();
    let mut rng = RngStream::new(2);
    let mut net = SequenceNet::new(NetConfig::desk(), &mut rng)?;
    let opts = TrainOptions {
        epochs: 2,
        batch_size: 2,
        learning_rate: 0.002,
        clip_norm: Some(5.0),
    };
    net.train_with_callback(&corpus, &opts, &mut rng, |epoch, _, loss| {
        println!("epoch {epoch}: mean loss {loss:.4}");
        Ok(())
    })?;

    for prefix in ["1", "19", "192.168", "10.0.0.25"] {
        let mut symbols = frame(prefix.as_bytes());
        symbols.pop();
        // feed a dummy final symbol so the last row predicts after the whole prefix
        symbols.push(SymbolAlphabet::DELIMITER);
        let encoded = net.forward(&symbols)?;
        let probs = softmax(encoded.logits.row(encoded.logits.rows() - 1));
        let mut ranked: Vec<(usize, f64)> = probs.into_iter().enumerate().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        let top: Vec<String> = ranked[..4]
            .iter()
            .map(|(s, p)| format!("{} {p:.2}", SymbolAlphabet::describe(*s)))
            .collect();
        println!("after {prefix:<10} {}", top.join("  "));
    }
    Ok(())
}
