use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::seqnn::adam::DEFAULT_LEARNING_RATE;
use crate::seqnn::{frame, SequenceNet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Global gradient-norm clip; `None` disables clipping.
    pub clip_norm: Option<f64>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            epochs: 1,
            batch_size: 32,
            learning_rate: DEFAULT_LEARNING_RATE,
            clip_norm: Some(5.0),
        }
    }
}

impl SequenceNet {
    /// Next-symbol training over `corpus`; returns the mean per-position loss of each epoch.
    pub fn train(
        &mut self,
        corpus: &[Vec<u8>],
        opts: &TrainOptions,
        rng: &mut RngStream,
    ) -> Result<Vec<f64>> {
        self.train_with_callback(corpus, opts, rng, |_, _, _| Ok(()))
    }

    /// Like [`train`](Self::train), calling `on_epoch(epoch, net, mean_loss)`
    /// after every epoch (epochs are numbered from 1).
    pub fn train_with_callback<F>(
        &mut self,
        corpus: &[Vec<u8>],
        opts: &TrainOptions,
        rng: &mut RngStream,
        mut on_epoch: F,
    ) -> Result<Vec<f64>>
    where
        F: FnMut(usize, &SequenceNet, f64) -> Result<()>,
    {
        if corpus.is_empty() {
            return Err(Error::contract("training corpus is empty"));
        }
        if opts.batch_size == 0 {
            return Err(Error::config("batch size must be positive"));
        }
        let framed: Vec<Vec<usize>> = corpus.iter().map(|x| frame(x)).collect();
        let mut order: Vec<usize> = (0..framed.len()).collect();
        let mut losses = Vec::with_capacity(opts.epochs);
        for epoch in 1..=opts.epochs {
            rng.shuffle(&mut order);
            let mut total = 0.0;
            let mut positions = 0usize;
            for chunk in order.chunks(opts.batch_size) {
                let batch: Vec<Vec<usize>> = chunk.iter().map(|&i| framed[i].clone()).collect();
                let count: usize = batch.iter().map(|s| s.len() - 1).sum();
                let (loss, mut grads) = self.loss_and_grads(&batch)?;
                if !loss.is_finite() {
                    return Err(Error::contract(format!(
                        "non-finite training loss in epoch {epoch}"
                    )));
                }
                if let Some(max) = opts.clip_norm {
                    grads.clip_to_norm(max);
                }
                self.adam_step(&grads, opts.learning_rate)?;
                total += loss * count as f64;
                positions += count;
            }
            let mean = total / positions as f64;
            log::info!("epoch {epoch}: mean loss {mean:.4}");
            losses.push(mean);
            on_epoch(epoch, self, mean)?;
        }
        Ok(losses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqnn::NetConfig;

    fn small() -> NetConfig {
        NetConfig {
            embed_dim: 8,
            lstm_layers: 1,
            lstm_hidden: 8,
            mlp_shape: vec![8, 4, 8],
            bottleneck_index: Some(1),
            vocab: 257,
        }
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let mut rng = RngStream::new(1);
        let mut net = SequenceNet::new(small(), &mut rng).unwrap();
        let before = net.clone();
        let opts = TrainOptions {
            epochs: 0,
            ..TrainOptions::default()
        };
        let losses = net.train(&[b"ab".to_vec()], &opts, &mut rng).unwrap();
        assert!(losses.is_empty());
        assert_eq!(net, before);
    }

    #[test]
    fn empty_corpus_rejected() {
        let mut rng = RngStream::new(1);
        let mut net = SequenceNet::new(small(), &mut rng).unwrap();
        assert!(net.train(&[], &TrainOptions::default(), &mut rng).is_err());
    }

    #[test]
    fn memorizes_a_tiny_corpus() {
        let mut rng = RngStream::new(2);
        let mut net = SequenceNet::new(small(), &mut rng).unwrap();
        let corpus = vec![b"ab".to_vec(); 50];
        let opts = TrainOptions {
            epochs: 200,
            batch_size: 32,
            learning_rate: 0.01,
            clip_norm: Some(5.0),
        };
        let losses = net.train(&corpus, &opts, &mut rng).unwrap();
        assert!(*losses.last().unwrap() < 0.1, "{:?}", losses.last());
    }

    #[test]
    fn same_seed_same_parameters() {
        let corpus: Vec<Vec<u8>> = ["1.2.3.4", "10.0.0.1", "255.255.0.7"]
            .iter()
            .map(|s| s.as_bytes().to_vec())
            .collect();
        let opts = TrainOptions {
            epochs: 3,
            batch_size: 2,
            ..TrainOptions::default()
        };
        let run = || {
            let mut rng = RngStream::new(77);
            let mut net = SequenceNet::new(small(), &mut rng).unwrap();
            net.train(&corpus, &opts, &mut rng).unwrap();
            net
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn callback_sees_every_epoch() {
        let mut rng = RngStream::new(3);
        let mut net = SequenceNet::new(small(), &mut rng).unwrap();
        let mut seen = Vec::new();
        let opts = TrainOptions {
            epochs: 3,
            ..TrainOptions::default()
        };
        net.train_with_callback(&[b"xy".to_vec()], &opts, &mut rng, |e, n, l| {
            seen.push((e, n.adam_state().step, l.is_finite()));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![(1, 1, true), (2, 2, true), (3, 3, true)]);
    }
}
