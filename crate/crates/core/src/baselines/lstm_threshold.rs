use crate::datagen::LabeledCorpus;
use crate::error::{Error, Result};
use crate::numeric::log_softmax_at;
use crate::seqnn::{frame, SequenceNet};
use crate::zbdetector::DetectionCounts;

/// Probability cutoff used when none is configured.
pub const DEFAULT_CUTOFF: f64 = 1.0 / 8103.0;

/// Flags a sequence when some symbol's predicted probability falls below `cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmThresholdDetector {
    net: SequenceNet,
    cutoff: f64,
}

impl LstmThresholdDetector {
    pub fn new(net: SequenceNet, cutoff: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&cutoff) {
            return Err(Error::config(format!(
                "cutoff must lie in [0, 1], got {cutoff}"
            )));
        }
        Ok(Self { net, cutoff })
    }

    pub fn net(&self) -> &SequenceNet {
        &self.net
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Lowest log-probability the net assigns to any symbol of each framed sequence.
    pub fn min_log_probs(&self, xs: &[Vec<u8>]) -> Result<Vec<f64>> {
        let framed: Vec<Vec<usize>> = xs.iter().map(|x| frame(x)).collect();
        let encoded = self.net.encode_batch(&framed)?;
        Ok(encoded
            .iter()
            .map(|enc| {
                (0..enc.logits.rows())
                    .map(|i| log_softmax_at(enc.logits.row(i), enc.symbols[i + 1]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect())
    }

    pub fn is_anomalous(&self, min_log_prob: f64) -> bool {
        min_log_prob < self.cutoff.ln()
    }

    pub fn detect(&self, x: &[u8]) -> Result<bool> {
        let lp = self.min_log_probs(std::slice::from_ref(&x.to_vec()))?;
        Ok(self.is_anomalous(lp[0]))
    }

    pub fn detect_batch(&self, xs: &[Vec<u8>]) -> Result<Vec<bool>> {
        Ok(self
            .min_log_probs(xs)?
            .into_iter()
            .map(|lp| self.is_anomalous(lp))
            .collect())
    }

    pub fn evaluate(&self, corpus: &LabeledCorpus) -> Result<DetectionCounts> {
        let flags = self.detect_batch(&corpus.sequences())?;
        DetectionCounts::tally(corpus, &flags)
    }
}
