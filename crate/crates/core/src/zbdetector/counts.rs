use std::collections::BTreeMap;

use crate::datagen::{DatasetLabel, LabeledCorpus};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCount {
    pub total: usize,
    pub flagged: usize,
}

impl ClassCount {
    /// Flagged sequences for an anomaly class, sequences passed as normal
    /// for the normal class.
    pub fn reported(&self, label: DatasetLabel) -> usize {
        if label.kind().is_anomaly() {
            self.flagged
        } else {
            self.total - self.flagged
        }
    }

    pub fn rate(&self, label: DatasetLabel) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.reported(label) as f64 / self.total as f64
        }
    }
}

/// Per-label tallies of anomaly verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DetectionCounts {
    pub classes: BTreeMap<DatasetLabel, ClassCount>,
}

impl DetectionCounts {
    /// Tallies `flags[i]` against the label of `corpus.entries[i]`.
    pub fn tally(corpus: &LabeledCorpus, flags: &[bool]) -> Result<Self> {
        if flags.len() != corpus.len() {
            return Err(Error::contract(format!(
                "{} verdicts for {} sequences",
                flags.len(),
                corpus.len()
            )));
        }
        let mut out = Self::default();
        for ((_, label), &flag) in corpus.entries.iter().zip(flags) {
            let c = out.classes.entry(*label).or_default();
            c.total += 1;
            c.flagged += flag as usize;
        }
        Ok(out)
    }

    pub fn get(&self, label: DatasetLabel) -> ClassCount {
        self.classes.get(&label).copied().unwrap_or_default()
    }

    pub fn reported(&self, label: DatasetLabel) -> usize {
        self.get(label).reported(label)
    }

    pub fn merge(&mut self, other: &DetectionCounts) {
        for (label, c) in &other.classes {
            let mine = self.classes.entry(*label).or_default();
            mine.total += c.total;
            mine.flagged += c.flagged;
        }
    }
}
