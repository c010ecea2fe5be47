use std::collections::HashSet;

use crate::datagen::LabeledCorpus;
use crate::error::{Error, Result};
use crate::seqnn::{frame, SymbolAlphabet};
use crate::zbdetector::DetectionCounts;

/// Naive sliding window: remembers every length-`w` window of the framed
/// training sequences and flags any sequence with an unseen window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgramModel {
    window: usize,
    seen: HashSet<Vec<usize>>,
}

/// Windows of the framed sequence; a framed sequence shorter than `w` yields
/// one window padded on the right with delimiters.
pub fn framed_windows(x: &[u8], w: usize) -> Vec<Vec<usize>> {
    let mut framed = frame(x);
    if framed.len() < w {
        framed.resize(w, SymbolAlphabet::DELIMITER);
    }
    framed.windows(w).map(<[usize]>::to_vec).collect()
}

impl NgramModel {
    pub fn train(corpus: &[Vec<u8>], window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::config("n-gram window must be at least 1"));
        }
        let mut seen = HashSet::new();
        for x in corpus {
            seen.extend(framed_windows(x, window));
        }
        Ok(Self { window, seen })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn contains(&self, window: &[usize]) -> bool {
        self.seen.contains(window)
    }

    /// True if some window of the framed `x` never occurred in training.
    pub fn detect(&self, x: &[u8]) -> bool {
        framed_windows(x, self.window)
            .iter()
            .any(|win| !self.seen.contains(win))
    }

    pub fn evaluate(&self, corpus: &LabeledCorpus) -> Result<DetectionCounts> {
        let flags: Vec<bool> = corpus.entries.iter().map(|(x, _)| self.detect(x)).collect();
        DetectionCounts::tally(corpus, &flags)
    }
}
