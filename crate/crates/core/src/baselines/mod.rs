//! Comparison detectors: a naive n-gram window and an LSTM probability cutoff.

mod lstm_threshold;
mod ngram;

pub use lstm_threshold::{LstmThresholdDetector, DEFAULT_CUTOFF};
pub use ngram::{framed_windows, NgramModel};
