//! Discrete-sequence anomaly detection.
//!
//! A next-symbol LSTM with a linear MLP bottleneck turns every prefix of a
//! byte sequence into a fixed-size context vector. One one-class SVM per
//! symbol learns where, in context space, that symbol legitimately follows;
//! a sequence is anomalous as soon as one of its symbols arrives from a
//! context outside its SVM's calibrated boundary.
//!
//! Modules:
//! - [`numeric`]: dense matrices, activations, seeded random streams.
//! - [`seqnn`]: the encoder/decoder network and its training.
//! - [`ocsvm`]: RBF one-class SVM trained by SMO.
//! - [`zbdetector`]: per-symbol context sets, the SVM array, thresholds, verdicts.
//! - [`baselines`]: n-gram sliding window and probability-cutoff LSTM detectors.
//! - [`datagen`]: IPv4 and JSON corpora with labelled anomaly classes.
//! - [`harness`]: the generate / train / calibrate / evaluate / report pipeline.

pub mod baselines;
pub mod datagen;
pub mod error;
pub mod harness;
mod kv;
pub mod numeric;
pub mod ocsvm;
mod persist;
pub mod seqnn;
pub mod zbdetector;

pub use error::{Error, Result};
