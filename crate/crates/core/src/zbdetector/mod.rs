//! Per-symbol one-class SVMs over encoder contexts.
//!
//! Every predicted position of a framed sequence contributes one context
//! vector, filed under the symbol it predicts. Each symbol's SVM learns
//! where its contexts live; calibration lowers each threshold to the worst
//! calibration score so the calibration corpus itself is never flagged.
//! A sequence is anomalous if any symbol is unmodeled or scores strictly
//! below its threshold.

mod array;
mod contexts;
mod counts;
mod state;

pub use array::{ArrayOptions, OcsvmArray, ScanMode, Verdict};
pub use contexts::{build_context_sets, ContextSets};
pub use counts::{ClassCount, DetectionCounts};
pub use state::DetectorState;
