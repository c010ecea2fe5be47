//! The experiment pipeline: generate, train, calibrate, evaluate, report.
//!
//! Output layout below the configured `out` directory:
//!
//! ```text
//! <family>/corpus/{train,test,<anomaly kind>}.txt   + .manifest each
//! <family>/checkpoints/{zero-boundary,lstm}-epoch-<n>.ckpt, losses.csv
//! <family>/detectors/zero-boundary-epoch-<n>.state
//! <family>/counts.csv
//! results/<family>_{detection,stability}.{csv,dat}
//! ```

mod config;
mod pipeline;
mod results;

pub use config::{
    parse_probability, ExperimentConfig, FamilySelection, GammaMode, Profile, Settings,
};
pub use pipeline::{
    calibrate_checkpoint, cmd_calibrate, cmd_evaluate, cmd_generate, cmd_report, cmd_train,
    load_evaluation, load_normal, run_all, NetRole, TrainReport,
};
pub use results::{detection_grid, stability_grid, Detector, ReportGrid, ResultsTable};
