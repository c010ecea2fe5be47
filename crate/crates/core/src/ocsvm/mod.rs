//! RBF one-class SVM with an SMO dual solver.

mod kernel;
mod model;
pub mod solver;

pub use kernel::{kernel_eval, KernelParams};
pub use model::{gram_matrix, FitStats, OcsvmModel};
pub use solver::{DualSolution, SolverOptions};
