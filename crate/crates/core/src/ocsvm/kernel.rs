use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::squared_distance;

/// Gaussian kernel `K(x, y) = exp(-|x - y|^2 / gamma)`.
///
/// `gamma` is a width in squared-distance units (the reciprocal of the usual
/// exponent coefficient).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    gamma: f64,
}

impl KernelParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::config(format!(
                "kernel width must be positive, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    /// Width equal to the input dimension, i.e. exponent coefficient `1 / n_features`.
    pub fn for_dimension(dim: usize) -> Result<Self> {
        Self::new(dim as f64)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        (-squared_distance(x, y) / self.gamma).exp()
    }
}

pub fn kernel_eval(x: &[f64], y: &[f64], k: &KernelParams) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::contract(format!(
            "kernel dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(k.eval(x, y))
}
