//! Dense linear algebra, activations and seeded randomness.

mod matrix;
mod rng;

pub use matrix::Matrix;
pub(crate) use matrix::{gemm_acc, gemm_nt_acc, gemm_tn_acc, squared_distance};
pub use rng::RngStream;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Relu,
    Sigmoid,
    Tanh,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => x.tanh(),
            Activation::Linear => x,
        }
    }

    /// Derivative expressed in terms of the activation's output `y`.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Tanh => 1.0 - y * y,
            Activation::Linear => 1.0,
        }
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn activation(x: &Matrix, kind: Activation) -> Matrix {
    let mut out = x.clone();
    out.data_mut().iter_mut().for_each(|v| *v = kind.apply(*v));
    out
}

/// Max-subtracted softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let mut out = logits.to_vec();
    softmax_in_place(&mut out);
    out
}

pub(crate) fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    let inv = 1.0 / sum;
    v.iter_mut().for_each(|x| *x *= inv);
}

/// `log softmax(logits)[target]`, computed stably.
pub(crate) fn log_softmax_at(logits: &[f64], target: usize) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = logits.iter().map(|x| (x - max).exp()).sum::<f64>().ln() + max;
    logits[target] - lse
}

/// Cross entropy of a single `1 x |vocab|` logits row against `target`.
///
/// Returns the loss `-log softmax(logits)[target]` and its gradient with
/// respect to the logits, `softmax(logits) - onehot(target)`.
pub fn softmax_xent(logits: &Matrix, target: usize) -> Result<(f64, Matrix)> {
    if logits.rows() != 1 {
        return Err(Error::contract("softmax_xent expects a single logits row"));
    }
    if target >= logits.cols() {
        return Err(Error::contract(format!(
            "target {target} out of range for {} classes",
            logits.cols()
        )));
    }
    let loss = -log_softmax_at(logits.row(0), target);
    let mut grad = softmax(logits.row(0));
    grad[target] -= 1.0;
    Ok((loss, Matrix::from_vec(1, logits.cols(), grad)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn relu_definition() {
        let x = Matrix::from_rows(&[[-1.0, 0.0, 2.0]]).unwrap();
        assert_eq!(activation(&x, Activation::Relu).data(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn sigmoid_at_zero() {
        let x = Matrix::zeros(1, 1);
        assert_eq!(activation(&x, Activation::Sigmoid).data(), &[0.5]);
    }

    #[test]
    fn linear_is_identity() {
        let x = Matrix::from_rows(&[[-3.5, 1e9, 0.25]]).unwrap();
        assert_eq!(activation(&x, Activation::Linear), x);
    }

    #[test]
    fn uniform_logits_give_log_vocab() {
        let logits = Matrix::zeros(1, 257);
        for target in [0, 100, 256] {
            let (loss, _) = softmax_xent(&logits, target).unwrap();
            assert!((loss - 257f64.ln()).abs() < 1e-12);
        }
        assert!((257f64.ln() - 5.549).abs() < 1e-3);
    }

    #[test]
    fn saturated_prediction() {
        let mut logits = Matrix::zeros(1, 257);
        logits.set(0, 42, 1000.0);
        let (loss, grad) = softmax_xent(&logits, 42).unwrap();
        assert!(loss.abs() < 1e-12);
        assert!(grad.data().iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn target_out_of_range() {
        let logits = Matrix::zeros(1, 5);
        assert!(matches!(softmax_xent(&logits, 5), Err(Error::Contract(_))));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = RngStream::new(17);
        let data: Vec<f64> = (0..5).map(|_| rng.uniform_f64() * 4.0 - 2.0).collect();
        let logits = Matrix::from_vec(1, 5, data.clone()).unwrap();
        let target = 3;
        let (_, grad) = softmax_xent(&logits, target).unwrap();
        let h = 1e-5;
        for k in 0..5 {
            let mut plus = data.clone();
            let mut minus = data.clone();
            plus[k] += h;
            minus[k] -= h;
            let lp = softmax_xent(&Matrix::from_vec(1, 5, plus).unwrap(), target)
                .unwrap()
                .0;
            let lm = softmax_xent(&Matrix::from_vec(1, 5, minus).unwrap(), target)
                .unwrap()
                .0;
            let numeric = (lp - lm) / (2.0 * h);
            let analytic = grad.get(0, k);
            let rel = (numeric - analytic).abs() / numeric.abs().max(analytic.abs());
            assert!(rel < 1e-6, "coordinate {k}: {analytic} vs {numeric}");
        }
    }

    proptest! {
        #[test]
        fn softmax_sums_to_one(v in prop::collection::vec(-500.0f64..500.0, 1..300)) {
            let s: f64 = softmax(&v).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
