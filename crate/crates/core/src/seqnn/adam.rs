use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Matrix;

pub const BETA1: f64 = 0.9;
pub const BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;
pub const DEFAULT_LEARNING_RATE: f64 = 0.001;

/// First/second moment accumulators for every parameter tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub step: u64,
    m: Vec<Matrix>,
    v: Vec<Matrix>,
}

impl AdamState {
    pub fn new(shapes: &[(usize, usize)]) -> Self {
        Self {
            step: 0,
            m: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
            v: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
        }
    }

    /// One Adam update of `params` in place.
    pub fn update(&mut self, params: &mut [Matrix], grads: &[Matrix], lr: f64) -> Result<()> {
        if params.len() != grads.len() || params.len() != self.m.len() {
            return Err(Error::contract("adam: tensor count mismatch"));
        }
        for (p, g) in params.iter().zip(grads) {
            if p.shape() != g.shape() {
                return Err(Error::contract(format!(
                    "adam: gradient shape {:?} does not match parameter {:?}",
                    g.shape(),
                    p.shape()
                )));
            }
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - BETA1.powi(t);
        let c2 = 1.0 - BETA2.powi(t);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            for (((pv, &gv), mv), vv) in p
                .data_mut()
                .iter_mut()
                .zip(g.data())
                .zip(m.data_mut().iter_mut())
                .zip(v.data_mut().iter_mut())
            {
                *mv = BETA1 * *mv + (1.0 - BETA1) * gv;
                *vv = BETA2 * *vv + (1.0 - BETA2) * gv * gv;
                let m_hat = *mv / c1;
                let v_hat = *vv / c2;
                *pv -= lr * m_hat / (v_hat.sqrt() + EPSILON);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> Matrix {
        Matrix::from_vec(1, 1, vec![x]).unwrap()
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let mut params = vec![Matrix::from_rows(&[[0.3, -2.0, 5.0]]).unwrap()];
        let grads = vec![Matrix::from_rows(&[[4.0, -0.01, 1e-3]]).unwrap()];
        let before = params[0].clone();
        let mut adam = AdamState::new(&[(1, 3)]);
        adam.update(&mut params, &grads, 0.001).unwrap();
        for k in 0..3 {
            let delta = params[0].get(0, k) - before.get(0, k);
            let expected = -0.001 * grads[0].get(0, k).signum();
            assert!((delta - expected).abs() < 1e-7, "{delta} vs {expected}");
        }
        assert_eq!(adam.step, 1);
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut params = vec![Matrix::from_rows(&[[1.5, -0.5]]).unwrap()];
        let before = params.clone();
        let mut adam = AdamState::new(&[(1, 2)]);
        adam.update(&mut params, &[Matrix::zeros(1, 2)], 0.01)
            .unwrap();
        assert_eq!(params, before);
    }

    #[test]
    fn two_step_trace() {
        // hand computation: theta0 = 1, g = 0.5 then -0.2, lr = 0.1
        let mut params = vec![scalar(1.0)];
        let mut adam = AdamState::new(&[(1, 1)]);
        adam.update(&mut params, &[scalar(0.5)], 0.1).unwrap();
        assert!((params[0].get(0, 0) - 0.900000002).abs() < 1e-15);
        adam.update(&mut params, &[scalar(-0.2)], 0.1).unwrap();
        assert!((params[0].get(0, 0) - 0.8654394181165108).abs() < 1e-14);
    }

    #[test]
    fn shape_mismatch() {
        let mut params = vec![scalar(1.0)];
        let mut adam = AdamState::new(&[(1, 1)]);
        assert!(adam
            .update(&mut params, &[Matrix::zeros(1, 2)], 0.1)
            .is_err());
    }
}
