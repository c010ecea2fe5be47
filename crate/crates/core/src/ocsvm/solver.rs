//! SMO for the one-class dual
//!
//! ```text
//! minimise    a' K a
//! subject to  0 <= a_i <= C,  sum_i a_i = 1,   C = 1 / (nu * l)
//! ```
//!
//! Each iteration moves mass between one coordinate that may grow and one
//! that may shrink, chosen by libsvm's second-order working-set rule on the
//! gradient `G = K a` (half the true gradient; the factor is irrelevant for
//! the updates and for the stopping rule). Iteration stops when the maximal
//! violating pair's gap `max{G_j : a_j > 0} - min{G_i : a_i < C}` drops below
//! the tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curvature floor for pairs of (near-)identical points.
const TAU: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stopping tolerance on the maximal violating pair gap.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-4,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    /// `K a`.
    pub gradient: Vec<f64>,
    /// `a' K a`.
    pub objective: f64,
    pub iterations: usize,
    /// Final maximal violating pair gap.
    pub kkt_gap: f64,
}

/// Symmetric `l x l` kernel matrix, row-major.
pub struct KernelMatrix<'a> {
    pub size: usize,
    pub data: &'a [f64],
}

impl KernelMatrix<'_> {
    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

/// Maximal violating pair gap of a feasible `alpha` with gradient `grad`.
pub fn kkt_gap(alpha: &[f64], grad: &[f64], upper: f64) -> f64 {
    let mut min_up = f64::INFINITY;
    let mut max_down = f64::NEG_INFINITY;
    for (&a, &g) in alpha.iter().zip(grad) {
        if a < upper {
            min_up = min_up.min(g);
        }
        if a > 0.0 {
            max_down = max_down.max(g);
        }
    }
    (max_down - min_up).max(0.0)
}

pub fn solve(kernel: &KernelMatrix<'_>, upper: f64, opts: &SolverOptions) -> Result<DualSolution> {
    let l = kernel.size;
    if l == 0 {
        return Err(Error::contract("one-class dual needs at least one point"));
    }
    if kernel.data.len() != l * l {
        return Err(Error::contract("kernel matrix is not l x l"));
    }
    if upper * (l as f64) < 1.0 - 1e-12 {
        return Err(Error::config(format!(
            "box bound {upper} cannot hold unit mass over {l} points"
        )));
    }

    let mut alpha = vec![1.0 / l as f64; l];
    let mut grad = vec![0.0; l];
    for (i, g) in grad.iter_mut().enumerate() {
        *g = kernel.row(i).iter().sum::<f64>() / l as f64;
    }

    let mut iterations = 0;
    let gap = loop {
        // first coordinate: the one that may grow with the smallest gradient
        let mut i = usize::MAX;
        let mut g_min = f64::INFINITY;
        for k in 0..l {
            if alpha[k] < upper && grad[k] < g_min {
                g_min = grad[k];
                i = k;
            }
        }
        if i == usize::MAX {
            // every coefficient sits on the upper bound: the only feasible point
            break 0.0;
        }
        // second coordinate: maximal objective decrease among those that may shrink
        let k_i = kernel.row(i);
        let mut j = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        let mut g_max = f64::NEG_INFINITY;
        for k in 0..l {
            if alpha[k] <= 0.0 {
                continue;
            }
            g_max = g_max.max(grad[k]);
            let diff = grad[k] - g_min;
            if diff > 0.0 {
                let eta = (k_i[i] + kernel.data[k * l + k] - 2.0 * k_i[k]).max(TAU);
                let gain = diff * diff / eta;
                if gain > best {
                    best = gain;
                    j = k;
                }
            }
        }
        let gap = (g_max - g_min).max(0.0);
        if gap < opts.tolerance || j == usize::MAX {
            break gap;
        }
        if iterations >= opts.max_iterations {
            return Err(Error::Solver {
                symbol: None,
                message: format!(
                    "no convergence after {iterations} pair updates (gap {gap:.3e}, tolerance {:.1e}, l = {l})",
                    opts.tolerance
                ),
            });
        }
        iterations += 1;

        let k_j = kernel.row(j);
        let eta = (k_i[i] + k_j[j] - 2.0 * k_i[j]).max(TAU);
        let step = (grad[j] - grad[i]) / eta;
        let room_i = upper - alpha[i];
        let room_j = alpha[j];
        let delta;
        if step >= room_i.min(room_j) {
            if room_i <= room_j {
                delta = room_i;
                alpha[i] = upper;
                alpha[j] -= delta;
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                }
            } else {
                delta = room_j;
                alpha[j] = 0.0;
                alpha[i] = (alpha[i] + delta).min(upper);
            }
        } else {
            delta = step;
            alpha[i] += delta;
            alpha[j] -= delta;
        }
        for ((g, &ki), &kj) in grad.iter_mut().zip(k_i).zip(k_j) {
            *g += delta * (ki - kj);
        }
    };

    let objective = alpha.iter().zip(&grad).map(|(a, g)| a * g).sum();
    Ok(DualSolution {
        alpha,
        gradient: grad,
        objective,
        iterations,
        kkt_gap: gap,
    })
}
