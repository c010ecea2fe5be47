use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Matrix;
use crate::ocsvm::solver::{self, KernelMatrix, SolverOptions};
use crate::ocsvm::KernelParams;

/// Coefficients at or below `PRUNE_TOL * C` are dropped from the expansion.
const PRUNE_TOL: f64 = 1e-12;
/// Coefficients within `MARGIN_TOL * C` of either box edge are not margin points.
const MARGIN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitStats {
    pub iterations: usize,
    /// Dual objective `a' K a` at the solver's solution.
    pub objective: f64,
    pub kkt_gap: f64,
}

/// A trained one-class SVM: `SV(y) = sum_i a_i K(x_i, y) - rho`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcsvmModel {
    support_vectors: Matrix,
    alphas: Vec<f64>,
    rho: f64,
    kernel: KernelParams,
    nu: f64,
    training_size: usize,
    fit: FitStats,
}

/// Full kernel matrix of the rows of `points`.
pub fn gram_matrix(points: &Matrix, kernel: &KernelParams) -> Vec<f64> {
    let l = points.rows();
    let mut k = vec![0.0; l * l];
    for i in 0..l {
        k[i * l + i] = 1.0;
        for j in 0..i {
            let v = kernel.eval(points.row(i), points.row(j));
            k[i * l + j] = v;
            k[j * l + i] = v;
        }
    }
    k
}

impl OcsvmModel {
    pub fn train(points: &Matrix, nu: f64, kernel: KernelParams) -> Result<Self> {
        Self::train_with(points, nu, kernel, &SolverOptions::default())
    }

    pub fn train_with(
        points: &Matrix,
        nu: f64,
        kernel: KernelParams,
        opts: &SolverOptions,
    ) -> Result<Self> {
        let l = points.rows();
        if l == 0 {
            return Err(Error::config(
                "one-class SVM needs at least one training point",
            ));
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::config(format!("nu must lie in (0, 1], got {nu}")));
        }
        if nu * (l as f64) < 1.0 {
            return Err(Error::config(format!(
                "nu * l = {} < 1: box constraints are infeasible for {l} points",
                nu * l as f64
            )));
        }
        let upper = 1.0 / (nu * l as f64);
        let gram = gram_matrix(points, &kernel);
        let sol = solver::solve(
            &KernelMatrix {
                size: l,
                data: &gram,
            },
            upper,
            opts,
        )?;

        let keep: Vec<usize> = (0..l)
            .filter(|&i| sol.alpha[i] > PRUNE_TOL * upper)
            .collect();
        let mut sv = Vec::with_capacity(keep.len() * points.cols());
        for &i in &keep {
            sv.extend_from_slice(points.row(i));
        }
        let mut model = Self {
            support_vectors: Matrix::from_vec(keep.len(), points.cols(), sv)?,
            alphas: keep.iter().map(|&i| sol.alpha[i]).collect(),
            rho: 0.0,
            kernel,
            nu,
            training_size: l,
            fit: FitStats {
                iterations: sol.iterations,
                objective: sol.objective,
                kkt_gap: sol.kkt_gap,
            },
        };
        model.rho = model.offset();
        Ok(model)
    }

    pub fn support_vectors(&self) -> &Matrix {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn kernel(&self) -> KernelParams {
        self.kernel
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn training_size(&self) -> usize {
        self.training_size
    }

    pub fn dim(&self) -> usize {
        self.support_vectors.cols()
    }

    pub fn fit_stats(&self) -> FitStats {
        self.fit
    }

    /// Box bound `1 / (nu * l)`.
    pub fn upper_bound(&self) -> f64 {
        1.0 / (self.nu * self.training_size as f64)
    }

    /// `sum_j a_j K(x_j, y)`.
    pub fn expansion(&self, y: &[f64]) -> f64 {
        self.alphas
            .iter()
            .enumerate()
            .map(|(j, a)| a * self.kernel.eval(self.support_vectors.row(j), y))
            .sum()
    }

    fn is_margin(&self, alpha: f64) -> bool {
        let c = self.upper_bound();
        alpha > MARGIN_TOL * c && alpha < c * (1.0 - MARGIN_TOL)
    }

    /// Expansion value at every margin support vector (`0 < a_i < C`).
    pub fn margin_values(&self) -> Vec<f64> {
        (0..self.alphas.len())
            .filter(|&i| self.is_margin(self.alphas[i]))
            .map(|i| self.expansion(self.support_vectors.row(i)))
            .collect()
    }

    /// Offset recomputed from the stored expansion: the mean expansion value
    /// over margin support vectors, or the largest expansion value over all
    /// support vectors when every coefficient sits on a bound.
    pub fn offset(&self) -> f64 {
        let margin = self.margin_values();
        if !margin.is_empty() {
            return margin.iter().sum::<f64>() / margin.len() as f64;
        }
        (0..self.alphas.len())
            .map(|i| self.expansion(self.support_vectors.row(i)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support-vector expansion minus the offset; lies in `[-rho, 1 - rho]`.
    pub fn decision(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.dim());
        self.expansion(y) - self.rho
    }

    pub fn checked_decision(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim() {
            return Err(Error::contract(format!(
                "decision input has dimension {}, model expects {}",
                y.len(),
                self.dim()
            )));
        }
        Ok(self.decision(y))
    }
}
