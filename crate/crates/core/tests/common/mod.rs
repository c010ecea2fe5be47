//! Test-only oracles shared by the integration suites.
#![allow(dead_code)]

use zero_boundary::numeric::{Matrix, RngStream};
use zero_boundary::ocsvm::OcsvmModel;
use zero_boundary::seqnn::{NetConfig, SequenceNet};

pub fn gaussian(rng: &mut RngStream) -> f64 {
    let u1 = rng.uniform_f64().max(f64::MIN_POSITIVE);
    let u2 = rng.uniform_f64();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn gaussian_cloud(rng: &mut RngStream, n: usize) -> Matrix {
    let rows: Vec<[f64; 2]> = (0..n).map(|_| [gaussian(rng), gaussian(rng)]).collect();
    Matrix::from_rows(&rows).unwrap()
}

/// Gaussian kernel matrix computed independently of the library.
pub fn rbf_gram(points: &Matrix, gamma: f64) -> Vec<Vec<f64>> {
    let l = points.rows();
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let d2: f64 = points
                        .row(i)
                        .iter()
                        .zip(points.row(j))
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    (-d2 / gamma).exp()
                })
                .collect()
        })
        .collect()
}

pub fn quad(k: &[Vec<f64>], a: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            s += a[i] * a[j] * k[i][j];
        }
    }
    s
}

/// Euclidean projection onto `{0 <= a_i <= c, sum a = 1}` by bisection on the shift.
fn project(v: &[f64], c: f64) -> Vec<f64> {
    let mass = |tau: f64| v.iter().map(|x| (x - tau).clamp(0.0, c)).sum::<f64>();
    let mut lo = v.iter().copied().fold(f64::INFINITY, f64::min) - c - 1.0;
    let mut hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    v.iter().map(|x| (x - tau).clamp(0.0, c)).collect()
}

/// Accelerated projected gradient (FISTA) on `a' K a` over the box-simplex.
pub fn reference_qp(k: &[Vec<f64>], c: f64, iterations: usize) -> (Vec<f64>, f64) {
    let l = k.len();
    let lipschitz = 2.0
        * k.iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let mut x = project(&vec![1.0 / l as f64; l], c);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..iterations {
        let grad: Vec<f64> = (0..l)
            .map(|i| 2.0 * (0..l).map(|j| k[i][j] * y[j]).sum::<f64>())
            .collect();
        let step: Vec<f64> = y
            .iter()
            .zip(&grad)
            .map(|(a, g)| a - g / lipschitz)
            .collect();
        let next = project(&step, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = next
            .iter()
            .zip(&x)
            .map(|(n, p)| n + (t - 1.0) / t_next * (n - p))
            .collect();
        x = next;
        t = t_next;
    }
    let obj = quad(k, &x);
    (x, obj)
}

/// Full coefficient vector of a trained model, recovered by matching stored
/// support vectors against the training rows.
pub fn full_alpha(model: &OcsvmModel, points: &Matrix) -> Vec<f64> {
    let mut alpha = vec![0.0; points.rows()];
    let mut used = vec![false; points.rows()];
    for (s, &a) in model.alphas().iter().enumerate() {
        let sv = model.support_vectors().row(s);
        let idx = (0..points.rows())
            .find(|&i| !used[i] && points.row(i) == sv)
            .expect("support vector is a training point");
        used[idx] = true;
        alpha[idx] = a;
    }
    alpha
}

/// Maximal violating pair gap on `K a`, computed from scratch.
pub fn kkt_residual(k: &[Vec<f64>], alpha: &[f64], c: f64) -> f64 {
    let l = alpha.len();
    let g: Vec<f64> = (0..l)
        .map(|i| (0..l).map(|j| k[i][j] * alpha[j]).sum())
        .collect();
    let tol = 1e-12 * c;
    let min_up = (0..l)
        .filter(|&i| alpha[i] < c - tol)
        .map(|i| g[i])
        .fold(f64::INFINITY, f64::min);
    let max_down = (0..l)
        .filter(|&i| alpha[i] > tol)
        .map(|i| g[i])
        .fold(f64::NEG_INFINITY, f64::max);
    (max_down - min_up).max(0.0)
}

/// One LSTM layer of 4, vocab 5, context width 2.
pub fn tiny_config() -> NetConfig {
    NetConfig {
        embed_dim: 3,
        lstm_layers: 1,
        lstm_hidden: 4,
        mlp_shape: vec![3, 2, 3],
        bottleneck_index: Some(1),
        vocab: 5,
    }
}

/// Relative error with an absolute floor of 1e-4 for near-zero gradients.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-4)
}

/// Fresh nets have zero biases, which can park ReLU units exactly on their
/// kink; jitter every parameter so finite differences stay on smooth pieces.
pub fn randomized(config: NetConfig, seed: u64) -> SequenceNet {
    let mut rng = RngStream::new(seed);
    let mut net = SequenceNet::new(config, &mut rng).unwrap();
    for m in net.parameters_mut() {
        let data = m
            .data()
            .iter()
            .map(|w| w + rng.uniform_f64() - 0.5)
            .collect();
        *m = Matrix::from_vec(m.rows(), m.cols(), data).unwrap();
    }
    net
}

/// Worst relative error between analytic and central-difference gradients.
pub fn check_gradients(net: &mut SequenceNet, batch: &[Vec<usize>]) -> f64 {
    let (_, grads) = net.loss_and_grads(batch).unwrap();
    let step = 1e-5;
    let mut worst: f64 = 0.0;
    let tensors = grads.tensors().to_vec();
    for (t, g) in tensors.iter().enumerate() {
        for k in 0..g.data().len() {
            let (r, c) = (k / g.cols(), k % g.cols());
            let orig = net.parameters()[t].get(r, c);
            let set = |net: &mut SequenceNet, v: f64| {
                let m: &mut Matrix = &mut net.parameters_mut()[t];
                let mut data = m.data().to_vec();
                data[k] = v;
                *m = Matrix::from_vec(m.rows(), m.cols(), data).unwrap();
            };
            set(net, orig + step);
            let plus = net.loss(batch).unwrap();
            set(net, orig - step);
            let minus = net.loss(batch).unwrap();
            set(net, orig);
            let numeric = (plus - minus) / (2.0 * step);
            let e = rel_err(g.get(r, c), numeric);
            worst = worst.max(e);
        }
    }
    worst
}
