use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    gemm_acc, gemm_nt_acc, gemm_tn_acc, log_softmax_at, sigmoid, softmax_in_place, Matrix,
    RngStream,
};
use crate::persist;
use crate::seqnn::adam::AdamState;
use crate::seqnn::{frame, NetConfig};

const CHECKPOINT_MAGIC: &[u8; 4] = b"ZBNT";
const CHECKPOINT_VERSION: u32 = 1;

/// Sequences encoded together by the batched inference helpers.
const ENCODE_CHUNK: usize = 64;

/// Embedding, LSTM stack, MLP and logits head, plus Adam state.
///
/// Parameter tensors are stored in a flat list: the `vocab x embed` embedding;
/// per LSTM layer the input weights `in x 4H`, recurrent weights `H x 4H` and
/// bias `1 x 4H` (gate blocks ordered input, forget, candidate, output); per MLP
/// layer weights `in x out` and bias `1 x out`; the head `last x vocab` and
/// its bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceNet {
    config: NetConfig,
    params: Vec<Matrix>,
    adam: AdamState,
}

/// Gradients shaped like [`SequenceNet::parameters`].
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    tensors: Vec<Matrix>,
}

impl Gradients {
    pub fn tensors(&self) -> &[Matrix] {
        &self.tensors
    }

    pub fn global_norm(&self) -> f64 {
        self.tensors
            .iter()
            .map(Matrix::frobenius_sq)
            .sum::<f64>()
            .sqrt()
    }

    /// Rescales so the global norm is at most `max_norm`. Returns the norm before clipping.
    pub fn clip_to_norm(&mut self, max_norm: f64) -> f64 {
        let norm = self.global_norm();
        if norm > max_norm && norm > 0.0 {
            let s = max_norm / norm;
            self.tensors.iter_mut().for_each(|t| t.scale(s));
        }
        norm
    }
}

/// `(predicted symbol, context vector)` for every position of one sequence.
pub type SymbolContexts = Vec<(usize, Vec<f64>)>;

/// Output of [`SequenceNet::forward`] for one framed sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedSequence {
    pub symbols: Vec<usize>,
    /// Row `i` is the context after consuming `symbols[..=i]`.
    pub contexts: Matrix,
    /// Row `i` holds the logits predicting `symbols[i + 1]`.
    pub logits: Matrix,
}

/// Time-major padded batch; row `t * size + b` is step `t` of sequence `b`.
struct Batch {
    steps: usize,
    size: usize,
    inputs: Vec<usize>,
    targets: Vec<usize>,
    mask: Vec<bool>,
    valid: usize,
    lengths: Vec<usize>,
}

impl Batch {
    fn new(seqs: &[Vec<usize>], vocab: usize) -> Result<Self> {
        if seqs.is_empty() {
            return Err(Error::contract("empty batch"));
        }
        let mut steps = 0;
        for s in seqs {
            if s.len() < 2 {
                return Err(Error::contract(
                    "a sequence needs at least its two delimiters",
                ));
            }
            if let Some(&bad) = s.iter().find(|&&x| x >= vocab) {
                return Err(Error::contract(format!(
                    "symbol {bad} out of range for vocab {vocab}"
                )));
            }
            steps = steps.max(s.len() - 1);
        }
        let size = seqs.len();
        let n = steps * size;
        let mut inputs = vec![0; n];
        let mut targets = vec![0; n];
        let mut mask = vec![false; n];
        let mut valid = 0;
        for (b, s) in seqs.iter().enumerate() {
            for t in 0..s.len() - 1 {
                let r = t * size + b;
                inputs[r] = s[t];
                targets[r] = s[t + 1];
                mask[r] = true;
                valid += 1;
            }
        }
        Ok(Self {
            steps,
            size,
            inputs,
            targets,
            mask,
            valid,
            lengths: seqs.iter().map(Vec::len).collect(),
        })
    }

    fn rows(&self) -> usize {
        self.steps * self.size
    }
}

struct LstmTrace {
    h: Vec<f64>,
    c: Vec<f64>,
    /// Post-activation gate values.
    gates: Vec<f64>,
    tanh_c: Vec<f64>,
}

struct Trace {
    x0: Vec<f64>,
    lstm: Vec<LstmTrace>,
    mlp: Vec<Vec<f64>>,
    logits: Vec<f64>,
}

impl Trace {
    fn top_hidden(&self) -> &[f64] {
        &self.lstm.last().expect("at least one lstm layer").h
    }

    fn mlp_input(&self, layer: usize) -> &[f64] {
        if layer == 0 {
            self.top_hidden()
        } else {
            &self.mlp[layer - 1]
        }
    }

    fn head_input(&self) -> &[f64] {
        match self.mlp.last() {
            Some(a) => a,
            None => self.top_hidden(),
        }
    }
}

fn broadcast_rows(bias: &[f64], rows: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(bias.len() * rows);
    for _ in 0..rows {
        out.extend_from_slice(bias);
    }
    out
}

fn add_column_sums(src: &[f64], cols: usize, dst: &mut [f64]) {
    for row in src.chunks_exact(cols) {
        for (d, s) in dst.iter_mut().zip(row) {
            *d += s;
        }
    }
}

impl SequenceNet {
    /// Randomly initialised network: weights uniform in `±1/sqrt(fan_in)`,
    /// biases zero except the LSTM forget gates, which start at 1.
    pub fn new(config: NetConfig, rng: &mut RngStream) -> Result<Self> {
        let mut net = Self::zeros(config)?;
        let cfg = net.config.clone();
        let bias_tensors: Vec<usize> = (0..cfg.lstm_layers)
            .map(|l| cfg.lstm_index(l) + 2)
            .chain((0..cfg.mlp_shape.len()).map(|k| cfg.mlp_index(k) + 1))
            .chain(std::iter::once(cfg.head_index() + 1))
            .collect();
        for (idx, p) in net.params.iter_mut().enumerate() {
            if bias_tensors.contains(&idx) {
                continue;
            }
            let fan_in = if idx == 0 { 1 } else { p.rows() };
            let bound = 1.0 / (fan_in as f64).sqrt();
            p.data_mut()
                .iter_mut()
                .for_each(|w| *w = (rng.uniform_f64() * 2.0 - 1.0) * bound);
        }
        let h = cfg.lstm_hidden;
        for l in 0..cfg.lstm_layers {
            let bias = &mut net.params[cfg.lstm_index(l) + 2];
            bias.data_mut()[h..2 * h].iter_mut().for_each(|b| *b = 1.0);
        }
        Ok(net)
    }

    /// Every parameter zero; useful as a constant-function reference.
    pub fn zeros(config: NetConfig) -> Result<Self> {
        config.validate()?;
        let shapes = config.tensor_shapes();
        Ok(Self {
            params: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
            adam: AdamState::new(&shapes),
            config,
        })
    }

    pub fn config(&self) -> &NetConfig {
        &self.config
    }

    pub fn parameters(&self) -> &[Matrix] {
        &self.params
    }

    /// Mutable access to the parameter tensors (shapes must be preserved).
    pub fn parameters_mut(&mut self) -> &mut [Matrix] {
        &mut self.params
    }

    pub fn adam_state(&self) -> &AdamState {
        &self.adam
    }

    pub fn context_dim(&self) -> usize {
        self.config.context_dim()
    }

    fn forward_trace(&self, batch: &Batch) -> Trace {
        let cfg = &self.config;
        let n = batch.rows();
        let bs = batch.size;
        let h = cfg.lstm_hidden;
        let h4 = 4 * h;
        let d = cfg.embed_dim;

        let emb = &self.params[0];
        let mut x0 = vec![0.0; n * d];
        for (r, &sym) in batch.inputs.iter().enumerate() {
            x0[r * d..(r + 1) * d].copy_from_slice(emb.row(sym));
        }

        let mut lstm: Vec<LstmTrace> = Vec::with_capacity(cfg.lstm_layers);
        for l in 0..cfg.lstm_layers {
            let base = cfg.lstm_index(l);
            let (wx, wh, bias) = (
                &self.params[base],
                &self.params[base + 1],
                &self.params[base + 2],
            );
            let inp = cfg.lstm_input(l);
            let input: &[f64] = if l == 0 { &x0 } else { &lstm[l - 1].h };

            let mut gates = broadcast_rows(bias.data(), n);
            gemm_acc(input, wx.data(), &mut gates, n, inp, h4);
            let mut hs = vec![0.0; n * h];
            let mut cs = vec![0.0; n * h];
            let mut tc = vec![0.0; n * h];
            for t in 0..batch.steps {
                let block = t * bs..(t + 1) * bs;
                if t > 0 {
                    gemm_acc(
                        &hs[(t - 1) * bs * h..t * bs * h],
                        wh.data(),
                        &mut gates[block.start * h4..block.end * h4],
                        bs,
                        h,
                        h4,
                    );
                }
                for r in block {
                    let g = &mut gates[r * h4..(r + 1) * h4];
                    for j in 0..h {
                        let ig = sigmoid(g[j]);
                        let fg = sigmoid(g[h + j]);
                        let gg = g[2 * h + j].tanh();
                        let og = sigmoid(g[3 * h + j]);
                        g[j] = ig;
                        g[h + j] = fg;
                        g[2 * h + j] = gg;
                        g[3 * h + j] = og;
                        let c_prev = if t > 0 { cs[(r - bs) * h + j] } else { 0.0 };
                        let c = fg * c_prev + ig * gg;
                        let tcv = c.tanh();
                        cs[r * h + j] = c;
                        tc[r * h + j] = tcv;
                        hs[r * h + j] = og * tcv;
                    }
                }
            }
            lstm.push(LstmTrace {
                h: hs,
                c: cs,
                gates,
                tanh_c: tc,
            });
        }

        let mut trace = Trace {
            x0,
            lstm,
            mlp: Vec::with_capacity(cfg.mlp_shape.len()),
            logits: Vec::new(),
        };
        for (k, &width) in cfg.mlp_shape.iter().enumerate() {
            let base = cfg.mlp_index(k);
            let act = cfg.mlp_activation(k);
            let mut out = broadcast_rows(self.params[base + 1].data(), n);
            gemm_acc(
                trace.mlp_input(k),
                self.params[base].data(),
                &mut out,
                n,
                cfg.mlp_input(k),
                width,
            );
            out.iter_mut().for_each(|v| *v = act.apply(*v));
            trace.mlp.push(out);
        }
        let head = cfg.head_index();
        let mut logits = broadcast_rows(self.params[head + 1].data(), n);
        gemm_acc(
            trace.head_input(),
            self.params[head].data(),
            &mut logits,
            n,
            cfg.head_input(),
            cfg.vocab,
        );
        trace.logits = logits;
        trace
    }

    fn context_rows<'a>(&self, trace: &'a Trace) -> &'a [f64] {
        match self.config.bottleneck_index {
            Some(b) => &trace.mlp[b],
            None => trace.top_hidden(),
        }
    }

    /// Runs the network over one delimiter-framed sequence.
    pub fn forward(&self, symbols: &[usize]) -> Result<EncodedSequence> {
        let mut out = self.encode_batch(&[symbols.to_vec()])?;
        Ok(out.pop().expect("one sequence in, one out"))
    }

    /// [`forward`](Self::forward) over many sequences, batched internally.
    /// Results come back in input order.
    pub fn encode_batch(&self, seqs: &[Vec<usize>]) -> Result<Vec<EncodedSequence>> {
        let mut out: Vec<Option<EncodedSequence>> = vec![None; seqs.len()];
        let e = self.context_dim();
        let v = self.config.vocab;
        // similar lengths share a chunk to keep padding small
        let mut order: Vec<usize> = (0..seqs.len()).collect();
        order.sort_by_key(|&i| seqs[i].len());
        for ids in order.chunks(ENCODE_CHUNK) {
            let chunk: Vec<Vec<usize>> = ids.iter().map(|&i| seqs[i].clone()).collect();
            let batch = Batch::new(&chunk, v)?;
            let trace = self.forward_trace(&batch);
            let ctx = self.context_rows(&trace);
            for (b, s) in chunk.into_iter().enumerate() {
                let positions = batch.lengths[b] - 1;
                let mut contexts = Vec::with_capacity(positions * e);
                let mut logits = Vec::with_capacity(positions * v);
                for t in 0..positions {
                    let r = t * batch.size + b;
                    contexts.extend_from_slice(&ctx[r * e..(r + 1) * e]);
                    logits.extend_from_slice(&trace.logits[r * v..(r + 1) * v]);
                }
                let contexts = Matrix::from_vec(positions, e, contexts)?;
                let logits = Matrix::from_vec(positions, v, logits)?;
                out[ids[b]] = Some(EncodedSequence {
                    symbols: s,
                    contexts,
                    logits,
                });
            }
        }
        Ok(out
            .into_iter()
            .map(|x| x.expect("every index filled"))
            .collect())
    }

    /// Mean per-position cross entropy over a batch of framed sequences.
    pub fn loss(&self, batch: &[Vec<usize>]) -> Result<f64> {
        let batch = Batch::new(batch, self.config.vocab)?;
        let trace = self.forward_trace(&batch);
        let v = self.config.vocab;
        let mut total = 0.0;
        for r in 0..batch.rows() {
            if batch.mask[r] {
                total -= log_softmax_at(&trace.logits[r * v..(r + 1) * v], batch.targets[r]);
            }
        }
        Ok(total / batch.valid as f64)
    }

    /// Mean cross entropy and its gradient by backpropagation through time.
    /// Padding positions contribute neither loss nor gradient.
    pub fn loss_and_grads(&self, batch: &[Vec<usize>]) -> Result<(f64, Gradients)> {
        let batch = Batch::new(batch, self.config.vocab)?;
        let trace = self.forward_trace(&batch);
        Ok(self.backward(&batch, &trace))
    }

    fn backward(&self, batch: &Batch, trace: &Trace) -> (f64, Gradients) {
        let cfg = &self.config;
        let n = batch.rows();
        let bs = batch.size;
        let v = cfg.vocab;
        let h = cfg.lstm_hidden;
        let h4 = 4 * h;
        let mut grads: Vec<Matrix> = cfg
            .tensor_shapes()
            .iter()
            .map(|&(r, c)| Matrix::zeros(r, c))
            .collect();

        let scale = 1.0 / batch.valid as f64;
        let mut loss = 0.0;
        let mut dlogits = trace.logits.clone();
        for r in 0..n {
            let row = &mut dlogits[r * v..(r + 1) * v];
            if batch.mask[r] {
                let target = batch.targets[r];
                loss -= log_softmax_at(row, target);
                softmax_in_place(row);
                row[target] -= 1.0;
                row.iter_mut().for_each(|x| *x *= scale);
            } else {
                row.fill(0.0);
            }
        }
        loss *= scale;

        let head = cfg.head_index();
        let width = cfg.head_input();
        gemm_tn_acc(
            trace.head_input(),
            &dlogits,
            grads[head].data_mut(),
            width,
            n,
            v,
        );
        add_column_sums(&dlogits, v, grads[head + 1].data_mut());
        let mut upstream = vec![0.0; n * width];
        gemm_nt_acc(
            &dlogits,
            self.params[head].data(),
            &mut upstream,
            n,
            v,
            width,
        );

        for k in (0..cfg.mlp_shape.len()).rev() {
            let act = cfg.mlp_activation(k);
            let out_w = cfg.mlp_shape[k];
            let in_w = cfg.mlp_input(k);
            for (g, &y) in upstream.iter_mut().zip(&trace.mlp[k]) {
                *g *= act.derivative_from_output(y);
            }
            let base = cfg.mlp_index(k);
            gemm_tn_acc(
                trace.mlp_input(k),
                &upstream,
                grads[base].data_mut(),
                in_w,
                n,
                out_w,
            );
            add_column_sums(&upstream, out_w, grads[base + 1].data_mut());
            let mut below = vec![0.0; n * in_w];
            gemm_nt_acc(
                &upstream,
                self.params[base].data(),
                &mut below,
                n,
                out_w,
                in_w,
            );
            upstream = below;
        }

        for l in (0..cfg.lstm_layers).rev() {
            let tr = &trace.lstm[l];
            let base = cfg.lstm_index(l);
            let inp = cfg.lstm_input(l);
            let mut dpre = vec![0.0; n * h4];
            let mut dh_next = vec![0.0; bs * h];
            let mut dc_next = vec![0.0; bs * h];
            for t in (0..batch.steps).rev() {
                for b in 0..bs {
                    let r = t * bs + b;
                    let g = &tr.gates[r * h4..(r + 1) * h4];
                    let dp = &mut dpre[r * h4..(r + 1) * h4];
                    for j in 0..h {
                        let (ig, fg, gg, og) = (g[j], g[h + j], g[2 * h + j], g[3 * h + j]);
                        let tcv = tr.tanh_c[r * h + j];
                        let dh = upstream[r * h + j] + dh_next[b * h + j];
                        let dc = dc_next[b * h + j] + dh * og * (1.0 - tcv * tcv);
                        let c_prev = if t > 0 { tr.c[(r - bs) * h + j] } else { 0.0 };
                        dp[j] = dc * gg * ig * (1.0 - ig);
                        dp[h + j] = dc * c_prev * fg * (1.0 - fg);
                        dp[2 * h + j] = dc * ig * (1.0 - gg * gg);
                        dp[3 * h + j] = dh * tcv * og * (1.0 - og);
                        dc_next[b * h + j] = dc * fg;
                    }
                }
                if t > 0 {
                    dh_next.fill(0.0);
                    gemm_nt_acc(
                        &dpre[t * bs * h4..(t + 1) * bs * h4],
                        self.params[base + 1].data(),
                        &mut dh_next,
                        bs,
                        h4,
                        h,
                    );
                }
            }
            let input: &[f64] = if l == 0 {
                &trace.x0
            } else {
                &trace.lstm[l - 1].h
            };
            gemm_tn_acc(input, &dpre, grads[base].data_mut(), inp, n, h4);
            if batch.steps > 1 {
                let shifted = (batch.steps - 1) * bs;
                gemm_tn_acc(
                    &tr.h[..shifted * h],
                    &dpre[bs * h4..],
                    grads[base + 1].data_mut(),
                    h,
                    shifted,
                    h4,
                );
            }
            add_column_sums(&dpre, h4, grads[base + 2].data_mut());
            let mut below = vec![0.0; n * inp];
            gemm_nt_acc(&dpre, self.params[base].data(), &mut below, n, h4, inp);
            upstream = below;
        }

        let d = cfg.embed_dim;
        let demb = &mut grads[0];
        for (r, &sym) in batch.inputs.iter().enumerate() {
            for (g, &u) in demb
                .row_mut(sym)
                .iter_mut()
                .zip(&upstream[r * d..(r + 1) * d])
            {
                *g += u;
            }
        }

        (loss, Gradients { tensors: grads })
    }

    /// One Adam step (β₁ = 0.9, β₂ = 0.999, ε = 1e-8).
    pub fn adam_step(&mut self, grads: &Gradients, lr: f64) -> Result<()> {
        self.adam.update(&mut self.params, &grads.tensors, lr)
    }

    /// `(next_symbol, context)` for every predicted position of the framed
    /// sequence, each context keyed by the symbol it is used to predict.
    pub fn extract_contexts(&self, x: &[u8]) -> Result<SymbolContexts> {
        let mut all = self.extract_contexts_batch(std::slice::from_ref(&x.to_vec()))?;
        Ok(all.pop().expect("one sequence"))
    }

    pub fn extract_contexts_batch(&self, xs: &[Vec<u8>]) -> Result<Vec<SymbolContexts>> {
        let framed: Vec<Vec<usize>> = xs.iter().map(|x| frame(x)).collect();
        let encoded = self.encode_batch(&framed)?;
        Ok(encoded
            .into_iter()
            .map(|enc| {
                (0..enc.contexts.rows())
                    .map(|i| (enc.symbols[i + 1], enc.contexts.row(i).to_vec()))
                    .collect()
            })
            .collect())
    }

    /// Writes config, parameters and Adam state to a versioned checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        persist::write_versioned(path, CHECKPOINT_MAGIC, CHECKPOINT_VERSION, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let net: SequenceNet = persist::read_versioned(path, CHECKPOINT_MAGIC, CHECKPOINT_VERSION)?;
        net.config.validate()?;
        let shapes = net.config.tensor_shapes();
        if net.params.len() != shapes.len()
            || net.params.iter().zip(&shapes).any(|(p, &s)| p.shape() != s)
        {
            return Err(Error::format(path, "parameter shapes do not match config"));
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqnn::SymbolAlphabet;

    fn tiny_config() -> NetConfig {
        NetConfig {
            embed_dim: 3,
            lstm_layers: 1,
            lstm_hidden: 4,
            mlp_shape: vec![3, 2, 3],
            bottleneck_index: Some(1),
            vocab: 5,
        }
    }

    #[test]
    fn empty_sequence_shapes() {
        let mut rng = RngStream::new(1);
        let net = SequenceNet::new(NetConfig::desk(), &mut rng).unwrap();
        let enc = net.forward(&[256, 256]).unwrap();
        assert_eq!(enc.contexts.shape(), (1, 16));
        assert_eq!(enc.logits.shape(), (1, 257));
    }

    #[test]
    fn zero_net_has_constant_contexts() {
        let net = SequenceNet::zeros(NetConfig::desk()).unwrap();
        let enc = net.forward(&frame(b"10.0.0.1")).unwrap();
        let first = enc.contexts.row(0).to_vec();
        for i in 0..enc.contexts.rows() {
            assert_eq!(enc.contexts.row(i), first.as_slice());
        }
    }

    #[test]
    fn zero_net_loss_is_log_vocab() {
        let net = SequenceNet::zeros(NetConfig::desk()).unwrap();
        let (loss, _) = net.loss_and_grads(&[vec![256, 256]]).unwrap();
        assert!((loss - (SymbolAlphabet::SIZE as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_symbol() {
        let net = SequenceNet::zeros(tiny_config()).unwrap();
        assert!(matches!(net.forward(&[4, 5, 4]), Err(Error::Contract(_))));
        assert!(net.forward(&[4]).is_err());
    }

    #[test]
    fn duplicated_sequence_keeps_mean_loss() {
        let mut rng = RngStream::new(8);
        let net = SequenceNet::new(tiny_config(), &mut rng).unwrap();
        let s = vec![4, 1, 2, 3, 4];
        let single = net.loss(std::slice::from_ref(&s)).unwrap();
        let double = net.loss(&[s.clone(), s]).unwrap();
        assert!((single - double).abs() < 1e-12);
    }

    #[test]
    fn padding_does_not_change_loss_or_gradient_of_a_sequence() {
        let mut rng = RngStream::new(9);
        let net = SequenceNet::new(tiny_config(), &mut rng).unwrap();
        let short = vec![4, 1, 4];
        let long = vec![4, 2, 3, 1, 0, 4];
        let (l_short, g_short) = net.loss_and_grads(std::slice::from_ref(&short)).unwrap();
        let (l_long, g_long) = net.loss_and_grads(std::slice::from_ref(&long)).unwrap();
        let (l_both, g_both) = net.loss_and_grads(&[short, long]).unwrap();
        // positions: 2 and 5
        let expected = (2.0 * l_short + 5.0 * l_long) / 7.0;
        assert!((l_both - expected).abs() < 1e-12);
        for ((a, b), c) in g_short
            .tensors()
            .iter()
            .zip(g_long.tensors())
            .zip(g_both.tensors())
        {
            for ((x, y), z) in a.data().iter().zip(b.data()).zip(c.data()) {
                assert!(((2.0 * x + 5.0 * y) / 7.0 - z).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn batched_encoding_keeps_input_order() {
        let mut rng = RngStream::new(5);
        let net = SequenceNet::new(tiny_config(), &mut rng).unwrap();
        let seqs: Vec<Vec<usize>> = (0..150)
            .map(|i| {
                std::iter::once(4)
                    .chain((0..(i * 7) % 13).map(|k| k % 4))
                    .chain([4])
                    .collect()
            })
            .collect();
        let batched = net.encode_batch(&seqs).unwrap();
        for (s, enc) in seqs.iter().zip(&batched) {
            let single = net.forward(s).unwrap();
            assert_eq!(&enc.symbols, s);
            for (a, b) in enc.contexts.data().iter().zip(single.contexts.data()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = RngStream::new(2);
        let net = SequenceNet::new(NetConfig::desk(), &mut rng).unwrap();
        let s = frame(b"192.168.0.1");
        assert_eq!(net.forward(&s).unwrap(), net.forward(&s).unwrap());
    }

    #[test]
    fn context_keys_follow_framed_sequence() {
        let mut rng = RngStream::new(3);
        let net = SequenceNet::new(NetConfig::desk(), &mut rng).unwrap();
        let pairs = net.extract_contexts(b"").unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, SymbolAlphabet::DELIMITER);
        let pairs = net.extract_contexts(b"a").unwrap();
        assert_eq!(
            pairs.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![b'a' as usize, SymbolAlphabet::DELIMITER]
        );
        let x = b"{\"ab\":\"c\"}";
        let pairs = net.extract_contexts(x).unwrap();
        assert_eq!(pairs.len(), x.len() + 1);
        assert_eq!(
            pairs.iter().map(|p| p.0).collect::<Vec<_>>(),
            frame(x)[1..].to_vec()
        );
    }

    #[test]
    fn checkpoint_round_trip_is_exact() {
        let mut rng = RngStream::new(4);
        let mut net = SequenceNet::new(tiny_config(), &mut rng).unwrap();
        let (_, g) = net.loss_and_grads(&[vec![4, 1, 2, 4]]).unwrap();
        net.adam_step(&g, 0.01).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.ckpt");
        net.save(&path).unwrap();
        assert_eq!(SequenceNet::load(&path).unwrap(), net);
    }

    #[test]
    fn clipping_bounds_the_norm() {
        let mut rng = RngStream::new(5);
        let net = SequenceNet::new(tiny_config(), &mut rng).unwrap();
        let (_, mut g) = net.loss_and_grads(&[vec![4, 1, 2, 3, 4]]).unwrap();
        let before = g.global_norm();
        g.clip_to_norm(before / 2.0);
        assert!((g.global_norm() - before / 2.0).abs() < 1e-12);
    }
}
