use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use super::{build_context_sets, ContextSets, DetectionCounts};
use crate::datagen::LabeledCorpus;
use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::ocsvm::{KernelParams, OcsvmModel, SolverOptions};
use crate::seqnn::{SequenceNet, SymbolAlphabet};

/// Sequences scored together by the batched detection helpers.
const DETECT_CHUNK: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct ArrayOptions {
    pub nu: f64,
    pub kernel: KernelParams,
    /// Sets larger than this are uniformly subsampled before training.
    pub subsample_cap: usize,
    pub solver: SolverOptions,
}

impl ArrayOptions {
    pub fn new(nu: f64, kernel: KernelParams) -> Self {
        Self {
            nu,
            kernel,
            subsample_cap: 4000,
            solver: SolverOptions::default(),
        }
    }
}

/// How far [`OcsvmArray::detect`] scores a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Stop at the first offending position; `margin` covers the scanned prefix only.
    FirstOffense,
    /// Score every position; `margin` is the minimum over the whole sequence.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub is_anomaly: bool,
    /// Index of the offending symbol in the raw sequence; the closing
    /// delimiter has index `len`.
    pub first_offending_position: Option<usize>,
    pub offending_symbol: Option<usize>,
    /// Smallest `score - threshold` seen; `-inf` for an unmodeled symbol.
    pub margin: f64,
}

/// One one-class SVM per modeled symbol plus its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcsvmArray {
    models: BTreeMap<usize, OcsvmModel>,
    /// Empty until [`calibrate`](Self::calibrate); afterwards keyed exactly like `models`.
    thresholds: BTreeMap<usize, f64>,
}

impl OcsvmArray {
    /// Trains one model per symbol whose (subsampled) set satisfies `nu * l >= 1`.
    /// Sets that are too small are dropped with a warning.
    pub fn train(sets: &ContextSets, opts: &ArrayOptions, rng: &RngStream) -> Result<Self> {
        if opts.subsample_cap == 0 {
            return Err(Error::config("subsample cap must be positive"));
        }
        let mut models = BTreeMap::new();
        for symbol in sets.symbols() {
            let n = sets.count(symbol);
            let l = n.min(opts.subsample_cap);
            if opts.nu * (l as f64) < 1.0 {
                warn!(
                    "symbol {} has {l} contexts; nu * l = {:.3} < 1, left unmodeled",
                    SymbolAlphabet::describe(symbol),
                    opts.nu * l as f64
                );
                continue;
            }
            let indices = if n > l {
                let mut idx = rng.child(symbol as u64).sample_indices(n, l);
                idx.sort_unstable();
                idx
            } else {
                (0..n).collect()
            };
            let points = sets.matrix(symbol, &indices)?;
            let model = OcsvmModel::train_with(&points, opts.nu, opts.kernel, &opts.solver)
                .map_err(|e| match e {
                    Error::Solver { message, .. } => Error::Solver {
                        symbol: Some(symbol),
                        message,
                    },
                    other => other,
                })?;
            log::debug!(
                "symbol {}: {l} contexts, {} support vectors, rho {:.4}",
                SymbolAlphabet::describe(symbol),
                model.alphas().len(),
                model.rho()
            );
            models.insert(symbol, model);
        }
        Ok(Self {
            models,
            thresholds: BTreeMap::new(),
        })
    }

    pub fn models(&self) -> &BTreeMap<usize, OcsvmModel> {
        &self.models
    }

    pub fn thresholds(&self) -> &BTreeMap<usize, f64> {
        &self.thresholds
    }

    pub fn is_calibrated(&self) -> bool {
        !self.models.is_empty() && self.thresholds.len() == self.models.len()
    }

    /// Threshold of `symbol`; 0 before calibration.
    pub fn threshold(&self, symbol: usize) -> f64 {
        self.thresholds.get(&symbol).copied().unwrap_or(0.0)
    }

    /// Overrides one threshold. The symbol must be modeled.
    pub fn set_threshold(&mut self, symbol: usize, t: f64) -> Result<()> {
        if !self.models.contains_key(&symbol) {
            return Err(Error::contract(format!("symbol {symbol} is not modeled")));
        }
        if self.thresholds.is_empty() {
            self.thresholds = self.models.keys().map(|&s| (s, 0.0)).collect();
        }
        self.thresholds.insert(symbol, t);
        Ok(())
    }

    pub fn dim(&self) -> Option<usize> {
        self.models.values().next().map(|m| m.dim())
    }

    /// Sets each threshold to the lowest decision value among the calibration
    /// contexts of its symbol. Symbols absent from the corpus get 0.
    pub fn calibrate(mut self, net: &SequenceNet, corpus: &[Vec<u8>]) -> Result<Self> {
        self.check_net(net)?;
        let sets = build_context_sets(net, corpus)?;
        let mut thresholds = BTreeMap::new();
        for (&symbol, model) in &self.models {
            let n = sets.count(symbol);
            if n == 0 {
                warn!(
                    "symbol {} never occurs in the calibration corpus; threshold set to 0",
                    SymbolAlphabet::describe(symbol)
                );
                thresholds.insert(symbol, 0.0);
                continue;
            }
            let t = (0..n)
                .map(|i| model.decision(sets.vector(symbol, i).expect("in range")))
                .fold(f64::INFINITY, f64::min);
            thresholds.insert(symbol, t);
        }
        self.thresholds = thresholds;
        Ok(self)
    }

    fn check_net(&self, net: &SequenceNet) -> Result<()> {
        match self.dim() {
            Some(d) if d != net.context_dim() => Err(Error::contract(format!(
                "array expects {d}-dimensional contexts, net produces {}",
                net.context_dim()
            ))),
            _ => Ok(()),
        }
    }

    /// Scores pre-computed `(symbol, context)` pairs of one sequence.
    pub fn judge(&self, contexts: &[(usize, Vec<f64>)], mode: ScanMode) -> Verdict {
        let mut verdict = Verdict {
            is_anomaly: false,
            first_offending_position: None,
            offending_symbol: None,
            margin: f64::INFINITY,
        };
        for (pos, (symbol, ctx)) in contexts.iter().enumerate() {
            let slack = match self.models.get(symbol) {
                None => f64::NEG_INFINITY,
                Some(model) => model.decision(ctx) - self.threshold(*symbol),
            };
            verdict.margin = verdict.margin.min(slack);
            if slack < 0.0 && !verdict.is_anomaly {
                verdict.is_anomaly = true;
                verdict.first_offending_position = Some(pos);
                verdict.offending_symbol = Some(*symbol);
                if mode == ScanMode::FirstOffense {
                    break;
                }
            }
        }
        verdict
    }

    pub fn detect(&self, net: &SequenceNet, x: &[u8], mode: ScanMode) -> Result<Verdict> {
        self.check_net(net)?;
        Ok(self.judge(&net.extract_contexts(x)?, mode))
    }

    pub fn detect_batch(
        &self,
        net: &SequenceNet,
        xs: &[Vec<u8>],
        mode: ScanMode,
    ) -> Result<Vec<Verdict>> {
        self.check_net(net)?;
        let mut out = Vec::with_capacity(xs.len());
        for chunk in xs.chunks(DETECT_CHUNK) {
            for ctx in net.extract_contexts_batch(chunk)? {
                out.push(self.judge(&ctx, mode));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, net: &SequenceNet, corpus: &LabeledCorpus) -> Result<DetectionCounts> {
        let flags: Vec<bool> = self
            .detect_batch(net, &corpus.sequences(), ScanMode::FirstOffense)?
            .iter()
            .map(|v| v.is_anomaly)
            .collect();
        DetectionCounts::tally(corpus, &flags)
    }
}
