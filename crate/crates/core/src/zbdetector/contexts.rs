use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::Matrix;
use crate::seqnn::SequenceNet;

/// Sequences pushed through the encoder at once while collecting contexts.
const BUILD_CHUNK: usize = 256;

/// Context vectors grouped by the symbol they precede.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextSets {
    dim: usize,
    /// Row-major vectors per symbol.
    sets: BTreeMap<usize, Vec<f64>>,
}

impl ContextSets {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            sets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, symbol: usize, context: &[f64]) -> Result<()> {
        if context.len() != self.dim {
            return Err(Error::contract(format!(
                "context of dimension {} pushed into sets of dimension {}",
                context.len(),
                self.dim
            )));
        }
        self.sets
            .entry(symbol)
            .or_default()
            .extend_from_slice(context);
        Ok(())
    }

    /// Symbols with at least one vector, ascending.
    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        self.sets.keys().copied()
    }

    pub fn count(&self, symbol: usize) -> usize {
        self.sets.get(&symbol).map_or(0, |v| v.len() / self.dim)
    }

    pub fn total(&self) -> usize {
        self.sets.values().map(|v| v.len() / self.dim).sum()
    }

    pub fn vector(&self, symbol: usize, i: usize) -> Option<&[f64]> {
        let data = self.sets.get(&symbol)?;
        data.get(i * self.dim..(i + 1) * self.dim)
    }

    /// The rows `indices` of the set for `symbol`.
    pub fn matrix(&self, symbol: usize, indices: &[usize]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            let row = self.vector(symbol, i).ok_or_else(|| {
                Error::contract(format!("symbol {symbol} has no context number {i}"))
            })?;
            data.extend_from_slice(row);
        }
        Matrix::from_vec(indices.len(), self.dim, data)
    }
}

/// Encodes every sequence of `corpus` with the frozen `net` and files each
/// context vector under the symbol it is used to predict.
pub fn build_context_sets(net: &SequenceNet, corpus: &[Vec<u8>]) -> Result<ContextSets> {
    let mut sets = ContextSets::new(net.context_dim());
    for chunk in corpus.chunks(BUILD_CHUNK) {
        for seq in net.extract_contexts_batch(chunk)? {
            for (symbol, ctx) in seq {
                sets.push(symbol, &ctx)?;
            }
        }
    }
    Ok(sets)
}
