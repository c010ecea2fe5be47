use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Activation;
use crate::seqnn::SymbolAlphabet;

/// Shape of a [`SequenceNet`](crate::seqnn::SequenceNet).
///
/// The MLP sits on top of the LSTM stack. When `bottleneck_index` is set, that
/// layer uses a linear activation and its output is the context vector; every
/// other MLP layer is ReLU. The encoder is everything up to and including the
/// bottleneck, the decoder is the rest plus the projection to `vocab` logits.
/// Without a bottleneck the encoder ends at the top LSTM layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetConfig {
    pub embed_dim: usize,
    pub lstm_layers: usize,
    pub lstm_hidden: usize,
    pub mlp_shape: Vec<usize>,
    pub bottleneck_index: Option<usize>,
    pub vocab: usize,
}

impl NetConfig {
    /// Full-size Zero Boundary network.
    pub fn paper() -> Self {
        Self {
            embed_dim: 128,
            lstm_layers: 5,
            lstm_hidden: 128,
            mlp_shape: vec![128, 128, 64, 32, 64, 128, 256],
            bottleneck_index: Some(3),
            vocab: SymbolAlphabet::SIZE,
        }
    }

    /// Full-size next-symbol baseline: two ReLU layers of 256 instead of the bottleneck MLP.
    pub fn paper_baseline() -> Self {
        Self {
            mlp_shape: vec![256, 256],
            bottleneck_index: None,
            ..Self::paper()
        }
    }

    pub fn desk() -> Self {
        Self {
            embed_dim: 32,
            lstm_layers: 2,
            lstm_hidden: 64,
            mlp_shape: vec![64, 32, 16, 32, 64],
            bottleneck_index: Some(2),
            vocab: SymbolAlphabet::SIZE,
        }
    }

    pub fn desk_baseline() -> Self {
        Self {
            mlp_shape: vec![64, 64],
            bottleneck_index: None,
            ..Self::desk()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.embed_dim == 0 || self.lstm_layers == 0 || self.lstm_hidden == 0 {
            return Err(Error::config(
                "embed_dim, lstm_layers and lstm_hidden must be positive",
            ));
        }
        if self.vocab < 2 {
            return Err(Error::config("vocab must have at least two symbols"));
        }
        if self.mlp_shape.contains(&0) {
            return Err(Error::config("mlp layer widths must be positive"));
        }
        if let Some(b) = self.bottleneck_index {
            if b >= self.mlp_shape.len() {
                return Err(Error::config(format!(
                    "bottleneck index {b} outside mlp of {} layers",
                    self.mlp_shape.len()
                )));
            }
        }
        Ok(())
    }

    /// Dimension `e` of the context vectors.
    pub fn context_dim(&self) -> usize {
        match self.bottleneck_index {
            Some(b) => self.mlp_shape[b],
            None => self.lstm_hidden,
        }
    }

    pub fn mlp_activation(&self, layer: usize) -> Activation {
        if self.bottleneck_index == Some(layer) {
            Activation::Linear
        } else {
            Activation::Relu
        }
    }

    pub(crate) fn lstm_input(&self, layer: usize) -> usize {
        if layer == 0 {
            self.embed_dim
        } else {
            self.lstm_hidden
        }
    }

    pub(crate) fn mlp_input(&self, layer: usize) -> usize {
        if layer == 0 {
            self.lstm_hidden
        } else {
            self.mlp_shape[layer - 1]
        }
    }

    pub(crate) fn head_input(&self) -> usize {
        self.mlp_shape.last().copied().unwrap_or(self.lstm_hidden)
    }

    /// Number of parameter tensors: embedding, 3 per LSTM layer, 2 per MLP layer, 2 for the head.
    #[cfg(test)]
    pub(crate) fn tensor_count(&self) -> usize {
        1 + 3 * self.lstm_layers + 2 * self.mlp_shape.len() + 2
    }

    pub(crate) fn lstm_index(&self, layer: usize) -> usize {
        1 + 3 * layer
    }

    pub(crate) fn mlp_index(&self, layer: usize) -> usize {
        1 + 3 * self.lstm_layers + 2 * layer
    }

    pub(crate) fn head_index(&self) -> usize {
        1 + 3 * self.lstm_layers + 2 * self.mlp_shape.len()
    }

    /// `(rows, cols)` of every parameter tensor in storage order.
    pub(crate) fn tensor_shapes(&self) -> Vec<(usize, usize)> {
        let h = self.lstm_hidden;
        let mut shapes = vec![(self.vocab, self.embed_dim)];
        for l in 0..self.lstm_layers {
            shapes.push((self.lstm_input(l), 4 * h));
            shapes.push((h, 4 * h));
            shapes.push((1, 4 * h));
        }
        for (k, &w) in self.mlp_shape.iter().enumerate() {
            shapes.push((self.mlp_input(k), w));
            shapes.push((1, w));
        }
        shapes.push((self.head_input(), self.vocab));
        shapes.push((1, self.vocab));
        shapes
    }

    pub fn parameter_count(&self) -> usize {
        self.tensor_shapes().iter().map(|(r, c)| r * c).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_size_bottleneck_is_the_narrowest_layer() {
        let cfg = NetConfig::paper();
        assert_eq!(cfg.context_dim(), 32);
        assert_eq!(cfg.mlp_activation(3), Activation::Linear);
        assert_eq!(cfg.mlp_activation(2), Activation::Relu);
        assert_eq!(cfg.vocab, 257);
        assert_eq!(cfg.context_dim(), *cfg.mlp_shape.iter().min().unwrap());
    }

    #[test]
    fn desk_context_dim() {
        assert_eq!(NetConfig::desk().context_dim(), 16);
    }

    #[test]
    fn shapes_match_tensor_count() {
        for cfg in [NetConfig::paper(), NetConfig::desk_baseline()] {
            assert_eq!(cfg.tensor_shapes().len(), cfg.tensor_count());
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn bad_bottleneck_rejected() {
        let mut cfg = NetConfig::desk();
        cfg.bottleneck_index = Some(9);
        assert!(cfg.validate().is_err());
    }
}
