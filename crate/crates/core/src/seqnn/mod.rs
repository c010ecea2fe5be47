//! The next-symbol network: byte embedding, stacked LSTM, MLP with a linear
//! bottleneck, and a logits head over the 257-symbol alphabet. Trained with
//! cross entropy, backpropagation through time and Adam.

mod adam;
mod alphabet;
mod config;
mod net;
mod train;

pub use adam::{AdamState, BETA1, BETA2, DEFAULT_LEARNING_RATE, EPSILON};
pub use alphabet::{frame, SymbolAlphabet};
pub use config::NetConfig;
pub use net::{EncodedSequence, Gradients, SequenceNet, SymbolContexts};
pub use train::TrainOptions;
