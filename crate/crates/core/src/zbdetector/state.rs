use std::path::Path;

use serde::{Deserialize, Serialize};

use super::OcsvmArray;
use crate::error::{Error, Result};
use crate::persist;
use crate::seqnn::{NetConfig, SequenceNet};

const STATE_MAGIC: &[u8; 4] = b"ZBDS";
const STATE_VERSION: u32 = 1;

/// A calibrated array together with the checkpoint it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorState {
    /// Path of the encoder checkpoint, as given when the state was created.
    pub checkpoint: String,
    pub net_config: NetConfig,
    pub array: OcsvmArray,
}

impl DetectorState {
    pub fn save(&self, path: &Path) -> Result<()> {
        persist::write_versioned(path, STATE_MAGIC, STATE_VERSION, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let state: Self = persist::read_versioned(path, STATE_MAGIC, STATE_VERSION)?;
        if let Some(d) = state.array.dim() {
            if d != state.net_config.context_dim() {
                return Err(Error::format(
                    path,
                    "array dimension does not match net config",
                ));
            }
        }
        Ok(state)
    }

    /// Loads the referenced checkpoint and checks it matches the stored config.
    pub fn load_net(&self) -> Result<SequenceNet> {
        let net = SequenceNet::load(Path::new(&self.checkpoint))?;
        if net.config() != &self.net_config {
            return Err(Error::format(
                &self.checkpoint,
                "checkpoint config differs from the one the detector was built with",
            ));
        }
        Ok(net)
    }
}
