//! Versioned binary containers.
//!
//! Layout: 4-byte ASCII magic, little-endian `u32` format version, then the
//! payload encoded with `bincode` 1.x default options (little-endian,
//! fixed-width integers, `f64` as raw IEEE-754 bits, `u64` length prefixes).
//! Floats round-trip bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) fn write_versioned<T: Serialize>(
    path: &Path,
    magic: &[u8; 4],
    version: u32,
    value: &T,
) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(magic).map_err(|e| Error::io(path, e))?;
    w.write_all(&version.to_le_bytes())
        .map_err(|e| Error::io(path, e))?;
    bincode::serialize_into(&mut w, value).map_err(|e| Error::format(path, e.to_string()))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn read_versioned<T: DeserializeOwned>(
    path: &Path,
    magic: &[u8; 4],
    version: u32,
) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut header = [0u8; 8];
    r.read_exact(&mut header).map_err(|e| Error::io(path, e))?;
    if &header[..4] != magic {
        return Err(Error::format(
            path,
            format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(&header[..4]),
                String::from_utf8_lossy(magic)
            ),
        ));
    }
    let found = u32::from_le_bytes([header[4], header[5], header[6], header[7]]);
    if found != version {
        return Err(Error::format(
            path,
            format!("unsupported version {found}, expected {version}"),
        ));
    }
    bincode::deserialize_from(&mut r).map_err(|e| Error::format(path, e.to_string()))
}
