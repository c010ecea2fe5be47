//! Corpus files.
//!
//! `<name>.txt` holds one sequence per line, terminated by `\n`. Printable
//! ASCII (0x20..=0x7e) is written as is, except `\` which becomes `\\`;
//! every other byte becomes `\xHH` with two lowercase hex digits.
//!
//! `<name>.manifest` sits next to it as flat `key = value` lines:
//! `format = zbseq-corpus`, `version`, `family`, `kind`, `count`, `seed`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{DatasetLabel, LabeledCorpus};
use crate::error::{Error, Result};
use crate::kv;

pub const CORPUS_FORMAT: &str = "zbseq-corpus";
pub const CORPUS_VERSION: u32 = 1;

pub fn escape_line(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len());
    for &b in bytes {
        match b {
            b'\\' => out.push_str("\\\\"),
            0x20..=0x7e => out.push(b as char),
            _ => write!(out, "\\x{b:02x}").expect("write to String"),
        }
    }
    out
}

pub fn unescape_line(line: &str) -> Result<Vec<u8>, String> {
    let bytes = line.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if !(0x20..=0x7e).contains(&b) {
            return Err(format!("raw byte 0x{b:02x} at column {}", i + 1));
        }
        if b != b'\\' {
            out.push(b);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hex = line
                    .get(i + 2..i + 4)
                    .filter(|h| h.bytes().all(|c| c.is_ascii_hexdigit()))
                    .ok_or_else(|| format!("bad \\x escape at column {}", i + 1))?;
                out.push(u8::from_str_radix(hex, 16).expect("checked hex"));
                i += 4;
            }
            _ => return Err(format!("unknown escape at column {}", i + 1)),
        }
    }
    Ok(out)
}

pub fn manifest_path(corpus: &Path) -> PathBuf {
    corpus.with_extension("manifest")
}

/// Writes `<path>` and its manifest. Every entry must carry `label`.
pub fn write_corpus(path: &Path, label: DatasetLabel, corpus: &LabeledCorpus) -> Result<()> {
    if let Some((_, other)) = corpus.entries.iter().find(|(_, l)| *l != label) {
        return Err(Error::contract(format!(
            "corpus file for {label} would contain a {other} entry"
        )));
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut text = String::new();
    for (seq, _) in &corpus.entries {
        text.push_str(&escape_line(seq));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    let manifest = kv::render(&[
        ("format", CORPUS_FORMAT.into()),
        ("version", CORPUS_VERSION.to_string()),
        ("family", label.family().to_string()),
        ("kind", label.kind().to_string()),
        ("count", corpus.len().to_string()),
        ("seed", corpus.seed.to_string()),
    ]);
    let mpath = manifest_path(path);
    std::fs::write(&mpath, manifest).map_err(|e| Error::io(&mpath, e))
}

pub fn read_corpus(path: &Path) -> Result<LabeledCorpus> {
    let mpath = manifest_path(path);
    let m = kv::read(&mpath)?;
    let field = |k: &str| {
        m.get(k)
            .map(String::as_str)
            .ok_or_else(|| Error::format(&mpath, format!("missing key {k}")))
    };
    if field("format")? != CORPUS_FORMAT {
        return Err(Error::format(&mpath, "not a corpus manifest"));
    }
    if field("version")? != CORPUS_VERSION.to_string() {
        return Err(Error::format(
            &mpath,
            format!("unsupported corpus version {}", field("version")?),
        ));
    }
    let label = DatasetLabel::new(field("family")?.parse()?, field("kind")?.parse()?)?;
    let count: usize = field("count")?
        .parse()
        .map_err(|_| Error::format(&mpath, "count is not an integer"))?;
    let seed: u64 = field("seed")?
        .parse()
        .map_err(|_| Error::format(&mpath, "seed is not an integer"))?;

    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let entries = text
        .lines()
        .enumerate()
        .map(|(n, line)| {
            unescape_line(line)
                .map(|s| (s, label))
                .map_err(|msg| Error::format(path, format!("line {}: {msg}", n + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != count {
        return Err(Error::format(
            path,
            format!("manifest says {count} entries, file has {}", entries.len()),
        ));
    }
    Ok(LabeledCorpus { entries, seed })
}
