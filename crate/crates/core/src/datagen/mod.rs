//! Seeded IPv4 and JSON corpora with labelled anomaly classes.

mod files;
mod ipv4;
mod json;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::RngStream;

pub use files::{
    escape_line, read_corpus, unescape_line, write_corpus, CORPUS_FORMAT, CORPUS_VERSION,
};
pub use ipv4::{gen_ipv4, gen_ipv4_anomaly, is_valid_ipv4};
pub use json::{brace_depth, gen_json, gen_json_anomaly, is_valid_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Ipv4,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Normal,
    Trivial,
    Length,
    Digit,
    Dot,
    Colon,
    Comma,
    Quote,
    Nesting,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Ipv4, Family::Json];

    /// Anomaly classes in report order.
    pub fn anomaly_kinds(self) -> &'static [Kind] {
        match self {
            Family::Ipv4 => &[Kind::Trivial, Kind::Digit, Kind::Length, Kind::Dot],
            Family::Json => &[Kind::Colon, Kind::Comma, Kind::Nesting, Kind::Quote],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Ipv4 => "ipv4",
            Family::Json => "json",
        }
    }

    pub fn is_valid(self, bytes: &[u8]) -> bool {
        match self {
            Family::Ipv4 => is_valid_ipv4(bytes),
            Family::Json => is_valid_json(bytes),
        }
    }

    pub fn admits(self, kind: Kind) -> bool {
        kind == Kind::Normal || self.anomaly_kinds().contains(&kind)
    }
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Normal => "normal",
            Kind::Trivial => "trivial",
            Kind::Length => "length",
            Kind::Digit => "digit",
            Kind::Dot => "dot",
            Kind::Colon => "colon",
            Kind::Comma => "comma",
            Kind::Quote => "quote",
            Kind::Nesting => "nesting",
        }
    }

    /// Capitalised row label used in result tables.
    pub fn title(self) -> &'static str {
        match self {
            Kind::Normal => "Test Set",
            Kind::Trivial => "Trivial",
            Kind::Length => "Length",
            Kind::Digit => "Digit",
            Kind::Dot => "Dot",
            Kind::Colon => "Colon",
            Kind::Comma => "Comma",
            Kind::Quote => "Quote",
            Kind::Nesting => "Nesting",
        }
    }

    pub fn is_anomaly(self) -> bool {
        self != Kind::Normal
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::config(format!("unknown family {s:?} (expected ipv4 or json)")))
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Kind::*;
        [
            Normal, Trivial, Length, Digit, Dot, Colon, Comma, Quote, Nesting,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::config(format!("unknown dataset kind {s:?}")))
    }
}

/// A family and one of the kinds that belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DatasetLabel {
    family: Family,
    kind: Kind,
}

impl DatasetLabel {
    pub fn new(family: Family, kind: Kind) -> Result<Self> {
        if !family.admits(kind) {
            return Err(Error::config(format!(
                "{kind} is not a {family} dataset kind"
            )));
        }
        Ok(Self { family, kind })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }
}

impl fmt::Display for DatasetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.family, self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub entries: Vec<(Vec<u8>, DatasetLabel)>,
    pub seed: u64,
}

impl LabeledCorpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sequences(&self) -> Vec<Vec<u8>> {
        self.entries.iter().map(|(s, _)| s.clone()).collect()
    }

    /// The shared label, if every entry carries the same one.
    pub fn uniform_label(&self) -> Option<DatasetLabel> {
        let first = self.entries.first()?.1;
        self.entries
            .iter()
            .all(|(_, l)| *l == first)
            .then_some(first)
    }
}

/// One sample of `label`.
pub fn generate(rng: &mut RngStream, label: DatasetLabel) -> Result<Vec<u8>> {
    match (label.family, label.kind) {
        (Family::Ipv4, Kind::Normal) => Ok(gen_ipv4(rng)),
        (Family::Json, Kind::Normal) => Ok(gen_json(rng)),
        (Family::Ipv4, kind) => gen_ipv4_anomaly(rng, kind),
        (Family::Json, kind) => gen_json_anomaly(rng, kind),
    }
}

pub fn gen_corpus(family: Family, kind: Kind, count: usize, seed: u64) -> Result<LabeledCorpus> {
    let label = DatasetLabel::new(family, kind)?;
    let mut rng = RngStream::new(seed);
    let entries = (0..count)
        .map(|_| generate(&mut rng, label).map(|s| (s, label)))
        .collect::<Result<_>>()?;
    Ok(LabeledCorpus { entries, seed })
}
