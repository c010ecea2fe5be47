//! Result tables and the report files derived from them.
//!
//! `counts.csv` (one per family) is the raw table, header
//! `detector,epoch,family,kind,total,flagged`. The n-gram detector has no
//! epochs and uses epoch 0.
//!
//! Reports, written under `out/results/`:
//! - `<family>_detection.csv`: header `Count,Zero,Normal,n-gram-<w>`, one row
//!   per anomaly class plus `Test Set`. Anomaly rows count flagged sequences;
//!   the `Test Set` row counts held-out normal sequences passed as normal.
//!   Uses the last epoch of both networks.
//! - `<family>_stability.csv`: header `Counts,A,B,C,D`, one row `Epoch k` per
//!   checkpoint. A and B are the zero-boundary true-positive and
//!   true-negative rates, C and D the same for the probability-cutoff LSTM.
//! - a `.dat` twin of each: whitespace-separated columns, quoted row labels,
//!   `#` header line, ready for gnuplot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::datagen::{DatasetLabel, Family, Kind};
use crate::error::{Error, Result};
use crate::zbdetector::{ClassCount, DetectionCounts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    ZeroBoundary,
    Lstm,
    Ngram,
}

impl Detector {
    pub fn name(self) -> &'static str {
        match self {
            Detector::ZeroBoundary => "zero-boundary",
            Detector::Lstm => "lstm",
            Detector::Ngram => "ngram",
        }
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Detector::ZeroBoundary, Detector::Lstm, Detector::Ngram]
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::config(format!("unknown detector {s:?}")))
    }
}

/// Detection tallies keyed by detector and epoch checkpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultsTable {
    pub entries: BTreeMap<(Detector, usize), DetectionCounts>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Row {
    detector: String,
    epoch: usize,
    family: String,
    kind: String,
    total: usize,
    flagged: usize,
}

impl ResultsTable {
    pub fn insert(&mut self, detector: Detector, epoch: usize, counts: DetectionCounts) {
        self.entries.insert((detector, epoch), counts);
    }

    pub fn get(&self, detector: Detector, epoch: usize) -> Option<&DetectionCounts> {
        self.entries.get(&(detector, epoch))
    }

    /// Epochs recorded for `detector`, ascending.
    pub fn epochs(&self, detector: Detector) -> Vec<usize> {
        self.entries
            .keys()
            .filter(|(d, _)| *d == detector)
            .map(|&(_, e)| e)
            .collect()
    }

    pub fn last_epoch(&self, detector: Detector) -> Option<usize> {
        self.epochs(detector).last().copied()
    }

    /// Fraction of anomalous sequences flagged and fraction of normal
    /// sequences passed, for one detector and epoch.
    pub fn rates(&self, detector: Detector, epoch: usize) -> Option<(f64, f64)> {
        let counts = self.get(detector, epoch)?;
        let (mut anomalies, mut caught, mut normals, mut passed) = (0, 0, 0, 0);
        for (label, c) in &counts.classes {
            if label.kind().is_anomaly() {
                anomalies += c.total;
                caught += c.flagged;
            } else {
                normals += c.total;
                passed += c.total - c.flagged;
            }
        }
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        Some((ratio(caught, anomalies), ratio(passed, normals)))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        ensure_parent(path)?;
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        for (&(detector, epoch), counts) in &self.entries {
            for (label, c) in &counts.classes {
                w.serialize(Row {
                    detector: detector.name().into(),
                    epoch,
                    family: label.family().name().into(),
                    kind: label.kind().name().into(),
                    total: c.total,
                    flagged: c.flagged,
                })
                .map_err(|e| csv_error(path, e))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let mut table = Self::default();
        for row in r.deserialize::<Row>() {
            let row = row.map_err(|e| csv_error(path, e))?;
            let label = DatasetLabel::new(row.family.parse()?, row.kind.parse()?)?;
            if row.flagged > row.total {
                return Err(Error::format(path, "flagged count exceeds class size"));
            }
            let counts = table
                .entries
                .entry((row.detector.parse()?, row.epoch))
                .or_default();
            counts.classes.insert(
                label,
                ClassCount {
                    total: row.total,
                    flagged: row.flagged,
                },
            );
        }
        Ok(table)
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::format(path, e.to_string())
}

/// A small labelled grid: the shape of every report file.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportGrid {
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl ReportGrid {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::format("<report>", e.to_string());
        let mut header = vec![self.corner.clone()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for (label, cells) in &self.rows {
            let mut rec = vec![label.clone()];
            rec.extend(cells.iter().cloned());
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::format("<report>", e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut records = r.records();
        let io = |e: csv::Error| Error::format("<report>", e.to_string());
        let header = records
            .next()
            .ok_or_else(|| Error::format("<report>", "empty report"))?
            .map_err(io)?;
        let mut rows = Vec::new();
        for rec in records {
            let rec = rec.map_err(io)?;
            rows.push((
                rec[0].to_string(),
                rec.iter().skip(1).map(String::from).collect(),
            ));
        }
        Ok(Self {
            corner: header[0].to_string(),
            columns: header.iter().skip(1).map(String::from).collect(),
            rows,
        })
    }

    pub fn to_dat(&self) -> String {
        let mut out = format!("# {} {}\n", self.corner, self.columns.join(" "));
        for (label, cells) in &self.rows {
            writeln!(out, "\"{label}\" {}", cells.join(" ")).expect("write to String");
        }
        out
    }

    pub fn write(&self, csv_path: &Path) -> Result<()> {
        ensure_parent(csv_path)?;
        std::fs::write(csv_path, self.to_csv()?).map_err(|e| Error::io(csv_path, e))?;
        let dat = csv_path.with_extension("dat");
        std::fs::write(&dat, self.to_dat()).map_err(|e| Error::io(&dat, e))
    }
}

/// Per-class counts of all three detectors at the last epoch.
pub fn detection_grid(
    table: &ResultsTable,
    family: Family,
    ngram_window: usize,
) -> Result<ReportGrid> {
    let pick = |d: Detector| -> Result<&DetectionCounts> {
        table
            .last_epoch(d)
            .and_then(|e| table.get(d, e))
            .ok_or_else(|| Error::config(format!("no {} results for {family}", d.name())))
    };
    let detectors = [
        pick(Detector::ZeroBoundary)?,
        pick(Detector::Lstm)?,
        pick(Detector::Ngram)?,
    ];
    let mut kinds = family.anomaly_kinds().to_vec();
    kinds.push(Kind::Normal);
    let rows = kinds
        .into_iter()
        .map(|kind| {
            let label = DatasetLabel::new(family, kind).expect("family kinds");
            let cells = detectors
                .iter()
                .map(|c| c.reported(label).to_string())
                .collect();
            (kind.title().to_string(), cells)
        })
        .collect();
    Ok(ReportGrid {
        corner: "Count".into(),
        columns: vec![
            "Zero".into(),
            "Normal".into(),
            format!("n-gram-{ngram_window}"),
        ],
        rows,
    })
}

/// True-positive and true-negative rates of both networks at every epoch.
pub fn stability_grid(table: &ResultsTable) -> Result<ReportGrid> {
    let epochs = table.epochs(Detector::ZeroBoundary);
    if epochs.is_empty() || epochs != table.epochs(Detector::Lstm) {
        return Err(Error::config(
            "stability report needs both networks evaluated at the same epochs",
        ));
    }
    let rows = epochs
        .iter()
        .map(|&e| {
            let (a, b) = table
                .rates(Detector::ZeroBoundary, e)
                .expect("listed epoch");
            let (c, d) = table.rates(Detector::Lstm, e).expect("listed epoch");
            (
                format!("Epoch {e}"),
                [a, b, c, d].iter().map(|r| format!("{r:.3}")).collect(),
            )
        })
        .collect();
    Ok(ReportGrid {
        corner: "Counts".into(),
        columns: ["A", "B", "C", "D"].map(String::from).to_vec(),
        rows,
    })
}
