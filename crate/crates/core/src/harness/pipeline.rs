use std::path::{Path, PathBuf};

use log::info;

use super::config::ExperimentConfig;
use super::results::{detection_grid, stability_grid, Detector, ResultsTable};
use crate::baselines::{LstmThresholdDetector, NgramModel};
use crate::datagen::{gen_corpus, read_corpus, write_corpus, DatasetLabel, Kind, LabeledCorpus};
use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::seqnn::SequenceNet;
use crate::zbdetector::{build_context_sets, ArrayOptions, DetectorState, OcsvmArray};

/// The two networks trained per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetRole {
    ZeroBoundary,
    Baseline,
}

impl NetRole {
    fn file_stem(self) -> &'static str {
        match self {
            NetRole::ZeroBoundary => "zero-boundary",
            NetRole::Baseline => "lstm",
        }
    }
}

// Seed derivation tags.
const TAG_TRAIN_CORPUS: u64 = 1;
const TAG_TEST_CORPUS: u64 = 2;
const TAG_ANOMALY_CORPUS: u64 = 10;
const TAG_ZB_INIT: u64 = 20;
const TAG_ZB_TRAIN: u64 = 21;
const TAG_BASELINE_INIT: u64 = 22;
const TAG_BASELINE_TRAIN: u64 = 23;
const TAG_SUBSAMPLE: u64 = 24;

impl ExperimentConfig {
    /// Independent seed for one purpose within this family's run.
    pub fn derive_seed(&self, tag: u64) -> u64 {
        RngStream::with_stream(self.seed, 1 + self.family as u64)
            .child(tag)
            .next_u64()
    }

    pub fn corpus_path(&self, kind: Kind) -> PathBuf {
        let name = match kind {
            Kind::Normal => "train".to_string(),
            other => other.name().to_string(),
        };
        self.family_dir().join("corpus").join(format!("{name}.txt"))
    }

    pub fn test_corpus_path(&self) -> PathBuf {
        self.family_dir().join("corpus").join("test.txt")
    }

    pub fn checkpoint_path(&self, role: NetRole, epoch: usize) -> PathBuf {
        self.family_dir()
            .join("checkpoints")
            .join(format!("{}-epoch-{epoch}.ckpt", role.file_stem()))
    }

    pub fn losses_path(&self) -> PathBuf {
        self.family_dir().join("checkpoints").join("losses.csv")
    }

    pub fn state_path(&self, epoch: usize) -> PathBuf {
        self.family_dir()
            .join("detectors")
            .join(format!("zero-boundary-epoch-{epoch}.state"))
    }

    pub fn counts_path(&self) -> PathBuf {
        self.family_dir().join("counts.csv")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.out.join("results")
    }

    fn label(&self, kind: Kind) -> DatasetLabel {
        DatasetLabel::new(self.family, kind).expect("kinds come from the family")
    }
}

/// Writes the normal training corpus, the held-out normal test corpus and
/// one corpus per anomaly class, each with its manifest.
pub fn cmd_generate(c: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    c.validate()?;
    let mut written = Vec::new();
    let mut emit = |path: PathBuf, kind: Kind, count: usize, seed: u64| -> Result<()> {
        let corpus = gen_corpus(c.family, kind, count, seed)?;
        write_corpus(&path, c.label(kind), &corpus)?;
        info!(
            "{}: wrote {count} sequences to {}",
            c.family,
            path.display()
        );
        written.push(path);
        Ok(())
    };
    emit(
        c.corpus_path(Kind::Normal),
        Kind::Normal,
        c.train_size,
        c.derive_seed(TAG_TRAIN_CORPUS),
    )?;
    emit(
        c.test_corpus_path(),
        Kind::Normal,
        c.test_size,
        c.derive_seed(TAG_TEST_CORPUS),
    )?;
    for (i, &kind) in c.family.anomaly_kinds().iter().enumerate() {
        let seed = c.derive_seed(TAG_ANOMALY_CORPUS + i as u64);
        emit(c.corpus_path(kind), kind, c.anomaly_size, seed)?;
    }
    Ok(written)
}

fn read_existing(path: &Path) -> Result<LabeledCorpus> {
    if !path.exists() {
        return Err(Error::config(format!(
            "corpus {} not found; run `generate` first",
            path.display()
        )));
    }
    read_corpus(path)
}

type Sequences = Vec<Vec<u8>>;

/// The generated normal corpus: training split and the whole corpus (training + validation).
pub fn load_normal(c: &ExperimentConfig) -> Result<(Sequences, Sequences)> {
    let all = read_existing(&c.corpus_path(Kind::Normal))?.sequences();
    let split = c.train_split().min(all.len());
    Ok((all[..split].to_vec(), all))
}

/// Held-out normals followed by every anomaly class.
pub fn load_evaluation(c: &ExperimentConfig) -> Result<LabeledCorpus> {
    let mut corpus = read_existing(&c.test_corpus_path())?;
    for &kind in c.family.anomaly_kinds() {
        corpus
            .entries
            .extend(read_existing(&c.corpus_path(kind))?.entries);
    }
    Ok(corpus)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub zero_boundary_losses: Vec<f64>,
    pub baseline_losses: Vec<f64>,
}

fn train_role(c: &ExperimentConfig, role: NetRole, corpus: &[Vec<u8>]) -> Result<Vec<f64>> {
    let (config, init, stream) = match role {
        NetRole::ZeroBoundary => (&c.net, TAG_ZB_INIT, TAG_ZB_TRAIN),
        NetRole::Baseline => (&c.baseline_net, TAG_BASELINE_INIT, TAG_BASELINE_TRAIN),
    };
    let mut net = SequenceNet::new(config.clone(), &mut RngStream::new(c.derive_seed(init)))?;
    let mut rng = RngStream::new(c.derive_seed(stream));
    net.train_with_callback(corpus, &c.train_options(), &mut rng, |epoch, net, loss| {
        info!(
            "{} {}: epoch {epoch} loss {loss:.4}",
            c.family,
            role.file_stem()
        );
        net.save(&c.checkpoint_path(role, epoch))
    })
}

/// Trains both networks on the training split, checkpointing after every epoch.
pub fn cmd_train(c: &ExperimentConfig) -> Result<TrainReport> {
    c.validate()?;
    let (train, _) = load_normal(c)?;
    let report = TrainReport {
        zero_boundary_losses: train_role(c, NetRole::ZeroBoundary, &train)?,
        baseline_losses: train_role(c, NetRole::Baseline, &train)?,
    };
    let path = c.losses_path();
    let mut w = csv::Writer::from_path(&path).map_err(|e| Error::format(&path, e.to_string()))?;
    w.write_record(["net", "epoch", "loss"])
        .map_err(|e| Error::format(&path, e.to_string()))?;
    for (role, losses) in [
        (NetRole::ZeroBoundary, &report.zero_boundary_losses),
        (NetRole::Baseline, &report.baseline_losses),
    ] {
        for (i, loss) in losses.iter().enumerate() {
            w.write_record([
                role.file_stem().to_string(),
                (i + 1).to_string(),
                loss.to_string(),
            ])
            .map_err(|e| Error::format(&path, e.to_string()))?;
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(report)
}

/// Builds, trains and calibrates the SVM array for one checkpoint.
pub fn calibrate_checkpoint(c: &ExperimentConfig, checkpoint: &Path) -> Result<DetectorState> {
    let net = SequenceNet::load(checkpoint)?;
    let (train, calibration) = load_normal(c)?;
    let sets = build_context_sets(&net, &train)?;
    let mut opts = ArrayOptions::new(c.nu, c.gamma.kernel(net.context_dim())?);
    opts.subsample_cap = c.subsample_cap;
    let array = OcsvmArray::train(&sets, &opts, &RngStream::new(c.derive_seed(TAG_SUBSAMPLE)))?
        .calibrate(&net, &calibration)?;
    Ok(DetectorState {
        checkpoint: checkpoint.to_string_lossy().into_owned(),
        net_config: net.config().clone(),
        array,
    })
}

/// Writes one detector state per zero-boundary checkpoint.
pub fn cmd_calibrate(c: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    c.validate()?;
    let mut written = Vec::new();
    for epoch in 1..=c.epochs {
        let ckpt = c.checkpoint_path(NetRole::ZeroBoundary, epoch);
        if !ckpt.exists() {
            return Err(Error::config(format!(
                "checkpoint {} not found; run `train` first",
                ckpt.display()
            )));
        }
        let state = calibrate_checkpoint(c, &ckpt)?;
        let path = c.state_path(epoch);
        state.save(&path)?;
        info!(
            "{} epoch {epoch}: {} symbol models calibrated",
            c.family,
            state.array.models().len()
        );
        written.push(path);
    }
    Ok(written)
}

/// Scores every detector, at every checkpoint for the two networks, and
/// writes the family's `counts.csv`.
pub fn cmd_evaluate(c: &ExperimentConfig) -> Result<ResultsTable> {
    c.validate()?;
    let corpus = load_evaluation(c)?;
    let (_, normal) = load_normal(c)?;
    let mut table = ResultsTable::default();
    for epoch in 1..=c.epochs {
        let state = DetectorState::load(&c.state_path(epoch))?;
        let net = state.load_net()?;
        table.insert(
            Detector::ZeroBoundary,
            epoch,
            state.array.evaluate(&net, &corpus)?,
        );
        let baseline = SequenceNet::load(&c.checkpoint_path(NetRole::Baseline, epoch))?;
        let lstm = LstmThresholdDetector::new(baseline, c.lstm_cutoff)?;
        table.insert(Detector::Lstm, epoch, lstm.evaluate(&corpus)?);
        let (tp, tn) = table
            .rates(Detector::ZeroBoundary, epoch)
            .expect("just inserted");
        info!(
            "{} epoch {epoch}: zero-boundary TP {tp:.3} TN {tn:.3}",
            c.family
        );
    }
    let ngram = NgramModel::train(&normal, c.ngram_window)?;
    table.insert(Detector::Ngram, 0, ngram.evaluate(&corpus)?);
    table.write_csv(&c.counts_path())?;
    Ok(table)
}

/// Turns the family's `counts.csv` into the detection and stability reports.
pub fn cmd_report(c: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let counts = c.counts_path();
    if !counts.exists() {
        return Err(Error::config(format!(
            "{} not found; run `evaluate` first",
            counts.display()
        )));
    }
    let table = ResultsTable::read_csv(&counts)?;
    let dir = c.report_dir();
    let detection = dir.join(format!("{}_detection.csv", c.family.name()));
    detection_grid(&table, c.family, c.ngram_window)?.write(&detection)?;
    let stability = dir.join(format!("{}_stability.csv", c.family.name()));
    stability_grid(&table)?.write(&stability)?;
    Ok(vec![detection, stability])
}

/// generate, train, calibrate, evaluate and report for one family.
pub fn run_all(c: &ExperimentConfig) -> Result<ResultsTable> {
    cmd_generate(c)?;
    cmd_train(c)?;
    cmd_calibrate(c)?;
    let table = cmd_evaluate(c)?;
    cmd_report(c)?;
    Ok(table)
}
