//! End-to-end runs of the experiment pipeline on miniature settings.

use std::fs;
use std::path::Path;

use zero_boundary::datagen::{read_corpus, Family, Kind};
use zero_boundary::harness::{
    cmd_calibrate, cmd_evaluate, cmd_generate, cmd_report, cmd_train, run_all, Detector,
    ExperimentConfig, NetRole, Profile, ResultsTable, Settings,
};
use zero_boundary::seqnn::NetConfig;
use zero_boundary::zbdetector::{DetectorState, ScanMode};
use zero_boundary::Error;

fn tiny(family: Family, out: &Path) -> ExperimentConfig {
    let small = NetConfig {
        embed_dim: 8,
        lstm_layers: 1,
        lstm_hidden: 12,
        mlp_shape: vec![8, 4, 8],
        bottleneck_index: Some(1),
        vocab: NetConfig::desk().vocab,
    };
    ExperimentConfig {
        seed: 3,
        train_size: 120,
        test_size: 30,
        anomaly_size: 20,
        baseline_net: NetConfig {
            mlp_shape: vec![8],
            bottleneck_index: None,
            ..small.clone()
        },
        net: small,
        epochs: 2,
        nu: 0.05,
        out: out.to_path_buf(),
        ..ExperimentConfig::preset(Profile::Desk, family)
    }
}

fn line_count(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn generate_writes_every_corpus_with_requested_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let c = tiny(Family::Json, dir.path());
    let written = cmd_generate(&c).unwrap();
    assert_eq!(written.len(), 2 + c.family.anomaly_kinds().len());
    assert_eq!(line_count(&c.corpus_path(Kind::Normal)), 120);
    assert_eq!(line_count(&c.test_corpus_path()), 30);
    for &kind in c.family.anomaly_kinds() {
        let corpus = read_corpus(&c.corpus_path(kind)).unwrap();
        assert_eq!(corpus.len(), 20);
        assert!(corpus.sequences().iter().all(|s| !c.family.is_valid(s)));
    }
}

#[test]
fn generation_is_deterministic_and_seed_sensitive() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ca = tiny(Family::Ipv4, a.path());
    let cb = tiny(Family::Ipv4, b.path());
    cmd_generate(&ca).unwrap();
    cmd_generate(&cb).unwrap();
    let read = |c: &ExperimentConfig| fs::read(c.corpus_path(Kind::Digit)).unwrap();
    assert_eq!(read(&ca), read(&cb));

    let c = tempfile::tempdir().unwrap();
    let cc = ExperimentConfig {
        seed: 4,
        ..tiny(Family::Ipv4, c.path())
    };
    cmd_generate(&cc).unwrap();
    assert_ne!(read(&ca), read(&cc));
}

#[test]
fn families_draw_from_separate_streams() {
    let c = tiny(Family::Ipv4, Path::new("x"));
    let d = tiny(Family::Json, Path::new("x"));
    assert_ne!(c.derive_seed(1), d.derive_seed(1));
    assert_ne!(c.derive_seed(1), c.derive_seed(2));
}

#[test]
fn missing_inputs_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let c = tiny(Family::Ipv4, dir.path());
    assert!(matches!(cmd_train(&c), Err(Error::Config(_))));
    assert!(matches!(cmd_evaluate(&c), Err(Error::Config(_))));
    assert!(matches!(cmd_report(&c), Err(Error::Config(_))));
    cmd_generate(&c).unwrap();
    assert!(matches!(cmd_calibrate(&c), Err(Error::Config(_))));
}

#[test]
fn full_run_produces_consistent_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let c = tiny(Family::Ipv4, dir.path());
    let table = run_all(&c).unwrap();

    for epoch in 1..=c.epochs {
        assert!(c.checkpoint_path(NetRole::ZeroBoundary, epoch).exists());
        assert!(c.checkpoint_path(NetRole::Baseline, epoch).exists());
        let state = DetectorState::load(&c.state_path(epoch)).unwrap();
        assert!(state.array.is_calibrated());
        // digits, '.', and the end delimiter
        assert_eq!(state.array.models().len(), 12);

        // calibration corpus is never flagged
        let net = state.load_net().unwrap();
        let (_, normal) = zero_boundary::harness::load_normal(&c).unwrap();
        let verdicts = state
            .array
            .detect_batch(&net, &normal, ScanMode::FirstOffense)
            .unwrap();
        assert!(verdicts.iter().all(|v| !v.is_anomaly));
    }
    assert_eq!(line_count(&c.losses_path()), 1 + 2 * c.epochs);

    assert_eq!(table.epochs(Detector::ZeroBoundary), vec![1, 2]);
    assert_eq!(table.epochs(Detector::Lstm), vec![1, 2]);
    assert_eq!(table.epochs(Detector::Ngram), vec![0]);
    let reread = ResultsTable::read_csv(&c.counts_path()).unwrap();
    assert_eq!(reread, table);

    // every labelled class is accounted for in full
    for detector in [Detector::ZeroBoundary, Detector::Lstm, Detector::Ngram] {
        let epoch = table.last_epoch(detector).unwrap();
        let counts = table.get(detector, epoch).unwrap();
        assert_eq!(counts.classes.len(), 5);
        let total: usize = counts.classes.values().map(|k| k.total).sum();
        assert_eq!(total, 30 + 4 * 20);
    }

    let report = c.report_dir();
    for name in ["ipv4_detection", "ipv4_stability"] {
        assert!(report.join(format!("{name}.csv")).exists());
        assert!(report.join(format!("{name}.dat")).exists());
    }
    let detection = fs::read_to_string(report.join("ipv4_detection.csv")).unwrap();
    assert!(detection.starts_with("Count,Zero,Normal,n-gram-4"));
}

#[test]
fn reruns_reproduce_byte_identical_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ca = ExperimentConfig {
        epochs: 1,
        ..tiny(Family::Json, a.path())
    };
    let cb = ExperimentConfig {
        out: b.path().to_path_buf(),
        ..ca.clone()
    };
    run_all(&ca).unwrap();
    run_all(&cb).unwrap();
    assert_eq!(
        fs::read(ca.counts_path()).unwrap(),
        fs::read(cb.counts_path()).unwrap()
    );
    for name in ["json_detection.csv", "json_stability.csv"] {
        assert_eq!(
            fs::read(ca.report_dir().join(name)).unwrap(),
            fs::read(cb.report_dir().join(name)).unwrap()
        );
    }
}

#[test]
fn settings_file_resolves_per_family_overrides() {
    let text = "profile = desk\nseed = 9\nepochs = 3\njson.epochs = 5\n";
    let settings = Settings::from_text(text, Path::new("test.conf")).unwrap();
    let ipv4 = settings.resolve(Family::Ipv4).unwrap();
    let json = settings.resolve(Family::Json).unwrap();
    assert_eq!((ipv4.seed, ipv4.epochs), (9, 3));
    assert_eq!((json.seed, json.epochs), (9, 5));
}
