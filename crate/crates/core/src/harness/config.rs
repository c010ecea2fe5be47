//! Experiment settings.
//!
//! A config file is flat `key = value` text (see the README for every key).
//! Keys apply to both families; a `ipv4.` or `json.` prefix restricts a key
//! to one family and wins over the unprefixed form.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::DEFAULT_CUTOFF;
use crate::datagen::Family;
use crate::error::{Error, Result};
use crate::kv;
use crate::ocsvm::KernelParams;
use crate::seqnn::{NetConfig, TrainOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Full-size networks and corpora.
    Paper,
    /// Small networks and corpora for quick runs.
    Desk,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            _ => Err(Error::config(format!(
                "unknown profile {s:?} (expected paper or desk)"
            ))),
        }
    }
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        }
    }
}

/// Width of the RBF kernel used by the SVM array.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaMode {
    /// `gamma = scale * e`, a multiple of the context dimension.
    Dimension(f64),
    Fixed(f64),
}

impl FromStr for GammaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::config(format!(
                "gamma must be `dim`, `<k>*dim` or a number, got {s:?}"
            ))
        };
        let (value, per_dim) = match s.strip_suffix("dim") {
            Some("") => return Ok(GammaMode::Dimension(1.0)),
            Some(k) => (k.trim_end().strip_suffix('*').ok_or_else(bad)?, true),
            None => (s, false),
        };
        let g: f64 = value.trim().parse().map_err(|_| bad())?;
        KernelParams::new(g)?;
        Ok(if per_dim {
            GammaMode::Dimension(g)
        } else {
            GammaMode::Fixed(g)
        })
    }
}

impl GammaMode {
    pub fn kernel(self, context_dim: usize) -> Result<KernelParams> {
        match self {
            GammaMode::Dimension(scale) => KernelParams::new(scale * context_dim as f64),
            GammaMode::Fixed(g) => KernelParams::new(g),
        }
    }
}

/// Everything one family's experiment needs.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub profile: Profile,
    pub seed: u64,
    /// Normal sequences generated for training; the last `validation_fraction` is held back.
    pub train_size: usize,
    pub validation_fraction: f64,
    /// Held-out normal sequences for evaluation.
    pub test_size: usize,
    /// Sequences per anomaly class.
    pub anomaly_size: usize,
    pub net: NetConfig,
    pub baseline_net: NetConfig,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub clip_norm: Option<f64>,
    pub nu: f64,
    pub gamma: GammaMode,
    pub ngram_window: usize,
    pub lstm_cutoff: f64,
    pub subsample_cap: usize,
    /// Root output directory; this family writes below `out/<family>/`.
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn preset(profile: Profile, family: Family) -> Self {
        let (epochs, ngram_window) = match family {
            Family::Ipv4 => (2, 4),
            Family::Json => (4, 3),
        };
        let base = Self {
            family,
            profile,
            seed: 0,
            train_size: 10_000,
            validation_fraction: 0.1,
            test_size: 1000,
            anomaly_size: 1000,
            net: NetConfig::paper(),
            baseline_net: NetConfig::paper_baseline(),
            epochs,
            batch_size: 32,
            learning_rate: 0.001,
            clip_norm: Some(5.0),
            nu: 0.001,
            gamma: GammaMode::Dimension(1.0),
            ngram_window,
            lstm_cutoff: DEFAULT_CUTOFF,
            subsample_cap: 4000,
            out: PathBuf::from("out"),
        };
        match profile {
            Profile::Paper => base,
            Profile::Desk => Self {
                train_size: 2000,
                test_size: 500,
                anomaly_size: 500,
                net: NetConfig::desk(),
                baseline_net: NetConfig::desk_baseline(),
                batch_size: 2,
                learning_rate: 0.002,
                // the small corpus leaves held-out contexts just outside a boundary at gamma = e
                gamma: GammaMode::Dimension(2.0),
                ..base
            },
        }
    }

    /// Number of leading normal sequences the networks and SVMs train on.
    pub fn train_split(&self) -> usize {
        let val = (self.train_size as f64 * self.validation_fraction).round() as usize;
        self.train_size - val.min(self.train_size)
    }

    pub fn train_options(&self) -> TrainOptions {
        TrainOptions {
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            clip_norm: self.clip_norm,
        }
    }

    pub fn family_dir(&self) -> PathBuf {
        self.out.join(self.family.name())
    }

    pub fn validate(&self) -> Result<()> {
        self.net.validate()?;
        self.baseline_net.validate()?;
        if self.net.bottleneck_index.is_none() {
            return Err(Error::config(
                "the zero-boundary net needs a bottleneck layer",
            ));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::config("validation_fraction must lie in [0, 1)"));
        }
        if self.train_split() == 0 {
            return Err(Error::config("training split is empty"));
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::config("epochs and batch_size must be positive"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate must be positive"));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::config("nu must lie in (0, 1]"));
        }
        if self.ngram_window == 0 || self.subsample_cap == 0 {
            return Err(Error::config(
                "ngram_window and subsample_cap must be positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.lstm_cutoff) {
            return Err(Error::config("lstm_cutoff must lie in [0, 1]"));
        }
        self.gamma.kernel(self.net.context_dim())?;
        Ok(())
    }
}

/// Which families a command runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySelection {
    One(Family),
    Both,
}

impl FromStr for FamilySelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "both" {
            Ok(FamilySelection::Both)
        } else {
            Ok(FamilySelection::One(s.parse()?))
        }
    }
}

impl FamilySelection {
    pub fn families(self) -> Vec<Family> {
        match self {
            FamilySelection::One(f) => vec![f],
            FamilySelection::Both => Family::ALL.to_vec(),
        }
    }
}

/// Raw settings from a config file plus command-line overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "profile",
    "family",
    "seed",
    "out",
    "train_size",
    "validation_fraction",
    "test_size",
    "anomaly_size",
    "epochs",
    "batch_size",
    "learning_rate",
    "clip_norm",
    "nu",
    "gamma",
    "ngram_window",
    "lstm_cutoff",
    "subsample_cap",
    "embed_dim",
    "lstm_layers",
    "lstm_hidden",
    "mlp_shape",
    "bottleneck_index",
    "baseline_mlp_shape",
];

/// Keys that only make sense once per run.
const GLOBAL_KEYS: &[&str] = &["profile", "family", "seed", "out"];

fn check_key(key: &str) -> Result<()> {
    let bare = match key.split_once('.') {
        Some((fam, rest)) => {
            fam.parse::<Family>()?;
            if GLOBAL_KEYS.contains(&rest) {
                return Err(Error::config(format!("{rest} cannot be set per family")));
            }
            rest
        }
        None => key,
    };
    if KEYS.contains(&bare) {
        Ok(())
    } else {
        Err(Error::config(format!("unknown config key {key:?}")))
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("bad value for {key}: {value:?}")))
}

/// A probability written as a decimal or as a fraction `a/b`.
pub fn parse_probability(value: &str) -> Result<f64> {
    let p = match value.split_once('/') {
        Some((a, b)) => {
            parse::<f64>("lstm_cutoff", a.trim())? / parse::<f64>("lstm_cutoff", b.trim())?
        }
        None => parse("lstm_cutoff", value)?,
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("probability out of range: {value}")));
    }
    Ok(p)
}

fn parse_widths(key: &str, value: &str) -> Result<Vec<usize>> {
    value.split(',').map(|w| parse(key, w.trim())).collect()
}

impl Settings {
    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let values = kv::parse(text, origin)?;
        for key in values.keys() {
            check_key(key)?;
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }

    /// Sets or replaces one key; used for command-line flags.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        check_key(key)?;
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    fn get(&self, family: Family, key: &str) -> Option<&str> {
        self.values
            .get(&format!("{}.{key}", family.name()))
            .or_else(|| self.values.get(key))
            .map(String::as_str)
    }

    pub fn profile(&self) -> Result<Profile> {
        self.values
            .get("profile")
            .map_or(Ok(Profile::Desk), |p| p.parse())
    }

    pub fn families(&self) -> Result<Vec<Family>> {
        Ok(self
            .values
            .get("family")
            .map_or(Ok(FamilySelection::Both), |f| f.parse())?
            .families())
    }

    /// The profile preset for `family` with every applicable key applied.
    pub fn resolve(&self, family: Family) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::preset(self.profile()?, family);
        for key in KEYS {
            let Some(v) = self.get(family, key) else {
                continue;
            };
            match *key {
                "profile" | "family" => {}
                "seed" => c.seed = parse(key, v)?,
                "out" => c.out = PathBuf::from(v),
                "train_size" => c.train_size = parse(key, v)?,
                "validation_fraction" => c.validation_fraction = parse(key, v)?,
                "test_size" => c.test_size = parse(key, v)?,
                "anomaly_size" => c.anomaly_size = parse(key, v)?,
                "epochs" => c.epochs = parse(key, v)?,
                "batch_size" => c.batch_size = parse(key, v)?,
                "learning_rate" => c.learning_rate = parse(key, v)?,
                "clip_norm" => {
                    let n: f64 = parse(key, v)?;
                    c.clip_norm = (n > 0.0).then_some(n);
                }
                "nu" => c.nu = parse(key, v)?,
                "gamma" => c.gamma = v.parse()?,
                "ngram_window" => c.ngram_window = parse(key, v)?,
                "lstm_cutoff" => c.lstm_cutoff = parse_probability(v)?,
                "subsample_cap" => c.subsample_cap = parse(key, v)?,
                "embed_dim" => {
                    c.net.embed_dim = parse(key, v)?;
                    c.baseline_net.embed_dim = c.net.embed_dim;
                }
                "lstm_layers" => {
                    c.net.lstm_layers = parse(key, v)?;
                    c.baseline_net.lstm_layers = c.net.lstm_layers;
                }
                "lstm_hidden" => {
                    c.net.lstm_hidden = parse(key, v)?;
                    c.baseline_net.lstm_hidden = c.net.lstm_hidden;
                }
                "mlp_shape" => c.net.mlp_shape = parse_widths(key, v)?,
                "bottleneck_index" => c.net.bottleneck_index = Some(parse(key, v)?),
                "baseline_mlp_shape" => c.baseline_net.mlp_shape = parse_widths(key, v)?,
                _ => unreachable!("checked by check_key"),
            }
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(text: &str) -> Result<Settings> {
        Settings::from_text(text, Path::new("test.conf"))
    }

    #[test]
    fn presets_carry_the_expected_defaults() {
        let ip = ExperimentConfig::preset(Profile::Paper, Family::Ipv4);
        assert_eq!((ip.epochs, ip.ngram_window, ip.train_size), (2, 4, 10_000));
        assert_eq!(ip.nu, 0.001);
        assert_eq!(ip.lstm_cutoff, 1.0 / 8103.0);
        let js = ExperimentConfig::preset(Profile::Paper, Family::Json);
        assert_eq!((js.epochs, js.ngram_window), (4, 3));
        let desk = ExperimentConfig::preset(Profile::Desk, Family::Ipv4);
        assert_eq!(desk.net.context_dim(), 16);
        assert_eq!(desk.net.mlp_shape, vec![64, 32, 16, 32, 64]);
        assert_eq!((desk.net.lstm_layers, desk.net.lstm_hidden), (2, 64));
        assert_eq!(desk.train_size, 2000);
        assert_eq!(desk.train_split(), 1800);
        desk.validate().unwrap();
        ip.validate().unwrap();
        assert_eq!(ip.gamma.kernel(128).unwrap().gamma(), 128.0);
        assert_eq!(desk.gamma.kernel(16).unwrap().gamma(), 32.0);
    }

    #[test]
    fn gamma_modes_parse() {
        assert_eq!(
            "dim".parse::<GammaMode>().unwrap(),
            GammaMode::Dimension(1.0)
        );
        assert_eq!(
            "2*dim".parse::<GammaMode>().unwrap(),
            GammaMode::Dimension(2.0)
        );
        assert_eq!(
            "0.5 * dim".parse::<GammaMode>().unwrap(),
            GammaMode::Dimension(0.5)
        );
        assert_eq!("3".parse::<GammaMode>().unwrap(), GammaMode::Fixed(3.0));
        for bad in ["2dim", "x*dim", "-1", "0*dim", "wide"] {
            assert!(bad.parse::<GammaMode>().is_err(), "{bad}");
        }
    }

    #[test]
    fn family_prefix_wins() {
        let s =
            settings("epochs = 3\njson.epochs = 5\nlstm_cutoff = 1/8103\ngamma = 2.5\n").unwrap();
        assert_eq!(s.resolve(Family::Ipv4).unwrap().epochs, 3);
        assert_eq!(s.resolve(Family::Json).unwrap().epochs, 5);
        let c = s.resolve(Family::Json).unwrap();
        assert_eq!(c.lstm_cutoff, 1.0 / 8103.0);
        assert_eq!(c.gamma, GammaMode::Fixed(2.5));
    }

    #[test]
    fn flags_override_file_values() {
        let mut s = settings("seed = 1\nprofile = paper\n").unwrap();
        s.set("seed", "7").unwrap();
        s.set("profile", "desk").unwrap();
        let c = s.resolve(Family::Ipv4).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.profile, Profile::Desk);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(settings("epoch = 2\n").is_err());
        assert!(settings("xml.epochs = 2\n").is_err());
        assert!(settings("json.seed = 2\n").is_err());
        assert!(settings("nu = 2\n").unwrap().resolve(Family::Ipv4).is_err());
        assert!(
            settings("gamma = -1\n").is_err()
                || settings("gamma = -1\n")
                    .unwrap()
                    .resolve(Family::Ipv4)
                    .is_err()
        );
        assert!(settings("lstm_cutoff = 3/2\n")
            .unwrap()
            .resolve(Family::Ipv4)
            .is_err());
        assert!(settings("bottleneck_index = 9\n")
            .unwrap()
            .resolve(Family::Ipv4)
            .is_err());
    }

    #[test]
    fn family_selection() {
        assert_eq!(
            settings("").unwrap().families().unwrap(),
            Family::ALL.to_vec()
        );
        assert_eq!(
            settings("family = json\n").unwrap().families().unwrap(),
            vec![Family::Json]
        );
    }
}
