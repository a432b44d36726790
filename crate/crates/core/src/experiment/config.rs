use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the dataset file is turned into an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    /// Edge list; weighted out-neighborhood coverage with degree-based costs.
    Coverage,
    /// Feature CSV; facility location over `exp(−dist)` similarities.
    Facility,
    /// Feature CSV (or kernel CSV with `matrix_input`); `log det(I + α·M_S)`.
    Logdet,
    /// `word,element,value` CSV; sum over words of square-rooted coverage.
    Saturating,
    /// Symmetric PSD kernel CSV; SLC log-density mode finding through the
    /// weak-submodularity reduction with slack `gamma`.
    Slc,
}

impl ObjectiveKind {
    pub fn id(self) -> &'static str {
        match self {
            ObjectiveKind::Coverage => "coverage",
            ObjectiveKind::Facility => "facility",
            ObjectiveKind::Logdet => "logdet",
            ObjectiveKind::Saturating => "saturating",
            ObjectiveKind::Slc => "slc",
        }
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coverage" => Ok(ObjectiveKind::Coverage),
            "facility" => Ok(ObjectiveKind::Facility),
            "logdet" => Ok(ObjectiveKind::Logdet),
            "saturating" => Ok(ObjectiveKind::Saturating),
            "slc" => Ok(ObjectiveKind::Slc),
            other => Err(Error::Config(format!(
                "unknown objective `{other}` (expected coverage, facility, logdet, saturating or slc)"
            ))),
        }
    }
}

/// Registered algorithms, in the order used to sort result rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Greedy,
    DistortedGreedy,
    Sieve,
    DistortedStreaming,
    ThresholdStreaming,
    Distributed,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Greedy,
        Algorithm::DistortedGreedy,
        Algorithm::Sieve,
        Algorithm::DistortedStreaming,
        Algorithm::ThresholdStreaming,
        Algorithm::Distributed,
        Algorithm::BruteForce,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::DistortedGreedy => "distorted-greedy",
            Algorithm::Sieve => "sieve",
            Algorithm::DistortedStreaming => "distorted-streaming",
            Algorithm::ThresholdStreaming => "threshold-streaming",
            Algorithm::Distributed => "distributed",
            Algorithm::BruteForce => "brute-force",
        }
    }

    /// Whether the algorithm reads the ground set as a stream.
    pub fn is_streaming(self) -> bool {
        matches!(
            self,
            Algorithm::Sieve | Algorithm::DistortedStreaming | Algorithm::ThresholdStreaming
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// Element order seen by streaming algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamOrder {
    Natural,
    /// Permutation drawn from the cell's seed.
    Shuffled,
    /// One element id per line.
    File(PathBuf),
}

impl FromStr for StreamOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(StreamOrder::Natural),
            "shuffled" => Ok(StreamOrder::Shuffled),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(StreamOrder::File(PathBuf::from(p))),
                _ => Err(Error::Config(format!(
                    "stream order `{s}` is not natural, shuffled or file:<path>"
                ))),
            },
        }
    }
}

/// Flat experiment description. Every key is optional in the file except
/// `dataset`; command-line flags override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    /// Label for the `dataset` column; defaults to the file stem.
    pub name: Option<String>,
    pub objective: ObjectiveKind,
    /// Whether CSV inputs start with a header row.
    pub header: bool,
    /// Degree threshold of the coverage cost `1 + max(0, d_u − q)`.
    pub q: i64,
    /// Scale `α` of the log-det objective.
    pub alpha: f64,
    /// Distances are multiplied by this before `exp(−·)`.
    pub metric_scale: f64,
    /// Treat the log-det dataset as a kernel matrix rather than features.
    pub matrix_input: bool,
    /// Uniform per-element cost for objectives without a built-in cost.
    pub cost: f64,
    pub cost_file: Option<PathBuf>,
    /// Weak-submodularity slack of the SLC objective.
    pub gamma: f64,
    /// Largest support of the SLC density; defaults to the ground-set size.
    pub support: Option<usize>,
    /// Where to write `dense_id,original_id` for edge-list datasets.
    pub id_map: Option<PathBuf>,
    pub algorithms: Vec<String>,
    pub k: Vec<usize>,
    pub eps: f64,
    pub delta: f64,
    /// Trade-off parameter of `threshold-streaming`.
    pub r: f64,
    pub machines: usize,
    pub seeds: Vec<u64>,
    /// `natural`, `shuffled` or `file:<path>`.
    pub stream_order: String,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: PathBuf::new(),
            name: None,
            objective: ObjectiveKind::Coverage,
            header: false,
            q: 6,
            alpha: 1.0,
            metric_scale: 1.0,
            matrix_input: false,
            cost: 0.0,
            cost_file: None,
            gamma: 0.0,
            support: None,
            id_map: None,
            algorithms: vec!["greedy".into()],
            k: vec![5],
            eps: 0.1,
            delta: 0.1,
            r: 1.0,
            machines: 2,
            seeds: vec![0],
            stream_order: "natural".into(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a TOML file. Relative paths inside it are resolved against the
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = base.join(&*p);
            }
        };
        fix(&mut cfg.dataset);
        for p in [&mut cfg.cost_file, &mut cfg.id_map, &mut cfg.out].into_iter().flatten() {
            fix(p);
        }
        if let Ok(StreamOrder::File(mut p)) = cfg.stream_order.parse() {
            fix(&mut p);
            cfg.stream_order = format!("file:{}", p.display());
        }
        Ok(cfg)
    }

    pub fn algorithms(&self) -> Result<Vec<Algorithm>> {
        self.algorithms.iter().map(|s| s.parse()).collect()
    }

    pub fn stream_order(&self) -> Result<StreamOrder> {
        self.stream_order.parse()
    }

    pub fn dataset_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.dataset
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.dataset.as_os_str().is_empty() {
            return Err(Error::Config("no dataset given".into()));
        }
        if self.algorithms()?.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return Err(Error::Config("k values must be given and at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta), ("r", self.r), ("alpha", self.alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.metric_scale.is_finite() && self.metric_scale > 0.0) {
            return Err(Error::Config(format!("metric_scale must be positive, got {}", self.metric_scale)));
        }
        if !(self.cost.is_finite() && self.cost >= 0.0) {
            return Err(Error::Config(format!("cost must be non-negative, got {}", self.cost)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Config(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        if self.machines == 0 {
            return Err(Error::Config("machines must be at least 1".into()));
        }
        self.stream_order()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trips() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>().unwrap(), a);
        }
        assert!(matches!("nope".parse::<Algorithm>(), Err(Error::UnknownAlgorithm(_))));
    }

    #[test]
    fn toml_defaults_and_overrides() {
        let cfg = ExperimentConfig::from_toml(
            "dataset = \"g.txt\"\nalgorithms = [\"greedy\", \"sieve\"]\nk = [1, 2]\nstream_order = \"shuffled\"\n",
        )
        .unwrap();
        assert_eq!(cfg.q, 6);
        assert_eq!(cfg.k, vec![1, 2]);
        assert_eq!(cfg.stream_order().unwrap(), StreamOrder::Shuffled);
        assert_eq!(cfg.dataset_name(), "g");
        cfg.validate().unwrap();

        assert!(ExperimentConfig::from_toml("datset = \"x\"").is_err());
        let bad = ExperimentConfig {
            algorithms: vec!["greedy".into(), "magic".into()],
            ..cfg.clone()
        };
        assert!(matches!(bad.validate(), Err(Error::UnknownAlgorithm(_))));
        let bad = ExperimentConfig { k: vec![0], ..cfg };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn stream_order_parsing() {
        assert_eq!("natural".parse::<StreamOrder>().unwrap(), StreamOrder::Natural);
        assert_eq!(
            "file:order.txt".parse::<StreamOrder>().unwrap(),
            StreamOrder::File("order.txt".into())
        );
        assert!("file:".parse::<StreamOrder>().is_err());
        assert!("random".parse::<StreamOrder>().is_err());
    }
}
