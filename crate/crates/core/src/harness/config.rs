//! Line-oriented run configuration: `key = value`, `#` starts a comment.
//!
//! Values from the file override the defaults, and command-line overrides
//! beat both. Unknown or repeated keys are rejected.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::neighbors::DEFAULT_K;
use crate::svm::SvmParams;
use crate::tsne::TsneParams;
use crate::DrMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classifier {
    Knn,
    Enn,
    Svm,
}

impl Classifier {
    pub const ALL: [Classifier; 3] = [Classifier::Knn, Classifier::Enn, Classifier::Svm];

    pub fn as_str(self) -> &'static str {
        match self {
            Classifier::Knn => "knn",
            Classifier::Enn => "enn",
            Classifier::Svm => "svm",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Classifier::Knn => "KNN",
            Classifier::Enn => "ENN",
            Classifier::Svm => "SVM",
        }
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knn" => Ok(Classifier::Knn),
            "enn" => Ok(Classifier::Enn),
            "svm" => Ok(Classifier::Svm),
            other => Err(Error::config(
                "classifiers",
                format!("unknown classifier {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::config("format", format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: PathBuf,
    /// `None` runs every manifest entry in manifest order.
    pub datasets: Option<Vec<String>>,
    pub dr_methods: Vec<DrMethod>,
    pub classifiers: Vec<Classifier>,
    pub k: usize,
    pub svm: SvmParams,
    /// Template for every t-SNE run; `target_dim` and `seed` are set per run.
    pub tsne: TsneParams,
    pub test_fraction: f64,
    pub repeats: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub formats: Vec<ReportFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifest: PathBuf::from("manifest.toml"),
            datasets: None,
            dr_methods: DrMethod::ALL.to_vec(),
            classifiers: Classifier::ALL.to_vec(),
            k: DEFAULT_K,
            svm: SvmParams::default(),
            tsne: TsneParams::default(),
            test_fraction: 0.1,
            repeats: 10,
            seed: 0,
            out_dir: PathBuf::from("out"),
            formats: vec![ReportFormat::Csv, ReportFormat::Markdown],
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub datasets: Option<Vec<String>>,
    pub dr_methods: Option<Vec<DrMethod>>,
    pub classifiers: Option<Vec<Classifier>>,
    pub repeats: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<ReportFormat>,
}

pub const CONFIG_KEYS: &[&str] = &[
    "manifest",
    "datasets",
    "dr",
    "classifiers",
    "k",
    "c",
    "svm_epochs",
    "svm_tol",
    "perplexity",
    "tsne_iterations",
    "learning_rate",
    "exaggeration",
    "exaggeration_iters",
    "test_fraction",
    "repeats",
    "seed",
    "out",
    "format",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("malformed value {value:?}")))
}

fn parse_list<T: FromStr<Err = Error> + PartialEq>(key: &str, value: &str) -> Result<Vec<T>> {
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| retag(key, e)))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::config(key, "list must not be empty"));
    }
    let mut dedup: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !dedup.contains(&item) {
            dedup.push(item);
        }
    }
    Ok(dedup)
}

fn retag(key: &str, e: Error) -> Error {
    match e {
        Error::Config { message, .. } => Error::config(key, message),
        other => other,
    }
}

fn parse_names(value: &str) -> Option<Vec<String>> {
    if value.eq_ignore_ascii_case("all") {
        return None;
    }
    let mut names: Vec<String> = Vec::new();
    for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
    }
    Some(names)
}

impl RunConfig {
    /// Parses config text. Relative `manifest` and `out` paths are resolved
    /// against `base_dir` (normally the config file's directory).
    pub fn parse(text: &str, base_dir: &Path, overrides: &ConfigOverrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    line,
                    format!("line {}: expected `key = value`", lineno + 1),
                ));
            };
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            if !CONFIG_KEYS.contains(&key) {
                return Err(Error::config(key, "unknown key"));
            }
            if seen.iter().any(|k| k == key) {
                return Err(Error::config(key, "key given more than once"));
            }
            seen.push(key.to_string());
            if value.is_empty() {
                return Err(Error::config(key, "missing value"));
            }
            cfg.apply(key, value, base_dir)?;
        }
        cfg.apply_overrides(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn load(path: &Path, overrides: &ConfigOverrides) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides)
    }

    fn apply(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        match key {
            "manifest" => self.manifest = base_dir.join(value),
            "datasets" => self.datasets = parse_names(value),
            "dr" => self.dr_methods = parse_list(key, value)?,
            "classifiers" => self.classifiers = parse_list(key, value)?,
            "k" => self.k = parse_value(key, value)?,
            "c" => self.svm.c = parse_value(key, value)?,
            "svm_epochs" => self.svm.max_epochs = parse_value(key, value)?,
            "svm_tol" => self.svm.tol = parse_value(key, value)?,
            "perplexity" => self.tsne.perplexity = parse_value(key, value)?,
            "tsne_iterations" => self.tsne.iterations = parse_value(key, value)?,
            "learning_rate" => self.tsne.learning_rate = parse_value(key, value)?,
            "exaggeration" => self.tsne.exaggeration = parse_value(key, value)?,
            "exaggeration_iters" => self.tsne.exaggeration_iters = parse_value(key, value)?,
            "test_fraction" => self.test_fraction = parse_value(key, value)?,
            "repeats" => self.repeats = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "out" => self.out_dir = base_dir.join(value),
            "format" => self.formats = parse_list(key, value)?,
            _ => unreachable!("key list and match arms disagree on {key}"),
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &ConfigOverrides) {
        if let Some(d) = &o.datasets {
            self.datasets = Some(d.clone());
        }
        if let Some(d) = &o.dr_methods {
            self.dr_methods = d.clone();
        }
        if let Some(c) = &o.classifiers {
            self.classifiers = c.clone();
        }
        if let Some(r) = o.repeats {
            self.repeats = r;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(out) = &o.out_dir {
            self.out_dir = out.clone();
        }
        if let Some(f) = o.format {
            self.formats = vec![f];
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::config("repeats", "must be at least 1"));
        }
        if self.k < 1 {
            return Err(Error::config("k", "must be at least 1"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::config("test_fraction", "must lie in (0, 1)"));
        }
        if matches!(&self.datasets, Some(d) if d.is_empty()) {
            return Err(Error::config("datasets", "selection must not be empty"));
        }
        if self.dr_methods.is_empty() {
            return Err(Error::config("dr", "selection must not be empty"));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config("classifiers", "selection must not be empty"));
        }
        self.svm
            .validate()
            .map_err(|e| Error::config("c", e.to_string()))?;
        self.tsne
            .validate()
            .map_err(|e| Error::config("perplexity", e.to_string()))?;
        Ok(())
    }
}
