use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Which raw column holds the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Index(usize),
}

impl LabelColumn {
    pub fn resolve(self, width: usize) -> usize {
        match self {
            LabelColumn::Last => width.saturating_sub(1),
            LabelColumn::Index(i) => i,
        }
    }
}

impl<'de> Deserialize<'de> for LabelColumn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(i) => Ok(LabelColumn::Index(i)),
            Raw::Name(s) if s == "last" => Ok(LabelColumn::Last),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "label_column must be an index or \"last\", got {s:?}"
            ))),
        }
    }
}

/// Field separator of a raw data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Char(char),
    /// Any run of spaces and tabs (the UCI Seeds file mixes both).
    Whitespace,
}

impl<'de> Deserialize<'de> for Delimiter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "whitespace" {
            return Ok(Delimiter::Whitespace);
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Ok(Delimiter::Char(c)),
            _ => Err(serde::de::Error::custom(format!(
                "delimiter must be a single character or \"whitespace\", got {s:?}"
            ))),
        }
    }
}

fn default_delimiter() -> Delimiter {
    Delimiter::Char(',')
}

fn default_label() -> LabelColumn {
    LabelColumn::Last
}

fn default_missing() -> String {
    "?".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifestEntry {
    pub name: String,
    /// One or more files, concatenated in order (Image Segmentation ships as two).
    pub files: Vec<PathBuf>,
    #[serde(default = "default_delimiter")]
    pub delimiter: Delimiter,
    #[serde(default)]
    pub has_header: bool,
    /// Leading lines to skip in every file, in addition to the header line.
    #[serde(default)]
    pub skip_lines: usize,
    #[serde(default = "default_label")]
    pub label_column: LabelColumn,
    #[serde(default)]
    pub drop_columns: Vec<usize>,
    #[serde(default = "default_missing")]
    pub missing_token: String,
    /// Raw data rows across all files, before missing-value filtering.
    pub expected_rows: Option<usize>,
    /// Raw column count including label and dropped columns.
    pub expected_cols: Option<usize>,
}

impl DatasetManifestEntry {
    /// An entry with default parsing options for a single comma-separated file.
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            files: Vec::new(),
            delimiter: default_delimiter(),
            has_header: false,
            skip_lines: 0,
            label_column: default_label(),
            drop_columns: Vec::new(),
            missing_token: default_missing(),
            expected_rows: None,
            expected_cols: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let LabelColumn::Index(i) = self.label_column {
            if self.drop_columns.contains(&i) {
                return Err(Error::InvalidDataset(format!(
                    "{}: label column {i} is also listed in drop_columns",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default)]
    dataset: Vec<DatasetManifestEntry>,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub entries: Vec<DatasetManifestEntry>,
    /// Directory relative file paths are resolved against.
    pub base_dir: PathBuf,
}

impl Manifest {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let file: ManifestFile =
            toml::from_str(text).map_err(|e| Error::config("manifest", e.to_string()))?;
        let mut seen = std::collections::HashSet::new();
        for entry in &file.dataset {
            entry.validate()?;
            if !seen.insert(entry.name.as_str()) {
                return Err(Error::config(
                    "manifest",
                    format!("dataset {:?} listed twice", entry.name),
                ));
            }
        }
        Ok(Self {
            entries: file.dataset,
            base_dir: base_dir.into(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    pub fn get(&self, name: &str) -> Option<&DatasetManifestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn resolve(&self, file: &Path) -> PathBuf {
        if file.is_absolute() {
            file.to_path_buf()
        } else {
            self.base_dir.join(file)
        }
    }

    /// Reads every file of an entry, in manifest order.
    pub fn read_files(&self, entry: &DatasetManifestEntry) -> Result<Vec<String>> {
        if entry.files.is_empty() {
            return Err(Error::InvalidDataset(format!("{}: no files listed", entry.name)));
        }
        entry
            .files
            .iter()
            .map(|file| {
                let path = self.resolve(file);
                std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
            })
            .collect()
    }
}
