//! Manifest-driven ingestion of delimiter-separated UCI files and seeded
//! stratified train/test splitting.
//!
//! Rows with the missing-value token in any retained column are dropped (and
//! counted), class labels are encoded in order of first appearance, and every
//! retained non-label column must parse as a finite number.

mod manifest;
mod split;

pub use manifest::{DatasetManifestEntry, Delimiter, LabelColumn, Manifest};
pub use split::{stratified_split, test_count_for_class, SplitIndices};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub features: Matrix,
    /// 0-based class ids, indexing `class_names`.
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub dropped_row_count: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.features.cols()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count()];
        for &y in &self.labels {
            sizes[y] += 1;
        }
        sizes
    }

    /// Checks the shape requirements of the benchmark protocol: at least 20
    /// rows and two samples in every class.
    pub fn check_benchmark_ready(&self) -> Result<()> {
        if self.len() < 20 {
            return Err(Error::InvalidDataset(format!(
                "{}: {} rows, need at least 20",
                self.name,
                self.len()
            )));
        }
        if let Some((c, _)) = self.class_sizes().iter().enumerate().find(|(_, &size)| size < 2) {
            return Err(Error::InvalidDataset(format!(
                "{}: class {:?} has fewer than 2 samples",
                self.name, self.class_names[c]
            )));
        }
        Ok(())
    }
}

/// Parses the full text of a single data file.
pub fn load_dataset(entry: &DatasetManifestEntry, raw_text: &str) -> Result<Dataset> {
    load_dataset_files(entry, &[raw_text])
}

/// Parses one or more files of the same entry and concatenates their rows.
pub fn load_dataset_files<S: AsRef<str>>(entry: &DatasetManifestEntry, raw_texts: &[S]) -> Result<Dataset> {
    entry.validate()?;
    let skip = entry.skip_lines + usize::from(entry.has_header);

    let mut width: Option<usize> = None;
    let mut raw_rows = 0usize;
    let mut dropped = 0usize;
    let mut values: Vec<f64> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut feature_cols: Vec<usize> = Vec::new();
    let mut label_col = 0usize;

    for text in raw_texts {
        for line in text.as_ref().lines().skip(skip) {
            if line.trim().is_empty() {
                continue;
            }
            raw_rows += 1;
            let fields = split_fields(line, entry.delimiter);

            let w = *width.get_or_insert_with(|| {
                label_col = entry.label_column.resolve(fields.len());
                feature_cols = (0..fields.len())
                    .filter(|c| *c != label_col && !entry.drop_columns.contains(c))
                    .collect();
                fields.len()
            });
            if fields.len() != w {
                return Err(Error::Parse {
                    row: raw_rows,
                    column: fields.len(),
                    message: format!("expected {w} fields, found {}", fields.len()),
                });
            }
            if label_col >= w {
                return Err(Error::InvalidDataset(format!(
                    "{}: label column {label_col} out of range for {w} columns",
                    entry.name
                )));
            }

            let missing = fields[label_col] == entry.missing_token
                || feature_cols.iter().any(|&c| fields[c] == entry.missing_token);
            if missing {
                dropped += 1;
                continue;
            }

            for &c in &feature_cols {
                let v: f64 = fields[c].parse().map_err(|_| Error::Parse {
                    row: raw_rows,
                    column: c,
                    message: format!("not a number: {:?}", fields[c]),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row: raw_rows,
                        column: c,
                        message: format!("non-finite value {:?}", fields[c]),
                    });
                }
                values.push(v);
            }
            let name = fields[label_col];
            let id = match class_names.iter().position(|c| c == name) {
                Some(id) => id,
                None => {
                    class_names.push(name.to_string());
                    class_names.len() - 1
                }
            };
            labels.push(id);
        }
    }

    if let Some(expected) = entry.expected_rows {
        if expected != raw_rows {
            return Err(Error::InvalidDataset(format!(
                "{}: expected {expected} raw rows, found {raw_rows}",
                entry.name
            )));
        }
    }
    if let (Some(expected), Some(found)) = (entry.expected_cols, width) {
        if expected != found {
            return Err(Error::InvalidDataset(format!(
                "{}: expected {expected} columns, found {found}",
                entry.name
            )));
        }
    }
    if class_names.len() < 2 {
        return Err(Error::InvalidDataset(format!(
            "{}: {} class(es) after filtering, need at least 2",
            entry.name,
            class_names.len()
        )));
    }

    let features = Matrix::from_vec(labels.len(), feature_cols.len(), values)?;
    Ok(Dataset {
        name: entry.name.clone(),
        features,
        labels,
        class_names,
        dropped_row_count: dropped,
    })
}

/// Reads an entry's files through the manifest and parses them.
pub fn load_from_manifest(manifest: &Manifest, entry: &DatasetManifestEntry) -> Result<Dataset> {
    let texts = manifest.read_files(entry)?;
    load_dataset_files(entry, &texts)
}

fn split_fields(line: &str, delimiter: Delimiter) -> Vec<&str> {
    match delimiter {
        Delimiter::Whitespace => line.split_whitespace().collect(),
        Delimiter::Char(c) => line.split(c).map(str::trim).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry() -> DatasetManifestEntry {
        DatasetManifestEntry::new("toy")
    }

    #[test]
    fn three_line_file() {
        let ds = load_dataset(&entry(), "1,2,a\n3,4,b\n5,6,a").unwrap();
        assert_eq!(ds.class_names, vec!["a", "b"]);
        assert_eq!(ds.labels, vec![0, 1, 0]);
        assert_eq!(
            ds.features,
            Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap()
        );
        assert_eq!(ds.dropped_row_count, 0);
    }

    #[test]
    fn missing_rows_are_dropped_and_counted() {
        let ds = load_dataset(&entry(), "1,2,a\n?,4,b\n5,6,b\n7,8,a").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.dropped_row_count, 1);
        assert_eq!(ds.features.row(1), &[5.0, 6.0]);
    }

    #[test]
    fn missing_token_in_dropped_column_is_ignored() {
        let mut e = entry();
        e.drop_columns = vec![0];
        let ds = load_dataset(&e, "?,1,2,a\n7,3,4,b").unwrap();
        assert_eq!(ds.dropped_row_count, 0);
        assert_eq!(ds.features.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn label_first_and_header() {
        let mut e = entry();
        e.label_column = LabelColumn::Index(0);
        e.has_header = true;
        let ds = load_dataset(&e, "class,x,y\nB, 1, 2\nA,3,4\n").unwrap();
        assert_eq!(ds.class_names, vec!["B", "A"]);
        assert_eq!(ds.features.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn whitespace_delimiter_handles_mixed_runs() {
        let mut e = entry();
        e.delimiter = Delimiter::Whitespace;
        let ds = load_dataset(&e, "1.5\t\t2  1\n3 4\t2\n").unwrap();
        assert_eq!(ds.features.row(0), &[1.5, 2.0]);
        assert_eq!(ds.class_names, vec!["1", "2"]);
    }

    #[test]
    fn bad_number_reports_row_and_column() {
        let err = load_dataset(&entry(), "1,2,a\n3,x,b\n").unwrap_err();
        match err {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (2, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_class_rejected() {
        // the only "b" row has a missing feature
        let err = load_dataset(&entry(), "1,2,a\n3,4,a\n5,?,b").unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn expected_counts_are_verified() {
        let mut e = entry();
        e.expected_rows = Some(4);
        assert!(load_dataset(&e, "1,2,a\n3,4,b\n5,6,a").is_err());
        e.expected_rows = Some(3);
        e.expected_cols = Some(3);
        assert!(load_dataset(&e, "1,2,a\n3,4,b\n5,6,a").is_ok());
        e.expected_cols = Some(4);
        assert!(load_dataset(&e, "1,2,a\n3,4,b\n5,6,a").is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            load_dataset(&entry(), "1,2,a\n3,b\n"),
            Err(Error::Parse { row: 2, .. })
        ));
    }

    #[test]
    fn multiple_files_concatenate() {
        let mut e = entry();
        e.has_header = true;
        let ds = load_dataset_files(&e, &["h\n1,a\n", "h\n2,b\n3,a\n"]).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.labels, vec![0, 1, 0]);
    }

    #[test]
    fn loading_is_deterministic() {
        let text = "1,2,a\n3,4,b\n5,6,c\n";
        assert_eq!(
            load_dataset(&entry(), text).unwrap(),
            load_dataset(&entry(), text).unwrap()
        );
    }
}
