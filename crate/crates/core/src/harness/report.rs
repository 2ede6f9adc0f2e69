//! Report files. Everything except `runtime.csv` is a pure function of the
//! configuration and data, so reruns produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::DrMethod;

use super::config::{Classifier, ReportFormat};
use super::pipeline::EvalReport;

pub const CSV_HEADER: &str =
    "dataset,dr_method,classifier,seed,accuracy,f_measure,g_mean,dr_cost,clamped_eigenvalues,dropped_rows";

/// One line per run, scores to 4 decimals.
pub fn render_csv(report: &EvalReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.4},{:.4},{:.4},{:.6},{},{}",
            r.dataset,
            r.dr_method,
            r.classifier,
            r.seed,
            r.scores.accuracy,
            r.scores.f_measure,
            r.scores.g_mean,
            r.diagnostics.dr_cost,
            r.diagnostics.clamped_eigenvalues,
            r.diagnostics.dropped_rows
        );
    }
    s
}

pub fn render_aggregate_csv(report: &EvalReport) -> String {
    let mut s = String::from(
        "dataset,dr_method,classifier,runs,accuracy_mean,accuracy_std,f_measure_mean,f_measure_std,g_mean_mean,g_mean_std\n",
    );
    for a in &report.aggregates {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
            a.dataset,
            a.dr_method,
            a.classifier,
            a.runs,
            a.mean.accuracy,
            a.std.accuracy,
            a.mean.f_measure,
            a.std.f_measure,
            a.mean.g_mean,
            a.std.g_mean
        );
    }
    s
}

pub fn render_runtime_csv(report: &EvalReport) -> String {
    let mut s = String::from("dataset,dr_method,classifier,seed,runtime_seconds\n");
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.3}",
            r.dataset, r.dr_method, r.classifier, r.seed, r.runtime_seconds
        );
    }
    s
}

fn method_title(m: DrMethod) -> &'static str {
    match m {
        DrMethod::Tsne => "t-SNE",
        DrMethod::Mds => "MDS",
    }
}

fn methods_in(report: &EvalReport) -> Vec<DrMethod> {
    let mut m = report.config.dr_methods.clone();
    m.sort();
    m
}

fn classifiers_in(report: &EvalReport) -> Vec<Classifier> {
    let mut c = report.config.classifiers.clone();
    c.sort();
    c
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "–".to_string(), |v| format!("{v:.4}"))
}

/// Markdown summary: per reduction method, an F-measure / G-mean table and
/// an accuracy table with one row per dataset.
pub fn render_markdown(report: &EvalReport) -> String {
    let cfg = &report.config;
    let classifiers = classifiers_in(report);
    let mut s = String::from("# Dimensionality reduction benchmark\n\n");
    let seeds = if cfg.repeats == 1 {
        format!("seed {}", cfg.seed)
    } else {
        format!(
            "seeds {}..={}",
            cfg.seed,
            cfg.seed.wrapping_add(cfg.repeats as u64 - 1)
        )
    };
    let _ = writeln!(
        s,
        "- Protocol: features standardized, the full dataset reduced to ⌈m/2⌉ dimensions, \
         then a stratified {:.0}/{:.0} train/test split per seed.",
        (1.0 - cfg.test_fraction) * 100.0,
        cfg.test_fraction * 100.0
    );
    let _ = writeln!(
        s,
        "- Leakage note: reduction runs before the split, so test rows (without labels) shape the embedding."
    );
    let _ = writeln!(s, "- Scores are means over {} repeat(s) ({seeds}).", cfg.repeats);
    let _ = writeln!(
        s,
        "- F-measure: macro average of one-vs-rest F. G-mean: geometric mean of per-class recalls."
    );
    let _ = writeln!(
        s,
        "- k = {}, C = {}, perplexity = {} (capped at (n−1)/3), t-SNE iterations = {}.",
        cfg.k, cfg.svm.c, cfg.tsne.perplexity, cfg.tsne.iterations
    );
    let _ = writeln!(
        s,
        "- Rows containing missing values are dropped before standardization."
    );

    for method in methods_in(report) {
        let title = method_title(method);
        let _ = writeln!(s, "\n## {title}: F-measure and G-mean\n");
        let mut header = String::from("| Dataset |");
        let mut rule = String::from("|---|");
        for metric in ["F-measure", "G-mean"] {
            for c in &classifiers {
                let _ = write!(header, " {metric} {} |", c.title());
                rule.push_str("---:|");
            }
        }
        let _ = writeln!(s, "{header}\n{rule}");
        for ds in &report.datasets {
            let mut line = format!("| {} |", ds.name);
            for pick in [0, 1] {
                for &c in &classifiers {
                    let v = report.aggregate(&ds.name, method, c).map(|a| {
                        if pick == 0 {
                            a.mean.f_measure
                        } else {
                            a.mean.g_mean
                        }
                    });
                    let _ = write!(line, " {} |", cell(v));
                }
            }
            let _ = writeln!(s, "{line}");
        }

        let _ = writeln!(s, "\n## {title}: accuracy (mean ± std)\n");
        let mut header = String::from("| Dataset |");
        let mut rule = String::from("|---|");
        for c in &classifiers {
            let _ = write!(header, " {} |", c.title());
            rule.push_str("---:|");
        }
        let _ = writeln!(s, "{header}\n{rule}");
        for ds in &report.datasets {
            let mut line = format!("| {} |", ds.name);
            for &c in &classifiers {
                let text = report.aggregate(&ds.name, method, c).map_or_else(
                    || "–".to_string(),
                    |a| format!("{:.4} ± {:.4}", a.mean.accuracy, a.std.accuracy),
                );
                let _ = write!(line, " {text} |");
            }
            let _ = writeln!(s, "{line}");
        }
    }

    if !report.datasets.is_empty() {
        let _ = writeln!(s, "\n## Datasets\n");
        let _ = writeln!(
            s,
            "| Dataset | n | m | d | classes | dropped rows |\n|---|---:|---:|---:|---:|---:|"
        );
        for d in &report.datasets {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                d.name,
                d.rows,
                d.features,
                d.target_dim,
                d.class_names.len(),
                d.dropped_rows
            );
        }
    }

    if !report.skipped.is_empty() {
        let _ = writeln!(s, "\n## Skipped\n");
        for sk in &report.skipped {
            match sk.dr_method {
                Some(m) => {
                    let _ = writeln!(s, "- {} ({}): {}", sk.dataset, method_title(m), sk.message);
                }
                None => {
                    let _ = writeln!(s, "- {}: {}", sk.dataset, sk.message);
                }
            }
        }
    }
    s
}

/// Plot data: `dataset classifier mean_accuracy std_accuracy` per line.
pub fn render_accuracy_dat(report: &EvalReport, method: DrMethod) -> String {
    let mut s = format!(
        "# {} accuracy: dataset classifier mean std\n",
        method_title(method)
    );
    for a in report.aggregates.iter().filter(|a| a.dr_method == method) {
        let _ = writeln!(
            s,
            "{} {} {:.4} {:.4}",
            a.dataset, a.classifier, a.mean.accuracy, a.std.accuracy
        );
    }
    s
}

pub fn accuracy_dat_name(method: DrMethod) -> String {
    format!("accuracy_{}.dat", method.as_str())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the selected report formats plus plot data and timings into
/// `out_dir`, returning the files written.
pub fn emit_report(report: &EvalReport, out_dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    if report.rows.is_empty() {
        return Err(Error::InvalidInput("report has no rows".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    if formats.contains(&ReportFormat::Csv) {
        written.push(write_file(out_dir, "report.csv", &render_csv(report))?);
        written.push(write_file(
            out_dir,
            "aggregate.csv",
            &render_aggregate_csv(report),
        )?);
    }
    if formats.contains(&ReportFormat::Markdown) {
        written.push(write_file(out_dir, "tables.md", &render_markdown(report))?);
    }
    for method in methods_in(report) {
        written.push(write_file(
            out_dir,
            &accuracy_dat_name(method),
            &render_accuracy_dat(report, method),
        )?);
    }
    written.push(write_file(out_dir, "runtime.csv", &render_runtime_csv(report))?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::RunConfig;
    use crate::harness::pipeline::{assemble_report, DatasetOutcome, DatasetSummary, Diagnostics, ReportRow};
    use crate::metrics::ScoreRow;

    fn row(dataset: &str, dr: DrMethod, c: Classifier, seed: u64, acc: f64) -> ReportRow {
        ReportRow {
            dataset: dataset.into(),
            dr_method: dr,
            classifier: c,
            seed,
            scores: ScoreRow {
                accuracy: acc,
                f_measure: acc,
                g_mean: acc,
            },
            diagnostics: Diagnostics {
                dr_cost: 0.5,
                clamped_eigenvalues: 0,
                dropped_rows: 0,
            },
            runtime_seconds: 1.0,
        }
    }

    fn summary(name: &str) -> DatasetSummary {
        DatasetSummary {
            name: name.into(),
            rows: 100,
            features: 6,
            target_dim: 3,
            class_names: vec!["a".into(), "b".into()],
            class_sizes: vec![50, 50],
            dropped_rows: 0,
        }
    }

    fn report(rows: Vec<ReportRow>, names: &[&str]) -> EvalReport {
        let outcomes = names
            .iter()
            .map(|n| DatasetOutcome {
                summary: summary(n),
                rows: rows.iter().filter(|r| r.dataset == *n).cloned().collect(),
                skipped: Vec::new(),
            })
            .collect();
        assemble_report(&RunConfig::default(), outcomes, Vec::new())
    }

    #[test]
    fn single_row_csv_has_two_lines() {
        let r = report(
            vec![row("seeds", DrMethod::Tsne, Classifier::Svm, 0, 0.8876)],
            &["seeds"],
        );
        let csv = render_csv(&r);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().contains(",0.8876,"));
    }

    #[test]
    fn markdown_tables_have_one_row_per_dataset() {
        let names = ["seeds", "pima", "ionosphere"];
        let mut rows = Vec::new();
        for n in names {
            for dr in DrMethod::ALL {
                for c in Classifier::ALL {
                    rows.push(row(n, dr, c, 0, 0.75));
                }
            }
        }
        let md = render_markdown(&report(rows, &names));
        let tables: Vec<Vec<&str>> = md
            .split("\n\n")
            .filter(|b| b.starts_with("| Dataset |"))
            .map(|b| b.lines().collect())
            .collect();
        // per method: F/G table and accuracy table, plus the dataset table
        assert_eq!(tables.len(), 5);
        for t in &tables {
            assert_eq!(t.len(), names.len() + 2);
        }
        assert!(md.contains(
            "| F-measure KNN | F-measure ENN | F-measure SVM | G-mean KNN | G-mean ENN | G-mean SVM |"
        ));
        assert!(md.contains("Leakage note"));
    }

    #[test]
    fn missing_aggregate_renders_dash() {
        let r = report(
            vec![row("seeds", DrMethod::Tsne, Classifier::Knn, 0, 0.5)],
            &["seeds"],
        );
        let md = render_markdown(&r);
        assert!(md.contains("–"));
    }

    #[test]
    fn aggregates_and_dat_files() {
        let rows = vec![
            row("seeds", DrMethod::Mds, Classifier::Svm, 0, 0.8),
            row("seeds", DrMethod::Mds, Classifier::Svm, 1, 0.9),
        ];
        let r = report(rows, &["seeds"]);
        assert_eq!(r.aggregates.len(), 1);
        let dat = render_accuracy_dat(&r, DrMethod::Mds);
        assert_eq!(dat.lines().nth(1).unwrap(), "seeds svm 0.8500 0.0707");
        assert_eq!(render_accuracy_dat(&r, DrMethod::Tsne).lines().count(), 1);
    }

    #[test]
    fn emit_writes_named_files() {
        let dir = tempfile::tempdir().unwrap();
        let r = report(
            vec![row("seeds", DrMethod::Tsne, Classifier::Knn, 0, 0.5)],
            &["seeds"],
        );
        let files = emit_report(&r, dir.path(), &[ReportFormat::Csv, ReportFormat::Markdown]).unwrap();
        let names: Vec<String> = files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        for want in ["report.csv", "tables.md", "accuracy_tsne.dat", "accuracy_mds.dat"] {
            assert!(names.iter().any(|n| n == want), "{want} missing from {names:?}");
        }
        let empty = report(Vec::new(), &[]);
        assert!(emit_report(&empty, dir.path(), &[ReportFormat::Csv]).is_err());
    }
}
