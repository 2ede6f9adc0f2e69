//! The benchmark loop: load → standardize → reduce the whole dataset to
//! `⌈m/2⌉` dimensions → stratified split per seed → train and score.
//!
//! Reduction happens before the split because neither t-SNE nor classical
//! MDS can place unseen points; test rows therefore take part (label-free)
//! in the embedding. MDS is deterministic and runs once per dataset, t-SNE
//! runs once per seed.

use std::time::Instant;

use crate::dataset::{load_from_manifest, stratified_split, Dataset, Manifest, SplitIndices};
use crate::error::{Error, Result};
use crate::mds::classical_mds;
use crate::metrics::ScoreRow;
use crate::neighbors::NeighborModel;
use crate::numerics::{pairwise_dists, standardize, Matrix, RandomStream};
use crate::svm::{svm_predict, OvrModelSet, SvmParams};
use crate::tsne::{tsne_embed, TsneParams};
use crate::DrMethod;

use super::config::{Classifier, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Final KL divergence for t-SNE, strain for MDS.
    pub dr_cost: f64,
    pub clamped_eigenvalues: usize,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub dr_method: DrMethod,
    pub classifier: Classifier,
    pub seed: u64,
    pub scores: ScoreRow,
    pub diagnostics: Diagnostics,
    /// Wall time of the embedding plus this classifier's train/predict.
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub dataset: String,
    pub dr_method: DrMethod,
    pub classifier: Classifier,
    pub runs: usize,
    pub mean: ScoreRow,
    /// Sample standard deviation (0 for a single run).
    pub std: ScoreRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSummary {
    pub name: String,
    pub rows: usize,
    pub features: usize,
    pub target_dim: usize,
    pub class_names: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub dropped_rows: usize,
}

/// A dataset (or one reduction of it) that produced no rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedRun {
    pub dataset: String,
    pub dr_method: Option<DrMethod>,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub config: RunConfig,
    pub rows: Vec<ReportRow>,
    pub aggregates: Vec<AggregateRow>,
    pub datasets: Vec<DatasetSummary>,
    pub skipped: Vec<SkippedRun>,
}

impl EvalReport {
    pub fn aggregate(&self, dataset: &str, dr: DrMethod, classifier: Classifier) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.dataset == dataset && a.dr_method == dr && a.classifier == classifier)
    }

    /// Exit code for a run where nothing could be evaluated.
    pub fn failure_code(&self) -> Option<i32> {
        if !self.rows.is_empty() {
            return None;
        }
        Some(self.skipped.first().map_or(2, |s| s.exit_code))
    }
}

/// Rows and metadata produced by one dataset.
#[derive(Debug, Clone)]
pub struct DatasetOutcome {
    pub summary: DatasetSummary,
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<SkippedRun>,
}

/// `⌈m/2⌉`, at least 1.
pub fn target_dimension(feature_count: usize) -> usize {
    feature_count.div_ceil(2).max(1)
}

/// One reduction of the full dataset.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub y: Matrix,
    pub cost: f64,
    pub clamped: usize,
    pub seconds: f64,
}

pub fn reduce(data: &Matrix, method: DrMethod, dim: usize, tsne: &TsneParams, seed: u64) -> Result<Reduced> {
    let start = Instant::now();
    let (y, cost, clamped) = match method {
        DrMethod::Tsne => {
            let params = TsneParams {
                target_dim: dim,
                seed,
                ..*tsne
            };
            let e = tsne_embed(data, &params)?;
            (e.y, e.final_cost, 0)
        }
        DrMethod::Mds => {
            let dim = dim.min(data.rows().saturating_sub(1)).max(1);
            let r = classical_mds(&pairwise_dists(data)?, dim)?;
            (r.x, r.strain, r.clamped_count)
        }
    };
    Ok(Reduced {
        y,
        cost,
        clamped,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Trains every requested classifier on one split of an embedding and
/// scores it on the held-out rows. Results follow `classifiers` order.
pub fn classify_split(
    embedded: &Matrix,
    labels: &[usize],
    class_count: usize,
    split: &SplitIndices,
    classifiers: &[Classifier],
    k: usize,
    svm: &SvmParams,
) -> Result<Vec<(Classifier, ScoreRow, f64)>> {
    let (train, test) = (&split.train, &split.test);
    let train_x = embedded.select_rows(train);
    let train_y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
    let test_y: Vec<usize> = test.iter().map(|&i| labels[i]).collect();

    let needs_neighbors = classifiers
        .iter()
        .any(|c| matches!(c, Classifier::Knn | Classifier::Enn));
    let start = Instant::now();
    let neighbors = if needs_neighbors {
        Some(NeighborModel::fit(
            train_x.clone(),
            train_y.clone(),
            k,
            class_count,
        )?)
    } else {
        None
    };
    let shared_fit = start.elapsed().as_secs_f64();

    let mut out = Vec::with_capacity(classifiers.len());
    for &classifier in classifiers {
        let start = Instant::now();
        let predicted: Vec<usize> = match classifier {
            Classifier::Knn => {
                let model = neighbors.as_ref().expect("fitted above");
                test.iter()
                    .map(|&i| model.knn_predict(embedded.row(i)).map(|p| p.label))
                    .collect::<Result<_>>()?
            }
            Classifier::Enn => {
                let model = neighbors.as_ref().expect("fitted above");
                test.iter()
                    .map(|&i| model.enn_predict(embedded.row(i)))
                    .collect::<Result<_>>()?
            }
            Classifier::Svm => {
                let set = OvrModelSet::train(&train_x, &train_y, class_count, svm)?;
                test.iter()
                    .map(|&i| svm_predict(&set, embedded.row(i)))
                    .collect::<Result<_>>()?
            }
        };
        let mut seconds = start.elapsed().as_secs_f64();
        if classifier != Classifier::Svm {
            seconds += shared_fit;
        }
        out.push((
            classifier,
            ScoreRow::score(&test_y, &predicted, class_count)?,
            seconds,
        ));
    }
    Ok(out)
}

/// Runs every reduction, seed and classifier of `cfg` on one loaded dataset.
pub fn evaluate_dataset(ds: &Dataset, cfg: &RunConfig) -> Result<DatasetOutcome> {
    ds.check_benchmark_ready()?;
    let data = standardize(&ds.features).data;
    let dim = target_dimension(ds.feature_count());
    let summary = DatasetSummary {
        name: ds.name.clone(),
        rows: ds.len(),
        features: ds.feature_count(),
        target_dim: dim,
        class_names: ds.class_names.clone(),
        class_sizes: ds.class_sizes(),
        dropped_rows: ds.dropped_row_count,
    };

    let mut methods = cfg.dr_methods.clone();
    methods.sort();
    let mut classifiers = cfg.classifiers.clone();
    classifiers.sort();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for method in methods {
        let mut shared: Option<Reduced> = None;
        let result = (0..cfg.repeats as u64).try_for_each(|r| -> Result<()> {
            let seed = cfg.seed.wrapping_add(r);
            let reduced = match method {
                DrMethod::Mds => match &shared {
                    Some(red) => red.clone(),
                    None => shared
                        .insert(reduce(&data, method, dim, &cfg.tsne, seed)?)
                        .clone(),
                },
                DrMethod::Tsne => reduce(&data, method, dim, &cfg.tsne, seed)?,
            };
            let split = stratified_split(&ds.labels, cfg.test_fraction, &mut RandomStream::new(seed))?;
            let scored = classify_split(
                &reduced.y,
                &ds.labels,
                ds.class_count(),
                &split,
                &classifiers,
                cfg.k,
                &SvmParams { seed, ..cfg.svm },
            )?;
            for (classifier, scores, seconds) in scored {
                rows.push(ReportRow {
                    dataset: ds.name.clone(),
                    dr_method: method,
                    classifier,
                    seed,
                    scores,
                    diagnostics: Diagnostics {
                        dr_cost: reduced.cost,
                        clamped_eigenvalues: reduced.clamped,
                        dropped_rows: ds.dropped_row_count,
                    },
                    runtime_seconds: reduced.seconds + seconds,
                });
            }
            Ok(())
        });
        if let Err(e) = result {
            skipped.push(SkippedRun {
                dataset: ds.name.clone(),
                dr_method: Some(method),
                message: e.to_string(),
                exit_code: e.exit_code(),
            });
        }
    }
    Ok(DatasetOutcome {
        summary,
        rows,
        skipped,
    })
}

/// Mean and sample standard deviation per (dataset, method, classifier),
/// in row order.
pub fn aggregate_rows(rows: &[ReportRow]) -> Vec<AggregateRow> {
    let mut out: Vec<(AggregateRow, Vec<ScoreRow>)> = Vec::new();
    for row in rows {
        let pos = out.iter().position(|(a, _)| {
            a.dataset == row.dataset && a.dr_method == row.dr_method && a.classifier == row.classifier
        });
        let idx = pos.unwrap_or_else(|| {
            let zero = ScoreRow {
                accuracy: 0.0,
                f_measure: 0.0,
                g_mean: 0.0,
            };
            out.push((
                AggregateRow {
                    dataset: row.dataset.clone(),
                    dr_method: row.dr_method,
                    classifier: row.classifier,
                    runs: 0,
                    mean: zero,
                    std: zero,
                },
                Vec::new(),
            ));
            out.len() - 1
        });
        out[idx].1.push(row.scores);
    }
    out.into_iter()
        .map(|(mut agg, scores)| {
            let pick: [fn(&ScoreRow) -> f64; 3] = [|s| s.accuracy, |s| s.f_measure, |s| s.g_mean];
            let stats: Vec<(f64, f64)> = pick
                .iter()
                .map(|f| mean_std(&scores.iter().map(f).collect::<Vec<_>>()))
                .collect();
            agg.runs = scores.len();
            agg.mean = ScoreRow {
                accuracy: stats[0].0,
                f_measure: stats[1].0,
                g_mean: stats[2].0,
            };
            agg.std = ScoreRow {
                accuracy: stats[0].1,
                f_measure: stats[1].1,
                g_mean: stats[2].1,
            };
            agg
        })
        .collect()
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Assembles a report from per-dataset outcomes (in the given order).
pub fn assemble_report(
    config: &RunConfig,
    outcomes: Vec<DatasetOutcome>,
    mut skipped: Vec<SkippedRun>,
) -> EvalReport {
    let mut rows = Vec::new();
    let mut datasets = Vec::new();
    let mut cell_skips = Vec::new();
    for o in outcomes {
        rows.extend(o.rows);
        datasets.push(o.summary);
        cell_skips.extend(o.skipped);
    }
    skipped.extend(cell_skips);
    let aggregates = aggregate_rows(&rows);
    EvalReport {
        config: config.clone(),
        rows,
        aggregates,
        datasets,
        skipped,
    }
}

/// Runs the configured benchmark, calling `progress` with status lines.
///
/// Datasets that cannot be loaded are skipped and listed in the report;
/// an unknown dataset name is a configuration error.
pub fn run_pipeline_with_progress(cfg: &RunConfig, progress: &mut dyn FnMut(&str)) -> Result<EvalReport> {
    cfg.validate()?;
    let manifest = Manifest::load(&cfg.manifest)?;
    let names: Vec<String> = match &cfg.datasets {
        Some(names) => names.clone(),
        None => manifest.entries.iter().map(|e| e.name.clone()).collect(),
    };
    if let Some(unknown) = names.iter().find(|n| manifest.get(n).is_none()) {
        return Err(Error::config(
            "datasets",
            format!("{unknown:?} is not in {}", cfg.manifest.display()),
        ));
    }

    let mut outcomes = Vec::new();
    let mut skipped = Vec::new();
    for name in &names {
        let entry = manifest.get(name).expect("checked above");
        let loaded = load_from_manifest(&manifest, entry).and_then(|ds| {
            progress(&format!(
                "{name}: {} rows, {} features, {} classes",
                ds.len(),
                ds.feature_count(),
                ds.class_count()
            ));
            evaluate_dataset(&ds, cfg)
        });
        match loaded {
            Ok(outcome) => {
                for s in &outcome.skipped {
                    progress(&format!("{name}: skipped {:?}: {}", s.dr_method, s.message));
                }
                outcomes.push(outcome);
            }
            Err(e) => {
                progress(&format!("{name}: skipped: {e}"));
                skipped.push(SkippedRun {
                    dataset: name.clone(),
                    dr_method: None,
                    message: e.to_string(),
                    exit_code: e.exit_code(),
                });
            }
        }
    }
    Ok(assemble_report(cfg, outcomes, skipped))
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<EvalReport> {
    run_pipeline_with_progress(cfg, &mut |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(per: usize, sep: f64, seed: u64) -> Dataset {
        let mut rng = RandomStream::new(seed);
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for c in 0..2 {
            for _ in 0..per {
                for j in 0..4 {
                    let shift = if j == 0 { c as f64 * sep } else { 0.0 };
                    values.push(shift + rng.gaussian());
                }
                labels.push(c);
            }
        }
        Dataset {
            name: "blobs".into(),
            features: Matrix::from_vec(2 * per, 4, values).unwrap(),
            labels,
            class_names: vec!["a".into(), "b".into()],
            dropped_row_count: 0,
        }
    }

    fn quick_config() -> RunConfig {
        let mut cfg = RunConfig {
            repeats: 2,
            ..RunConfig::default()
        };
        cfg.tsne.iterations = 300;
        cfg
    }

    #[test]
    fn half_dimension_rounds_up() {
        assert_eq!(target_dimension(7), 4);
        assert_eq!(target_dimension(34), 17);
        assert_eq!(target_dimension(1), 1);
    }

    #[test]
    fn one_row_per_method_classifier_seed() {
        let ds = blobs(15, 10.0, 1);
        let out = evaluate_dataset(&ds, &quick_config()).unwrap();
        assert_eq!(out.rows.len(), 2 * 3 * 2);
        assert!(out.skipped.is_empty());
        let aggs = aggregate_rows(&out.rows);
        assert_eq!(aggs.len(), 6);
        assert!(aggs.iter().all(|a| a.runs == 2));
        // MDS reuses the same embedding for every seed
        let mds: Vec<f64> = out
            .rows
            .iter()
            .filter(|r| r.dr_method == DrMethod::Mds)
            .map(|r| r.diagnostics.dr_cost)
            .collect();
        assert!(mds.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn too_small_dataset_rejected() {
        let ds = blobs(5, 10.0, 2);
        assert!(matches!(
            evaluate_dataset(&ds, &quick_config()),
            Err(Error::InvalidDataset(_))
        ));
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
        assert_eq!(mean_std(&[0.25]), (0.25, 0.0));
    }
}
