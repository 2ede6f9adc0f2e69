//! Benchmark orchestration: run configuration, the evaluation loop and
//! report rendering.

mod config;
mod pipeline;
mod report;

pub use config::{Classifier, ConfigOverrides, ReportFormat, RunConfig, CONFIG_KEYS};
pub use pipeline::{
    aggregate_rows, assemble_report, classify_split, evaluate_dataset, reduce, run_pipeline,
    run_pipeline_with_progress, target_dimension, AggregateRow, DatasetOutcome, DatasetSummary, Diagnostics,
    EvalReport, Reduced, ReportRow, SkippedRun,
};
pub use report::{
    accuracy_dat_name, emit_report, render_accuracy_dat, render_aggregate_csv, render_csv, render_markdown,
    render_runtime_csv, CSV_HEADER,
};
