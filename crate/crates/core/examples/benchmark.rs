//! Runs the full reduce → split → classify → score protocol over synthetic
//! datasets and prints the markdown report.
//!
//! `cargo run --release --example benchmark -- <out-dir>` also writes the
//! CSV / markdown / .dat files there.

use std::fmt::Write as _;
use std::fs;

use drbench::harness::{emit_report, render_markdown, run_pipeline, ReportFormat, RunConfig};
use drbench::RandomStream;

fn main() -> drbench::Result<()> {
    let dir = std::env::temp_dir().join(format!("drbench-example-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| drbench::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let mut manifest = String::new();
    for (name, classes, features, minority) in [("blobs", 3, 6, 40), ("skewed", 2, 8, 8)] {
        let file = format!("{name}.csv");
        fs::write(dir.join(&file), dataset(classes, features, minority)).unwrap();
        writeln!(manifest, "[[dataset]]\nname = \"{name}\"\nfiles = [\"{file}\"]\n").unwrap();
    }
    fs::write(dir.join("manifest.toml"), manifest).unwrap();

    let mut cfg = RunConfig {
        manifest: dir.join("manifest.toml"),
        repeats: 3,
        ..RunConfig::default()
    };
    cfg.tsne.iterations = 500;

    let report = run_pipeline(&cfg)?;
    println!("{}", render_markdown(&report));

    if let Some(out) = std::env::args().nth(1) {
        for path in emit_report(
            &report,
            out.as_ref(),
            &[ReportFormat::Csv, ReportFormat::Markdown],
        )? {
            println!("wrote {}", path.display());
        }
    }
    let _ = fs::remove_dir_all(&dir);
    Ok(())
}

/// Gaussian classes offset along separate axes; the last class has `minority` rows.
fn dataset(classes: usize, features: usize, minority: usize) -> String {
    let mut rng = RandomStream::new(classes as u64 * 31 + features as u64);
    let mut s = String::new();
    for c in 0..classes {
        let rows = if c + 1 == classes { minority } else { 40 };
        for _ in 0..rows {
            for f in 0..features {
                let shift = if f % classes == c { 1.2 } else { 0.0 };
                write!(s, "{:.5},", shift + rng.gaussian()).unwrap();
            }
            writeln!(s, "c{c}").unwrap();
        }
    }
    s
}
