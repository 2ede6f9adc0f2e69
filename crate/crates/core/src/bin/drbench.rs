use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drbench::dataset::{load_from_manifest, Manifest};
use drbench::harness::{
    emit_report, run_pipeline_with_progress, Classifier, ConfigOverrides, ReportFormat, RunConfig,
};
use drbench::{DrMethod, Error};

/// Dimensionality-reduction + classification benchmark.
#[derive(Parser)]
#[command(name = "drbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark and write reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated dataset names (default: every manifest entry).
        #[arg(long, value_delimiter = ',')]
        datasets: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        dr: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        classifiers: Option<Vec<String>>,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or markdown (default: both).
        #[arg(long)]
        format: Option<String>,
    },
    /// Load every selected dataset and print its shape without running anything.
    ValidateData {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_each<T: std::str::FromStr<Err = Error>>(
    items: Option<Vec<String>>,
) -> Result<Option<Vec<T>>, Error> {
    items
        .map(|v| v.iter().map(|s| s.parse()).collect::<Result<Vec<T>, Error>>())
        .transpose()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            datasets,
            dr,
            classifiers,
            repeats,
            seed,
            out,
            format,
        } => {
            let overrides = ConfigOverrides {
                datasets,
                dr_methods: parse_each::<DrMethod>(dr)?,
                classifiers: parse_each::<Classifier>(classifiers)?,
                repeats,
                seed,
                out_dir: out,
                format: format.map(|f| f.parse::<ReportFormat>()).transpose()?,
            };
            let cfg = RunConfig::load(&config, &overrides)?;
            let report = run_pipeline_with_progress(&cfg, &mut |msg| eprintln!("{msg}"))?;
            if let Some(code) = report.failure_code() {
                for s in &report.skipped {
                    eprintln!("error: {}: {}", s.dataset, s.message);
                }
                eprintln!("error: no dataset could be evaluated");
                std::process::exit(code);
            }
            for path in emit_report(&report, &cfg.out_dir, &cfg.formats)? {
                println!("wrote {}", path.display());
            }
            if !report.skipped.is_empty() {
                eprintln!(
                    "warning: {} dataset run(s) skipped, see tables.md",
                    report.skipped.len()
                );
            }
            Ok(())
        }
        Command::ValidateData { config } => {
            let cfg = RunConfig::load(&config, &ConfigOverrides::default())?;
            let manifest = Manifest::load(&cfg.manifest)?;
            let names: Vec<String> = match &cfg.datasets {
                Some(n) => n.clone(),
                None => manifest.entries.iter().map(|e| e.name.clone()).collect(),
            };
            let mut first_error: Option<Error> = None;
            for name in names {
                let Some(entry) = manifest.get(&name) else {
                    let e = Error::Config {
                        key: "datasets".into(),
                        message: format!("{name:?} is not in the manifest"),
                    };
                    eprintln!("{name}: {e}");
                    first_error.get_or_insert(e);
                    continue;
                };
                match load_from_manifest(&manifest, entry)
                    .and_then(|ds| ds.check_benchmark_ready().map(|_| ds))
                {
                    Ok(ds) => {
                        let classes: Vec<String> = ds
                            .class_names
                            .iter()
                            .zip(ds.class_sizes())
                            .map(|(c, n)| format!("{c}:{n}"))
                            .collect();
                        println!(
                            "{name}: n={} m={} classes={} [{}] dropped={}",
                            ds.len(),
                            ds.feature_count(),
                            ds.class_count(),
                            classes.join(" "),
                            ds.dropped_row_count
                        );
                    }
                    Err(e) => {
                        println!("{name}: ERROR {e}");
                        first_error.get_or_insert(e);
                    }
                }
            }
            first_error.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
