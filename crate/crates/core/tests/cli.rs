mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn drbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drbench"))
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Two small datasets plus a config pointing at them; extra lines are appended.
fn setup(dir: &Path, extra: &str) -> String {
    common::write_manifest(
        dir,
        &[
            ("alpha", common::blobs_csv(2, 15, 4, 4.0, 1)),
            ("beta", common::blobs_csv(3, 10, 3, 4.0, 2)),
        ],
    );
    let conf = dir.join("run.conf");
    fs::write(
        &conf,
        format!("manifest = manifest.toml\nout = out\nrepeats = 2\ntsne_iterations = 250\n{extra}"),
    )
    .unwrap();
    conf.to_string_lossy().into_owned()
}

#[test]
fn valid_run_writes_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "");
    let out = drbench(&["run", "--config", &conf]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out_dir = dir.path().join("out");
    for f in [
        "report.csv",
        "aggregate.csv",
        "tables.md",
        "runtime.csv",
        "accuracy_tsne.dat",
        "accuracy_mds.dat",
    ] {
        assert!(out_dir.join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 3 * 2);
}

#[test]
fn csv_format_skips_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "");
    let out = drbench(&[
        "run",
        "--config",
        &conf,
        "--format",
        "csv",
        "--datasets",
        "alpha",
        "--dr",
        "mds",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out_dir = dir.path().join("out");
    assert!(out_dir.join("report.csv").is_file());
    assert!(!out_dir.join("tables.md").exists());
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.starts_with("alpha,mds,")));
}

#[test]
fn cli_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "classifiers = svm\n");
    let out = drbench(&[
        "run",
        "--config",
        &conf,
        "--dr",
        "mds",
        "--classifiers",
        "knn",
        "--repeats",
        "1",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains(",mds,knn,7,")), "{csv}");
}

#[test]
fn misspelled_key_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "preplexity = 30\n");
    let out = drbench(&["run", "--config", &conf]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("preplexity"), "{}", stderr(&out));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unreadable_config_exits_one() {
    let out = drbench(&["run", "--config", "/nonexistent/run.conf"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flag_value_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "");
    let out = drbench(&["run", "--config", &conf, "--dr", "pca"]);
    assert_eq!(out.status.code(), Some(1));
    let out = drbench(&["run"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_data_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("manifest.toml"),
        "[[dataset]]\nname = \"gone\"\nfiles = [\"gone.csv\"]\n",
    )
    .unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "manifest = manifest.toml\nout = out\n").unwrap();
    let out = drbench(&["run", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gone"), "{}", stderr(&out));
}

#[test]
fn diverging_embedding_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "dr = tsne\nlearning_rate = 1e300\n");
    let out = drbench(&["run", "--config", &conf, "--datasets", "alpha"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn partial_failure_still_reports_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "learning_rate = 1e300\n");
    let out = drbench(&["run", "--config", &conf, "--datasets", "alpha"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let md = fs::read_to_string(dir.path().join("out/tables.md")).unwrap();
    assert!(md.contains("## Skipped"));
    let csv = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.starts_with("alpha,mds,")));
}

#[test]
fn validate_data_prints_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "");
    let out = drbench(&["validate-data", "--config", &conf]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("alpha: n=30 m=4 classes=2"), "{stdout}");
    assert!(stdout.contains("beta: n=30 m=3 classes=3"), "{stdout}");
}

#[test]
fn validate_data_flags_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let conf = setup(dir.path(), "");
    fs::remove_file(dir.path().join("beta.csv")).unwrap();
    let out = drbench(&["validate-data", "--config", &conf]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("beta: ERROR"));
}
