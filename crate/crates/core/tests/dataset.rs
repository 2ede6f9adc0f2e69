mod common;

use std::fs;

use drbench::dataset::{load_from_manifest, stratified_split, test_count_for_class, Manifest};
use drbench::RandomStream;
use proptest::prelude::*;

/// Six columns, label last, "?" scattered through the features the way the
/// mammographic-mass file has them.
fn mammographic_like(rows: usize, seed: u64) -> String {
    let mut rng = RandomStream::new(seed);
    let mut s = String::new();
    for _ in 0..rows {
        let mut fields: Vec<String> = (0..5)
            .map(|_| {
                if rng.uniform() < 0.04 {
                    "?".to_string()
                } else {
                    ((rng.uniform() * 90.0) as u32).to_string()
                }
            })
            .collect();
        fields.push(((rng.uniform() * 2.0) as u32).to_string());
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

#[test]
fn missing_rows_match_line_count_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let text = mammographic_like(961, 11);
    let complete = text.lines().filter(|l| !l.split(',').any(|f| f == "?")).count();
    let manifest = common::write_manifest(dir.path(), &[("mammo", text.clone())]);
    let mut toml = fs::read_to_string(&manifest).unwrap();
    toml = toml.replace(
        "files = [\"mammo.csv\"]",
        "files = [\"mammo.csv\"]\nexpected_rows = 961\nexpected_cols = 6",
    );
    fs::write(&manifest, toml).unwrap();

    let m = Manifest::load(&manifest).unwrap();
    let ds = load_from_manifest(&m, m.get("mammo").unwrap()).unwrap();
    assert!(complete < 961);
    assert_eq!(ds.len(), complete);
    assert_eq!(ds.dropped_row_count, 961 - complete);
    assert_eq!(ds.feature_count(), 5);
    assert_eq!(ds.class_count(), 2);
}

#[test]
fn expected_shape_mismatch_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::write_manifest(dir.path(), &[("m", mammographic_like(50, 2))]);
    let toml = fs::read_to_string(&manifest)
        .unwrap()
        .replace("files = [\"m.csv\"]", "files = [\"m.csv\"]\nexpected_rows = 51");
    fs::write(&manifest, toml).unwrap();
    let m = Manifest::load(&manifest).unwrap();
    let err = load_from_manifest(&m, m.get("m").unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn missing_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.toml");
    fs::write(&path, "[[dataset]]\nname = \"x\"\nfiles = [\"gone.data\"]\n").unwrap();
    let m = Manifest::load(&path).unwrap();
    let err = load_from_manifest(&m, m.get("x").unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("gone.data"), "{err}");
}

#[test]
fn shipped_manifests_parse() {
    let root = common::repo_root();
    for name in ["uci-manifest.toml", "local-manifest.toml"] {
        let m = Manifest::load(&root.join("configs").join(name)).unwrap();
        assert!(!m.entries.is_empty(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_is_a_stratified_partition(
        sizes in prop::collection::vec(2usize..40, 2..6),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let split = stratified_split(&labels, fraction, &mut RandomStream::new(seed)).unwrap();
        let mut seen = vec![false; labels.len()];
        for &i in split.train.iter().chain(&split.test) {
            prop_assert!(!seen[i]);
            seen[i] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
        for (c, &n) in sizes.iter().enumerate() {
            let in_test = split.test.iter().filter(|&&i| labels[i] == c).count();
            prop_assert_eq!(in_test, test_count_for_class(n, fraction));
            prop_assert!(split.train.iter().any(|&i| labels[i] == c));
        }
    }
}
