#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use drbench::svm::primal_objective;
use drbench::{Matrix, RandomStream};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Unit-variance gaussian classes in `features` dimensions whose centres sit
/// `sep` standard deviations apart along the main diagonal (so per-column
/// standardization keeps the separation). Returns CSV text, label last.
pub fn blobs_csv(classes: usize, per_class: usize, features: usize, sep: f64, seed: u64) -> String {
    let mut rng = RandomStream::new(seed);
    let mut s = String::new();
    for c in 0..classes {
        for _ in 0..per_class {
            let shift = c as f64 * sep / (features as f64).sqrt();
            for _ in 0..features {
                let _ = write!(s, "{},", shift + rng.gaussian());
            }
            let _ = writeln!(s, "class{c}");
        }
    }
    s
}

/// Writes `(name, csv)` pairs plus a manifest listing them; returns the manifest path.
pub fn write_manifest(dir: &Path, datasets: &[(&str, String)]) -> PathBuf {
    let mut manifest = String::new();
    for (name, csv) in datasets {
        let file = format!("{name}.csv");
        fs::write(dir.join(&file), csv).unwrap();
        let _ = writeln!(manifest, "[[dataset]]\nname = \"{name}\"\nfiles = [\"{file}\"]\n");
    }
    let path = dir.join("manifest.toml");
    fs::write(&path, manifest).unwrap();
    path
}

pub fn random_matrix(rng: &mut RandomStream, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::from_vec(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.gaussian() * scale).collect(),
    )
    .unwrap()
}

pub fn random_symmetric(rng: &mut RandomStream, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gaussian();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// ENN decision by rebuilding every neighbour list of the augmented sample
/// for each candidate class. The query is appended last, so it loses
/// distance ties; a class that ties on the summed statistic loses to a
/// lower class id.
pub fn enn_full_recompute(train_x: &Matrix, train_y: &[usize], k: usize, classes: usize, x: &[f64]) -> usize {
    let n = train_x.rows();
    let point = |i: usize| -> &[f64] {
        if i == n {
            x
        } else {
            train_x.row(i)
        }
    };
    let mut best = (0, f64::NEG_INFINITY);
    for candidate in 0..classes {
        let label = |i: usize| if i == n { candidate } else { train_y[i] };
        let mut theta = 0.0;
        for class in 0..classes {
            let members: Vec<usize> = (0..=n).filter(|&i| label(i) == class).collect();
            let mut same = 0usize;
            for &i in &members {
                let mut others: Vec<(f64, usize)> = (0..=n)
                    .filter(|&o| o != i)
                    .map(|o| {
                        let d: f64 = point(i)
                            .iter()
                            .zip(point(o))
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        (d, o)
                    })
                    .collect();
                others.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                same += others[..k].iter().filter(|(_, o)| label(*o) == class).count();
            }
            theta += same as f64 / (members.len() * k) as f64;
        }
        if theta > best.1 {
            best = (candidate, theta);
        }
    }
    best.0
}

/// Minimum of the bias-augmented soft-margin objective over `(w1, w2, b)`
/// by repeatedly refining a 41³ grid around the incumbent.
pub fn svm_grid_minimum(x: &Matrix, y: &[f64], c: f64) -> f64 {
    assert_eq!(x.cols(), 2);
    let mut centre = [0.0; 3];
    let mut step = 0.25;
    let mut best = f64::INFINITY;
    for _ in 0..14 {
        let base = centre;
        for a in -20..=20 {
            for b in -20..=20 {
                for e in -20..=20 {
                    let u = [
                        base[0] + a as f64 * step,
                        base[1] + b as f64 * step,
                        base[2] + e as f64 * step,
                    ];
                    let v = primal_objective(x, y, &u, c);
                    if v < best {
                        best = v;
                        centre = u;
                    }
                }
            }
        }
        step /= 4.0;
    }
    best
}
