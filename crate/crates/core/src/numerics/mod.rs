//! Dense linear-algebra primitives shared by the reducers and classifiers.

mod eigen;
mod matrix;
mod rng;

pub use eigen::{jacobi_eigh, EighResult, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL};
pub use matrix::{dot, sq_dist, Matrix};
pub use rng::RandomStream;

use crate::error::Result;

/// Squared Euclidean distances between every pair of rows.
pub fn pairwise_sq_dists(x: &Matrix) -> Result<Matrix> {
    x.ensure_finite("input to pairwise_sq_dists")?;
    let n = x.rows();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        let xi = x.row(i);
        for j in (i + 1)..n {
            let v = sq_dist(xi, x.row(j));
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(d)
}

/// Euclidean (not squared) distance matrix.
pub fn pairwise_dists(x: &Matrix) -> Result<Matrix> {
    let mut d = pairwise_sq_dists(x)?;
    d.as_mut_slice().iter_mut().for_each(|v| *v = v.sqrt());
    Ok(d)
}

/// Column statistics returned by [`standardize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub data: Matrix,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

/// Z-scores every column with the population (1/n) standard deviation.
///
/// Columns whose standard deviation is zero (up to rounding) become all zeros
/// and report a std of 0.
pub fn standardize(x: &Matrix) -> Standardized {
    let (n, m) = x.shape();
    let mut means = vec![0.0; m];
    for row in x.row_iter() {
        for (acc, v) in means.iter_mut().zip(row) {
            *acc += v;
        }
    }
    let inv_n = 1.0 / n.max(1) as f64;
    means.iter_mut().for_each(|v| *v *= inv_n);

    let mut stds = vec![0.0; m];
    for row in x.row_iter() {
        for ((acc, v), mu) in stds.iter_mut().zip(row).zip(&means) {
            let d = v - mu;
            *acc += d * d;
        }
    }
    for (s, mu) in stds.iter_mut().zip(&means) {
        *s = (*s * inv_n).sqrt();
        if *s <= 1e-12 * mu.abs().max(1.0) {
            *s = 0.0;
        }
    }

    let mut data = Matrix::zeros(n, m);
    for i in 0..n {
        let src = x.row(i);
        for (j, out) in data.row_mut(i).iter_mut().enumerate() {
            *out = if stds[j] > 0.0 {
                (src[j] - means[j]) / stds[j]
            } else {
                0.0
            };
        }
    }
    Standardized { data, means, stds }
}
