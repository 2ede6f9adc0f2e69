//! Classical (Torgerson) multidimensional scaling.
//!
//! Squared dissimilarities are double centered into an inner-product matrix
//! `B = −½·J·D²·J`, whose top eigenpairs give the coordinates
//! `X = E_d·Λ_d^{1/2}`. Fit quality is reported as the normalized strain
//! between `B` and the Gram matrix of `X`.

use crate::error::{Error, Result};
use crate::numerics::{dot, jacobi_eigh, Matrix};

#[derive(Debug, Clone)]
pub struct MdsResult {
    /// `n × d` coordinates, columns in descending eigenvalue order.
    pub x: Matrix,
    /// The `d` eigenvalues used, after clamping negatives to zero.
    pub eigenvalues: Vec<f64>,
    /// Positive eigenvalues of `B` (relative tolerance 1e-10 of the largest magnitude).
    pub positive_rank: usize,
    /// How many of the used eigenvalues were negative and clamped.
    pub clamped_count: usize,
    pub strain: f64,
}

/// `B = −½·J·(D⊙D)·J` with `J = I − 11ᵀ/n`.
pub fn double_center(d: &Matrix) -> Result<Matrix> {
    if !d.is_square() {
        return Err(Error::InvalidInput(format!(
            "dissimilarity matrix must be square, got {}x{}",
            d.rows(),
            d.cols()
        )));
    }
    d.ensure_finite("dissimilarity matrix")?;
    let n = d.rows();
    let scale = d.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * (1.0 + scale);
    if d.asymmetry() > tol {
        return Err(Error::InvalidInput(format!(
            "dissimilarity matrix is not symmetric (max gap {:e})",
            d.asymmetry()
        )));
    }
    if let Some(pos) = d.as_slice().iter().position(|&v| v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "negative dissimilarity at ({}, {})",
            pos / n,
            pos % n
        )));
    }
    if let Some(i) = (0..n).find(|&i| d[(i, i)] != 0.0) {
        return Err(Error::InvalidInput(format!(
            "dissimilarity diagonal must be zero, d[{i}][{i}] = {}",
            d[(i, i)]
        )));
    }

    let mut sq = d.clone();
    sq.as_mut_slice().iter_mut().for_each(|v| *v *= *v);
    let nf = n as f64;
    let row_means: Vec<f64> = sq.row_iter().map(|r| r.iter().sum::<f64>() / nf).collect();
    let grand = row_means.iter().sum::<f64>() / nf;

    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let sym = 0.5 * (sq[(i, j)] + sq[(j, i)]);
            let v = -0.5 * (sym - row_means[i] - row_means[j] + grand);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    Ok(b)
}

/// Embeds the `n` objects of `d` into `dim` dimensions.
pub fn classical_mds(d: &Matrix, dim: usize) -> Result<MdsResult> {
    let n = d.rows();
    if dim < 1 || dim + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "MDS target dimension must lie in [1, {}], got {dim}",
            n.saturating_sub(1)
        )));
    }
    let b = double_center(d)?;
    mds_from_inner_products(&b, dim)
}

/// Eigen-step of classical MDS on an already double-centered `B`.
pub fn mds_from_inner_products(b: &Matrix, dim: usize) -> Result<MdsResult> {
    let n = b.rows();
    if dim < 1 || dim > n {
        return Err(Error::InvalidParameter(format!(
            "MDS target dimension {dim} out of range for {n} objects"
        )));
    }
    let eig = jacobi_eigh(b)?;
    let top = &eig.eigenvalues[..dim];
    if top.iter().all(|&l| l <= 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "none of the top {dim} eigenvalues is positive (largest {:e})",
            top[0]
        )));
    }

    let largest = eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let positive_rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-10 * largest).count();
    let clamped_count = top.iter().filter(|&&l| l < 0.0).count();
    let eigenvalues: Vec<f64> = top.iter().map(|&l| l.max(0.0)).collect();

    let mut x = Matrix::zeros(n, dim);
    for (j, &l) in eigenvalues.iter().enumerate() {
        let root = l.sqrt();
        for i in 0..n {
            x[(i, j)] = eig.eigenvectors[(i, j)] * root;
        }
    }
    let strain = strain(b, &x)?;
    Ok(MdsResult {
        x,
        eigenvalues,
        positive_rank,
        clamped_count,
        strain,
    })
}

/// `(Σ (b_ij − ⟨x_i, x_j⟩)² / Σ b_ij²)^{1/2}`.
pub fn strain(b: &Matrix, x: &Matrix) -> Result<f64> {
    let n = b.rows();
    if !b.is_square() || x.rows() != n {
        return Err(Error::InvalidInput(format!(
            "strain needs a square B and matching X, got {}x{} and {}x{}",
            b.rows(),
            b.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let denom: f64 = b.as_slice().iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::UndefinedStrain);
    }
    let mut num = 0.0;
    for i in 0..n {
        let xi = x.row(i);
        for j in 0..n {
            let r = b[(i, j)] - dot(xi, x.row(j));
            num += r * r;
        }
    }
    Ok((num / denom).sqrt())
}
