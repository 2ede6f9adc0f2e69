//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Converged once the off-diagonal Frobenius norm drops to this fraction of `‖S‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-10;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EighResult {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector paired with `eigenvalues[j]`.
    pub eigenvectors: Matrix,
    pub sweeps: usize,
}

impl EighResult {
    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized as `(S + Sᵀ)/2` before rotating. Each returned
/// eigenvector has its largest-magnitude component positive.
pub fn jacobi_eigh(s: &Matrix) -> Result<EighResult> {
    if !s.is_square() {
        return Err(Error::InvalidInput(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    s.ensure_finite("matrix passed to jacobi_eigh")?;
    let n = s.rows();

    let mut a = s.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }

    // Rows of `vt` are the eigenvectors; row storage keeps rotations contiguous.
    let mut vt = Matrix::identity(n);
    let norm = a.frobenius_norm();
    let tol = JACOBI_REL_TOL * norm;
    // Entries below this cannot lift the off-norm above `tol` even all together.
    let skip = if n > 0 { 1e-3 * tol / n as f64 } else { 0.0 };

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= skip {
                    continue;
                }
                rotate(&mut a, &mut vt, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let v = vt.row(src);
        let mut pivot = 0;
        for (k, x) in v.iter().enumerate() {
            if x.abs() > v[pivot].abs() {
                pivot = k;
            }
        }
        let sign = if v.get(pivot).copied().unwrap_or(0.0) < 0.0 {
            -1.0
        } else {
            1.0
        };
        for (k, x) in v.iter().enumerate() {
            eigenvectors[(k, col)] = sign * x;
        }
    }

    Ok(EighResult {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for (j, v) in a.row(i).iter().enumerate() {
            if i != j {
                acc += v * v;
            }
        }
    }
    acc.sqrt()
}

/// Applies the rotation that annihilates `a[p][q]`, updating `a` in place and
/// accumulating it into the eigenvector rows of `vt`.
fn rotate(a: &mut Matrix, vt: &mut Matrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let app = a[(p, p)];
    let aqq = a[(q, q)];

    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    {
        let data = a.as_mut_slice();
        let (lo, hi) = data.split_at_mut(q * n);
        let row_p = &mut lo[p * n..(p + 1) * n];
        let row_q = &mut hi[..n];
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let xp = *x;
            let xq = *y;
            *x = c * xp - s * xq;
            *y = s * xp + c * xq;
        }
    }
    for k in 0..n {
        if k != p && k != q {
            a[(k, p)] = a[(p, k)];
            a[(k, q)] = a[(q, k)];
        }
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    let data = vt.as_mut_slice();
    let (lo, hi) = data.split_at_mut(q * n);
    let row_p = &mut lo[p * n..(p + 1) * n];
    let row_q = &mut hi[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}
