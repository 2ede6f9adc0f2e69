//! Linear soft-margin SVM trained by dual coordinate ascent, with
//! one-vs-rest reduction for more than two classes.
//!
//! The bias is folded in as a constant trailing feature of value 1, so the
//! solver minimizes `½‖u‖² + C·Σ max(0, 1 − y_i·u·x̃_i)` over the augmented
//! weight vector `u` (the bias is lightly regularized). The dual is a box
//! constrained problem on `α ∈ [0, C]ⁿ` which is maximized one coordinate at
//! a time in a seeded order that stays fixed across epochs.

use crate::error::{Error, Result};
use crate::neighbors::argmax_low_tie;
use crate::numerics::{dot, Matrix, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub max_epochs: usize,
    /// Stop once no coordinate moves by more than this in an epoch.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            max_epochs: 1000,
            tol: 1e-6,
            seed: 0,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParameter("max_epochs must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tol must be non-negative, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// Feature weights followed by the bias (length `d + 1`).
    pub u: Vec<f64>,
    pub c: f64,
    pub alphas: Vec<f64>,
    /// Primal objective after each epoch.
    pub primal_history: Vec<f64>,
    /// Dual objective after each epoch.
    pub dual_history: Vec<f64>,
    pub converged: bool,
}

impl LinearModel {
    pub fn feature_count(&self) -> usize {
        self.u.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.u[..self.u.len() - 1]
    }

    pub fn bias(&self) -> f64 {
        self.u[self.u.len() - 1]
    }

    /// `u·x̃` for an un-augmented point.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        dot(self.weights(), x) + self.bias()
    }

    pub fn epochs(&self) -> usize {
        self.primal_history.len()
    }
}

/// `½‖u‖² + C·Σ hinge` on the augmented problem.
pub fn primal_objective(x: &Matrix, y: &[f64], u: &[f64], c: f64) -> f64 {
    let d = x.cols();
    let hinge: f64 = x
        .row_iter()
        .zip(y)
        .map(|(row, &yi)| (1.0 - yi * (dot(&u[..d], row) + u[d])).max(0.0))
        .sum();
    0.5 * dot(u, u) + c * hinge
}

fn dual_objective(alphas: &[f64], u: &[f64]) -> f64 {
    alphas.iter().sum::<f64>() - 0.5 * dot(u, u)
}

fn check_labels(y: &[f64], n: usize) -> Result<()> {
    if y.len() != n {
        return Err(Error::InvalidInput(format!("{n} rows but {} labels", y.len())));
    }
    if let Some(v) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidInput(format!("binary labels must be ±1, got {v}")));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::InvalidInput(
            "binary training needs both classes present".into(),
        ));
    }
    Ok(())
}

fn visit_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    RandomStream::new(seed).shuffle(&mut order);
    order
}

/// Trains a binary model on labels in `{−1, +1}`.
pub fn svm_train_binary(x: &Matrix, y: &[f64], params: &SvmParams) -> Result<LinearModel> {
    params.validate()?;
    check_labels(y, x.rows())?;
    x.ensure_finite("SVM features")?;
    Ok(train_with_order(
        x,
        y,
        params,
        &visit_order(x.rows(), params.seed),
    ))
}

fn train_with_order(x: &Matrix, y: &[f64], params: &SvmParams, order: &[usize]) -> LinearModel {
    let (n, d) = x.shape();
    let c = params.c;
    // ‖x̃_i‖², never below 1 thanks to the bias feature
    let diag: Vec<f64> = x.row_iter().map(|r| dot(r, r) + 1.0).collect();
    let mut alphas = vec![0.0; n];
    let mut u = vec![0.0; d + 1];
    let mut primal_history = Vec::new();
    let mut dual_history = Vec::new();
    let mut converged = false;

    for _ in 0..params.max_epochs {
        let mut max_step = 0.0_f64;
        for &i in order {
            let row = x.row(i);
            let yi = y[i];
            let grad = yi * (dot(&u[..d], row) + u[d]) - 1.0;
            let old = alphas[i];
            let new = (old - grad / diag[i]).clamp(0.0, c);
            let step = new - old;
            if step != 0.0 {
                alphas[i] = new;
                let s = step * yi;
                for (uj, &xj) in u[..d].iter_mut().zip(row) {
                    *uj += s * xj;
                }
                u[d] += s;
                max_step = max_step.max(step.abs());
            }
        }
        primal_history.push(primal_objective(x, y, &u, c));
        dual_history.push(dual_objective(&alphas, &u));
        if max_step <= params.tol {
            converged = true;
            break;
        }
    }

    LinearModel {
        u,
        c,
        alphas,
        primal_history,
        dual_history,
        converged,
    }
}

/// Geometric margin `2/‖w‖`, bias excluded.
pub fn svm_margin(model: &LinearModel) -> Result<f64> {
    let norm = dot(model.weights(), model.weights()).sqrt();
    if norm == 0.0 {
        return Err(Error::UndefinedMargin);
    }
    Ok(2.0 / norm)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OvrModelSet {
    /// Model `c` separates class `c` (+1) from the rest (−1).
    pub models: Vec<LinearModel>,
}

impl OvrModelSet {
    /// Trains one model per class. All models visit samples in the same
    /// order, so with two classes the second model mirrors the first.
    pub fn train(x: &Matrix, labels: &[usize], class_count: usize, params: &SvmParams) -> Result<Self> {
        params.validate()?;
        if class_count < 2 {
            return Err(Error::InvalidInput(format!(
                "one-vs-rest needs at least 2 classes, got {class_count}"
            )));
        }
        if labels.len() != x.rows() {
            return Err(Error::InvalidInput(format!(
                "{} rows but {} labels",
                x.rows(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::InvalidInput(format!(
                "label {l} out of range for {class_count} classes"
            )));
        }
        x.ensure_finite("SVM features")?;
        let order = visit_order(x.rows(), params.seed);
        let models = (0..class_count)
            .map(|c| {
                let y: Vec<f64> = labels.iter().map(|&l| if l == c { 1.0 } else { -1.0 }).collect();
                check_labels(&y, x.rows())?;
                Ok(train_with_order(x, &y, params, &order))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { models })
    }

    pub fn class_count(&self) -> usize {
        self.models.len()
    }

    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        self.models.iter().map(|m| m.decision_value(x)).collect()
    }
}

/// Class with the largest decision value; ties go to the lower class id.
pub fn svm_predict(models: &OvrModelSet, x: &[f64]) -> Result<usize> {
    let d = models.models[0].feature_count();
    if x.len() != d {
        return Err(Error::InvalidInput(format!(
            "query has {} features, model expects {d}",
            x.len()
        )));
    }
    Ok(argmax_low_tie(&models.decision_values(x)))
}
