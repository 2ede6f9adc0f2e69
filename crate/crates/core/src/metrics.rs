//! Confusion-matrix scores: accuracy, macro-averaged F-measure and G-mean.
//!
//! For more than two classes the F-measure is the unweighted mean of the
//! one-vs-rest F values, and the G-mean is the geometric mean of per-class
//! recalls. A class with `P + R = 0` contributes an F of 0; a class with no
//! true samples has recall 0.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    class_count: usize,
    /// Row-major; `(t, p)` counts samples of true class `t` predicted as `p`.
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn from_counts(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("confusion matrix must be square".into()));
        }
        Ok(Self {
            class_count: n,
            counts: rows.concat(),
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.class_count + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.class_count).map(|c| self.get(c, c)).sum()
    }

    fn row_sum(&self, t: usize) -> u64 {
        (0..self.class_count).map(|p| self.get(t, p)).sum()
    }

    fn col_sum(&self, p: usize) -> u64 {
        (0..self.class_count).map(|t| self.get(t, p)).sum()
    }

    pub fn recall(&self, class: usize) -> f64 {
        ratio(self.get(class, class), self.row_sum(class))
    }

    pub fn precision(&self, class: usize) -> f64 {
        ratio(self.get(class, class), self.col_sum(class))
    }

    fn ensure_nonempty(&self) -> Result<()> {
        if self.total() == 0 {
            return Err(Error::InvalidInput("confusion matrix is empty".into()));
        }
        Ok(())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn confusion(y_true: &[usize], y_pred: &[usize], class_count: usize) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidInput(format!(
            "{} true labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut counts = vec![0u64; class_count * class_count];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t >= class_count || p >= class_count {
            return Err(Error::InvalidInput(format!(
                "label pair ({t}, {p}) out of range for {class_count} classes"
            )));
        }
        counts[t * class_count + p] += 1;
    }
    Ok(ConfusionMatrix { class_count, counts })
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    cm.ensure_nonempty()?;
    Ok(cm.correct() as f64 / cm.total() as f64)
}

/// Per-class one-vs-rest F values.
pub fn class_f_measures(cm: &ConfusionMatrix) -> Vec<f64> {
    (0..cm.class_count())
        .map(|c| {
            let (p, r) = (cm.precision(c), cm.recall(c));
            if p + r == 0.0 {
                0.0
            } else {
                2.0 * p * r / (p + r)
            }
        })
        .collect()
}

pub fn f_measure(cm: &ConfusionMatrix) -> Result<f64> {
    cm.ensure_nonempty()?;
    let f = class_f_measures(cm);
    Ok(f.iter().sum::<f64>() / f.len() as f64)
}

pub fn g_mean(cm: &ConfusionMatrix) -> Result<f64> {
    cm.ensure_nonempty()?;
    let n = cm.class_count();
    let recalls: Vec<f64> = (0..n).map(|c| cm.recall(c)).collect();
    if recalls.contains(&0.0) {
        return Ok(0.0);
    }
    // log-space keeps 15-class products away from underflow
    let mean_log = recalls.iter().map(|r| r.ln()).sum::<f64>() / n as f64;
    Ok(mean_log.exp().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRow {
    pub accuracy: f64,
    pub f_measure: f64,
    pub g_mean: f64,
}

impl ScoreRow {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Result<Self> {
        Ok(Self {
            accuracy: accuracy(cm)?,
            f_measure: f_measure(cm)?,
            g_mean: g_mean(cm)?,
        })
    }

    pub fn score(y_true: &[usize], y_pred: &[usize], class_count: usize) -> Result<Self> {
        Self::from_confusion(&confusion(y_true, y_pred, class_count)?)
    }
}
