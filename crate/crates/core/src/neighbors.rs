//! K-nearest-neighbour and extended-nearest-neighbour (ENN) classifiers.
//!
//! Distances are squared Euclidean. Neighbours are ordered by
//! `(distance, row index)`, so among equidistant rows the lower index wins.
//!
//! ENN scores a query by tentatively adding it to each candidate class `j`
//! and measuring, for every class `i`, the fraction `Q_{i,j}` of same-class
//! points among the k nearest neighbours of class-`i` members in the
//! augmented sample. The query takes the class maximizing `Σ_i Q_{i,j}`.
//! Only the neighbour lists the query actually enters change, so
//! [`NeighborModel::enn_predict`] updates precomputed lists instead of
//! rebuilding them; the results are identical to a full recomputation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numerics::{sq_dist, Matrix};

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Neighbor {
    dist: f64,
    index: usize,
}

impl Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.index.cmp(&other.index))
    }
}

/// The `k` nearest rows of `x` to `point`, nearest first, skipping `exclude`.
fn k_nearest(x: &Matrix, point: &[f64], k: usize, exclude: Option<usize>) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = (0..x.rows())
        .filter(|&i| Some(i) != exclude)
        .map(|i| Neighbor {
            dist: sq_dist(point, x.row(i)),
            index: i,
        })
        .collect();
    let k = k.min(all.len());
    if k < all.len() {
        all.select_nth_unstable_by(k, Neighbor::cmp);
        all.truncate(k);
    }
    all.sort_by(Neighbor::cmp);
    all
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnPrediction {
    pub label: usize,
    /// Vote share per class; entries are multiples of `1/k`.
    pub posterior: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct NeighborModel {
    train_x: Matrix,
    train_y: Vec<usize>,
    k: usize,
    class_count: usize,
    class_sizes: Vec<usize>,
    /// `Q_i` of the training sample alone.
    enn_base_stats: Vec<f64>,
    /// Same-class neighbours among each training row's k nearest.
    same_class_hits: Vec<usize>,
    /// Each training row's k-th nearest neighbour (the one a query would evict).
    kth_neighbor: Vec<Neighbor>,
}

impl NeighborModel {
    pub fn fit(train_x: Matrix, train_y: Vec<usize>, k: usize, class_count: usize) -> Result<Self> {
        let n = train_x.rows();
        if train_y.len() != n {
            return Err(Error::InvalidInput(format!(
                "{n} training rows but {} labels",
                train_y.len()
            )));
        }
        if k < 1 || k + 1 > n {
            return Err(Error::InvalidParameter(format!(
                "k must lie in [1, {}] for {n} training rows, got {k}",
                n.saturating_sub(1)
            )));
        }
        train_x.ensure_finite("training features")?;
        let mut class_sizes = vec![0usize; class_count];
        for &y in &train_y {
            if y >= class_count {
                return Err(Error::InvalidInput(format!(
                    "label {y} out of range for {class_count} classes"
                )));
            }
            class_sizes[y] += 1;
        }
        if let Some(c) = class_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInput(format!("class {c} has no training samples")));
        }

        let mut same_class_hits = Vec::with_capacity(n);
        let mut kth_neighbor = Vec::with_capacity(n);
        for i in 0..n {
            let nn = k_nearest(&train_x, train_x.row(i), k, Some(i));
            same_class_hits.push(nn.iter().filter(|nb| train_y[nb.index] == train_y[i]).count());
            kth_neighbor.push(nn[k - 1]);
        }
        let mut hits_per_class = vec![0usize; class_count];
        for (i, &h) in same_class_hits.iter().enumerate() {
            hits_per_class[train_y[i]] += h;
        }
        let enn_base_stats = hits_per_class
            .iter()
            .zip(&class_sizes)
            .map(|(&h, &size)| h as f64 / (size * k) as f64)
            .collect();

        Ok(Self {
            train_x,
            train_y,
            k,
            class_count,
            class_sizes,
            enn_base_stats,
            same_class_hits,
            kth_neighbor,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn enn_base_stats(&self) -> &[f64] {
        &self.enn_base_stats
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.train_x.cols() {
            return Err(Error::InvalidInput(format!(
                "query has {} features, model expects {}",
                x.len(),
                self.train_x.cols()
            )));
        }
        Ok(())
    }

    /// Majority vote among the k nearest training rows.
    ///
    /// Tied vote counts go to the class whose voting neighbours have the
    /// smaller summed distance, then to the lower class id.
    pub fn knn_predict(&self, x: &[f64]) -> Result<KnnPrediction> {
        self.check_point(x)?;
        let nn = k_nearest(&self.train_x, x, self.k, None);
        let mut votes = vec![0usize; self.class_count];
        let mut dist_sum = vec![0.0; self.class_count];
        for nb in &nn {
            let c = self.train_y[nb.index];
            votes[c] += 1;
            dist_sum[c] += nb.dist;
        }
        let mut label = 0;
        for c in 1..self.class_count {
            let better =
                votes[c] > votes[label] || (votes[c] == votes[label] && dist_sum[c] < dist_sum[label]);
            if better {
                label = c;
            }
        }
        let posterior = votes.iter().map(|&v| v as f64 / self.k as f64).collect();
        Ok(KnnPrediction { label, posterior })
    }

    /// `Θ^j = Σ_i Q_{i,j}` for every candidate class `j`.
    pub fn enn_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let classes = self.class_count;
        let k = self.k;

        // Training rows whose neighbour list the query would enter. The query
        // is appended after all training rows, so it loses distance ties.
        let mut base_hits = vec![0usize; classes];
        let mut lost = vec![0usize; classes];
        let mut entered = vec![0usize; classes];
        for (i, &yi) in self.train_y.iter().enumerate() {
            base_hits[yi] += self.same_class_hits[i];
            let d = sq_dist(x, self.train_x.row(i));
            if d < self.kth_neighbor[i].dist {
                entered[yi] += 1;
                if self.train_y[self.kth_neighbor[i].index] == yi {
                    lost[yi] += 1;
                }
            }
        }

        let own = k_nearest(&self.train_x, x, k, None);
        let mut own_votes = vec![0usize; classes];
        for nb in &own {
            own_votes[self.train_y[nb.index]] += 1;
        }

        let scores = (0..classes)
            .map(|j| {
                (0..classes)
                    .map(|i| {
                        let mut hits = base_hits[i] - lost[i];
                        let mut size = self.class_sizes[i];
                        if i == j {
                            hits += entered[i] + own_votes[j];
                            size += 1;
                        }
                        hits as f64 / (size * k) as f64
                    })
                    .sum()
            })
            .collect();
        Ok(scores)
    }

    /// ENN label: the candidate class with the largest summed statistic; ties
    /// go to the lower class id.
    pub fn enn_predict(&self, x: &[f64]) -> Result<usize> {
        let scores = self.enn_scores(x)?;
        Ok(argmax_low_tie(&scores))
    }
}

pub(crate) fn argmax_low_tie(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `Q_i`: mean fraction of same-class rows among the k nearest neighbours
/// (within the whole sample, excluding the row itself) of class-`class` rows.
pub fn enn_class_statistic(x: &Matrix, y: &[usize], k: usize, class: usize) -> Result<f64> {
    let n = x.rows();
    if k < 1 || k + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "k must lie in [1, {}], got {k}",
            n.saturating_sub(1)
        )));
    }
    let members: Vec<usize> = (0..n).filter(|&i| y[i] == class).collect();
    if members.is_empty() {
        return Err(Error::InvalidInput(format!("class {class} has no samples")));
    }
    let hits: usize = members
        .iter()
        .map(|&i| {
            k_nearest(x, x.row(i), k, Some(i))
                .iter()
                .filter(|nb| y[nb.index] == class)
                .count()
        })
        .sum();
    Ok(hits as f64 / (members.len() * k) as f64)
}
