use crate::error::{Error, Result};
use crate::numerics::RandomStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    /// Ascending row indices.
    pub train: Vec<usize>,
    /// Ascending row indices.
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Test rows drawn from a class of `class_size` members:
/// `round(fraction · size)` clamped to `[0, size − 1]`.
pub fn test_count_for_class(class_size: usize, test_fraction: f64) -> usize {
    let raw = (test_fraction * class_size as f64).round() as usize;
    raw.min(class_size.saturating_sub(1))
}

/// Per-class shuffled split. Classes are visited in id order, each shuffled
/// with the shared stream, and the first `test_count_for_class` members go to
/// the test side.
pub fn stratified_split(
    labels: &[usize],
    test_fraction: f64,
    rng: &mut RandomStream,
) -> Result<SplitIndices> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test_fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let class_count = labels.iter().max().map_or(0, |&m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for (i, &y) in labels.iter().enumerate() {
        members[y].push(i);
    }
    if let Some(c) = members.iter().position(|m| m.len() == 1) {
        return Err(Error::InvalidDataset(format!(
            "class {c} has a single member and cannot be split"
        )));
    }

    let seed = rng.seed();
    let mut train = Vec::with_capacity(labels.len());
    let mut test = Vec::new();
    for mut rows in members.into_iter().filter(|m| !m.is_empty()) {
        rng.shuffle(&mut rows);
        let t = test_count_for_class(rows.len(), test_fraction);
        test.extend_from_slice(&rows[..t]);
        train.extend_from_slice(&rows[t..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test, seed })
}
