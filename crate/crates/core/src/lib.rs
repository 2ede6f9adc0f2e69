//! Exact t-SNE and classical MDS dimensionality reduction, KNN / ENN / linear
//! SVM classifiers, and a deterministic benchmark harness that reduces each
//! dataset to half its dimension, splits it 90/10 and scores every classifier.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod mds;
pub mod metrics;
pub mod neighbors;
pub mod numerics;
pub mod svm;
pub mod tsne;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use numerics::{Matrix, RandomStream};

/// Dimensionality-reduction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DrMethod {
    Tsne,
    Mds,
}

impl DrMethod {
    pub const ALL: [DrMethod; 2] = [DrMethod::Tsne, DrMethod::Mds];

    pub fn as_str(self) -> &'static str {
        match self {
            DrMethod::Tsne => "tsne",
            DrMethod::Mds => "mds",
        }
    }
}

impl fmt::Display for DrMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DrMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tsne" | "t-sne" => Ok(DrMethod::Tsne),
            "mds" => Ok(DrMethod::Mds),
            other => Err(Error::config("dr", format!("unknown method {other:?}"))),
        }
    }
}
