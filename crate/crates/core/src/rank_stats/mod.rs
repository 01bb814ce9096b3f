//! Tie-aware rank statistics.
//!
//! Correlation estimators implement [`CorrelationMethod`] and are looked up by
//! name through a [`MethodRegistry`], so callers (and the CLI `--method` flag)
//! choose the estimator at runtime. The built-ins are Spearman (Pearson on
//! midranks), Kendall tau-b and plain Pearson.

mod kendall;
mod pearson;
mod ranks;
mod registry;
mod spearman;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kendall::{kendall_tau, KendallTau};
pub use pearson::{pearson, Pearson};
pub use ranks::{midranks, RankVector};
pub use registry::MethodRegistry;
pub use spearman::{spearman, Spearman};

/// Minimum number of pairs accepted by every estimator.
pub const MIN_PAIRS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub estimate: f64,
    pub n_pairs: usize,
    pub method: String,
}

/// A bivariate correlation estimator.
pub trait CorrelationMethod: Send + Sync {
    /// Registry key, e.g. `"spearman"`.
    fn name(&self) -> &'static str;

    /// True when the estimate depends only on the orderings of `x` and `y`.
    fn is_rank_based(&self) -> bool;

    /// Point estimate in `[-1, 1]`.
    fn estimate(&self, x: &[f64], y: &[f64]) -> Result<f64>;

    fn correlate(&self, x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
        Ok(CorrelationResult {
            estimate: self.estimate(x, y)?,
            n_pairs: x.len(),
            method: self.name().to_string(),
        })
    }
}

pub(crate) fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < MIN_PAIRS {
        return Err(Error::TooShort {
            what: "pairs",
            got: x.len(),
            need: MIN_PAIRS,
        });
    }
    check_finite(x)?;
    check_finite(y)
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}
