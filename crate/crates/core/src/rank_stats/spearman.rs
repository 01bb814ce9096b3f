use crate::error::{Error, Result};

use super::pearson::product_moment;
use super::{check_pair, midranks, CorrelationMethod, CorrelationResult};

/// Spearman's rho as the product-moment correlation of midranks.
///
/// The `1 - 6 sum(d^2) / (n (n^2 - 1))` shortcut is not used because it is
/// wrong under ties, and zero-volatility days tie routinely.
#[derive(Debug, Clone, Copy, Default)]
pub struct Spearman;

impl CorrelationMethod for Spearman {
    fn name(&self) -> &'static str {
        "spearman"
    }

    fn is_rank_based(&self) -> bool {
        true
    }

    fn estimate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_pair(x, y)?;
        let rx = midranks(x)?;
        let ry = midranks(y)?;
        for (name, r) in [("x", &rx), ("y", &ry)] {
            if r.is_constant() {
                return Err(Error::Degenerate(format!("{name} has zero rank variance")));
            }
        }
        Ok(product_moment(&rx.ranks, &ry.ranks))
    }
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    Spearman.correlate(x, y)
}
