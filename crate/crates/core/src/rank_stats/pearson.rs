use crate::error::{Error, Result};

use super::{check_pair, CorrelationMethod, CorrelationResult};

/// Product-moment correlation. Not rank based; kept for comparison.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pearson;

impl CorrelationMethod for Pearson {
    fn name(&self) -> &'static str {
        "pearson"
    }

    fn is_rank_based(&self) -> bool {
        false
    }

    fn estimate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_pair(x, y)?;
        for (name, v) in [("x", x), ("y", y)] {
            if v.iter().all(|&a| a == v[0]) {
                return Err(Error::Degenerate(format!("{name} is constant")));
            }
        }
        Ok(product_moment(x, y))
    }
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    Pearson.correlate(x, y)
}

/// Two-pass product-moment correlation. Callers guarantee equal, non-constant inputs.
pub(crate) fn product_moment(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}
