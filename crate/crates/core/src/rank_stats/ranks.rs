use crate::error::{Error, Result};

use super::check_finite;

/// Midranks of a sample: 1-based ranks with tied values sharing the average
/// of the positions they span.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub ranks: Vec<f64>,
}

impl RankVector {
    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    /// True when every observation is tied with every other.
    pub fn is_constant(&self) -> bool {
        self.ranks.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn midranks(x: &[f64]) -> Result<RankVector> {
    if x.is_empty() {
        return Err(Error::TooShort {
            what: "observations",
            got: 0,
            need: 1,
        });
    }
    check_finite(x)?;

    // `+ 0.0` folds -0.0 into 0.0 so total_cmp agrees with `==`
    let mut order: Vec<(f64, usize)> = x.iter().map(|&v| v + 0.0).zip(0..).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && order[end].0 == order[start].0 {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let rank = (start + 1 + end) as f64 / 2.0;
        for &(_, i) in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    Ok(RankVector { ranks })
}
