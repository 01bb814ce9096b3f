//! Explicit, logged cleaning of a validated price series.
//!
//! The default policy removes only structurally impossible bars (non-positive
//! prices). Crashes, splits and other large moves are kept unless an explicit
//! log-return threshold is configured.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PriceSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanPolicy {
    pub drop_nonpositive_prices: bool,
    /// Natural-log units. `None` keeps every move.
    pub max_abs_logreturn: Option<f64>,
    pub min_length: usize,
}

impl Default for CleanPolicy {
    fn default() -> Self {
        Self {
            drop_nonpositive_prices: true,
            max_abs_logreturn: None,
            min_length: 30,
        }
    }
}

impl CleanPolicy {
    /// Policy that removes nothing; only the length check remains.
    pub fn keep_all(min_length: usize) -> Self {
        Self {
            drop_nonpositive_prices: false,
            max_abs_logreturn: None,
            min_length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.max_abs_logreturn {
            Some(t) if !(t > 0.0 && t.is_finite()) => Err(Error::Config(format!(
                "max_abs_logreturn must be a positive finite number, got {t}"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    NonpositivePrice,
    IntradayOutlier,
    OvernightOutlier,
}

impl RemovalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RemovalReason::NonpositivePrice => "nonpositive_price",
            RemovalReason::IntradayOutlier => "intraday_outlier",
            RemovalReason::OvernightOutlier => "overnight_outlier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub date: NaiveDate,
    pub field: String,
    pub reason: RemovalReason,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CleanLog {
    pub input_bars: usize,
    pub removals: Vec<Removal>,
    pub counts: BTreeMap<String, usize>,
}

impl CleanLog {
    fn record(&mut self, date: NaiveDate, field: &str, reason: RemovalReason) {
        self.removals.push(Removal {
            date,
            field: field.to_string(),
            reason,
        });
        *self.counts.entry(reason.as_str().to_string()).or_default() += 1;
    }
}

/// Apply `policy` to `series`.
///
/// Overnight moves are measured against the previous *kept* bar, so a second
/// pass with the same policy removes nothing.
pub fn clean_series(series: PriceSeries, policy: &CleanPolicy) -> Result<(PriceSeries, CleanLog)> {
    policy.validate()?;
    let PriceSeries { symbol, bars, source } = series;
    let mut log = CleanLog {
        input_bars: bars.len(),
        ..CleanLog::default()
    };

    let mut kept = Vec::with_capacity(bars.len());
    let mut prev_close: Option<f64> = None;
    for bar in bars {
        if policy.drop_nonpositive_prices && (bar.open <= 0.0 || bar.close <= 0.0) {
            let field = if bar.open <= 0.0 { "open" } else { "close" };
            log.record(bar.date, field, RemovalReason::NonpositivePrice);
            continue;
        }
        if let Some(limit) = policy.max_abs_logreturn {
            if (bar.close / bar.open).ln().abs() > limit {
                log.record(bar.date, "close", RemovalReason::IntradayOutlier);
                continue;
            }
            if let Some(prev) = prev_close {
                if (bar.open / prev).ln().abs() > limit {
                    log.record(bar.date, "open", RemovalReason::OvernightOutlier);
                    continue;
                }
            }
        }
        prev_close = Some(bar.close);
        kept.push(bar);
    }

    if kept.len() < policy.min_length {
        return Err(Error::TooShort {
            what: "bars after cleaning",
            got: kept.len(),
            need: policy.min_length,
        });
    }
    Ok((
        PriceSeries {
            symbol,
            bars: kept,
            source,
        },
        log,
    ))
}
