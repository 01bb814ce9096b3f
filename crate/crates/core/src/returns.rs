//! Intra-day and overnight log-returns.
//!
//! For trading day `k` with open `o_k` and close `c_k`:
//!
//! * intra-day return `d_k = ln(c_k / o_k)`, defined for every day;
//! * overnight return `n_k = ln(o_k / c_{k-1})`, defined from the second day on
//!   and indexed by the day that *follows* the night.
//!
//! Weekend and holiday gaps get no special treatment; the "night" spans the
//! whole non-trading period. Volatility is the absolute log-return.

use std::fmt::Write as _;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PriceSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub symbol: String,
    /// One date per trading day, length `N`.
    pub dates: Vec<NaiveDate>,
    /// `intraday[i]` is the return of day `i`, length `N`.
    pub intraday: Vec<f64>,
    /// `overnight[i]` is the night *before* day `i + 1`, length `N - 1`.
    pub overnight: Vec<f64>,
    pub vol_intraday: Vec<f64>,
    pub vol_overnight: Vec<f64>,
}

impl ReturnSeries {
    /// Assemble from raw returns, deriving volatilities.
    pub fn from_returns(
        symbol: impl Into<String>,
        dates: Vec<NaiveDate>,
        intraday: Vec<f64>,
        overnight: Vec<f64>,
    ) -> Result<Self> {
        if dates.len() != intraday.len() {
            return Err(Error::LengthMismatch(dates.len(), intraday.len()));
        }
        if intraday.len() < 2 {
            return Err(Error::TooShort {
                what: "days",
                got: intraday.len(),
                need: 2,
            });
        }
        if overnight.len() + 1 != intraday.len() {
            return Err(Error::LengthMismatch(overnight.len() + 1, intraday.len()));
        }
        let vol_intraday = intraday.iter().map(|r| r.abs()).collect();
        let vol_overnight = overnight.iter().map(|r| r.abs()).collect();
        Ok(Self {
            symbol: symbol.into(),
            dates,
            intraday,
            overnight,
            vol_intraday,
            vol_overnight,
        })
    }

    /// Number of trading days `N`.
    pub fn days(&self) -> usize {
        self.intraday.len()
    }

    /// Table of `date,d,n,abs_d,abs_n`; `n` and `abs_n` are blank on the first day.
    pub fn to_table_csv(&self) -> String {
        let mut out = String::from("date,d,n,abs_d,abs_n\n");
        for (i, date) in self.dates.iter().enumerate() {
            let _ = write!(out, "{},{},", date.format("%Y-%m-%d"), self.intraday[i]);
            if i == 0 {
                let _ = write!(out, ",{},", self.vol_intraday[i]);
            } else {
                let _ = write!(
                    out,
                    "{},{},{}",
                    self.overnight[i - 1],
                    self.vol_intraday[i],
                    self.vol_overnight[i - 1]
                );
            }
            out.push('\n');
        }
        out
    }
}

/// Decompose a cleaned price series into intra-day and overnight returns.
pub fn compute_returns(series: &PriceSeries) -> Result<ReturnSeries> {
    let bars = &series.bars;
    if bars.len() < 2 {
        return Err(Error::TooShort {
            what: "bars",
            got: bars.len(),
            need: 2,
        });
    }
    for bar in bars {
        for (field, value) in [("open", bar.open), ("close", bar.close)] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::NonPositivePrice {
                    date: bar.date,
                    field,
                    value,
                });
            }
        }
    }

    let intraday = bars.iter().map(|b| (b.close / b.open).ln()).collect();
    let overnight = bars.windows(2).map(|w| (w[1].open / w[0].close).ln()).collect();
    ReturnSeries::from_returns(
        series.symbol.clone(),
        bars.iter().map(|b| b.date).collect(),
        intraday,
        overnight,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PriceBar;
    use proptest::prelude::*;

    fn series(prices: &[(f64, f64)]) -> PriceSeries {
        let start = NaiveDate::from_ymd_opt(2020, 1, 6).unwrap();
        PriceSeries {
            symbol: "X".into(),
            bars: prices
                .iter()
                .enumerate()
                .map(|(i, &(o, c))| PriceBar::new(start + chrono::Days::new(i as u64), o, c))
                .collect(),
            source: String::new(),
        }
    }

    #[test]
    fn single_day_intraday() {
        let rs = compute_returns(&series(&[(100.0, 105.0), (105.0, 105.0)])).unwrap();
        assert!((rs.intraday[0] - 0.048790164169432).abs() < 1e-12);
        assert_eq!(rs.overnight[0], 0.0);
        assert_eq!(rs.vol_overnight[0], 0.0);
    }

    #[test]
    fn three_bar_hand_example() {
        let rs = compute_returns(&series(&[(100.0, 110.0), (99.0, 99.0), (100.0, 102.0)])).unwrap();
        let expected_d = [1.1f64.ln(), 0.0, 1.02f64.ln()];
        let expected_n = [(99.0f64 / 110.0).ln(), (100.0f64 / 99.0).ln()];
        for (a, b) in rs.intraday.iter().zip(expected_d) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in rs.overnight.iter().zip(expected_n) {
            assert!((a - b).abs() < 1e-15);
        }
        // d_k + n_k = ln(c_k / c_{k-1})
        assert!((rs.intraday[1] + rs.overnight[0] - (99.0f64 / 110.0).ln()).abs() < 1e-12);
        assert!((rs.intraday[2] + rs.overnight[1] - (102.0f64 / 99.0).ln()).abs() < 1e-12);
        assert_eq!(rs.intraday.len(), 3);
        assert_eq!(rs.overnight.len(), 2);
    }

    #[test]
    fn weekend_gap_is_one_night() {
        // Friday then Monday
        let fri = NaiveDate::from_ymd_opt(2020, 1, 10).unwrap();
        let mon = NaiveDate::from_ymd_opt(2020, 1, 13).unwrap();
        let s = PriceSeries {
            symbol: "X".into(),
            bars: vec![PriceBar::new(fri, 10.0, 11.0), PriceBar::new(mon, 12.0, 12.5)],
            source: String::new(),
        };
        let rs = compute_returns(&s).unwrap();
        assert_eq!(rs.overnight.len(), 1);
        assert!((rs.overnight[0] - (12.0f64 / 11.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn zero_returns_kept() {
        let rs = compute_returns(&series(&[(5.0, 5.0), (5.0, 5.0), (5.0, 6.0)])).unwrap();
        assert_eq!(rs.vol_intraday[..2], [0.0, 0.0]);
        assert_eq!(rs.vol_overnight, vec![0.0, 0.0]);
    }

    #[test]
    fn nonpositive_price_is_domain_error() {
        let err = compute_returns(&series(&[(1.0, 2.0), (0.0, 2.0)])).unwrap_err();
        assert!(matches!(err, Error::NonPositivePrice { field: "open", .. }));
    }

    #[test]
    fn table_layout() {
        let rs = compute_returns(&series(&[(100.0, 110.0), (99.0, 99.0), (100.0, 102.0)])).unwrap();
        let table = rs.to_table_csv();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "date,d,n,abs_d,abs_n");
        assert!(lines[1].starts_with("2020-01-06,"));
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 5);
        assert_eq!((first[2], first[4]), ("", ""));
        assert!(lines[2].split(',').all(|f| !f.is_empty()));
    }

    fn arb_prices() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((1e-3..1e4f64, 1e-3..1e4f64), 2..60)
    }

    proptest! {
        #[test]
        fn telescoping(prices in arb_prices()) {
            let rs = compute_returns(&series(&prices)).unwrap();
            for k in 1..prices.len() {
                let direct = (prices[k].1 / prices[k - 1].1).ln();
                prop_assert!((rs.intraday[k] + rs.overnight[k - 1] - direct).abs() < 1e-12);
            }
        }

        #[test]
        fn power_of_two_rescaling_is_exact(prices in arb_prices(), exp in -20i32..20) {
            let scale = 2f64.powi(exp);
            let scaled: Vec<_> = prices.iter().map(|&(o, c)| (o * scale, c * scale)).collect();
            prop_assert_eq!(compute_returns(&series(&prices)).unwrap(), compute_returns(&series(&scaled)).unwrap());
        }
    }
}
