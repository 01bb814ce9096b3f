//! Night-to-day versus day-to-night volatility correlation.
//!
//! `c_nd` correlates each day's intra-day volatility with the volatility of
//! the night *before* it; `c_dn` correlates it with the night *after* it.
//! Both use the `N - 1` aligned pairs available in an `N`-day series, and the
//! ranks (for rank-based methods) are taken over each pair set on its own.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank_stats::{CorrelationMethod, CorrelationResult};
use crate::returns::ReturnSeries;

/// Minimum number of aligned pairs for an asymmetry estimate.
pub const MIN_PAIRS: usize = 30;

/// `|c_dn|` at or below this leaves the ratio undefined.
pub const RATIO_EPSILON: f64 = 1e-10;

pub const MIN_RESAMPLES: usize = 200;

/// Generator used for bootstrap resampling; recorded in every report.
pub const BOOTSTRAP_RNG: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = resample index";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub method: String,
    pub n_pairs: usize,
    pub c_nd: f64,
    pub c_dn: f64,
    /// `c_nd / c_dn`, absent when `|c_dn| <= RATIO_EPSILON`.
    pub ratio: Option<f64>,
    pub ratio_defined: bool,
    pub delta: f64,
    #[serde(default)]
    pub ci_delta: Option<(f64, f64)>,
    #[serde(default)]
    pub p_value: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_boot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl AsymmetryReport {
    fn from_estimates(symbol: &str, method: &str, n_pairs: usize, c_nd: f64, c_dn: f64) -> Self {
        let ratio_defined = c_dn.abs() > RATIO_EPSILON;
        Self {
            symbol: symbol.to_string(),
            group: None,
            method: method.to_string(),
            n_pairs,
            c_nd,
            c_dn,
            ratio: ratio_defined.then(|| c_nd / c_dn),
            ratio_defined,
            delta: c_nd - c_dn,
            ci_delta: None,
            p_value: None,
            seed: None,
            n_boot: None,
            block_len: None,
            rng: None,
        }
    }

    /// True when the night-before correlation exceeds the night-after one.
    pub fn night_leads(&self) -> bool {
        self.c_nd > self.c_dn
    }

    pub const TABLE_HEADER: &'static str =
        "symbol,group,method,n_pairs,c_nd,c_dn,ratio,delta,ci_lower,ci_upper,p_value,seed";

    /// One CSV row matching [`Self::TABLE_HEADER`]; absent values are empty.
    pub fn to_table_row(&self) -> String {
        fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.symbol,
            self.group.as_deref().unwrap_or(""),
            self.method,
            self.n_pairs,
            self.c_nd,
            self.c_dn,
            opt(self.ratio),
            self.delta,
            opt(self.ci_delta.map(|c| c.0)),
            opt(self.ci_delta.map(|c| c.1)),
            opt(self.p_value),
            opt(self.seed),
        );
        row
    }
}

fn check_pairs(rs: &ReturnSeries, lag: usize) -> Result<usize> {
    let pairs = rs.days().saturating_sub(1 + lag);
    if pairs < MIN_PAIRS {
        return Err(Error::TooShort {
            what: "aligned pairs",
            got: pairs,
            need: MIN_PAIRS,
        });
    }
    Ok(pairs)
}

/// Pairs (night before day, day) with the day `lag` days after the night.
fn night_leads_day(rs: &ReturnSeries, lag: usize) -> (&[f64], &[f64]) {
    let n = rs.days();
    (&rs.vol_overnight[..n - 1 - lag], &rs.vol_intraday[1 + lag..])
}

/// Pairs (day, night) with the night `lag` nights after the one following the day.
fn day_leads_night(rs: &ReturnSeries, lag: usize) -> (&[f64], &[f64]) {
    let n = rs.days();
    (&rs.vol_intraday[..n - 1 - lag], &rs.vol_overnight[lag..])
}

pub fn compute_asymmetry(rs: &ReturnSeries, method: &dyn CorrelationMethod) -> Result<AsymmetryReport> {
    let n_pairs = check_pairs(rs, 0)?;
    let (night, day) = night_leads_day(rs, 0);
    let c_nd = method.estimate(night, day)?;
    let (day, night) = day_leads_night(rs, 0);
    let c_dn = method.estimate(day, night)?;
    Ok(AsymmetryReport::from_estimates(
        &rs.symbol,
        method.name(),
        n_pairs,
        c_nd,
        c_dn,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagCorrelation {
    pub lag: usize,
    /// Night volatility against the day `lag` days after it.
    pub night_leads_day: CorrelationResult,
    /// Day volatility against the night `lag + 1` nights after it.
    pub day_leads_night: CorrelationResult,
}

/// Correlations for lags `0..=max_lag`. Lag 0 reproduces `c_nd` and `c_dn`.
pub fn lagged_xcorr(
    rs: &ReturnSeries,
    max_lag: usize,
    method: &dyn CorrelationMethod,
) -> Result<Vec<LagCorrelation>> {
    check_pairs(rs, max_lag)?;
    (0..=max_lag)
        .map(|lag| {
            let (night, day) = night_leads_day(rs, lag);
            let night_leads_day = method.correlate(night, day)?;
            let (day, night) = day_leads_night(rs, lag);
            let day_leads_night = method.correlate(day, night)?;
            Ok(LagCorrelation {
                lag,
                night_leads_day,
                day_leads_night,
            })
        })
        .collect()
}

pub fn lags_to_csv(lags: &[LagCorrelation]) -> String {
    let mut out = String::from("lag,night_leads_day,day_leads_night,n_pairs\n");
    for l in lags {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            l.lag, l.night_leads_day.estimate, l.day_leads_night.estimate, l.night_leads_day.n_pairs
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub n_boot: usize,
    /// `None` selects [`default_block_len`].
    pub block_len: Option<usize>,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            n_boot: 1000,
            block_len: None,
            seed: 0,
        }
    }
}

/// `ceil((N - 1)^(1/3))` for an `N`-day series.
pub fn default_block_len(days: usize) -> usize {
    let pairs = days.saturating_sub(1) as f64;
    let mut b = pairs.cbrt().ceil() as usize;
    // cbrt of a perfect cube can land a hair above the integer
    if b > 1 && ((b - 1) as f64).powi(3) >= pairs {
        b -= 1;
    }
    b.max(1)
}

/// Circular block bootstrap of `delta = c_nd - c_dn`.
///
/// Days that have both a preceding and a following night contribute a triple
/// (night before, day, night after); blocks of consecutive triples are drawn
/// with wrap-around, and both correlations are recomputed on the same
/// resample. Resample `b` draws from its own ChaCha stream `b`, so the result
/// does not depend on evaluation order.
///
/// The returned interval is the 95% percentile interval, widened if needed so
/// that it contains the point estimate. `p_value` is the share of resamples
/// with `delta <= 0`.
pub fn bootstrap_asymmetry(
    rs: &ReturnSeries,
    config: &BootstrapConfig,
    method: &dyn CorrelationMethod,
) -> Result<AsymmetryReport> {
    let mut report = compute_asymmetry(rs, method)?;
    let days = rs.days();
    let block_len = config.block_len.unwrap_or_else(|| default_block_len(days));
    let max_block = (days - 1) / 2;
    if block_len < 1 || block_len > max_block {
        return Err(Error::Config(format!(
            "block_len must be in 1..={max_block}, got {block_len}"
        )));
    }
    if config.n_boot < MIN_RESAMPLES {
        return Err(Error::Config(format!(
            "n_boot must be at least {MIN_RESAMPLES}, got {}",
            config.n_boot
        )));
    }

    let before = &rs.vol_overnight[..days - 2];
    let day = &rs.vol_intraday[1..days - 1];
    let after = &rs.vol_overnight[1..];
    let m = day.len();

    let mut deltas = (0..config.n_boot)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b as u64);
            let idx = circular_blocks(m, block_len, &mut rng);
            let pick = |src: &[f64]| idx.iter().map(|&i| src[i]).collect::<Vec<f64>>();
            let (nb, dd, na) = (pick(before), pick(day), pick(after));
            Ok(method.estimate(&nb, &dd)? - method.estimate(&dd, &na)?)
        })
        .collect::<Result<Vec<f64>>>()?;

    let non_positive = deltas.iter().filter(|&&d| d <= 0.0).count();
    deltas.sort_unstable_by(f64::total_cmp);
    let lower = quantile_sorted(&deltas, 0.025).min(report.delta);
    let upper = quantile_sorted(&deltas, 0.975).max(report.delta);

    report.ci_delta = Some((lower, upper));
    report.p_value = Some(non_positive as f64 / config.n_boot as f64);
    report.seed = Some(config.seed);
    report.n_boot = Some(config.n_boot);
    report.block_len = Some(block_len);
    report.rng = Some(BOOTSTRAP_RNG.to_string());
    Ok(report)
}

fn circular_blocks(m: usize, block_len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut idx = Vec::with_capacity(m + block_len);
    while idx.len() < m {
        let start = rng.random_range(0..m);
        idx.extend((start..start + block_len).map(|i| i % m));
    }
    idx.truncate(m);
    idx
}

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_stats::{KendallTau, Pearson, Spearman};
    use chrono::NaiveDate;
    use rand_distr::{Distribution, StandardNormal};

    fn series(intraday: Vec<f64>, overnight: Vec<f64>) -> ReturnSeries {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        let dates = (0..intraday.len())
            .map(|i| start + chrono::Days::new(i as u64))
            .collect();
        ReturnSeries::from_returns("T", dates, intraday, overnight).unwrap()
    }

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn comonotone_night_to_day() {
        let days = 200;
        let overnight = noise(days - 1, 1);
        // day i+1 volatility is a strictly increasing function of the preceding night
        let mut intraday = vec![0.5];
        intraday.extend(overnight.iter().map(|v| -(v.abs().powi(3) + 0.1)));
        let rs = series(intraday, overnight);
        let r = compute_asymmetry(&rs, &Spearman).unwrap();
        assert_eq!(r.c_nd, 1.0);
        assert!(r.c_dn.abs() < 0.2);
        assert_eq!(r.n_pairs, days - 1);
        assert!(r.night_leads());
        assert_eq!(r.ratio_defined, r.ratio.is_some());
    }

    #[test]
    fn too_short_and_degenerate() {
        let rs = series(noise(30, 2), noise(29, 3));
        assert!(matches!(
            compute_asymmetry(&rs, &Spearman),
            Err(Error::TooShort { got: 29, .. })
        ));
        let rs = series(noise(40, 2), vec![0.0; 39]);
        assert!(matches!(
            compute_asymmetry(&rs, &Spearman),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn ratio_undefined_when_c_dn_vanishes() {
        let r = AsymmetryReport::from_estimates("X", "spearman", 40, 0.3, 0.0);
        assert!(!r.ratio_defined);
        assert_eq!(r.ratio, None);
        let r = AsymmetryReport::from_estimates("X", "spearman", 40, 0.3, 0.1);
        assert!((r.ratio.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lag_zero_matches_point_estimate() {
        let rs = series(noise(300, 4), noise(299, 5));
        for method in [&Spearman as &dyn CorrelationMethod, &KendallTau, &Pearson] {
            let r = compute_asymmetry(&rs, method).unwrap();
            let lags = lagged_xcorr(&rs, 5, method).unwrap();
            assert_eq!(lags.len(), 6);
            assert_eq!(lags[0].night_leads_day.estimate, r.c_nd);
            assert_eq!(lags[0].day_leads_night.estimate, r.c_dn);
            assert_eq!(lags[5].night_leads_day.n_pairs, 299 - 5);
        }
        assert!(lagged_xcorr(&rs, 270, &Spearman).is_err());
    }

    #[test]
    fn rank_methods_ignore_monotone_transforms() {
        let rs = series(noise(200, 6), noise(199, 7));
        let g = |v: &Vec<f64>| {
            v.iter()
                .map(|x| x.signum() * x.abs().sqrt() * 5.0)
                .collect::<Vec<_>>()
        };
        let transformed = series(g(&rs.intraday), g(&rs.overnight));
        for method in [&Spearman as &dyn CorrelationMethod, &KendallTau] {
            assert_eq!(
                compute_asymmetry(&rs, method).unwrap(),
                compute_asymmetry(&transformed, method).unwrap()
            );
        }
    }

    #[test]
    fn bootstrap_config_checks() {
        let rs = series(noise(101, 8), noise(100, 9));
        let too_long = BootstrapConfig {
            block_len: Some(51),
            ..Default::default()
        };
        assert!(matches!(
            bootstrap_asymmetry(&rs, &too_long, &Spearman),
            Err(Error::Config(_))
        ));
        let zero = BootstrapConfig {
            block_len: Some(0),
            ..Default::default()
        };
        assert!(matches!(
            bootstrap_asymmetry(&rs, &zero, &Spearman),
            Err(Error::Config(_))
        ));
        let few = BootstrapConfig {
            n_boot: 199,
            ..Default::default()
        };
        assert!(matches!(
            bootstrap_asymmetry(&rs, &few, &Spearman),
            Err(Error::Config(_))
        ));
        let ok = BootstrapConfig {
            block_len: Some(50),
            n_boot: 200,
            seed: 3,
        };
        assert!(bootstrap_asymmetry(&rs, &ok, &Spearman).is_ok());
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let rs = series(noise(400, 10), noise(399, 11));
        let cfg = BootstrapConfig {
            n_boot: 300,
            block_len: None,
            seed: 42,
        };
        let a = bootstrap_asymmetry(&rs, &cfg, &Spearman).unwrap();
        let b = bootstrap_asymmetry(&rs, &cfg, &Spearman).unwrap();
        assert_eq!(a, b);
        let (lo, hi) = a.ci_delta.unwrap();
        assert!(lo <= a.delta && a.delta <= hi);
        assert_eq!(a.block_len, Some(default_block_len(400)));
        let other = bootstrap_asymmetry(&rs, &BootstrapConfig { seed: 43, ..cfg }, &Spearman).unwrap();
        assert_ne!(a.ci_delta, other.ci_delta);
    }

    #[test]
    fn block_len_default() {
        assert_eq!(default_block_len(5000), 18);
        assert_eq!(default_block_len(28), 3);
        assert_eq!(default_block_len(29), 4);
        assert_eq!(default_block_len(2), 1);
    }

    #[test]
    fn circular_blocks_wrap() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let idx = circular_blocks(10, 4, &mut rng);
            assert_eq!(idx.len(), 10);
            for w in idx.chunks(4) {
                for p in w.windows(2) {
                    assert_eq!(p[1], (p[0] + 1) % 10);
                }
            }
        }
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 0.5), 3.0);
        assert_eq!(quantile_sorted(&v, 0.975), 4.9);
    }

    #[test]
    fn table_row_matches_header() {
        let mut r = AsymmetryReport::from_estimates("ABC", "spearman", 40, 0.3, 0.0);
        r.group = Some("index".into());
        let row = r.to_table_row();
        assert_eq!(
            row.split(',').count(),
            AsymmetryReport::TABLE_HEADER.split(',').count()
        );
        assert!(row.starts_with("ABC,index,spearman,40,0.3,0,,0.3,"));
    }

    #[test]
    fn json_round_trip() {
        let rs = series(noise(120, 12), noise(119, 13));
        let cfg = BootstrapConfig {
            n_boot: 200,
            block_len: Some(5),
            seed: 1,
        };
        let r = bootstrap_asymmetry(&rs, &cfg, &KendallTau).unwrap();
        let back: AsymmetryReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
