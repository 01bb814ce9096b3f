//! Synthetic data with known dependence structure.
//!
//! * `copula_pair`: bivariate Gaussian pairs with latent correlation `rho`,
//!   whose population Spearman correlation is `(6 / pi) asin(rho / 2)`.
//! * `coupled_vol`: overnight volatility feeds forward into the *next*
//!   trading day only, so `c_nd > 0` while `c_dn` is zero in population.
//! * `null_vol`: independent Student-t(4) returns; both correlations vanish.
//!
//! Return series are materialized through reconstructed prices (first close
//! 100, then alternating the overnight and intra-day steps), so they flow
//! through the same ingest and return code as real data.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{PriceBar, PriceSeries};
use crate::returns::{compute_returns, ReturnSeries};

/// Generator used by every synthetic process; recorded in outputs.
pub const SYNTH_RNG: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed)";

const FIRST_CLOSE: f64 = 100.0;
const STUDENT_DOF: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    CopulaPair,
    CoupledVol,
    NullVol,
}

impl SynthKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthKind::CopulaPair => "copula_pair",
            SynthKind::CoupledVol => "coupled_vol",
            SynthKind::NullVol => "null_vol",
        }
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "copula_pair" => Ok(SynthKind::CopulaPair),
            "coupled_vol" => Ok(SynthKind::CoupledVol),
            "null_vol" => Ok(SynthKind::NullVol),
            _ => Err(Error::Unknown {
                kind: "synthetic process",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub kind: SynthKind,
    /// Pairs for `copula_pair`, trading days otherwise.
    pub n: usize,
    pub rho: f64,
    pub coupling: f64,
    pub seed: u64,
    /// Typical magnitude of a synthetic log-return. Rank statistics ignore it;
    /// it only keeps reconstructed prices in a realistic range.
    pub scale: f64,
}

impl SynthSpec {
    pub fn copula_pair(n: usize, rho: f64, seed: u64) -> Self {
        Self {
            kind: SynthKind::CopulaPair,
            n,
            rho,
            coupling: 0.0,
            seed,
            scale: 0.01,
        }
    }

    pub fn coupled_vol(n: usize, coupling: f64, seed: u64) -> Self {
        Self {
            kind: SynthKind::CoupledVol,
            coupling,
            ..Self::copula_pair(n, 0.0, seed)
        }
    }

    pub fn null_vol(n: usize, seed: u64) -> Self {
        Self {
            kind: SynthKind::NullVol,
            ..Self::copula_pair(n, 0.0, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.rho.is_nan() || self.rho.abs() >= 1.0 {
            return Err(Error::Config(format!(
                "rho must lie in (-1, 1), got {}",
                self.rho
            )));
        }
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return Err(Error::Config(format!(
                "coupling must be finite and >= 0, got {}",
                self.coupling
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Config(format!(
                "scale must be finite and > 0, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    fn expect(&self, kind: SynthKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Config(format!(
                "expected a {} spec, got {}",
                kind.as_str(),
                self.kind.as_str()
            )));
        }
        self.validate()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Population Spearman correlation of a Gaussian pair with correlation `rho`.
pub fn gaussian_spearman(rho: f64) -> f64 {
    6.0 / PI * (rho / 2.0).asin()
}

pub fn copula_pairs(spec: &SynthSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.expect(SynthKind::CopulaPair)?;
    let mut rng = spec.rng();
    let tail = (1.0 - spec.rho * spec.rho).sqrt();
    let (mut x, mut y) = (Vec::with_capacity(spec.n), Vec::with_capacity(spec.n));
    for _ in 0..spec.n {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        x.push(a);
        y.push(spec.rho * a + tail * b);
    }
    Ok((x, y))
}

pub fn pairs_to_csv(x: &[f64], y: &[f64]) -> String {
    let mut out = String::from("x,y\n");
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(out, "{a},{b}");
    }
    out
}

fn random_sign(rng: &mut impl Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Overnight `scale * exp(z) * s` and intra-day `scale * exp(coupling * z + w) * s'`
/// for the same day, with `z, w` standard normal and `s, s'` random signs.
/// The first day's latent `z` has no observable night.
fn coupled_returns(spec: &SynthSpec) -> (Vec<f64>, Vec<f64>) {
    let mut rng = spec.rng();
    let mut intraday = Vec::with_capacity(spec.n);
    let mut overnight = Vec::with_capacity(spec.n - 1);
    for k in 0..spec.n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let night = spec.scale * z.exp() * random_sign(&mut rng);
        let w: f64 = StandardNormal.sample(&mut rng);
        let day = spec.scale * (spec.coupling * z + w).exp() * random_sign(&mut rng);
        if k > 0 {
            overnight.push(night);
        }
        intraday.push(day);
    }
    (intraday, overnight)
}

fn null_returns(spec: &SynthSpec) -> (Vec<f64>, Vec<f64>) {
    let mut rng = spec.rng();
    let t = StudentT::new(STUDENT_DOF).expect("valid degrees of freedom");
    let mut intraday = Vec::with_capacity(spec.n);
    let mut overnight = Vec::with_capacity(spec.n - 1);
    for k in 0..spec.n {
        let night = spec.scale * t.sample(&mut rng);
        let day = spec.scale * t.sample(&mut rng);
        if k > 0 {
            overnight.push(night);
        }
        intraday.push(day);
    }
    (intraday, overnight)
}

/// Weekdays starting Monday 2000-01-03.
pub fn business_days(n: usize) -> Vec<NaiveDate> {
    let mut date = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(date);
        }
        date = date + Days::new(1);
    }
    out
}

/// Prices whose intra-day and overnight log-returns are the given ones.
pub fn reconstruct_prices(symbol: &str, intraday: &[f64], overnight: &[f64]) -> PriceSeries {
    let dates = business_days(intraday.len());
    let mut bars = Vec::with_capacity(intraday.len());
    let mut close = FIRST_CLOSE;
    let mut open = FIRST_CLOSE / intraday[0].exp();
    for (k, date) in dates.into_iter().enumerate() {
        if k > 0 {
            open = close * overnight[k - 1].exp();
            close = open * intraday[k].exp();
        }
        bars.push(PriceBar::new(date, open, close));
    }
    PriceSeries {
        symbol: symbol.to_string(),
        bars,
        source: String::new(),
    }
}

/// Price series for a `coupled_vol` or `null_vol` spec.
pub fn synth_prices(spec: &SynthSpec) -> Result<PriceSeries> {
    spec.validate()?;
    let (intraday, overnight) = match spec.kind {
        SynthKind::CoupledVol => coupled_returns(spec),
        SynthKind::NullVol => null_returns(spec),
        SynthKind::CopulaPair => {
            return Err(Error::Config("copula_pair does not produce prices".into()));
        }
    };
    let mut series = reconstruct_prices(spec.kind.as_str(), &intraday, &overnight);
    series.source = format!(
        "synthetic {} n={} coupling={} scale={} seed={} rng={}",
        spec.kind.as_str(),
        spec.n,
        spec.coupling,
        spec.scale,
        spec.seed,
        SYNTH_RNG
    );
    Ok(series)
}

pub fn coupled_vol_process(spec: &SynthSpec) -> Result<ReturnSeries> {
    spec.expect(SynthKind::CoupledVol)?;
    compute_returns(&synth_prices(spec)?)
}

pub fn null_vol_process(spec: &SynthSpec) -> Result<ReturnSeries> {
    spec.expect(SynthKind::NullVol)?;
    compute_returns(&synth_prices(spec)?)
}
