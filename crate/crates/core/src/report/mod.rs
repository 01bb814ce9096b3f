//! Figure-ready panels.
//!
//! Three panel kinds are supported: the two-panel return time series of one
//! equity, the cross-equity `(c_dn, c_nd)` scatter, and per-equity `c_nd / c_dn`
//! bars. Each panel is built into a [`Panel`] and handed to a
//! [`PanelRenderer`] chosen by format name (`csv`, `json`, `svg`).
//!
//! Every number written by a renderer goes through [`fmt_sig6`], so output is
//! byte-stable and the csv and json encodings carry identical values.

mod csv;
mod json;
mod number;
mod svg;

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::asymmetry::AsymmetryReport;
use crate::error::{Error, Result};
use crate::returns::ReturnSeries;

pub use self::csv::CsvRenderer;
pub use self::json::JsonRenderer;
pub use self::number::fmt_sig6;
pub use self::svg::SvgRenderer;

/// Marker written in place of an undefined ratio.
pub const UNDEFINED: &str = "undefined";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelKind {
    Timeseries,
    Scatter,
    RatioBars,
}

impl PanelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PanelKind::Timeseries => "timeseries",
            PanelKind::Scatter => "scatter",
            PanelKind::RatioBars => "ratio_bars",
        }
    }
}

impl FromStr for PanelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "timeseries" => Ok(PanelKind::Timeseries),
            "scatter" => Ok(PanelKind::Scatter),
            "ratio_bars" | "ratios" => Ok(PanelKind::RatioBars),
            _ => Err(Error::Unknown {
                kind: "panel kind",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub kind: PanelKind,
    pub title: String,
    /// Renderer name, e.g. `"svg"`.
    pub format: String,
}

impl PanelSpec {
    pub fn new(kind: PanelKind, title: impl Into<String>, format: impl Into<String>) -> Self {
        Self {
            kind,
            title: title.into(),
            format: format.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeseriesRow {
    pub date: NaiveDate,
    pub intraday: f64,
    /// Absent on the first day.
    pub overnight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub symbol: String,
    pub group: Option<String>,
    /// `c_dn`
    pub x: f64,
    /// `c_nd`
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioBar {
    pub symbol: String,
    pub group: Option<String>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PanelData {
    Timeseries(Vec<TimeseriesRow>),
    Scatter(Vec<ScatterPoint>),
    RatioBars(Vec<RatioBar>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub kind: PanelKind,
    pub title: String,
    pub data: PanelData,
}

impl Panel {
    pub fn timeseries(rs: &ReturnSeries, title: impl Into<String>) -> Result<Self> {
        if rs.days() == 0 {
            return Err(Error::EmptyInput);
        }
        let rows = rs
            .dates
            .iter()
            .enumerate()
            .map(|(i, &date)| TimeseriesRow {
                date,
                intraday: rs.intraday[i],
                overnight: i.checked_sub(1).map(|j| rs.overnight[j]),
            })
            .collect();
        Ok(Self {
            kind: PanelKind::Timeseries,
            title: title.into(),
            data: PanelData::Timeseries(rows),
        })
    }

    pub fn scatter(reports: &[AsymmetryReport], title: impl Into<String>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::EmptyInput);
        }
        let points = reports
            .iter()
            .map(|r| ScatterPoint {
                symbol: r.symbol.clone(),
                group: r.group.clone(),
                x: r.c_dn,
                y: r.c_nd,
            })
            .collect();
        Ok(Self {
            kind: PanelKind::Scatter,
            title: title.into(),
            data: PanelData::Scatter(points),
        })
    }

    /// Bars in input order; reports without a ratio keep their slot.
    pub fn ratio_bars(reports: &[AsymmetryReport], title: impl Into<String>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::EmptyInput);
        }
        let bars = reports
            .iter()
            .map(|r| RatioBar {
                symbol: r.symbol.clone(),
                group: r.group.clone(),
                ratio: r.ratio.filter(|_| r.ratio_defined),
            })
            .collect();
        Ok(Self {
            kind: PanelKind::RatioBars,
            title: title.into(),
            data: PanelData::RatioBars(bars),
        })
    }
}

/// Serializes a [`Panel`] into one output format.
pub trait PanelRenderer: Send + Sync {
    /// Format name used for lookup.
    fn name(&self) -> &'static str;

    fn extension(&self) -> &'static str {
        self.name()
    }

    fn render(&self, panel: &Panel) -> String;
}

#[derive(Clone)]
pub struct RendererRegistry {
    renderers: BTreeMap<&'static str, Arc<dyn PanelRenderer>>,
}

impl RendererRegistry {
    pub fn empty() -> Self {
        Self {
            renderers: BTreeMap::new(),
        }
    }

    pub fn register<R: PanelRenderer + 'static>(&mut self, renderer: R) {
        self.renderers.insert(renderer.name(), Arc::new(renderer));
    }

    pub fn get(&self, format: &str) -> Result<Arc<dyn PanelRenderer>> {
        self.renderers
            .get(format.to_ascii_lowercase().as_str())
            .cloned()
            .ok_or_else(|| Error::Unknown {
                kind: "output format",
                name: format.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.renderers.keys().copied()
    }

    pub fn render(&self, panel: &Panel, spec: &PanelSpec) -> Result<String> {
        if panel.kind != spec.kind {
            return Err(Error::Config(format!(
                "panel spec is for {}, data is {}",
                spec.kind.as_str(),
                panel.kind.as_str()
            )));
        }
        Ok(self.get(&spec.format)?.render(panel))
    }
}

impl Default for RendererRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(CsvRenderer);
        reg.register(JsonRenderer);
        reg.register(SvgRenderer::default());
        reg
    }
}

/// Two-panel time series of intra-day and overnight returns.
pub fn emit_timeseries(rs: &ReturnSeries, spec: &PanelSpec) -> Result<String> {
    RendererRegistry::default().render(&Panel::timeseries(rs, spec.title.clone())?, spec)
}

/// One point per report at `(c_dn, c_nd)`.
pub fn emit_scatter(reports: &[AsymmetryReport], spec: &PanelSpec) -> Result<String> {
    RendererRegistry::default().render(&Panel::scatter(reports, spec.title.clone())?, spec)
}

/// `c_nd / c_dn` per report, in the order given.
pub fn emit_ratios(reports: &[AsymmetryReport], spec: &PanelSpec) -> Result<String> {
    RendererRegistry::default().render(&Panel::ratio_bars(reports, spec.title.clone())?, spec)
}
