//! OHLC price-history ingestion.
//!
//! Files are delimiter-separated with a header row. A [`ColumnSpec`] maps
//! header names onto the fields we need; only date, open and close are
//! required. Raw open/close are used as-is: no split or dividend adjustment
//! is applied, and an `Adj Close` column is never consulted.
//!
//! Rows that cannot be parsed are not dropped silently. Each one ends up in
//! [`ParseOutcome::rejected`] with its line number, so that
//! `bars + rejected == rows_read` always holds.

use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceBar {
    pub date: NaiveDate,
    pub open: f64,
    pub close: f64,
    pub high: Option<f64>,
    pub low: Option<f64>,
    pub volume: Option<f64>,
}

impl PriceBar {
    pub fn new(date: NaiveDate, open: f64, close: f64) -> Self {
        Self {
            date,
            open,
            close,
            high: None,
            low: None,
            volume: None,
        }
    }
}

/// Dated bars for one equity. Non-trading days are simply absent.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub symbol: String,
    pub bars: Vec<PriceBar>,
    pub source: String,
}

impl PriceSeries {
    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Render as `Date,Open,Close` with ISO dates, the default dialect read
    /// by [`parse_csv`]. Prices use the shortest round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Date,Open,Close\n");
        for bar in &self.bars {
            let _ = writeln!(out, "{},{},{}", bar.date.format("%Y-%m-%d"), bar.open, bar.close);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DateFormat {
    /// `YYYY-MM-DD`
    #[default]
    Iso,
    /// `DD.MM.YYYY`
    DayMonthYear,
}

impl DateFormat {
    fn pattern(self) -> &'static str {
        match self {
            DateFormat::Iso => "%Y-%m-%d",
            DateFormat::DayMonthYear => "%d.%m.%Y",
        }
    }
}

impl FromStr for DateFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iso" | "yyyy-mm-dd" | "%y-%m-%d" => Ok(DateFormat::Iso),
            "dmy" | "dd.mm.yyyy" | "%d.%m.%y" => Ok(DateFormat::DayMonthYear),
            _ => Err(Error::Unknown {
                kind: "date format",
                name: s.to_string(),
            }),
        }
    }
}

/// Column mapping and dialect for [`parse_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub date: String,
    pub open: String,
    pub close: String,
    /// Optional columns are picked up when the header has them.
    pub high: Option<String>,
    pub low: Option<String>,
    pub volume: Option<String>,
    pub date_format: DateFormat,
    pub delimiter: u8,
    /// `1.234,56` style numbers: `.` is a thousands separator, `,` the decimal mark.
    pub decimal_comma: bool,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        Self {
            date: "Date".into(),
            open: "Open".into(),
            close: "Close".into(),
            high: Some("High".into()),
            low: Some("Low".into()),
            volume: Some("Volume".into()),
            date_format: DateFormat::Iso,
            delimiter: b',',
            decimal_comma: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// 1-based line number in the source text.
    pub row: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateDate {
    pub date: NaiveDate,
    /// Position of the dropped bar in the input order.
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub series: PriceSeries,
    pub rejected: Vec<Rejection>,
    pub rows_read: usize,
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| {
        h.trim()
            .trim_start_matches('\u{feff}')
            .eq_ignore_ascii_case(name.trim())
    })
}

fn parse_number(raw: &str, decimal_comma: bool) -> Option<f64> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let value = if decimal_comma {
        raw.replace('.', "").replace(',', ".").parse::<f64>().ok()?
    } else {
        raw.parse::<f64>().ok()?
    };
    value.is_finite().then_some(value)
}

/// Parse price history from text. See [`parse_reader`].
pub fn parse_csv(text: &str, symbol: &str, spec: &ColumnSpec) -> Result<ParseOutcome> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    parse_reader(text.as_bytes(), symbol, spec)
}

/// Parse price history from any reader.
///
/// Fails if the header lacks a mapped column or if no data row parses.
pub fn parse_reader<R: Read>(reader: R, symbol: &str, spec: &ColumnSpec) -> Result<ParseOutcome> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    if headers.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::EmptyInput);
    }
    let required =
        |name: &str| find_column(&headers, name).ok_or_else(|| Error::MissingColumn(name.to_string()));
    let date_idx = required(&spec.date)?;
    let open_idx = required(&spec.open)?;
    let close_idx = required(&spec.close)?;
    let optional = |name: &Option<String>| name.as_deref().and_then(|n| find_column(&headers, n));
    let high_idx = optional(&spec.high);
    let low_idx = optional(&spec.low);
    let volume_idx = optional(&spec.volume);

    let mut bars = Vec::new();
    let mut rejected = Vec::new();
    let mut rows_read = 0usize;

    for record in rdr.records() {
        let record = record?;
        rows_read += 1;
        let row = record.position().map_or(rows_read as u64 + 1, |p| p.line());
        let field = |idx: usize| record.get(idx).unwrap_or("");

        let date_raw = field(date_idx);
        let Ok(date) = NaiveDate::parse_from_str(date_raw, spec.date_format.pattern()) else {
            rejected.push(Rejection {
                row,
                reason: format!("unparseable date '{date_raw}'"),
            });
            continue;
        };
        let Some(open) = parse_number(field(open_idx), spec.decimal_comma) else {
            rejected.push(Rejection {
                row,
                reason: format!("unparseable open '{}'", field(open_idx)),
            });
            continue;
        };
        let Some(close) = parse_number(field(close_idx), spec.decimal_comma) else {
            rejected.push(Rejection {
                row,
                reason: format!("unparseable close '{}'", field(close_idx)),
            });
            continue;
        };
        let extra = |idx: Option<usize>| idx.and_then(|i| parse_number(field(i), spec.decimal_comma));
        bars.push(PriceBar {
            date,
            open,
            close,
            high: extra(high_idx),
            low: extra(low_idx),
            volume: extra(volume_idx),
        });
    }

    if bars.is_empty() {
        return Err(Error::EmptyInput);
    }

    Ok(ParseOutcome {
        series: PriceSeries {
            symbol: symbol.to_string(),
            bars,
            source: String::new(),
        },
        rejected,
        rows_read,
    })
}

/// Stable-sort bars by date and drop repeated dates, keeping the first
/// occurrence. Dropped bars are returned alongside the series.
pub fn sort_and_validate(series: PriceSeries) -> Result<(PriceSeries, Vec<DuplicateDate>)> {
    if series.bars.is_empty() {
        return Err(Error::EmptyInput);
    }
    let PriceSeries { symbol, bars, source } = series;

    let mut indexed: Vec<(usize, PriceBar)> = bars.into_iter().enumerate().collect();
    indexed.sort_by_key(|(_, bar)| bar.date);

    let mut kept: Vec<PriceBar> = Vec::with_capacity(indexed.len());
    let mut duplicates = Vec::new();
    for (index, bar) in indexed {
        if kept.last().is_some_and(|last| last.date == bar.date) {
            duplicates.push(DuplicateDate {
                date: bar.date,
                index,
            });
        } else {
            kept.push(bar);
        }
    }
    duplicates.sort_by_key(|d| d.index);

    if kept.len() < 2 {
        return Err(Error::TooShort {
            what: "bars",
            got: kept.len(),
            need: 2,
        });
    }
    Ok((
        PriceSeries {
            symbol,
            bars: kept,
            source,
        },
        duplicates,
    ))
}
