use std::fmt::Write as _;

use super::{fmt_sig6, Panel, PanelData, PanelRenderer, UNDEFINED};

/// Comma-separated table with a header row.
#[derive(Debug, Clone, Copy, Default)]
pub struct CsvRenderer;

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl PanelRenderer for CsvRenderer {
    fn name(&self) -> &'static str {
        "csv"
    }

    fn render(&self, panel: &Panel) -> String {
        let mut out = String::new();
        match &panel.data {
            PanelData::Timeseries(rows) => {
                out.push_str("date,d,n\n");
                for r in rows {
                    let n = r.overnight.map(fmt_sig6).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        r.date.format("%Y-%m-%d"),
                        fmt_sig6(r.intraday),
                        n
                    );
                }
            }
            PanelData::Scatter(points) => {
                out.push_str("symbol,group,c_dn,c_nd\n");
                for p in points {
                    let group = p.group.as_deref().unwrap_or("");
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        field(&p.symbol),
                        field(group),
                        fmt_sig6(p.x),
                        fmt_sig6(p.y)
                    );
                }
            }
            PanelData::RatioBars(bars) => {
                out.push_str("symbol,group,ratio\n");
                for b in bars {
                    let group = b.group.as_deref().unwrap_or("");
                    let ratio = b.ratio.map(fmt_sig6).unwrap_or_else(|| UNDEFINED.to_string());
                    let _ = writeln!(out, "{},{},{}", field(&b.symbol), field(group), ratio);
                }
            }
        }
        out
    }
}
