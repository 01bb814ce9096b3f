use std::fmt::Write as _;

use super::{fmt_sig6, Panel, PanelData, PanelRenderer, UNDEFINED};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];
const FONT: &str = "font-family:sans-serif;font-size:11px";

/// Self-contained SVG 1.1 with inline styles.
#[derive(Debug, Clone, Copy)]
pub struct SvgRenderer {
    pub width: f64,
}

impl Default for SvgRenderer {
    fn default() -> Self {
        Self { width: 720.0 }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Padded data range; never empty.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let span = hi - lo;
    if span == 0.0 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

/// Linear map from data space onto a pixel interval.
#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn at(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

struct Doc {
    out: String,
}

impl Doc {
    fn new(width: f64, height: f64, title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
        );
        let _ = writeln!(
            out,
            r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" style="fill:#ffffff"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="22" style="font-family:sans-serif;font-size:14px;text-anchor:middle">{}</text>"#,
            width / 2.0,
            escape(title)
        );
        Self { out }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.out,
            r#"<text x="{x:.2}" y="{y:.2}" style="{FONT};text-anchor:{anchor}">{}</text>"#,
            escape(s)
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = writeln!(
            self.out,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" style="{style}"/>"#
        );
    }

    fn frame(&mut self, x: &Axis, y: &Axis) {
        let _ = writeln!(
            self.out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" style="fill:none;stroke:#000000;stroke-width:1"/>"#,
            x.px_lo,
            y.px_hi,
            x.px_hi - x.px_lo,
            y.px_lo - y.px_hi
        );
    }

    /// Min/max labels on the vertical axis.
    fn y_labels(&mut self, y: &Axis) {
        self.text(y_label_x(), y.px_lo + 4.0, "end", &fmt_sig6(y.lo));
        self.text(y_label_x(), y.px_hi + 4.0, "end", &fmt_sig6(y.hi));
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;

fn y_label_x() -> f64 {
    LEFT - 6.0
}

fn group_colors<'a>(groups: impl Iterator<Item = Option<&'a str>>) -> Vec<&'static str> {
    let mut seen: Vec<Option<&str>> = Vec::new();
    groups
        .map(|g| {
            let idx = seen.iter().position(|s| *s == g).unwrap_or_else(|| {
                seen.push(g);
                seen.len() - 1
            });
            PALETTE[idx % PALETTE.len()]
        })
        .collect()
}

impl SvgRenderer {
    fn timeseries(&self, panel: &Panel, rows: &[super::TimeseriesRow]) -> String {
        let panel_h = 220.0;
        let top = 44.0;
        let gap = 50.0;
        let height = top + 2.0 * panel_h + gap + 40.0;
        let mut doc = Doc::new(self.width, height, &panel.title);
        let last = (rows.len().max(2) - 1) as f64;
        let x = Axis {
            lo: 0.0,
            hi: last,
            px_lo: LEFT,
            px_hi: self.width - RIGHT,
        };

        let series: [(&str, Vec<(usize, f64)>); 2] = [
            (
                "a) intra-day log-return d",
                rows.iter().enumerate().map(|(i, r)| (i, r.intraday)).collect(),
            ),
            (
                "b) overnight log-return n",
                rows.iter()
                    .enumerate()
                    .filter_map(|(i, r)| r.overnight.map(|v| (i, v)))
                    .collect(),
            ),
        ];
        for (p, (label, points)) in series.iter().enumerate() {
            let px_top = top + p as f64 * (panel_h + gap);
            let (lo, hi) = range(points.iter().map(|&(_, v)| v));
            let y = Axis {
                lo,
                hi,
                px_lo: px_top + panel_h,
                px_hi: px_top,
            };
            doc.frame(&x, &y);
            doc.y_labels(&y);
            doc.text(LEFT, px_top - 6.0, "start", label);
            if lo < 0.0 && hi > 0.0 {
                let zero = y.at(0.0);
                doc.line(
                    x.px_lo,
                    zero,
                    x.px_hi,
                    zero,
                    "stroke:#999999;stroke-width:0.5;stroke-dasharray:4,3",
                );
            }
            let mut coords = String::new();
            for (k, &(i, v)) in points.iter().enumerate() {
                if k > 0 {
                    coords.push(' ');
                }
                let _ = write!(coords, "{:.2},{:.2}", x.at(i as f64), y.at(v));
            }
            let _ = writeln!(
                doc.out,
                r#"<polyline points="{coords}" style="fill:none;stroke:{};stroke-width:0.6"/>"#,
                PALETTE[p]
            );
            if let (Some(first), Some(last_row)) = (rows.first(), rows.last()) {
                let base = px_top + panel_h + 14.0;
                doc.text(x.px_lo, base, "start", &first.date.format("%Y-%m-%d").to_string());
                doc.text(
                    x.px_hi,
                    base,
                    "end",
                    &last_row.date.format("%Y-%m-%d").to_string(),
                );
            }
        }
        doc.finish()
    }

    fn scatter(&self, panel: &Panel, points: &[super::ScatterPoint]) -> String {
        let plot = 420.0;
        let top = 44.0;
        let width = LEFT + plot + RIGHT + 100.0;
        let height = top + plot + 50.0;
        let mut doc = Doc::new(width, height, &panel.title);
        let (lo, hi) = range(points.iter().flat_map(|p| [p.x, p.y]));
        let x = Axis {
            lo,
            hi,
            px_lo: LEFT,
            px_hi: LEFT + plot,
        };
        let y = Axis {
            lo,
            hi,
            px_lo: top + plot,
            px_hi: top,
        };
        doc.frame(&x, &y);
        doc.y_labels(&y);
        doc.text(x.px_lo, y.px_lo + 14.0, "start", &fmt_sig6(lo));
        doc.text(x.px_hi, y.px_lo + 14.0, "end", &fmt_sig6(hi));
        doc.text(
            (x.px_lo + x.px_hi) / 2.0,
            y.px_lo + 32.0,
            "middle",
            "C_dn (day vs following night)",
        );
        let _ = writeln!(
            doc.out,
            r#"<text x="16" y="{0:.2}" transform="rotate(-90 16 {0:.2})" style="{FONT};text-anchor:middle">C_nd (day vs preceding night)</text>"#,
            (y.px_lo + y.px_hi) / 2.0
        );
        doc.line(
            x.at(lo),
            y.at(lo),
            x.at(hi),
            y.at(hi),
            "stroke:#999999;stroke-width:1;stroke-dasharray:5,4",
        );
        let colors = group_colors(points.iter().map(|p| p.group.as_deref()));
        for (p, color) in points.iter().zip(colors) {
            let _ = writeln!(
                doc.out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" style="fill:{color};stroke:#000000;stroke-width:0.5"><title>{}</title></circle>"#,
                x.at(p.x),
                y.at(p.y),
                escape(&p.symbol)
            );
        }
        doc.finish()
    }

    fn ratio_bars(&self, panel: &Panel, bars: &[super::RatioBar]) -> String {
        let slot = 26.0;
        let bar_w = 20.0;
        let plot_h = 300.0;
        let top = 44.0;
        let width = (LEFT + slot * bars.len() as f64 + RIGHT).max(self.width);
        let height = top + plot_h + 110.0;
        let mut doc = Doc::new(width, height, &panel.title);

        let defined = || bars.iter().filter_map(|b| b.ratio);
        let lo = defined().fold(0.0f64, f64::min);
        let hi = defined().fold(1.0f64, f64::max);
        let pad = 0.05 * (hi - lo);
        let y = Axis {
            lo: if lo < 0.0 { lo - pad } else { 0.0 },
            hi: hi + pad,
            px_lo: top + plot_h,
            px_hi: top,
        };
        let x = Axis {
            lo: 0.0,
            hi: 1.0,
            px_lo: LEFT,
            px_hi: width - RIGHT,
        };
        doc.frame(&x, &y);
        doc.y_labels(&y);
        let base = y.at(0.0);
        doc.line(x.px_lo, base, x.px_hi, base, "stroke:#000000;stroke-width:0.8");
        let one = y.at(1.0);
        doc.line(
            x.px_lo,
            one,
            x.px_hi,
            one,
            "stroke:#999999;stroke-width:1;stroke-dasharray:5,4",
        );

        let colors = group_colors(bars.iter().map(|b| b.group.as_deref()));
        let mut undefined = Vec::new();
        for (i, (b, color)) in bars.iter().zip(colors).enumerate() {
            let cx = LEFT + slot * (i as f64 + 0.5);
            match b.ratio {
                Some(r) => {
                    let (y0, y1) = (y.at(r).min(base), y.at(r).max(base));
                    let _ = writeln!(
                        doc.out,
                        r#"<rect x="{:.2}" y="{y0:.2}" width="{bar_w:.2}" height="{:.2}" style="fill:{color}"><title>{}: {}</title></rect>"#,
                        cx - bar_w / 2.0,
                        y1 - y0,
                        escape(&b.symbol),
                        fmt_sig6(r)
                    );
                }
                None => {
                    undefined.push(b.symbol.as_str());
                    let _ = writeln!(
                        doc.out,
                        r#"<text x="{cx:.2}" y="{:.2}" transform="rotate(-90 {cx:.2} {:.2})" style="{FONT};fill:#d62728">{UNDEFINED}</text>"#,
                        base - 4.0,
                        base - 4.0
                    );
                }
            }
            let ly = y.px_lo + 12.0;
            let _ = writeln!(
                doc.out,
                r#"<text x="{cx:.2}" y="{ly:.2}" transform="rotate(60 {cx:.2} {ly:.2})" style="{FONT}">{}</text>"#,
                escape(&b.symbol)
            );
        }
        if !undefined.is_empty() {
            doc.text(
                LEFT,
                height - 10.0,
                "start",
                &format!("ratio {UNDEFINED}: {}", undefined.join(", ")),
            );
        }
        doc.finish()
    }
}

impl PanelRenderer for SvgRenderer {
    fn name(&self) -> &'static str {
        "svg"
    }

    fn render(&self, panel: &Panel) -> String {
        match &panel.data {
            PanelData::Timeseries(rows) => self.timeseries(panel, rows),
            PanelData::Scatter(points) => self.scatter(panel, points),
            PanelData::RatioBars(bars) => self.ratio_bars(panel, bars),
        }
    }
}
