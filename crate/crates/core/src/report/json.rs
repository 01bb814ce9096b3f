use serde_json::{json, Map, Number, Value};

use super::{fmt_sig6, Panel, PanelData, PanelRenderer, UNDEFINED};

/// `{"panel": {...}, "data": [...]}`, pretty-printed with a trailing newline.
#[derive(Debug, Clone, Copy, Default)]
pub struct JsonRenderer;

/// The value of the six-digit decimal string, so json and csv agree.
fn num(x: f64) -> Value {
    fmt_sig6(x)
        .parse::<f64>()
        .ok()
        .and_then(Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

fn opt_str(s: &Option<String>) -> Value {
    s.as_ref().map_or(Value::Null, |s| Value::String(s.clone()))
}

impl PanelRenderer for JsonRenderer {
    fn name(&self) -> &'static str {
        "json"
    }

    fn render(&self, panel: &Panel) -> String {
        let data: Vec<Value> = match &panel.data {
            PanelData::Timeseries(rows) => rows
                .iter()
                .map(|r| {
                    json!({
                        "date": r.date.format("%Y-%m-%d").to_string(),
                        "d": num(r.intraday),
                        "n": r.overnight.map_or(Value::Null, num),
                    })
                })
                .collect(),
            PanelData::Scatter(points) => points
                .iter()
                .map(|p| {
                    json!({
                        "symbol": p.symbol,
                        "group": opt_str(&p.group),
                        "c_dn": num(p.x),
                        "c_nd": num(p.y),
                    })
                })
                .collect(),
            PanelData::RatioBars(bars) => bars
                .iter()
                .map(|b| {
                    json!({
                        "symbol": b.symbol,
                        "group": opt_str(&b.group),
                        "ratio": b.ratio.map_or(Value::String(UNDEFINED.into()), num),
                    })
                })
                .collect(),
        };
        let mut panel_meta = Map::new();
        panel_meta.insert("kind".into(), panel.kind.as_str().into());
        panel_meta.insert("title".into(), panel.title.clone().into());
        let doc = json!({ "panel": panel_meta, "data": data });
        let mut out = serde_json::to_string_pretty(&doc).expect("json value serializes");
        out.push('\n');
        out
    }
}
