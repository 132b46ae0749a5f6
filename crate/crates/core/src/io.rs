//! Deterministic output files: CSV tables, JSON reports and optional SVG plots,
//! each carrying a metadata header.

use crate::error::{config_err, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Fixed float format: 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Hex SHA-256 of the canonical (JSON) form of a configuration.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let text = serde_json::to_string(config).map_err(|e| config_err(format!("cannot serialize configuration: {e}")))?;
    Ok(Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    }))
}

/// Metadata written at the top of every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub command: String,
    pub anchor: String,
    pub config_hash: String,
    pub tolerances: Vec<(String, f64)>,
}

impl Header {
    pub fn new(command: &str, anchor: &str, config_hash: &str, tolerances: &[(&str, f64)]) -> Self {
        Self {
            command: command.into(),
            anchor: anchor.into(),
            config_hash: config_hash.into(),
            tolerances: tolerances.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn with_anchor(&self, anchor: &str) -> Self {
        Self { anchor: anchor.into(), ..self.clone() }
    }

    fn lines(&self, prefix: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{prefix}command: {}", self.command);
        let _ = writeln!(s, "{prefix}anchor: {}", self.anchor);
        let _ = writeln!(s, "{prefix}config_hash: {}", self.config_hash);
        let tol: Vec<String> = self.tolerances.iter().map(|(k, v)| format!("{k}={}", fmt17(*v))).collect();
        let _ = writeln!(s, "{prefix}tolerances: {}", tol.join(" "));
        s
    }

    fn json(&self) -> Value {
        let tol: serde_json::Map<String, Value> = self.tolerances.iter().map(|(k, v)| (k.clone(), number(*v))).collect();
        serde_json::json!({
            "command": self.command,
            "anchor": self.anchor,
            "config_hash": self.config_hash,
            "tolerances": tol,
        })
    }
}

/// Column-oriented table; rows are rendered with [`fmt17`].
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, header: &Header) -> String {
        let mut s = header.lines("# ");
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(fmt17(v)), Value::Number)
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_else(|_| "\"\"".into())
}

/// Pretty JSON with integers verbatim and every other number at 17 significant digits.
fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&fmt17(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&quote(s)),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&quote(k));
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// `{"meta": header, "data": value}` with every float at 17 significant digits.
pub fn render_json<T: Serialize>(header: &Header, value: &T) -> Result<String> {
    let data = serde_json::to_value(value).map_err(|e| config_err(format!("cannot serialize report: {e}")))?;
    let doc = serde_json::json!({ "meta": header.json(), "data": data });
    let mut s = String::new();
    write_value(&mut s, &doc, 0);
    s.push('\n');
    Ok(s)
}

/// One polyline of a plot.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: &str, xs: &[f64], ys: &[f64]) -> Self {
        Self { label: label.into(), points: xs.iter().copied().zip(ys.iter().copied()).collect() }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Axes {
    pub log_x: bool,
    pub log_y: bool,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Minimal line plot.
pub fn render_svg(header: &Header, title: &str, x_label: &str, y_label: &str, series: &[Series], axes: Axes) -> String {
    let (w, h, m) = (640.0, 420.0, 60.0);
    let tx = |v: f64| if axes.log_x { v.log10() } else { v };
    let ty = |v: f64| if axes.log_y { v.log10() } else { v };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| s.points.iter().map(|(x, y)| (tx(*x), ty(*y))).filter(|(x, y)| x.is_finite() && y.is_finite()).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = write!(s, "<!--\n{}-->\n", header.lines(""));
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">");
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>", w / 2.0, escape(title));
    let _ = writeln!(s, "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>", w - 2.0 * m, h - 2.0 * m);
    let tick = |v: f64, log: bool| if log { format!("1e{v:.1}") } else { format!("{v:.3e}") };
    for (v, anchor, x, y) in [
        (x0, "start", m, h - m + 16.0),
        (x1, "end", w - m, h - m + 16.0),
    ] {
        let _ = writeln!(s, "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\">{}</text>", tick(v, axes.log_x));
    }
    for (v, y) in [(y0, h - m), (y1, m + 10.0)] {
        let _ = writeln!(s, "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\">{}</text>", m - 4.0, tick(v, axes.log_y));
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", w / 2.0, h - 15.0, escape(x_label));
    let _ = writeln!(s, "<text x=\"15\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {})\">{}</text>", h / 2.0, h / 2.0, escape(y_label));
    for (k, (ser, p)) in series.iter().zip(&pts).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let path: Vec<String> = p.iter().map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", path.join(" "));
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>", w - m - 4.0 - 0.0, m + 16.0 + 14.0 * k as f64, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Collects rendered files and writes them only once every one has been produced.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn csv(&mut self, name: &str, header: &Header, table: &Table) {
        self.files.push((name.into(), table.render(header)));
    }

    pub fn json<T: Serialize>(&mut self, name: &str, header: &Header, value: &T) -> Result<()> {
        self.files.push((name.into(), render_json(header, value)?));
        Ok(())
    }

    pub fn svg(&mut self, name: &str, body: String) {
        self.files.push((name.into(), body));
    }

    pub fn names(&self) -> Vec<&str> {
        self.files.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_str())
    }

    /// Writes every file under `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (name, body) in &self.files {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            out.push(p);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.5), "-2.5000000000000000e0");
        let h = Header::new("t", "a", "00", &[("tol", 1e-6)]);
        let j = render_json(&h, &serde_json::json!({"x": 0.1, "n": 3})).unwrap();
        assert!(j.contains("1.0000000000000001e-1"), "{j}");
        assert!(j.contains("\"n\": 3"));
    }
}
