//! Scan reports and their JSON, CSV and SVG renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::norm::{NormEstimate, SlopeFit};

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub point: BTreeMap<String, f64>,
    pub estimate: f64,
    pub witness_norms: (f64, f64),
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl ScanRecord {
    pub fn new(point: &[(&str, f64)], est: &NormEstimate) -> Self {
        Self {
            point: point.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            estimate: est.value,
            witness_norms: est.witness_norms,
            iterations: est.iterations,
            converged: est.converged,
            extra: BTreeMap::new(),
        }
    }

    /// Record without a norm estimate (kernel-level measurements).
    pub fn value(point: &[(&str, f64)], value: f64) -> Self {
        Self {
            point: point.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            estimate: value,
            witness_norms: (f64::NAN, f64::NAN),
            iterations: 0,
            converged: true,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.extra.insert(key.into(), v);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub scan_id: String,
    pub parameters: serde_json::Value,
    pub records: Vec<ScanRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<SlopeFit>,
    pub summary: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ScanReport {
    pub fn new(scan_id: &str, parameters: serde_json::Value) -> Self {
        Self {
            scan_id: scan_id.into(),
            parameters,
            records: Vec::new(),
            fit: None,
            summary: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    /// Flat rows: `scan_id`, point and extra columns, estimate diagnostics.
    pub fn to_csv(&self) -> String {
        to_csv(std::slice::from_ref(self))
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.12e}")
    }
}

/// One CSV table for several reports; columns are the union of keys.
pub fn to_csv(reports: &[ScanReport]) -> String {
    let mut point_keys: Vec<String> = Vec::new();
    let mut extra_keys: Vec<String> = Vec::new();
    for rec in reports.iter().flat_map(|r| &r.records) {
        for k in rec.point.keys() {
            if !point_keys.contains(k) {
                point_keys.push(k.clone());
            }
        }
        for k in rec.extra.keys() {
            if !extra_keys.contains(k) {
                extra_keys.push(k.clone());
            }
        }
    }
    let mut out = String::from("scan_id");
    for k in point_keys.iter().chain(&extra_keys) {
        let _ = write!(out, ",{k}");
    }
    out.push_str(",estimate,witness_in,witness_out,iterations,converged\n");
    for rep in reports {
        for rec in &rep.records {
            out.push_str(&rep.scan_id);
            for k in &point_keys {
                let _ = write!(out, ",{}", rec.point.get(k).map(|v| fmt_num(*v)).unwrap_or_default());
            }
            for k in &extra_keys {
                let _ = write!(out, ",{}", rec.extra.get(k).map(|v| fmt_num(*v)).unwrap_or_default());
            }
            let _ = writeln!(
                out,
                ",{},{},{},{},{}",
                fmt_num(rec.estimate),
                fmt_num(rec.witness_norms.0),
                fmt_num(rec.witness_norms.1),
                rec.iterations,
                rec.converged
            );
        }
    }
    out
}

/// A named polyline for [`svg_plot`].
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Minimal line plot with axes, ticks and a legend.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h, m) = (640.0, 420.0, 60.0);
    let pts: Vec<(f64, f64)> =
        series.iter().flat_map(|s| s.points.iter().copied()).filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{0}" stroke="black"/>"#,
        h - m,
        w - m
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{fx:.3}</text>"#, sx(fx), h - m + 16.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{fy:.3}</text>"#, m - 4.0, sy(fy) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, w / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        h / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        for p in &path {
            let (px, py) = p.split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{px}" cy="{py}" r="2.5" fill="{c}"/>"#);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{c}">{}</text>"#,
            w - m - 150.0,
            m + 16.0 * i as f64,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
