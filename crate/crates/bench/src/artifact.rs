//! CSV tables, SVG plots and JSON metadata for benchmark runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Method;
use crate::error::BenchError;

pub const CSV_HEADER: &str = "epoch,gd,phb,nag,ref";
/// Residues below this are drawn at this value on the log axis.
pub const LOG_FLOOR: f64 = 1e-16;

/// `residue0 / k^2` for `k = 1..=epochs`; empty unless `residue0 > 0`.
pub fn reference_curve(residue0: f64, epochs: usize) -> Vec<f64> {
    if !(residue0 > 0.0) {
        return Vec::new();
    }
    (1..=epochs).map(|k| residue0 / (k as f64 * k as f64)).collect()
}

/// Reference column indexed by epoch: the anchor at epoch 0, then `residue0 / k^2`.
pub fn reference_column(residue0: f64, epochs: usize) -> Option<Vec<f64>> {
    let curve = reference_curve(residue0, epochs);
    if curve.is_empty() && epochs > 0 {
        return None;
    }
    Some(std::iter::once(residue0).chain(curve).collect())
}

fn fmt_value(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

/// Residue table with one row per epoch; methods that were not run are left blank.
pub fn residue_csv(residues: &BTreeMap<Method, Vec<f64>>, reference: Option<&[f64]>, epochs: usize) -> String {
    let mut out = String::with_capacity((epochs + 1) * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..=epochs {
        let cell = |m: Method| fmt_value(residues.get(&m).and_then(|r| r.get(k)).copied());
        let reference = fmt_value(reference.and_then(|r| r.get(k)).copied());
        let _ = writeln!(
            out,
            "{k},{},{},{},{}",
            cell(Method::Gd),
            cell(Method::Phb),
            cell(Method::Nag),
            reference
        );
    }
    out
}

fn method_color(m: Method) -> &'static str {
    match m {
        Method::Gd => "#ff7f0e",
        Method::Phb => "#1f77b4",
        Method::Nag => "#2ca02c",
    }
}

/// Log-scale residue plot as a standalone SVG 1.1 document.
pub fn residue_svg(title: &str, residues: &BTreeMap<Method, Vec<f64>>, reference: Option<&[f64]>, epochs: usize) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let log = |v: f64| v.max(LOG_FLOOR).log10();
    let all = residues.values().flatten().chain(reference.into_iter().flatten());
    let (mut lo, mut hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        let l = if v.is_finite() { log(v) } else { f64::NAN };
        (lo.min(l), hi.max(l))
    });
    if !lo.is_finite() || !hi.is_finite() {
        lo = -16.0;
        hi = 0.0;
    }
    let (lo, hi) = (lo.floor(), hi.ceil().max(lo.floor() + 1.0));
    let span_x = epochs.max(1) as f64;
    let px = |k: usize| LEFT + (W - LEFT - RIGHT) * k as f64 / span_x;
    let py = |v: f64| TOP + (H - TOP - BOTTOM) * (hi - log(v)) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.1},{y0:.1} L{x0:.1},{y1:.1} L{x1:.1},{y1:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    let decades = (hi - lo) as usize;
    let step = decades.div_ceil(8).max(1);
    for d in (0..=decades).step_by(step) {
        let e = lo + d as f64;
        let y = py(10f64.powf(e));
        let _ = writeln!(
            s,
            r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#dddddd" stroke-width="0.5"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{}</text>"#,
            x0 - 6.0,
            y + 4.0,
            e as i64
        );
    }
    for i in 0..=5 {
        let k = epochs * i / 5;
        let x = px(k);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{k}</text>"#,
            y1 + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">epoch</text>"#,
        (x0 + x1) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">residue</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let mut legend: Vec<(&str, &str)> = Vec::new();
    let mut polyline = |values: &[f64], color: &str, width: f64| {
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .map(|(k, &v)| format!("{:.2},{:.2}", px(k), py(v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
            points.join(" ")
        );
    };
    for (m, values) in residues {
        polyline(values, method_color(*m), 1.5);
        legend.push((m.name(), method_color(*m)));
    }
    if let Some(r) = reference {
        polyline(r, "red", 1.0);
        legend.push(("O(1/k^2)", "red"));
    }
    for (i, (label, color)) in legend.iter().enumerate() {
        let y = TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/>"#,
            x1 + 12.0,
            x1 + 36.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            x1 + 42.0,
            y + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub config: serde_json::Value,
    pub final_residues: BTreeMap<String, f64>,
    pub wall_ms: f64,
}

/// Files produced by one run (or one solver of a preset).
#[derive(Clone, Debug)]
pub struct RunArtifact {
    pub stem: String,
    pub csv: String,
    pub svg: String,
    pub metadata: Metadata,
}

impl RunArtifact {
    pub fn build(
        stem: String,
        title: &str,
        config: serde_json::Value,
        residues: &BTreeMap<Method, Vec<f64>>,
        epochs: usize,
        wall_ms: f64,
    ) -> Self {
        let residue0 = residues.values().next().and_then(|r| r.first().copied()).unwrap_or(0.0);
        let reference = reference_column(residue0, epochs);
        let final_residues = residues
            .iter()
            .filter_map(|(m, r)| r.last().map(|v| (m.name().to_string(), *v)))
            .collect();
        RunArtifact {
            csv: residue_csv(residues, reference.as_deref(), epochs),
            svg: residue_svg(title, residues, reference.as_deref(), epochs),
            metadata: Metadata {
                config,
                final_residues,
                wall_ms,
            },
            stem,
        }
    }

    /// Writes `<stem>.csv`, `<stem>.svg` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| BenchError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let json = serde_json::to_string_pretty(&self.metadata).expect("metadata serializes") + "\n";
        let mut written = Vec::new();
        for (ext, body) in [("csv", &self.csv), ("svg", &self.svg), ("json", &json)] {
            let path = dir.join(format!("{}.{ext}", self.stem));
            fs::write(&path, body).map_err(io(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}
