//! Distribution files, sweep CSV/SVG output and search result documents.
//!
//! Distribution files are JSON:
//!
//! ```json
//! {
//!   "shape": { "bob": 2, "alice": 2, "eve": 4 },
//!   "order": "bob,alice,eve",
//!   "probs": [2.4000000000000000e-1, ...]
//! }
//! ```
//!
//! `probs` is row-major with Bob outermost and Eve innermost. The `order`
//! field must be exactly `"bob,alice,eve"`; files written with any other
//! axis order are rejected rather than silently transposed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::counterexample::SweepRow;
use crate::dist::{Shape, TripartiteDistribution};
use crate::error::{Error, Result};
use crate::info::InfoReport;
use crate::search::{SearchConfig, SearchResult};

pub const AXIS_ORDER: &str = "bob,alice,eve";

pub const CSV_HEADER: &str = "epsilon,p_b,p_e,i_ab,i_ae,gap";

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 500.0;

#[derive(Debug, Deserialize)]
struct RawShape {
    bob: usize,
    alice: usize,
    eve: usize,
}

/// On-disk layout; extra fields (as in search documents) are ignored.
#[derive(Debug, Deserialize)]
struct DistributionFile {
    shape: RawShape,
    order: String,
    probs: Vec<f64>,
}

/// Parses a distribution document from text.
pub fn parse_distribution(text: &str) -> Result<TripartiteDistribution> {
    let file: DistributionFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.order != AXIS_ORDER {
        return Err(Error::WrongOrder(file.order));
    }
    let RawShape { bob, alice, eve } = file.shape;
    Shape::new(bob, alice, eve)
        .and_then(|shape| TripartiteDistribution::new(file.probs, shape))
        .map_err(|e| Error::Validation(Box::new(e)))
}

pub fn load_distribution(path: impl AsRef<Path>) -> Result<TripartiteDistribution> {
    parse_distribution(&fs::read_to_string(path)?)
}

/// Renders a distribution document. Probabilities carry 17 significant
/// digits so reading the text back reproduces every cell bit-exactly.
pub fn distribution_to_string(dist: &TripartiteDistribution) -> String {
    let s = dist.shape();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(
        out,
        "  \"shape\": {{ \"bob\": {}, \"alice\": {}, \"eve\": {} }},",
        s.bob, s.alice, s.eve
    );
    let _ = writeln!(out, "  \"order\": \"{AXIS_ORDER}\",");
    out.push_str("  \"probs\": [\n");
    let n = dist.probs().len();
    for (i, p) in dist.probs().iter().enumerate() {
        let sep = if i + 1 == n { "" } else { "," };
        let _ = writeln!(out, "    {p:.16e}{sep}");
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn save_distribution(dist: &TripartiteDistribution, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, distribution_to_string(dist))?;
    Ok(())
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros trimmed, exponent notation only for very large or small values.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV text: header line then one line per row, 12 significant digits.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.epsilon, r.p_b, r.p_e, r.i_ab, r.i_ae, r.gap].map(|v| format_significant(v, 12));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_sweep_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let text = sweep_csv(rows)?;
    fs::write(path, text)?;
    Ok(())
}

/// ε where the gap first changes sign, linearly interpolated between the
/// two bracketing rows.
pub fn first_sign_change(rows: &[SweepRow]) -> Option<f64> {
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        let crosses = (a.gap > 0.0 && b.gap <= 0.0) || (a.gap < 0.0 && b.gap >= 0.0);
        crosses.then(|| a.epsilon + (b.epsilon - a.epsilon) * a.gap / (a.gap - b.gap))
    })
}

/// Standalone SVG chart of `i_ab` and `i_ae` against ε.
pub fn sweep_svg(rows: &[SweepRow]) -> Result<String> {
    if rows.len() < 2 {
        return Err(Error::TooFewRows(rows.len()));
    }
    let (left, right, top, bottom) = (70.0, 30.0, 50.0, 60.0);
    let plot_w = SVG_WIDTH - left - right;
    let plot_h = SVG_HEIGHT - top - bottom;

    let x_min = rows[0].epsilon;
    let x_max = rows[rows.len() - 1].epsilon;
    let values = rows.iter().flat_map(|r| [r.i_ab, r.i_ae]);
    let y_max = values.clone().fold(f64::MIN, f64::max).max(0.0);
    let y_min = values.fold(f64::MAX, f64::min).min(0.0);
    let y_span = if y_max > y_min { (y_max - y_min) * 1.05 } else { 1.0 };
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };

    let px = |eps: f64| left + (eps - x_min) / x_span * plot_w;
    let py = |v: f64| top + plot_h - (v - y_min) / y_span * plot_h;
    let points = |f: fn(&SweepRow) -> f64| {
        rows.iter()
            .map(|r| format!("{:.2},{:.2}", px(r.epsilon), py(f(r))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"  <text x="{}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">Mutual information with Alice versus epsilon</text>"#,
        SVG_WIDTH / 2.0
    );
    // axes
    let (x0, x1, y0, y1) = (left, left + plot_w, top + plot_h, top);
    let _ = writeln!(s, r#"  <line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for (eps, anchor) in [(x_min, "start"), (x_max, "end")] {
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            px(eps),
            y0 + 18.0,
            format_significant(eps, 6)
        );
    }
    for v in [y_min, y_min + y_span / 1.05] {
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            py(v) + 4.0,
            format_significant(v, 4)
        );
    }
    let _ = writeln!(
        s,
        r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">epsilon</text>"#,
        left + plot_w / 2.0,
        SVG_HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"  <text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">bits</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );

    for (id, label, color, f) in [
        ("i_ab", "I(A;B)", "#1f77b4", (|r: &SweepRow| r.i_ab) as fn(&SweepRow) -> f64),
        ("i_ae", "I(A;E)", "#d62728", |r: &SweepRow| r.i_ae),
    ] {
        let _ = writeln!(
            s,
            r#"  <polyline id="{id}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points(f)
        );
        let last = &rows[rows.len() - 1];
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="{color}" text-anchor="end">{label}</text>"#,
            px(last.epsilon) - 4.0,
            py(f(last)) - 6.0
        );
    }

    if let Some(eps) = first_sign_change(rows) {
        let x = px(eps);
        let _ = writeln!(
            s,
            r#"  <line id="sign-change" data-epsilon="{eps:.17e}" x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{y0}" stroke="gray" stroke-dasharray="6,4"/>"#
        );
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="gray">gap = 0 at {}</text>"#,
            x + 4.0,
            y1 + 14.0,
            format_significant(eps, 6)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_sweep_svg(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let text = sweep_svg(rows)?;
    fs::write(path, text)?;
    Ok(())
}

/// Machine-readable search output. It is also a valid distribution file,
/// so the embedded best distribution can be reloaded directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDocument {
    pub shape: Shape,
    pub order: String,
    pub probs: Vec<f64>,
    pub report: InfoReport,
    pub gap: f64,
    pub objective: f64,
    pub feasible: bool,
    pub restart_index: usize,
    pub iterations_used: usize,
    pub config: SearchConfig,
}

impl SearchDocument {
    pub fn new(result: &SearchResult, config: &SearchConfig) -> Self {
        SearchDocument {
            shape: result.best_dist.shape(),
            order: AXIS_ORDER.to_string(),
            probs: result.best_dist.probs().to_vec(),
            report: result.report,
            gap: result.report.gap(),
            objective: result.objective,
            feasible: result.feasible,
            restart_index: result.restart_index,
            iterations_used: result.iterations_used,
            config: *config,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
