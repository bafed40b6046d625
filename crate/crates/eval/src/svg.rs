//! Minimal SVG writer with a fixed theme.

use std::fmt::Write;

/// Categorical palette, cycled.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
pub const DEVELOPMENT_COLOR: &str = "#d62728";
pub const MYSTERY_COLOR: &str = "#1f77b4";
pub const POINT_COLOR: &str = "#b0b0b0";
pub const INK: &str = "#000000";
pub const FONT: &str = "sans-serif";

pub fn palette(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Fixed two-decimal formatting, without negative zero.
pub fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn attrs(extra: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in extra {
        let _ = write!(s, " {k}=\"{}\"", escape(v));
    }
    s
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str, extra: &[(&str, String)]) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" style=\"{style}\"{}/>",
            num(x),
            num(y),
            num(w.max(0.0)),
            num(h.max(0.0)),
            attrs(extra)
        );
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str, extra: &[(&str, String)]) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" style=\"{style}\"{}/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            attrs(extra)
        );
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, style: &str, extra: &[(&str, String)]) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" style=\"{style}\"{}/>",
            num(cx),
            num(cy),
            num(r),
            attrs(extra)
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], style: &str, extra: &[(&str, String)]) {
        let pts: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
        let _ = writeln!(
            self.body,
            "<polyline points=\"{}\" style=\"{style}\"{}/>",
            pts.join(" "),
            attrs(extra)
        );
    }

    /// Text anchored at `(x, y)`; `rotate` in degrees about the anchor.
    pub fn text(&mut self, x: f64, y: f64, anchor: &str, size: f64, content: &str, rotate: Option<f64>) {
        let transform = rotate
            .map(|a| format!(" transform=\"rotate({} {} {})\"", num(a), num(x), num(y)))
            .unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-family=\"{FONT}\" font-size=\"{}\"{transform}>{}</text>",
            num(x),
            num(y),
            num(size),
            escape(content)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" style=\"fill:#ffffff\"/>\n{}</svg>\n",
            self.body,
            w = num(self.width),
            h = num(self.height),
        )
    }
}
