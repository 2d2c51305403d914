//! A small hand-written SVG emitter with fixed number formatting.

use std::fmt::Write as _;

use crate::numfmt::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
    Dotted,
}

impl Stroke {
    fn dasharray(self) -> &'static str {
        match self {
            Stroke::Solid => "",
            Stroke::Dashed => " stroke-dasharray=\"6 4\"",
            Stroke::Dotted => " stroke-dasharray=\"1.5 3\"",
        }
    }
}

/// Closed interval of data coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    /// Smallest interval containing every finite value, widened by 5 % of
    /// its length on each side.
    pub fn covering<I: IntoIterator<Item = f64>>(values: I) -> Range {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.into_iter().filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return Range { lo: -1.0, hi: 1.0 };
        }
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
        Range {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }
}

/// A plotting area: a pixel rectangle and the data ranges mapped onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
    pub x: Range,
    pub y: Range,
}

impl Frame {
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.left + (x - self.x.lo) / (self.x.hi - self.x.lo) * self.width,
            self.top + (self.y.hi - y) / (self.y.hi - self.y.lo) * self.height,
        )
    }
}

/// Pixel coordinate with two decimals; never prints `-0.00`.
fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0 + 0.0;
    format!("{r:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub struct Svg {
    width: u32,
    height: u32,
    body: String,
}

impl Svg {
    pub fn new(width: u32, height: u32) -> Self {
        Svg {
            width,
            height,
            body: String::new(),
        }
    }

    /// Border, zero lines and corner labels of the ranges.
    pub fn frame(&mut self, f: &Frame, label: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.8\"/>",
            px(f.left),
            px(f.top),
            px(f.width),
            px(f.height)
        );
        if f.y.contains(0.0) {
            self.segment(f.map(f.x.lo, 0.0), f.map(f.x.hi, 0.0), "#bbb", 0.6, Stroke::Solid);
        }
        if f.x.contains(0.0) {
            self.segment(f.map(0.0, f.y.lo), f.map(0.0, f.y.hi), "#bbb", 0.6, Stroke::Solid);
        }
        let below = f.top + f.height + 14.0;
        self.text(f.left, below, "start", &fmt_sig(f.x.lo, 4));
        self.text(f.left + f.width, below, "end", &fmt_sig(f.x.hi, 4));
        self.text(f.left - 4.0, f.top + f.height, "end", &fmt_sig(f.y.lo, 4));
        self.text(f.left - 4.0, f.top + 10.0, "end", &fmt_sig(f.y.hi, 4));
        self.text(8.0, f.top + f.height / 2.0, "start", label);
    }

    pub fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"11\">{}</text>",
            px(x),
            px(y),
            escape(s)
        );
    }

    pub fn segment(&mut self, a: (f64, f64), b: (f64, f64), color: &str, width: f64, stroke: Stroke) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"{}/>",
            px(a.0),
            px(a.1),
            px(b.0),
            px(b.1),
            px(width),
            stroke.dasharray()
        );
    }

    /// Polyline in data coordinates; non-finite points split the line.
    pub fn polyline(&mut self, f: &Frame, pts: &[(f64, f64)], color: &str, stroke: Stroke) {
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, body: &mut String| {
            if run.len() >= 2 {
                let _ = writeln!(
                    body,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"{}/>",
                    run.join(" "),
                    stroke.dasharray()
                );
            }
            run.clear();
        };
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                let (a, b) = f.map(x, y);
                run.push(format!("{},{}", px(a), px(b)));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }

    pub fn arrow(&mut self, from: (f64, f64), to: (f64, f64), color: &str) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"0.8\" marker-end=\"url(#arrowhead)\"/>",
            px(from.0),
            px(from.1),
            px(to.0),
            px(to.1)
        );
    }

    pub fn finish(self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = self.width,
            h = self.height
        );
        s.push_str(
            "<defs><marker id=\"arrowhead\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">\
             <path d=\"M0,0 L8,4 L0,8 z\" fill=\"#c00\"/></marker></defs>\n",
        );
        let _ = writeln!(
            s,
            "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
            self.width, self.height
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}
