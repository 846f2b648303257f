//! SVG rendering of 2-D center traces over the constraint lines.

use std::fmt::Write;

use crate::center::CenterTrace;
use crate::error::{Error, Result};
use crate::polytope::Polytope;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

type Xy = (f64, f64);
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn around(traces: &[CenterTrace]) -> Frame {
        let pts = traces
            .iter()
            .flat_map(|t| t.records.iter().map(|r| (r.point[0], r.point[1])));
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for (x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
        }
        let pad = |lo: f64, hi: f64| if hi > lo { 0.1 * (hi - lo) } else { 1.0 };
        let (px, py) = (pad(x0, x1), pad(y0, y1));
        Frame {
            x0: x0 - px,
            x1: x1 + px,
            y0: y0 - py,
            y1: y1 + py,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let inner = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.x0) / (self.x1 - self.x0) * inner,
            MARGIN + (self.y1 - y) / (self.y1 - self.y0) * inner,
        )
    }

    /// Segment of `a . x = b` inside the frame, if the line crosses it.
    fn clip(&self, a: &[f64], b: f64) -> Option<(Xy, Xy)> {
        let mut hits: Vec<(f64, f64)> = Vec::with_capacity(4);
        let tiny = 1e-12;
        if a[1].abs() > tiny {
            for x in [self.x0, self.x1] {
                let y = (b - a[0] * x) / a[1];
                if y >= self.y0 && y <= self.y1 {
                    hits.push((x, y));
                }
            }
        }
        if a[0].abs() > tiny {
            for y in [self.y0, self.y1] {
                let x = (b - a[1] * y) / a[0];
                if x >= self.x0 && x <= self.x1 {
                    hits.push((x, y));
                }
            }
        }
        // the two hits farthest apart; corner crossings give duplicates
        let mut best: Option<(Xy, Xy, f64)> = None;
        for (i, p) in hits.iter().enumerate() {
            for q in &hits[i + 1..] {
                let d = (p.0 - q.0).hypot(p.1 - q.1);
                if d > 0.0 && best.is_none_or(|(_, _, bd)| d > bd) {
                    best = Some((*p, *q, d));
                }
            }
        }
        best.map(|(p, q, _)| (p, q))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Draws the constraint lines clipped to the traces' bounding box (padded by
/// 10%), one polyline per trace and a marker at each trace's final point.
pub fn emit_svg(traces: &[CenterTrace], polytope: &Polytope) -> Result<String> {
    if polytope.n() != 2 {
        return Err(Error::DimensionUnsupported { n: polytope.n() });
    }
    let frame = Frame::around(traces);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    )
    .unwrap();

    writeln!(
        out,
        r##"<g id="constraints" stroke="#999999" stroke-width="1">"##
    )
    .unwrap();
    for i in 0..polytope.m() {
        if let Some((p, q)) = frame.clip(polytope.row(i), polytope.rhs()[i]) {
            let (x1, y1) = frame.map(p.0, p.1);
            let (x2, y2) = frame.map(q.0, q.1);
            writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"><title>{}</title></line>"#,
                escape(&polytope.constraint_name(i))
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r#"<g id="traces" fill="none" stroke-width="1.5">"#).unwrap();
    for (t, trace) in traces.iter().enumerate() {
        if trace.records.len() < 2 {
            continue;
        }
        let color = PALETTE[t % PALETTE.len()];
        let pts: Vec<String> = trace
            .records
            .iter()
            .map(|r| {
                let (x, y) = frame.map(r.point[0], r.point[1]);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(
            out,
            r#"<polyline stroke="{color}" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r#"<g id="markers" fill="black">"#).unwrap();
    for trace in traces {
        if let Some(r) = trace.records.last() {
            let (x, y) = frame.map(r.point[0], r.point[1]);
            writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4"/>"#).unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}
