//! Static SVG renderings of a network and of the J(L) curve.

use std::fmt::Write;

use crate::analytic::Thresholds;
use crate::evolve::SweepSample;
use crate::geom::Point;
use crate::network::{Network, NodeKind};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Maps a data box onto the drawing area with y pointing up.
struct Frame {
    lo: Point,
    scale_x: f64,
    scale_y: f64,
}

impl Frame {
    fn new(lo: Point, hi: Point, keep_aspect: bool) -> Self {
        let inner = SIZE - 2.0 * MARGIN;
        let w = (hi.x - lo.x).max(1e-300);
        let h = (hi.y - lo.y).max(1e-300);
        let (mut sx, mut sy) = (inner / w, inner / h);
        if keep_aspect {
            sx = sx.min(sy);
            sy = sx;
        }
        Frame { lo, scale_x: sx, scale_y: sy }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale_x, SIZE - MARGIN - (p.y - self.lo.y) * self.scale_y)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

pub fn network_svg(n: &Network) -> String {
    let t = n.triangle();
    let v = t.vertices();
    let lo = Point::new(
        v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
        v.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
    );
    let hi = Point::new(
        v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max),
        v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max),
    );
    let frame = Frame::new(lo, hi, true);

    let mut out = String::new();
    header(&mut out);
    let guide: Vec<String> = v
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#999999" stroke-width="1" stroke-dasharray="6,4"/>"##,
        guide.join(" ")
    );
    for &(a, b) in n.edges() {
        let (x1, y1) = frame.map(n.pos(a));
        let (x2, y2) = frame.map(n.pos(b));
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="2"/>"#
        );
    }
    for node in n.nodes() {
        let (x, y) = frame.map(node.pos);
        match node.kind {
            NodeKind::Terminal(label) => {
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="6" fill="black"/>"#);
                let _ = writeln!(
                    out,
                    r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="16">{label}</text>"#,
                    x + 8.0,
                    y - 8.0
                );
            }
            NodeKind::Anchor => {
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="red"/>"#);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// J(L) polyline with a dashed marker at each threshold. Samples carrying a
/// disconnection penalty are left out so they do not flatten the curve.
pub fn curve_svg(samples: &[SweepSample], th: &Thresholds, penalty: f64) -> String {
    let pts: Vec<Point> = samples.iter().filter(|s| s.j < penalty).map(|s| Point::new(s.l, s.j)).collect();
    let mut out = String::new();
    header(&mut out);
    if pts.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let lo = Point::new(
        pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
        pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
    );
    let hi = Point::new(
        pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max),
        pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max),
    );
    let frame = Frame::new(lo, hi, false);

    let (x0, y0) = frame.map(lo);
    let (x1, y1) = frame.map(hi);
    let _ = writeln!(out, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x0:.3}" y2="{y1:.3}" stroke="black"/>"#);
    for x in th.all().into_iter().filter(|&x| x >= lo.x && x <= hi.x) {
        let (sx, _) = frame.map(Point::new(x, lo.y));
        let _ = writeln!(
            out,
            r##"<line x1="{sx:.3}" y1="{y0:.3}" x2="{sx:.3}" y2="{y1:.3}" stroke="#3366cc" stroke-dasharray="4,4"/>"##
        );
    }
    let poly: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, poly.join(" "));
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14">L</text>"#,
        SIZE - MARGIN + 8.0,
        y0
    );
    let _ =
        writeln!(out, r#"<text x="{x0:.3}" y="{:.3}" font-family="sans-serif" font-size="14">J</text>"#, MARGIN - 12.0);
    out.push_str("</svg>\n");
    out
}
