//! Fermat–Torricelli point and the three-terminal Steiner tree.

use crate::error::{Error, Result};
use crate::geom::{classify, Point, TerminalTriangle, TriangleClass, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteinerKind {
    Interior,
    /// The wide vertex is itself the Steiner point.
    AtVertex(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerInfo {
    pub point: Point,
    pub kind: SteinerKind,
    /// `|OA|, |OB|, |OC|`; the wide vertex's own spoke is 0.
    pub spoke_lengths: [f64; 3],
    pub l_st: f64,
}

impl SteinerInfo {
    pub fn spoke(&self, v: Vertex) -> f64 {
        self.spoke_lengths[v.index()]
    }

    pub fn min_spoke(&self) -> f64 {
        self.spoke_lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn steiner_info(t: &TerminalTriangle) -> SteinerInfo {
    match classify(t) {
        TriangleClass::InteriorSteinerPoint => {
            let point = torricelli_point(t);
            let spoke_lengths = t.vertices().map(|v| v.dist(point));
            SteinerInfo { point, kind: SteinerKind::Interior, spoke_lengths, l_st: spoke_lengths.iter().sum() }
        }
        TriangleClass::WideAngle(w) => {
            let point = t.vertex(w);
            let mut spoke_lengths = t.vertices().map(|v| v.dist(point));
            spoke_lengths[w.index()] = 0.0;
            SteinerInfo { point, kind: SteinerKind::AtVertex(w), spoke_lengths, l_st: spoke_lengths.iter().sum() }
        }
    }
}

/// Apex of the equilateral triangle erected outward on side `p q`, away from
/// `opposite`.
fn outward_apex(p: Point, q: Point, opposite: Point) -> Point {
    let mid = p.lerp(q, 0.5);
    let h = (q - p).perp() * (3f64.sqrt() / 2.0);
    let apex = mid + h;
    if (q - p).cross(opposite - p).signum() == (q - p).cross(apex - p).signum() {
        mid - h
    } else {
        apex
    }
}

/// Torricelli construction: each Simpson line joins a vertex to the outward
/// apex on the opposite side; all three are concurrent at the Fermat point.
/// Two of them are intersected, choosing the pair whose directions are least
/// parallel.
fn torricelli_point(t: &TerminalTriangle) -> Point {
    let lines = Vertex::ALL.map(|v| {
        let (p, q) = v.others();
        let from = t.vertex(v);
        (from, outward_apex(t.vertex(p), t.vertex(q), from) - from)
    });
    let (i, j) = [(0, 1), (1, 2), (2, 0)]
        .into_iter()
        .max_by(|&(a, b), &(c, d)| {
            let s1 = sin_between(lines[a].1, lines[b].1);
            let s2 = sin_between(lines[c].1, lines[d].1);
            s1.total_cmp(&s2)
        })
        .expect("three pairs");
    let (p0, d0) = lines[i];
    let (p1, d1) = lines[j];
    // p0 + s d0 = p1 + u d1
    let s = (p1 - p0).cross(d1) / d0.cross(d1);
    p0 + d0 * s
}

fn sin_between(u: Point, v: Point) -> f64 {
    (u.cross(v) / (u.norm() * v.norm())).abs()
}

/// Weiszfeld fixed-point iteration for the geometric median of the terminals.
///
/// Used only as an independent check on [`steiner_info`]. An iterate that
/// lands on a terminal is nudged off it and the iteration restarts.
pub fn weiszfeld_point(t: &TerminalTriangle, tol: f64, max_iter: usize) -> Result<Point> {
    if classify(t) != TriangleClass::InteriorSteinerPoint {
        return Err(Error::Precondition("weiszfeld_point needs a triangle with an interior Steiner point".into()));
    }
    let verts = t.vertices();
    let scale = t.perimeter();
    let mut p = t.centroid();
    let mut step = f64::INFINITY;
    let mut nudge = 1;
    for _ in 0..max_iter {
        if let Some(v) = verts.iter().find(|v| v.dist(p) < 1e-14 * scale) {
            // Move off the singularity toward the centroid.
            p = v.lerp(t.centroid(), 1e-3 * nudge as f64);
            nudge += 1;
            continue;
        }
        let (mut num, mut den) = (Point::default(), 0.0);
        for v in verts {
            let w = 1.0 / v.dist(p);
            num = num + v * w;
            den += w;
        }
        let next = num * (1.0 / den);
        step = next.dist(p);
        p = next;
        if step < tol {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, step })
}
