//! Geometry of the three anchor phases.
//!
//! Three anchors: an equilateral triangle centred on the Steiner point with
//! its vertices on the spokes, parameterized by the centre-to-anchor
//! distance `r`.
//!
//! Two anchors, pinned terminal `P`, free terminals `X`, `Y`: the anchors
//! `X'`, `Y'` form an isosceles triangle with apex `P` and apex half-angle
//! `beta`. The pendant edges `XX'` and `YY'` bisect the base angles, so
//! their extensions meet at the incenter `I` of `P X' Y'`, which lies on the
//! axis. Hence `∠XIY = π/2 + beta` and `IP` bisects the reflex side of it:
//! `I` is where the line from `P` through the far arc midpoint of chord `XY`
//! meets the circle of inscribed angle `π/2 + beta`.
//!
//! One anchor, pinned pair `P`, `X`, free terminal `Y`: `YY'` bisects
//! `∠PY'X = gamma`, so `Y'` is found with the same arc construction on chord
//! `PX` with inscribed angle `gamma`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use crate::error::{Error, Result};
use crate::geom::{Point, TerminalTriangle, Vertex};

/// Budget gained per unit of anchor distance from the Steiner point while
/// three anchors grow: `3(√3 − 1)`.
pub const THREE_ANCHOR_RATE: f64 = 3.0 * (SQRT_3 - 1.0);

pub(crate) const SQRT_3: f64 = 1.732_050_807_568_877_2;

const SCAN_STEPS: usize = 512;
const MAX_BISECTIONS: usize = 200;

/// Point `Z` on the circle through `p` and `q` that sees chord `pq` at
/// inscribed angle `psi` from the side of `far`, such that `far`, `Z` and
/// the midpoint of the opposite arc are collinear. Returns `far` itself when
/// `far` already sees `pq` at angle `psi`.
pub(crate) fn arc_point(far: Point, p: Point, q: Point, psi: f64) -> Point {
    let chord = q - p;
    let mid = p.lerp(q, 0.5);
    let mut n = chord.perp() * (1.0 / chord.norm());
    if n.dot(far - mid) < 0.0 {
        n = -n;
    }
    let radius = chord.norm() / (2.0 * psi.sin());
    let center = mid + n * (radius * psi.cos());
    let arc_mid = center - n * radius;
    let d = far - arc_mid;
    let d = d * (1.0 / d.norm());
    arc_mid + d * (2.0 * radius * d.dot(n))
}

/// Finds the parameter in `[lo, hi]` at which the monotone `f` equals
/// `target`, by bisection to machine precision.
pub(crate) fn invert_monotone(
    what: &str,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    tol: f64,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    let increasing = f_hi >= f_lo;
    let (min, max) = if increasing { (f_lo, f_hi) } else { (f_hi, f_lo) };
    if !(target >= min - tol && target <= max + tol) {
        return Err(Error::RootFindingFailure(format!("{what}: target {target} not bracketed by [{min}, {max}]")));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Anchor positions for the three-anchor phase.
pub(crate) fn three_anchor_positions(t: &TerminalTriangle, center: Point, r: f64) -> [Point; 3] {
    t.vertices().map(|v| {
        let u = (v - center).unit().expect("interior Steiner point differs from terminals");
        center + u * r
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAnchorGeometry {
    pub incenter: Point,
    /// Anchors toward `pinned.others().0` and `pinned.others().1`.
    pub anchors: [Point; 2],
    /// `|PX'| = |PY'|`.
    pub leg: f64,
}

/// The two-anchor phase for one pinned terminal, over apex half-angles
/// `[beta_start, beta_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAnchorPhase {
    pub pinned: Vertex,
    pub beta_start: f64,
    pub beta_end: f64,
    /// The free terminal whose anchor reaches it at `beta_end`.
    pub merged: Vertex,
}

impl TwoAnchorPhase {
    /// Locates the end of the phase: the first apex half-angle at which an
    /// anchor reaches its terminal.
    pub fn new(t: &TerminalTriangle, pinned: Vertex, beta_start: f64) -> Result<Self> {
        let scale = t.perimeter();
        let (x, y) = pinned.others();
        let gaps = |beta: f64| {
            let g = two_anchor_geometry(t, pinned, beta);
            let gap = |v: Vertex, anchor: Point| {
                let i = g.incenter;
                t.vertex(v).dist(i) - anchor.dist(i)
            };
            (gap(x, g.anchors[0]), gap(y, g.anchors[1]))
        };
        let merged_of = |beta: f64| {
            let (gx, gy) = gaps(beta);
            if gx <= gy {
                x
            } else {
                y
            }
        };
        let min_gap = |beta: f64| {
            let (gx, gy) = gaps(beta);
            gx.min(gy)
        };

        if min_gap(beta_start) <= 1e-12 * scale {
            return Ok(TwoAnchorPhase { pinned, beta_start, beta_end: beta_start, merged: merged_of(beta_start) });
        }
        let beta_max = FRAC_PI_2 - 1e-9;
        let step = (beta_max - beta_start) / SCAN_STEPS as f64;
        let mut prev = beta_start;
        for k in 1..=SCAN_STEPS {
            let cur = beta_start + step * k as f64;
            let g = min_gap(cur);
            if !g.is_finite() {
                break;
            }
            if g <= 0.0 {
                let end = invert_monotone("two-anchor merge", prev, cur, 0.0, 0.0, min_gap)?;
                return Ok(TwoAnchorPhase { pinned, beta_start, beta_end: end, merged: merged_of(end) });
            }
            prev = cur;
        }
        Err(Error::RootFindingFailure(format!("two-anchor phase pinned at {pinned}: no anchor reaches its terminal")))
    }

    pub fn geometry(&self, t: &TerminalTriangle, beta: f64) -> TwoAnchorGeometry {
        two_anchor_geometry(t, self.pinned, beta)
    }

    pub fn length(&self, t: &TerminalTriangle, beta: f64) -> f64 {
        two_anchor_length(t, self.pinned, &self.geometry(t, beta))
    }

    pub fn leg(&self, t: &TerminalTriangle, beta: f64) -> f64 {
        self.geometry(t, beta).leg
    }

    /// Apex half-angle at which the network uses exactly `budget`.
    pub fn beta_for_length(&self, t: &TerminalTriangle, budget: f64) -> Result<f64> {
        let tol = 1e-9 * t.perimeter();
        invert_monotone("two-anchor budget", self.beta_start, self.beta_end, budget, tol, |b| self.length(t, b))
    }

    pub fn beta_for_leg(&self, t: &TerminalTriangle, leg: f64) -> Result<f64> {
        let tol = 1e-12 * t.perimeter();
        invert_monotone("two-anchor leg", self.beta_start, self.beta_end, leg, tol, |b| self.leg(t, b))
    }
}

pub(crate) fn two_anchor_geometry(t: &TerminalTriangle, pinned: Vertex, beta: f64) -> TwoAnchorGeometry {
    let (x, y) = pinned.others();
    let (p, px, py) = (t.vertex(pinned), t.vertex(x), t.vertex(y));
    let incenter = arc_point(p, px, py, FRAC_PI_2 + beta);
    let Some(axis) = (incenter - p).unit() else {
        return TwoAnchorGeometry { incenter: p, anchors: [p, p], leg: 0.0 };
    };
    // Triangle P I X': angles beta at P, 3π/4 − beta/2 at I, π/4 − beta/2 at X'.
    let leg = p.dist(incenter) * (3.0 * FRAC_PI_4 - 0.5 * beta).sin() / (FRAC_PI_4 - 0.5 * beta).sin();
    let left = p + axis.rotate(beta) * leg;
    let right = p + axis.rotate(-beta) * leg;
    let x_is_left = axis.cross(px - p) > 0.0;
    let anchors = if x_is_left { [left, right] } else { [right, left] };
    TwoAnchorGeometry { incenter, anchors, leg }
}

fn two_anchor_length(t: &TerminalTriangle, pinned: Vertex, g: &TwoAnchorGeometry) -> f64 {
    let (x, y) = pinned.others();
    2.0 * g.leg + t.vertex(x).dist(g.anchors[0]) + t.vertex(y).dist(g.anchors[1]) + g.anchors[0].dist(g.anchors[1])
}

/// The one-anchor phase: `pinned` (the first and second merged terminals)
/// joined by a side, the free terminal's anchor sweeping inscribed angles
/// from `gamma_start` down to the free terminal's own angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneAnchorPhase {
    pub pinned: (Vertex, Vertex),
    pub free: Vertex,
    pub gamma_start: f64,
    pub gamma_end: f64,
}

impl OneAnchorPhase {
    pub fn new(t: &TerminalTriangle, pinned: (Vertex, Vertex), gamma_start: f64) -> Self {
        let free = pinned.0.third(pinned.1);
        let gamma_end = t.angle(free);
        OneAnchorPhase { pinned, free, gamma_start: gamma_start.max(gamma_end), gamma_end }
    }

    pub fn is_empty(&self) -> bool {
        self.gamma_start - self.gamma_end <= 1e-12
    }

    pub fn anchor(&self, t: &TerminalTriangle, gamma: f64) -> Point {
        if gamma <= self.gamma_end {
            return t.vertex(self.free);
        }
        arc_point(t.vertex(self.free), t.vertex(self.pinned.0), t.vertex(self.pinned.1), gamma)
    }

    pub fn length(&self, t: &TerminalTriangle, gamma: f64) -> f64 {
        let z = self.anchor(t, gamma);
        let (p, x, y) = (t.vertex(self.pinned.0), t.vertex(self.pinned.1), t.vertex(self.free));
        p.dist(x) + p.dist(z) + x.dist(z) + y.dist(z)
    }

    pub fn gamma_for_length(&self, t: &TerminalTriangle, budget: f64) -> Result<f64> {
        let tol = 1e-9 * t.perimeter();
        invert_monotone("one-anchor budget", self.gamma_end, self.gamma_start, budget, tol, |g| self.length(t, g))
    }
}

/// Apex half-angle at the start of the two-anchor phase: π/6 when it takes
/// over from the equilateral triangle, `angle − π/2` when it grows from a
/// wide vertex.
pub(crate) fn beta_start(t: &TerminalTriangle, pinned: Vertex, from_wide_vertex: bool) -> f64 {
    if from_wide_vertex {
        t.angle(pinned) - FRAC_PI_2
    } else {
        FRAC_PI_6
    }
}
