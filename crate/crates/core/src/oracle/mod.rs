//! Numerical check on the analytic solver that assumes nothing about optimal structure.
//!
//! For every candidate topology (which edges exist between terminals and up
//! to three degree-3 anchors) the anchor coordinates are optimized directly:
//! shortest-path objective plus an exterior quadratic penalty on budget
//! overrun, minimized by Nelder–Mead from deterministic multi-start points.
//! Nothing here knows about Steiner points, bisectors or phases.

mod simplex;

use std::fmt;

use rayon::prelude::*;

pub use simplex::{Minimum, NelderMead};

use crate::geom::{side_bit, Point, TerminalTriangle, Vertex};
use crate::network::{default_penalty, terminal_distances, Network, MAX_NODES};

/// Restarts per topology with free anchors.
pub const RESTARTS: usize = 16;
/// Penalty coefficients, one polishing round each.
pub const PENALTY_SCHEDULE: [f64; 3] = [1e3, 1e5, 1e7];
/// Anchors this close to a terminal or each other are merged afterwards.
pub const COLLAPSE_TOL: f64 = 1e-6;
/// Allowed budget overrun of a returned network.
pub const BUDGET_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopologyId {
    /// Triangle sides only, mask AB = 1, BC = 2, CA = 4 (0 = nothing built).
    EdgeSubset(u8),
    /// One anchor joined to all three terminals.
    Star,
    /// One anchor joined to all three terminals plus the side between the pair.
    OneAnchor(Vertex, Vertex),
    /// Two anchors sharing a terminal, each joined to one other terminal and
    /// to each other.
    TwoAnchor(Vertex),
    /// Three anchors forming a triangle, each joined to one terminal.
    ThreeAnchorK3,
}

impl TopologyId {
    /// Every topology, in tie-break order.
    pub fn all() -> Vec<TopologyId> {
        let mut out: Vec<TopologyId> = (0..8).map(TopologyId::EdgeSubset).collect();
        out.push(TopologyId::Star);
        out.extend(
            [(Vertex::A, Vertex::B), (Vertex::A, Vertex::C), (Vertex::B, Vertex::C)]
                .map(|(u, v)| TopologyId::OneAnchor(u, v)),
        );
        out.extend(Vertex::ALL.map(TopologyId::TwoAnchor));
        out.push(TopologyId::ThreeAnchorK3);
        out
    }

    pub fn anchor_count(&self) -> usize {
        match self {
            TopologyId::EdgeSubset(_) => 0,
            TopologyId::Star | TopologyId::OneAnchor(..) => 1,
            TopologyId::TwoAnchor(_) => 2,
            TopologyId::ThreeAnchorK3 => 3,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            TopologyId::EdgeSubset(mask) => Network::sides(dummy_triangle(), mask).edges().to_vec(),
            TopologyId::Star => vec![(0, 3), (1, 3), (2, 3)],
            TopologyId::OneAnchor(u, v) => vec![(u.index(), v.index()), (0, 3), (1, 3), (2, 3)],
            TopologyId::TwoAnchor(p) => {
                let (x, y) = p.others();
                vec![(p.index(), 3), (p.index(), 4), (x.index(), 3), (y.index(), 4), (3, 4)]
            }
            TopologyId::ThreeAnchorK3 => vec![(0, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        }
    }

    /// Network with anchors at the flat coordinate vector `x`.
    pub fn network(&self, t: &TerminalTriangle, x: &[f64]) -> Network {
        let anchors: Vec<Point> = x.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        Network::new(*t, &anchors, &self.edges()).expect("topology edges are valid")
    }
}

impl fmt::Display for TopologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyId::EdgeSubset(mask) => write!(f, "edges({mask})"),
            TopologyId::Star => f.write_str("star"),
            TopologyId::OneAnchor(u, v) => write!(f, "one_anchor({u}{v})"),
            TopologyId::TwoAnchor(p) => write!(f, "two_anchor({p})"),
            TopologyId::ThreeAnchorK3 => f.write_str("three_anchor"),
        }
    }
}

fn dummy_triangle() -> TerminalTriangle {
    TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)).expect("valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: Network,
    pub j: f64,
    pub topology: TopologyId,
    pub restarts_used: usize,
}

/// Radical-inverse (van der Corput) of `i` in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Halton point number `index` mapped uniformly into the triangle, one
/// point per anchor.
fn start_point(t: &TerminalTriangle, anchors: usize, index: u64) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * anchors);
    for k in 0..anchors {
        let u = radical_inverse(index, PRIMES[2 * k]);
        let v = radical_inverse(index, PRIMES[2 * k + 1]);
        let s = u.sqrt();
        let p = t.a * (1.0 - s) + t.b * (s * (1.0 - v)) + t.c * (s * v);
        x.push(p.x);
        x.push(p.y);
    }
    x
}

struct Problem<'a> {
    t: &'a TerminalTriangle,
    edges: Vec<(usize, usize)>,
    budget: f64,
    penalty: f64,
}

impl Problem<'_> {
    fn positions(&self, x: &[f64], buf: &mut [Point; MAX_NODES]) -> usize {
        buf[..3].copy_from_slice(&self.t.vertices());
        for (k, c) in x.chunks_exact(2).enumerate() {
            buf[3 + k] = Point::new(c[0], c[1]);
        }
        3 + x.len() / 2
    }

    fn length_and_j(&self, x: &[f64]) -> (f64, f64) {
        let mut buf = [Point::default(); MAX_NODES];
        let n = self.positions(x, &mut buf);
        let pos = &buf[..n];
        let len: f64 = self.edges.iter().map(|&(u, v)| pos[u].dist(pos[v])).sum();
        let d = terminal_distances(pos, &self.edges);
        let j: f64 = d.iter().map(|&d| if d.is_finite() { d } else { self.penalty }).sum();
        (len, j)
    }

    fn penalized(&self, x: &[f64], mu: f64) -> f64 {
        let (len, j) = self.length_and_j(x);
        let over = (len - self.budget).max(0.0);
        j + mu * over * over
    }
}

struct Candidate {
    network: Network,
    j: f64,
}

/// Keeps the collapsed network unless collapsing breaks the budget or
/// worsens the objective.
fn finish(t: &TerminalTriangle, raw: Network, budget: f64, penalty: f64) -> Option<Candidate> {
    let limit = budget + BUDGET_SLACK;
    let raw_j = raw.evaluate(penalty).j;
    let collapsed = raw.collapse(COLLAPSE_TOL * t.perimeter().max(1.0));
    let col_j = collapsed.evaluate(penalty).j;
    if collapsed.total_length() <= limit && col_j <= raw_j + 1e-9 {
        return Some(Candidate { network: collapsed, j: col_j });
    }
    (raw.total_length() <= limit).then_some(Candidate { network: raw, j: raw_j })
}

fn run_restart(problem: &Problem<'_>, topo: TopologyId, start: Vec<f64>) -> Vec<f64> {
    let scale = problem.t.perimeter();
    let nm = NelderMead { max_evals: 2000 * start.len().max(1), f_tol: 1e-14, x_tol: 1e-10 * scale };
    let mut x = start;
    let mut step = 0.05 * scale;
    for mu in PENALTY_SCHEDULE {
        let f = |v: &[f64]| problem.penalized(v, mu);
        let mut best = f(&x);
        // Re-polish from the incumbent until a fresh simplex stops helping.
        for _ in 0..3 {
            let m = nm.minimize(f, &x, step);
            let improved = m.fx < best - 1e-15 * best.abs().max(1.0);
            if m.fx <= best {
                x = m.x;
                best = m.fx;
            }
            if !improved {
                break;
            }
        }
        step *= 0.1;
    }
    debug_assert_eq!(x.len(), 2 * topo.anchor_count());
    x
}

/// Best network of one topology under budget `budget`.
pub fn optimize_topology(t: &TerminalTriangle, topo: TopologyId, budget: f64, seed: u64) -> Option<OracleResult> {
    optimize_topology_with(t, topo, budget, seed, default_penalty(t))
}

pub fn optimize_topology_with(
    t: &TerminalTriangle,
    topo: TopologyId,
    budget: f64,
    seed: u64,
    penalty: f64,
) -> Option<OracleResult> {
    let problem = Problem { t, edges: topo.edges(), budget, penalty };
    let anchors = topo.anchor_count();
    if anchors == 0 {
        let c = finish(t, topo.network(t, &[]), budget, penalty)?;
        return Some(OracleResult { best: c.network, j: c.j, topology: topo, restarts_used: 1 });
    }
    let starts: Vec<Vec<f64>> =
        (0..RESTARTS as u64).map(|k| start_point(t, anchors, 1 + seed * RESTARTS as u64 + k)).collect();
    let finished: Vec<Option<Candidate>> = starts
        .into_par_iter()
        .map(|s| {
            let x = run_restart(&problem, topo, s);
            finish(t, topo.network(t, &x), budget, penalty)
        })
        .collect();
    let best = finished.into_iter().flatten().fold(None, |acc: Option<Candidate>, c| match acc {
        Some(a) if a.j <= c.j => Some(a),
        _ => Some(c),
    })?;
    Some(OracleResult { best: best.network, j: best.j, topology: topo, restarts_used: RESTARTS })
}

/// Best network over all topologies. Ties go to the earlier topology in
/// [`TopologyId::all`] order.
pub fn solve(t: &TerminalTriangle, budget: f64, seed: u64) -> OracleResult {
    solve_with_penalty(t, budget, seed, default_penalty(t))
}

pub fn solve_with_penalty(t: &TerminalTriangle, budget: f64, seed: u64, penalty: f64) -> OracleResult {
    let results: Vec<Option<OracleResult>> =
        TopologyId::all().into_par_iter().map(|topo| optimize_topology_with(t, topo, budget, seed, penalty)).collect();
    results
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<OracleResult>, r| match acc {
            Some(a) if a.j <= r.j => Some(a),
            _ => Some(r),
        })
        .expect("the empty network is always feasible")
}

/// Edge-subset topology with just the side `{u, v}`.
pub fn single_side(u: Vertex, v: Vertex) -> TopologyId {
    TopologyId::EdgeSubset(side_bit(u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilateral() -> TerminalTriangle {
        TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 3f64.sqrt() / 2.0)).unwrap()
    }

    #[test]
    fn census_is_complete_and_ordered() {
        let all = TopologyId::all();
        assert_eq!(all.len(), 8 + 1 + 3 + 3 + 1);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for topo in &all {
            let net = topo.network(&equilateral(), &vec![0.3; 2 * topo.anchor_count()]);
            for a in net.anchors() {
                assert_eq!(net.degree(a.id), 3, "{topo}");
            }
        }
    }

    #[test]
    fn fixed_topology_is_exact() {
        let t = equilateral();
        let r = optimize_topology(&t, TopologyId::EdgeSubset(7), 3.5, 0).unwrap();
        assert_eq!(r.j, 3.0);
        assert!(optimize_topology(&t, TopologyId::EdgeSubset(7), 2.5, 0).is_none());
    }

    #[test]
    fn three_anchor_equilateral() {
        let t = equilateral();
        let r = optimize_topology(&t, TopologyId::ThreeAnchorK3, 2.0, 0).unwrap();
        assert!((r.j - 3.3660).abs() < 1e-4, "{}", r.j);
        assert!(r.best.total_length() <= 2.0 + BUDGET_SLACK);
    }

    #[test]
    fn halton_starts_are_interior() {
        let t = equilateral();
        for i in 1..200 {
            let x = start_point(&t, 3, i);
            for c in x.chunks_exact(2) {
                let bc = t.barycentric(Point::new(c[0], c[1]));
                assert!(bc.iter().all(|w| *w > 0.0), "{bc:?}");
            }
        }
    }
}
