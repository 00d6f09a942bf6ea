//! Networks over the three terminals: nodes, straight edges, the pairwise
//! shortest-path objective and the structural checks an optimal network must
//! pass.

use std::f64::consts::FRAC_PI_3;
use std::fmt;

use crate::error::{Error, Result};
use crate::fermat::{steiner_info, SteinerKind};
use crate::geom::{angle_at, bisector_residual, Point, TerminalTriangle, Vertex, SIDES};

pub const MAX_ANCHORS: usize = 3;
pub const MAX_NODES: usize = 3 + MAX_ANCHORS;

/// Minimum barycentric coordinate for an anchor to count as interior.
pub const INTERIOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Terminal(Vertex),
    Anchor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub pos: Point,
}

/// Terminals (ids 0, 1, 2 for A, B, C), up to three anchors, and straight
/// edges between them. Edge lengths are always derived from node positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    triangle: TerminalTriangle,
    nodes: Vec<Node>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub d_ab: f64,
    pub d_bc: f64,
    pub d_ac: f64,
    pub j: f64,
}

impl Objective {
    /// Combines raw distances (`INFINITY` when disconnected) into an
    /// objective, charging `penalty` for each disconnected pair.
    pub fn from_distances(d: [f64; 3], penalty: f64) -> Self {
        let [d_ab, d_bc, d_ac] = d.map(|x| if x.is_finite() { x } else { penalty });
        Objective { d_ab, d_bc, d_ac, j: d_ab + d_bc + d_ac }
    }
}

/// The disconnection charge used when none is given: `1e9 · perimeter`.
pub fn default_penalty(t: &TerminalTriangle) -> f64 {
    1e9 * t.perimeter()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Degree { node: usize, degree: usize },
    NotInterior { node: usize, min_barycentric: f64 },
    Bisector { node: usize, residual: f64 },
    AnchorAngle { node: usize, angle: f64 },
    Degenerate { node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree { node, degree } => write!(f, "anchor {node} has degree {degree}, expected 3"),
            Violation::NotInterior { node, min_barycentric } => {
                write!(f, "anchor {node} not strictly inside the triangle (barycentric {min_barycentric:e})")
            }
            Violation::Bisector { node, residual } => {
                write!(f, "anchor {node} violates the bisector condition (residual {residual:e})")
            }
            Violation::AnchorAngle { node, angle } => {
                write!(f, "anchor {node} has internal angle {angle} > pi/3")
            }
            Violation::Degenerate { node } => write!(f, "anchor {node} has a zero-length edge"),
        }
    }
}

fn normalize(e: (usize, usize)) -> (usize, usize) {
    (e.0.min(e.1), e.0.max(e.1))
}

impl Network {
    /// Builds a network from anchor positions and edges over node ids
    /// (0..3 terminals, then anchors in order).
    pub fn new(triangle: TerminalTriangle, anchors: &[Point], edges: &[(usize, usize)]) -> Result<Self> {
        if anchors.len() > MAX_ANCHORS {
            return Err(Error::InvalidNetwork(format!("{} anchors, at most {MAX_ANCHORS}", anchors.len())));
        }
        if let Some(p) = anchors.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidNetwork(format!("non-finite anchor {p}")));
        }
        let mut nodes: Vec<Node> = Vertex::ALL
            .iter()
            .map(|&v| Node { id: v.index(), kind: NodeKind::Terminal(v), pos: triangle.vertex(v) })
            .collect();
        nodes.extend(anchors.iter().enumerate().map(|(i, &pos)| Node { id: 3 + i, kind: NodeKind::Anchor, pos }));
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &e in edges {
            let e = normalize(e);
            if e.1 >= nodes.len() {
                return Err(Error::InvalidNetwork(format!("edge {e:?} refers to a missing node")));
            }
            if e.0 == e.1 {
                return Err(Error::InvalidNetwork(format!("self-loop at node {}", e.0)));
            }
            if out.contains(&e) {
                return Err(Error::InvalidNetwork(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        out.sort_unstable();
        Ok(Network { triangle, nodes, edges: out })
    }

    pub fn empty(triangle: TerminalTriangle) -> Self {
        Self::sides(triangle, 0)
    }

    /// Only triangle sides, selected by mask bits AB = 1, BC = 2, CA = 4.
    pub fn sides(triangle: TerminalTriangle, mask: u8) -> Self {
        let edges: Vec<_> = SIDES
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(u, v))| (u.index(), v.index()))
            .collect();
        Self::new(triangle, &[], &edges).expect("sides are valid edges")
    }

    pub fn complete(triangle: TerminalTriangle) -> Self {
        Self::sides(triangle, 0b111)
    }

    /// Three spokes to an interior Steiner point, or the two sides at the
    /// wide vertex.
    pub fn steiner_tree(triangle: TerminalTriangle) -> Self {
        let s = steiner_info(&triangle);
        match s.kind {
            SteinerKind::Interior => {
                Self::new(triangle, &[s.point], &[(0, 3), (1, 3), (2, 3)]).expect("star is a valid network")
            }
            SteinerKind::AtVertex(w) => {
                let (p, q) = w.others();
                Self::new(triangle, &[], &[(w.index(), p.index()), (w.index(), q.index())])
                    .expect("two sides are a valid network")
            }
        }
    }

    pub fn triangle(&self) -> &TerminalTriangle {
        &self.triangle
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn anchors(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Anchor)
    }

    pub fn anchor_count(&self) -> usize {
        self.nodes.len() - 3
    }

    pub fn positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|n| n.pos).collect()
    }

    pub fn pos(&self, id: usize) -> Point {
        self.nodes[id].pos
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&normalize((u, v)))
    }

    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(u, v)| {
            if u == id {
                Some(v)
            } else if v == id {
                Some(u)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, id: usize) -> usize {
        self.neighbors(id).count()
    }

    pub fn edge_length(&self, e: (usize, usize)) -> f64 {
        self.pos(e.0).dist(self.pos(e.1))
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|&e| self.edge_length(e)).sum()
    }

    pub fn evaluate(&self, penalty: f64) -> Objective {
        let pos = self.positions();
        Objective::from_distances(terminal_distances(&pos, &self.edges), penalty)
    }

    /// Checks anchor degree, strict interiority, the bisector condition and
    /// the π/3 bound on anchor angles inside the network's triangular cycle.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for anchor in self.anchors() {
            let id = anchor.id;
            let degree = self.degree(id);
            if degree != 3 {
                out.push(Violation::Degree { node: id, degree });
                continue;
            }
            let min_bc = self.triangle.barycentric(anchor.pos).into_iter().fold(f64::INFINITY, f64::min);
            if min_bc <= INTERIOR_TOL {
                out.push(Violation::NotInterior { node: id, min_barycentric: min_bc });
            }
            if let Err(v) = self.check_anchor_angles(id, tol) {
                out.push(v);
            }
        }
        out
    }

    fn check_anchor_angles(&self, id: usize, tol: f64) -> std::result::Result<(), Violation> {
        let here = self.pos(id);
        let nbrs: Vec<usize> = self.neighbors(id).collect();
        let (bridges, cycle): (Vec<usize>, Vec<usize>) = nbrs.iter().partition(|&&n| self.is_bridge((id, n)));
        let degenerate = |_| Violation::Degenerate { node: id };
        match (bridges.as_slice(), cycle.as_slice()) {
            // Tree junction: every edge bisects the other two (all 2π/3).
            ([a, b, c], []) => {
                let (pa, pb, pc) = (self.pos(*a), self.pos(*b), self.pos(*c));
                let worst = [
                    bisector_residual(pa, here, pb, pc),
                    bisector_residual(pb, here, pc, pa),
                    bisector_residual(pc, here, pa, pb),
                ]
                .into_iter()
                .map(|r| r.map(f64::abs))
                .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
                .map_err(degenerate)?;
                if worst > tol {
                    return Err(Violation::Bisector { node: id, residual: worst });
                }
            }
            // Anchor on the triangular cycle with one pendant edge.
            ([pendant], [c1, c2]) => {
                let (pp, p1, p2) = (self.pos(*pendant), self.pos(*c1), self.pos(*c2));
                let r = bisector_residual(pp, here, p1, p2).map_err(degenerate)?;
                if r.abs() > tol {
                    return Err(Violation::Bisector { node: id, residual: r });
                }
                let angle = angle_at(here, p1, p2).map_err(degenerate)?;
                if angle > FRAC_PI_3 + tol {
                    return Err(Violation::AnchorAngle { node: id, angle });
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether removing edge `e` disconnects its endpoints.
    pub fn is_bridge(&self, e: (usize, usize)) -> bool {
        let e = normalize(e);
        let n = self.nodes.len();
        let mut seen = [false; MAX_NODES];
        let mut stack = vec![e.0];
        seen[e.0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                if (a, b) == e {
                    continue;
                }
                let w = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if w < n && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        !seen[e.1]
    }

    /// Merges every anchor lying within `tol` of a terminal or of an earlier
    /// anchor into that node, then drops self-loops and duplicate edges.
    pub fn collapse(&self, tol: f64) -> Network {
        let mut target: Vec<usize> = (0..self.nodes.len()).collect();
        let mut kept: Vec<Point> = Vec::new();
        for anchor in self.anchors() {
            let id = anchor.id;
            if let Some(v) = Vertex::ALL.iter().find(|v| self.triangle.vertex(**v).dist(anchor.pos) <= tol) {
                target[id] = v.index();
                continue;
            }
            if let Some(k) = kept.iter().position(|p| p.dist(anchor.pos) <= tol) {
                target[id] = 3 + k;
                continue;
            }
            target[id] = 3 + kept.len();
            kept.push(anchor.pos);
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &(u, v) in &self.edges {
            let e = normalize((target[u], target[v]));
            if e.0 != e.1 && !edges.contains(&e) {
                edges.push(e);
            }
        }
        Network::new(self.triangle, &kept, &edges).expect("collapse preserves validity")
    }
}

/// Shortest terminal-to-terminal distances `[d_AB, d_BC, d_AC]` over the
/// straight-edge graph, `INFINITY` when disconnected. Label-setting search
/// from each terminal; nodes 0, 1, 2 must be A, B, C.
pub fn terminal_distances(pos: &[Point], edges: &[(usize, usize)]) -> [f64; 3] {
    let n = pos.len();
    debug_assert!(n <= MAX_NODES);
    let mut w = [[f64::INFINITY; MAX_NODES]; MAX_NODES];
    for &(u, v) in edges {
        let d = pos[u].dist(pos[v]);
        if d < w[u][v] {
            w[u][v] = d;
            w[v][u] = d;
        }
    }
    let mut from = [[f64::INFINITY; MAX_NODES]; 3];
    for (s, dist) in from.iter_mut().enumerate() {
        let mut done = [false; MAX_NODES];
        dist[s] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for i in 0..n {
                if !done[i] && dist[i] < best {
                    best = dist[i];
                    u = i;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for v in 0..n {
                let cand = best + w[u][v];
                if cand < dist[v] {
                    dist[v] = cand;
                }
            }
        }
    }
    // Average the two directions so d_xy is symmetric to the last bit.
    let sym = |a: usize, b: usize| 0.5 * (from[a][b] + from[b][a]);
    [sym(0, 1), sym(1, 2), sym(0, 2)]
}
