//! Exact optimal networks for every budget.
//!
//! Past the Steiner tree length the optimal network passes through at most
//! four stages: an equilateral anchor triangle centred on the Steiner point
//! (interior case only), an isosceles triangle pinned at the first terminal
//! reached, a single anchor once a second terminal is reached, and finally
//! the complete triangle. [`thresholds`] locates the stage boundaries and
//! [`solve`] builds the network for a given budget.

mod phases;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
use std::fmt;

pub use phases::{OneAnchorPhase, TwoAnchorGeometry, TwoAnchorPhase, THREE_ANCHOR_RATE};

use crate::error::{Error, Result};
use crate::fermat::{steiner_info, SteinerInfo, SteinerKind};
use crate::geom::{side_bit, TerminalTriangle, Vertex};
use crate::network::{default_penalty, Network, Objective};

/// Budgets within this fraction of the perimeter of a threshold snap to it.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Not enough budget to connect all terminals; `mask` selects the
    /// triangle sides built (AB = 1, BC = 2, CA = 4).
    BelowTree {
        mask: u8,
    },
    SteinerTree,
    ThreeAnchor,
    TwoAnchor {
        pinned: Vertex,
    },
    OneAnchor {
        pinned: (Vertex, Vertex),
    },
    Complete,
}

impl Phase {
    /// Position in the evolution order. Budgets never decrease it.
    pub fn rank(&self) -> u8 {
        match self {
            Phase::BelowTree { mask: 0 } => 0,
            Phase::BelowTree { .. } => 1,
            Phase::SteinerTree => 2,
            Phase::ThreeAnchor => 3,
            Phase::TwoAnchor { .. } => 4,
            Phase::OneAnchor { .. } => 5,
            Phase::Complete => 6,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Phase::BelowTree { .. } => "below_tree",
            Phase::SteinerTree => "steiner_tree",
            Phase::ThreeAnchor => "three_anchor",
            Phase::TwoAnchor { .. } => "two_anchor",
            Phase::OneAnchor { .. } => "one_anchor",
            Phase::Complete => "complete",
        }
    }

    /// Terminals pinned by merged anchors.
    pub fn pinned(&self) -> Vec<Vertex> {
        match *self {
            Phase::TwoAnchor { pinned } => vec![pinned],
            Phase::OneAnchor { pinned: (p, q) } => vec![p, q],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::BelowTree { mask } => write!(f, "below_tree(mask={mask})"),
            Phase::TwoAnchor { pinned } => write!(f, "two_anchor({pinned})"),
            Phase::OneAnchor { pinned: (p, q) } => write!(f, "one_anchor({p}{q})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Phase-transition budgets of one terminal triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Shortest side; below it nothing can be built.
    pub l_min_edge: f64,
    pub shortest_side: (Vertex, Vertex),
    pub l_st: f64,
    /// End of the three-anchor phase; `None` when a vertex angle is ≥ 2π/3.
    pub l1: Option<f64>,
    /// End of the two-anchor phase.
    pub l2: f64,
    /// Perimeter.
    pub l3: f64,
    pub steiner: SteinerInfo,
    /// Terminal reached first (the wide vertex in the wide-angle case).
    pub first_pinned: Vertex,
    /// Terminal reached at the end of the two-anchor phase.
    pub second_pinned: Vertex,
    pub two_anchor: TwoAnchorPhase,
    pub one_anchor: OneAnchorPhase,
}

impl Thresholds {
    pub fn is_interior(&self) -> bool {
        self.l1.is_some()
    }

    /// Budgets at which the network changes structure, from `l_st` upward.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![self.l_st];
        out.extend(self.l1);
        out.push(self.l2);
        out.push(self.l3);
        out
    }

    /// All thresholds including the shortest side, ascending.
    pub fn all(&self) -> Vec<f64> {
        let mut out = vec![self.l_min_edge];
        out.extend(self.breakpoints());
        out
    }
}

pub fn thresholds(t: &TerminalTriangle) -> Result<Thresholds> {
    let (l_min_edge, shortest_side) = t.shortest_side();
    let steiner = steiner_info(t);
    let (first_pinned, l1, from_wide) = match steiner.kind {
        SteinerKind::Interior => {
            // The shortest spoke belongs to the largest angle; ties keep the
            // first vertex.
            let first =
                Vertex::ALL
                    .into_iter()
                    .fold(Vertex::A, |best, v| if steiner.spoke(v) < steiner.spoke(best) { v } else { best });
            (first, Some(steiner.l_st + THREE_ANCHOR_RATE * steiner.min_spoke()), false)
        }
        SteinerKind::AtVertex(w) => (w, None, true),
    };
    let two_anchor = TwoAnchorPhase::new(t, first_pinned, phases::beta_start(t, first_pinned, from_wide))?;
    let l2 = two_anchor.length(t, two_anchor.beta_end);
    let second_pinned = two_anchor.merged;
    let one_anchor = OneAnchorPhase::new(t, (first_pinned, second_pinned), FRAC_PI_2 - two_anchor.beta_end);
    let l3 = t.perimeter();
    Ok(Thresholds {
        l_min_edge,
        shortest_side,
        l_st: steiner.l_st,
        l1,
        l2: l2.min(l3),
        l3,
        steiner,
        first_pinned,
        second_pinned,
        two_anchor,
        one_anchor,
    })
}

/// Equilateral anchor triangle at distance `r` from the Steiner point.
/// Anchors that coincide with the Steiner point or a terminal are merged.
pub fn phase1_config(t: &TerminalTriangle, r: f64) -> Result<Network> {
    let s = steiner_info(t);
    if s.kind != SteinerKind::Interior {
        return Err(Error::Precondition("three anchors need an interior Steiner point".into()));
    }
    let scale = t.perimeter();
    let max = s.min_spoke();
    if !(r >= 0.0 && r <= max + 1e-12 * scale) {
        return Err(Error::OutOfRange { what: "r", value: r, lo: 0.0, hi: max });
    }
    let anchors = phases::three_anchor_positions(t, s.point, r.min(max));
    let net = Network::new(*t, &anchors, &[(0, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)])?;
    Ok(net.collapse(1e-12 * scale))
}

/// Isosceles two-anchor network pinned at `pinned` with legs of length `leg`.
pub fn phase2_config(t: &TerminalTriangle, pinned: Vertex, leg: f64) -> Result<Network> {
    let phase = two_anchor_phase_for(t, pinned)?;
    let (lo, hi) = (phase.leg(t, phase.beta_start), phase.leg(t, phase.beta_end));
    let slack = 1e-12 * t.perimeter();
    if !(leg >= lo - slack && leg <= hi + slack) {
        return Err(Error::OutOfRange { what: "leg", value: leg, lo, hi });
    }
    let beta = phase.beta_for_leg(t, leg)?;
    two_anchor_network(t, &phase, beta)
}

fn two_anchor_phase_for(t: &TerminalTriangle, pinned: Vertex) -> Result<TwoAnchorPhase> {
    let from_wide = match steiner_info(t).kind {
        SteinerKind::Interior => false,
        SteinerKind::AtVertex(w) if w == pinned => true,
        SteinerKind::AtVertex(w) => {
            return Err(Error::Precondition(format!(
                "two anchors in a wide-angle triangle must be pinned at {w}, not {pinned}"
            )))
        }
    };
    TwoAnchorPhase::new(t, pinned, phases::beta_start(t, pinned, from_wide))
}

fn two_anchor_network(t: &TerminalTriangle, phase: &TwoAnchorPhase, beta: f64) -> Result<Network> {
    let g = phase.geometry(t, beta);
    let (x, y) = phase.pinned.others();
    let p = phase.pinned.index();
    let net = Network::new(*t, &g.anchors, &[(p, 3), (p, 4), (x.index(), 3), (y.index(), 4), (3, 4)])?;
    Ok(net.collapse(1e-12 * t.perimeter()))
}

/// Single-anchor network with the side between `pinned_pair` built and total
/// length `budget`.
pub fn phase3_config(t: &TerminalTriangle, pinned_pair: (Vertex, Vertex), budget: f64) -> Result<Network> {
    let th = thresholds(t)?;
    let expected = (th.first_pinned, th.second_pinned);
    if pinned_pair != expected && (pinned_pair.1, pinned_pair.0) != expected {
        return Err(Error::Precondition(format!(
            "one-anchor phase pins {}{}, not {}{}",
            expected.0, expected.1, pinned_pair.0, pinned_pair.1
        )));
    }
    let slack = 1e-12 * th.l3;
    if !(budget >= th.l2 - slack && budget <= th.l3 + slack) {
        return Err(Error::OutOfRange { what: "budget", value: budget, lo: th.l2, hi: th.l3 });
    }
    let gamma = th.one_anchor.gamma_for_length(t, budget.clamp(th.l2, th.l3))?;
    one_anchor_network(t, &th.one_anchor, gamma)
}

fn one_anchor_network(t: &TerminalTriangle, phase: &OneAnchorPhase, gamma: f64) -> Result<Network> {
    let z = phase.anchor(t, gamma);
    let (p, x) = (phase.pinned.0.index(), phase.pinned.1.index());
    let net = Network::new(*t, &[z], &[(p, x), (p, 3), (x, 3), (phase.free.index(), 3)])?;
    Ok(net.collapse(1e-12 * t.perimeter()))
}

/// `dJ/dL = (2cos α − 2) / (2cos α − 1)` for an anchor whose two cycle edges
/// meet at angle `2α`.
pub fn slope_at(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= FRAC_PI_4) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha, lo: 0.0, hi: FRAC_PI_4 });
    }
    let c = alpha.cos();
    Ok((2.0 * c - 2.0) / (2.0 * c - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub budget: f64,
    pub network: Network,
    pub phase: Phase,
    pub l_used: f64,
    pub objective: Objective,
    /// `dJ/dL`, right-sided at thresholds.
    pub slope: f64,
}

/// Optimal network for budget `budget`, evaluated with the default
/// disconnection penalty.
pub fn solve(t: &TerminalTriangle, budget: f64) -> Result<SolveResult> {
    solve_with_penalty(t, budget, default_penalty(t))
}

pub fn solve_with_penalty(t: &TerminalTriangle, budget: f64, penalty: f64) -> Result<SolveResult> {
    let th = thresholds(t)?;
    solve_with(t, &th, budget, penalty)
}

/// [`solve`] against precomputed thresholds.
pub fn solve_with(t: &TerminalTriangle, th: &Thresholds, budget: f64, penalty: f64) -> Result<SolveResult> {
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(Error::OutOfRange { what: "budget", value: budget, lo: 0.0, hi: f64::INFINITY });
    }
    let snap = SNAP * th.l3;
    let (network, phase, alpha) = if budget < th.l_min_edge - snap {
        (Network::empty(*t), Phase::BelowTree { mask: 0 }, None)
    } else if budget < th.l_st - snap {
        let (u, v) = th.shortest_side;
        let mask = side_bit(u, v);
        (Network::sides(*t, mask), Phase::BelowTree { mask }, None)
    } else if budget <= th.l_st + snap {
        (Network::steiner_tree(*t), Phase::SteinerTree, Some(initial_alpha(t, th)))
    } else if th.l1.is_some_and(|l1| budget < l1) {
        let r = (budget - th.l_st) / THREE_ANCHOR_RATE;
        (phase1_config(t, r)?, Phase::ThreeAnchor, Some(FRAC_PI_6))
    } else if budget < th.l2 {
        let beta = th.two_anchor.beta_for_length(t, budget)?;
        let net = two_anchor_network(t, &th.two_anchor, beta)?;
        (net, Phase::TwoAnchor { pinned: th.first_pinned }, Some(0.5 * (FRAC_PI_2 - beta)))
    } else if budget < th.l3 - snap && !th.one_anchor.is_empty() {
        let gamma = th.one_anchor.gamma_for_length(t, budget)?;
        let net = one_anchor_network(t, &th.one_anchor, gamma)?;
        (net, Phase::OneAnchor { pinned: th.one_anchor.pinned }, Some(0.5 * gamma))
    } else {
        (Network::complete(*t), Phase::Complete, None)
    };
    let slope = match alpha {
        Some(a) => slope_at(a)?,
        None => 0.0,
    };
    let l_used = network.total_length();
    if l_used > budget + 1e-9 * th.l3.max(1.0) {
        return Err(Error::RootFindingFailure(format!("{phase} network uses {l_used}, over budget {budget}")));
    }
    let objective = network.evaluate(penalty);
    Ok(SolveResult { budget, network, phase, l_used, objective, slope })
}

/// Half of the anchor angle just past the Steiner tree.
fn initial_alpha(t: &TerminalTriangle, th: &Thresholds) -> f64 {
    match th.steiner.kind {
        SteinerKind::Interior => FRAC_PI_6,
        SteinerKind::AtVertex(w) => 0.5 * (std::f64::consts::PI - t.angle(w)),
    }
}
