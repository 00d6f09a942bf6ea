//! Budget sweeps: the J(L) curve, its breakpoints and network snapshots.

use rayon::prelude::*;

use crate::analytic::{self, Phase, Thresholds};
use crate::error::{Error, Result};
use crate::geom::TerminalTriangle;
use crate::network::{default_penalty, Network};

/// Grid budgets closer than this fraction of the perimeter to a threshold
/// are replaced by the threshold itself.
const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    pub l: f64,
    pub j: f64,
    pub phase: Phase,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub thresholds: Thresholds,
    /// Sorted by budget.
    pub samples: Vec<SweepSample>,
    /// Networks at the sweep endpoints and at every threshold inside the range.
    pub snapshots: Vec<(f64, Network)>,
}

impl EvolutionTrace {
    /// Distinct phases in order of appearance.
    pub fn phase_sequence(&self) -> Vec<Phase> {
        let mut out: Vec<Phase> = Vec::new();
        for s in &self.samples {
            if out.last() != Some(&s.phase) {
                out.push(s.phase);
            }
        }
        out
    }
}

pub fn breakpoints(t: &TerminalTriangle) -> Result<Thresholds> {
    analytic::thresholds(t)
}

/// Solves `n` evenly spaced budgets on `[l_from, l_to]` plus every threshold
/// in that range.
pub fn sweep(t: &TerminalTriangle, l_from: f64, l_to: f64, n: usize) -> Result<EvolutionTrace> {
    sweep_with_penalty(t, l_from, l_to, n, default_penalty(t))
}

/// [`sweep`] charging `penalty` per disconnected terminal pair.
pub fn sweep_with_penalty(
    t: &TerminalTriangle,
    l_from: f64,
    l_to: f64,
    n: usize,
    penalty: f64,
) -> Result<EvolutionTrace> {
    if !(l_from.is_finite() && l_to.is_finite() && l_from < l_to) {
        return Err(Error::Precondition(format!("sweep range [{l_from}, {l_to}] is empty")));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("sweep needs at least 2 samples, got {n}")));
    }
    let th = breakpoints(t)?;
    let budgets = sample_budgets(&th, l_from, l_to, n);

    let solved: Vec<_> = budgets
        .par_iter()
        .map(|&l| {
            analytic::solve_with(t, &th, l, penalty).map_err(|e| Error::AtBudget { budget: l, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;

    let tol = MERGE_TOL * th.l3;
    let mut snapshots = Vec::new();
    for r in &solved {
        let at_threshold = th.all().iter().any(|&x| (x - r.budget).abs() <= tol);
        if at_threshold || r.budget == l_from || r.budget == l_to {
            snapshots.push((r.budget, r.network.clone()));
        }
    }
    let samples =
        solved.iter().map(|r| SweepSample { l: r.budget, j: r.objective.j, phase: r.phase, slope: r.slope }).collect();
    Ok(EvolutionTrace { thresholds: th, samples, snapshots })
}

fn sample_budgets(th: &Thresholds, l_from: f64, l_to: f64, n: usize) -> Vec<f64> {
    let step = (l_to - l_from) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| l_from + step * i as f64).collect();
    out[n - 1] = l_to;
    let tol = MERGE_TOL * th.l3;
    for x in th.all() {
        if x < l_from - tol || x > l_to + tol {
            continue;
        }
        let x = x.clamp(l_from, l_to);
        match out.iter_mut().find(|l| (**l - x).abs() <= tol) {
            Some(l) => *l = x,
            None => out.push(x),
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, Vertex};

    fn tri(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> TerminalTriangle {
        TerminalTriangle::new(Point::new(a.0, a.1), Point::new(b.0, b.1), Point::new(c.0, c.1)).unwrap()
    }

    #[test]
    fn equilateral_sweep() {
        let t = tri((0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0));
        let trace = sweep(&t, 3f64.sqrt(), 3.0, 101).unwrap();
        assert!(trace.samples.len() >= 101);
        let first = trace.samples.first().unwrap();
        let last = trace.samples.last().unwrap();
        assert_eq!(first.phase, Phase::SteinerTree);
        assert!((first.j - 2.0 * 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(last.phase, Phase::Complete);
        assert!((last.j - 3.0).abs() < 1e-9);
        for s in &trace.samples[1..trace.samples.len() - 1] {
            assert_eq!(s.phase, Phase::ThreeAnchor, "at {}", s.l);
        }
    }

    #[test]
    fn generic_sweep_visits_every_phase_once() {
        let t = tri((0.0, 0.0), (4.0, 0.0), (1.0, 3.0));
        let th = breakpoints(&t).unwrap();
        let trace = sweep(&t, th.l_st, th.l3, 400).unwrap();
        let tags: Vec<_> = trace.phase_sequence().iter().map(|p| p.tag()).collect();
        assert_eq!(tags, ["steiner_tree", "three_anchor", "two_anchor", "one_anchor", "complete"]);
        assert!(trace.samples.windows(2).all(|w| w[0].l < w[1].l && w[1].j <= w[0].j + 1e-12));
        for x in th.breakpoints() {
            assert!(trace.samples.iter().any(|s| s.l == x));
            assert!(trace.snapshots.iter().any(|(l, _)| *l == x));
        }
    }

    #[test]
    fn wide_sweep_order() {
        let t = tri((0.0, 0.0), (1.0, 0.0), (-1.0, 0.2));
        let th = breakpoints(&t).unwrap();
        let trace = sweep(&t, 0.5 * th.l_min_edge, th.l3 + 0.1, 300).unwrap();
        let tags: Vec<_> = trace.phase_sequence().iter().map(|p| p.tag()).collect();
        assert_eq!(tags, ["below_tree", "below_tree", "steiner_tree", "two_anchor", "one_anchor", "complete"]);
        assert!(trace.phase_sequence().contains(&Phase::TwoAnchor { pinned: Vertex::A }));
    }

    #[test]
    fn finite_difference_matches_slope() {
        let t = tri((0.0, 0.0), (4.0, 0.0), (1.0, 3.0));
        let th = breakpoints(&t).unwrap();
        let trace = sweep(&t, th.l_st, th.l3, 2000).unwrap();
        let near = |l: f64| th.breakpoints().iter().any(|&x| (x - l).abs() < 1e-2);
        for w in trace.samples.windows(3) {
            if near(w[0].l) || near(w[2].l) {
                continue;
            }
            let fd = (w[2].j - w[0].j) / (w[2].l - w[0].l);
            assert!((fd - w[1].slope).abs() < 1e-4, "at {}: {fd} vs {}", w[1].l, w[1].slope);
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let t = tri((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
        assert!(matches!(sweep(&t, 2.0, 1.0, 10), Err(Error::Precondition(_))));
        assert!(matches!(sweep(&t, 1.0, 2.0, 1), Err(Error::Precondition(_))));
        let e = sweep(&t, -1.0, 2.0, 3).unwrap_err();
        assert!(matches!(e, Error::AtBudget { budget, .. } if budget == -1.0));
    }
}
