//! Problem and result files, and the sweep table.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::SolveResult;
use crate::evolve::SweepSample;
use crate::geom::{Point, TerminalTriangle, Vertex};
use crate::network::{Network, NodeKind, Objective};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub terminals: [[f64; 2]; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<f64>,
}

impl ProblemSpec {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let spec: ProblemSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed problem file {}: {e}", path.display())))?;
        if let Some(b) = spec.budget {
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::Usage(format!("budget must be positive, got {b}")));
            }
        }
        if let Some(p) = spec.penalty {
            if !(p > 0.0 && p.is_finite()) {
                return Err(CliError::Usage(format!("penalty must be positive, got {p}")));
            }
        }
        Ok(spec)
    }

    pub fn triangle(&self) -> Result<TerminalTriangle, CliError> {
        Ok(TerminalTriangle::from_coords(self.terminals)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    /// "A", "B", "C" for terminals, "anchor" otherwise.
    pub kind: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<[usize; 2]>,
}

impl NetworkRecord {
    pub fn from_network(n: &Network) -> Self {
        let nodes = n
            .nodes()
            .iter()
            .map(|node| NodeRecord {
                id: node.id,
                kind: match node.kind {
                    NodeKind::Terminal(v) => v.label().to_string(),
                    NodeKind::Anchor => "anchor".to_string(),
                },
                x: node.pos.x,
                y: node.pos.y,
            })
            .collect();
        let edges = n.edges().iter().map(|&(u, v)| [u, v]).collect();
        NetworkRecord { nodes, edges }
    }

    /// Rebuilds the network. Terminals must come first, in A, B, C order.
    pub fn to_network(&self) -> Result<Network, CliError> {
        let bad = |msg: &str| CliError::Usage(format!("malformed network record: {msg}"));
        if self.nodes.len() < 3 {
            return Err(bad("fewer than three nodes"));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let expected = if i < 3 { Vertex::from_index(i).label() } else { "anchor" };
            if node.id != i || node.kind != expected {
                return Err(bad(&format!("node {i} should be {expected}")));
            }
        }
        let p: Vec<Point> = self.nodes.iter().map(|n| Point::new(n.x, n.y)).collect();
        let t = TerminalTriangle::new(p[0], p[1], p[2])?;
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Network::new(t, &p[3..], &edges).map_err(|e| bad(&e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub ab: f64,
    pub bc: f64,
    pub ac: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub budget: f64,
    pub phase: String,
    pub pinned: Vec<String>,
    pub l_used: f64,
    pub j: f64,
    pub slope: f64,
    pub penalty: f64,
    pub distances: Distances,
    pub network: NetworkRecord,
}

impl SolveDocument {
    pub fn new(r: &SolveResult, penalty: f64) -> Self {
        let Objective { d_ab, d_bc, d_ac, j } = r.objective;
        SolveDocument {
            budget: r.budget,
            phase: r.phase.tag().to_string(),
            pinned: r.phase.pinned().iter().map(|v| v.label().to_string()).collect(),
            l_used: r.l_used,
            j,
            slope: r.slope,
            penalty,
            distances: Distances { ab: d_ab, bc: d_bc, ac: d_ac },
            network: NetworkRecord::from_network(&r.network),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed result file: {e}")))
    }
}

/// Fixed 17-significant-digit rendering used in tables.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_sweep_csv(out: impl Write, samples: &[SweepSample]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Usage(format!("cannot write table: {e}"));
    w.write_record(["l", "j", "phase", "slope"]).map_err(io)?;
    for s in samples {
        w.write_record([fmt_real(s.l), fmt_real(s.j), s.phase.to_string(), fmt_real(s.slope)]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Usage(format!("cannot write table: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::solve_with_penalty;

    #[test]
    fn document_round_trip_is_lossless() {
        let t = TerminalTriangle::from_coords([[0.0, 0.0], [4.0, 0.0], [1.0, 3.0]]).unwrap();
        for budget in [6.0, 7.5, 9.0, 10.5, 12.0] {
            let r = solve_with_penalty(&t, budget, 1e9).unwrap();
            let doc = SolveDocument::new(&r, 1e9);
            let back = SolveDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let net = back.network.to_network().unwrap();
            assert_eq!(net, r.network);
            assert!((net.evaluate(doc.penalty).j - doc.j).abs() <= 1e-12);
        }
    }

    #[test]
    fn spec_rejects_unknown_fields() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.json");
        std::fs::write(&p, r#"{"terminals": [[0,0],[1,0],[0,1]], "budjet": 2}"#).unwrap();
        assert!(matches!(ProblemSpec::read(&p), Err(CliError::Usage(_))));
        std::fs::write(&p, r#"{"terminals": [[0,0],[1,0],[0,1]], "budget": -2}"#).unwrap();
        assert!(matches!(ProblemSpec::read(&p), Err(CliError::Usage(_))));
    }

    #[test]
    fn real_format() {
        assert_eq!(fmt_real(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_real(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
