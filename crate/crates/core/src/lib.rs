//! Budgeted Steiner networks over three terminals.
//!
//! For three terminals and a total edge-length budget `L`, find straight-edge
//! networks minimizing the sum of the three pairwise shortest-path distances.
//! [`analytic`] computes the optimum exactly for every budget; [`oracle`] is
//! an independent multi-start numerical search used to check it.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod fermat;
pub mod geom;
pub mod network;
pub mod oracle;

pub use error::{Error, Result};
pub use geom::{Point, TerminalTriangle, Vertex};
