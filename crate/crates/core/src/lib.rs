//! Weak saturation of uniform hypergraphs.
//!
//! The crate is organised around the H-bootstrap process: starting from a
//! host graph `G`, repeatedly add a missing edge whenever doing so creates a
//! new copy of a fixed pattern `H` through that edge. `G` is weakly
//! `H`-saturated when this process reaches the complete graph.
//!
//! * [`hypercore`]: edges, hypergraphs, colex ranking, text format.
//! * [`percolation`]: the closure engine, certificates and an independent
//!   certificate checker.
//! * [`templates`]: sparseness and `T_{r,h,s}` template saturation.
//! * [`constructions`]: cone, s-partite and percolation gadgets and the
//!   composite construction over a covering design.
//! * [`designs`]: greedy covering designs.
//! * [`solver`]: exact `wsat(n, H)` for tiny instances, upper bounds and
//!   ratio tables.

pub mod constructions;
pub mod designs;
pub mod error;
pub mod hypercore;
pub mod percolation;
pub mod solver;
pub mod templates;

pub use error::{Error, Result};
pub use hypercore::{Edge, EdgeUniverse, Hypergraph, Pattern, Vertex};
pub use percolation::{ClosureResult, SaturationCertificate};
