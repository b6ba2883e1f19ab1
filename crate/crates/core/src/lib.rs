//! Deterministic distributed vertex coloring for graphs of bounded arboricity,
//! simulated in the synchronous LOCAL model.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the immutable [`Graph`], reproducible generators and
//!   exact small-graph oracles.
//! * [`sim`] is the round-by-round message-passing engine every distributed
//!   procedure runs on.
//! * [`decomposition`] computes H-partitions, forests decompositions and the
//!   baseline `(⌊(2+ε)a⌋+1)`-coloring.
//! * [`orientation`] builds complete and partial acyclic orientations and
//!   derives colorings from them.
//! * [`recolor`] implements polynomial-family recoloring (defective colorings
//!   and the arbdefective `arb_kuhn` driver).
//! * [`arbdefective`] colors along orientations so that every color class
//!   has bounded arboricity.
//! * [`legal`] composes everything into legal coloring drivers and the MIS
//!   reduction.
//! * [`verify`] certifies artifacts from `(graph, artifact)` alone.
//! * [`io`] reads and writes the plain-text file formats.

pub mod arbdefective;
pub mod coloring;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod io;
pub mod legal;
pub mod orientation;
pub mod recolor;
pub mod sim;
pub mod verify;
pub mod vertex_map;

pub use arbdefective::ArbdefectiveColoring;
pub use coloring::Coloring;
pub use error::{Error, Result};
pub use graph::{Graph, GraphKind, GraphSpec, VertexId};
pub use orientation::{Direction, PartialOrientation};
pub use sim::RoundTrace;
pub use vertex_map::VertexMap;

/// `⌊(2+ε)·a⌋`, the degree bound shared by H-partitions and orientations.
///
/// A small tolerance absorbs binary rounding of ε (e.g. `2.3 * 10`).
pub fn degree_bound(a: usize, epsilon: f64) -> usize {
    floor_tolerant((2.0 + epsilon) * a as f64)
}

pub(crate) fn floor_tolerant(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be a positive number, got {epsilon}"
        )));
    }
    Ok(())
}
