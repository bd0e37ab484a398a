//! Arc diagrams over one or two backbones and their topology.
//!
//! Vertices are labelled `1..=n` left to right. Two-backbone diagrams use the
//! linear layout `R` at `1..=n_R` followed by `S` at `n_R+1..=n`, both read
//! 5' to 3', so an antiparallel helix shows up as a nested family of
//! exterior arcs.

pub mod atlas;
pub mod diagram;
pub mod dotbracket;
mod error;
pub mod shadow;
pub mod topology;

pub use diagram::{arcs_cross, ApClause, ApReport, Arc, ArcKind, Diagram, SequencePair, ZigZag};
pub use error::{Error, Result};
