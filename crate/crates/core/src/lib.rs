//! Precoloring extension for plane graphs of girth five with precolored rings.
//!
//! The crate is organised around a combinatorial embedding ([`graph`]), the
//! structural predicates used by the discharging argument ([`invariants`]),
//! the catalogue of twelve reducible configurations ([`catalog`]), the
//! surgery that reduces them ([`reducer`]), colouring and criticality tools
//! ([`colorer`]), the charge bookkeeping ([`discharging`]), face weights
//! ([`weights`]) and file formats, corpus generation and the CLI ([`harness`]).

pub mod catalog;
pub mod colorer;
pub mod discharging;
pub mod graph;
pub mod harness;
pub mod invariants;
pub mod reducer;
pub mod weights;

pub use graph::{EmbeddedGraph, RingDecl, RingKind};
pub use weights::{Ext, WeightFunction, Q};
