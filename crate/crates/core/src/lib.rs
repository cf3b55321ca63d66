//! Semantic hypergraphs: a typed, recursive hyperedge notation for text,
//! with a two-stage parser, a pattern language, rule-based inference,
//! hypergraph metrics, coreference and pattern learning.
//!
//! Each capability has a runnable example under `examples/`, e.g.
//! `cargo run -p shg --example notation`.

pub mod alpha;
pub mod beta;
pub mod coref;
pub mod hedge;
pub mod inference;
pub mod learning;
pub mod patterns;
pub mod store;

pub use hedge::{Atom, Hyperedge, TypeCode};
pub use store::Store;
