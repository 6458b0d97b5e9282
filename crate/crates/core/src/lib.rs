//! A laboratory for the game of cops and robbers on graphs and digraphs.
//!
//! The crate provides immutable graph/digraph structures with cached BFS
//! oracles ([`graph`]), an exact game solver used as ground truth at small
//! scale ([`solver`]), weight-ledger robber strategies for high-girth
//! graphs and dispersed digraphs ([`strategy`], [`dispersion`]), a vertex
//! expansion and spectral toolkit ([`expansion`], [`spectral`]), a
//! probabilistic cop strategy for bounded-degree expanders ([`expander`]),
//! and generators for the test corpus ([`gen`]).

pub mod error;
pub mod expansion;
pub mod graph;
pub mod io;
pub mod matching;

pub mod adversary;
pub mod dispersion;
pub mod expander;
pub mod gen;
pub mod solver;
pub mod spectral;
pub mod strategy;
pub mod util;

pub use error::{Error, ErrorClass, Result};
