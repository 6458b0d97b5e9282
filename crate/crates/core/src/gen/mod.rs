//! Test-graph factory: named high-girth fixtures, projective-plane
//! incidence graphs, LPS Ramanujan graphs, random regular graphs, and edge
//! subdivision.

pub mod fixtures;
mod gf;
pub mod lps;
mod random;

pub use fixtures::{circulant, haar, lcf, named_fixture, pg_incidence, FixtureInfo, FIXTURES};
pub use lps::{lps_graph, lps_provenance, LpsParams, LpsReport};
pub use random::{circulant_digraph, random_digraph, random_regular, random_tree, subdivide};
