//! Seeded random graph generators and the edge-subdivision operator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

const PAIRING_RETRY_CAP: usize = 10_000;

/// Random d-regular graph via the pairing model: nd points are matched
/// uniformly and collapsed; samples with self-loops or parallel edges are
/// rejected and redrawn. Deterministic under `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "n*d must be even for a {d}-regular graph on {n} vertices"
        )));
    }
    if d >= n {
        return Err(Error::invalid("degree must be below the vertex count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<u32> = (0..n * d).map(|p| (p / d) as u32).collect();
    'attempt: for _ in 0..PAIRING_RETRY_CAP {
        points.shuffle(&mut rng);
        let mut seen = std::collections::BTreeSet::new();
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        let edges: Vec<(u32, u32)> = points
            .chunks_exact(2)
            .map(|pair| (pair[0], pair[1]))
            .collect();
        return Graph::from_edges(n, &edges);
    }
    Err(Error::Resource {
        what: format!("pairing-model rejection for ({n},{d})"),
        required: PAIRING_RETRY_CAP as u128 + 1,
        budget: PAIRING_RETRY_CAP as u128,
    })
}

/// Random digraph with `m` distinct arcs, uniform over vertex pairs.
pub fn random_digraph(n: usize, m: usize, seed: u64) -> Result<Digraph> {
    if m > n * (n - 1) {
        return Err(Error::invalid("too many arcs requested"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = std::collections::BTreeSet::new();
    while arcs.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v {
            arcs.insert((u, v));
        }
    }
    Digraph::from_arcs(n, &arcs.into_iter().collect::<Vec<_>>())
}

/// Random tree on `n` vertices (uniform Pruefer sequence).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    assert!(n >= 1);
    if n == 1 {
        return Graph::from_edges(1, &[]).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prufer: Vec<u32> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n as u32))
        .collect();
    let mut degree = vec![1u32; n];
    for &v in &prufer {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<u32> =
        (0..n as u32).filter(|&v| degree[v as usize] == 1).collect();
    for &v in &prufer {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, v));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaves.insert(v);
        }
    }
    let mut it = leaves.iter();
    let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
    edges.push((a, b));
    Graph::from_edges(n, &edges).unwrap()
}

/// Replaces every edge by a path with `k` interior vertices (k+1 edges).
/// Subdividing multiplies girth by k+1 and turns (1,q)-growth into
/// (k+1,q)-growth.
pub fn subdivide(g: &Graph, k: usize) -> Graph {
    if k == 0 {
        let edges: Vec<(u32, u32)> = (0..g.n() as u32)
            .flat_map(|u| {
                g.neighbors(u)
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        return Graph::from_edges(g.n(), &edges).unwrap();
    }
    let mut edges = Vec::new();
    let mut next = g.n() as u32;
    for u in 0..g.n() as u32 {
        for &v in g.neighbors(u) {
            if u >= v {
                continue;
            }
            let mut prev = u;
            for _ in 0..k {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, v));
        }
    }
    Graph::from_edges(next as usize, &edges).unwrap()
}

/// Directed circulant: arcs i -> i + a (mod n) for each offset.
pub fn circulant_digraph(n: usize, offsets: &[u32]) -> Result<Digraph> {
    let arcs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|i| offsets.iter().map(move |&a| (i, (i + a) % n as u32)))
        .collect();
    Digraph::from_arcs(n, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivide_cycle() {
        let c5 = crate::gen::fixtures::circulant(5, &[1]).unwrap();
        let c10 = subdivide(&c5, 1);
        assert_eq!(c10.n(), 10);
        assert_eq!(c10.girth(), Some(10));
        assert_eq!(c10.is_regular(), Some(2));
    }

    #[test]
    fn subdivide_multiplies_girth() {
        let p = crate::gen::named_fixture("petersen").unwrap();
        for k in 1..=3usize {
            let s = subdivide(&p, k);
            assert_eq!(s.girth(), Some(5 * (k as u32 + 1)));
        }
    }

    #[test]
    fn pairing_model_is_regular_and_reproducible() {
        let g = random_regular(20, 3, 7).unwrap();
        assert_eq!(g.is_regular(), Some(3));
        let h = random_regular(20, 3, 7).unwrap();
        assert_eq!(crate::io::write_graph(&g), crate::io::write_graph(&h));
        let other = random_regular(20, 3, 8).unwrap();
        // Overwhelmingly likely to differ.
        assert_ne!(crate::io::write_graph(&g), crate::io::write_graph(&other));
    }

    #[test]
    fn odd_nd_rejected() {
        assert!(random_regular(5, 3, 0).is_err());
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..5 {
            let t = random_tree(17, seed);
            assert!(t.is_connected());
            assert_eq!(t.m(), 16);
            assert_eq!(t.girth(), None);
        }
    }

    #[test]
    fn random_digraph_deterministic() {
        let a = random_digraph(12, 30, 3).unwrap();
        let b = random_digraph(12, 30, 3).unwrap();
        assert_eq!(crate::io::write_digraph(&a), crate::io::write_digraph(&b));
    }
}
