//! Immutable graph and digraph representations with the distance, girth,
//! ball/sphere, and growth primitives used by every other module.
//!
//! Distances are edge-hop counts stored as `u32`; unreachable pairs get the
//! [`INF`] sentinel instead of an error, so generators can emit disconnected
//! graphs that are reported rather than rejected. BFS rows are computed
//! lazily per source and cached behind a `OnceLock`, which keeps the
//! structures safe to share across threads once constructed. The cache holds
//! one row per requested source; callers are expected to stay under ~1e5
//! sources.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Distance sentinel for unreachable pairs.
pub const INF: u32 = u32::MAX;

#[derive(Debug)]
pub(crate) struct DistanceCache {
    rows: Vec<OnceLock<Box<[u32]>>>,
}

impl DistanceCache {
    fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(n);
        rows.resize_with(n, OnceLock::new);
        DistanceCache { rows }
    }

    fn row(&self, adj: &[Vec<u32>], src: u32) -> &[u32] {
        self.rows[src as usize].get_or_init(|| bfs(adj, &[src]).into_boxed_slice())
    }
}

/// BFS truncated at `depth`; entries farther than that stay INF.
pub(crate) fn bfs_capped(adj: &[Vec<u32>], source: u32, depth: u32) -> Vec<u32> {
    let mut dist = vec![INF; adj.len()];
    dist[source as usize] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        if d == depth {
            continue;
        }
        for &w in &adj[v as usize] {
            if dist[w as usize] == INF {
                dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Single- or multi-source BFS over an adjacency list.
pub(crate) fn bfs(adj: &[Vec<u32>], sources: &[u32]) -> Vec<u32> {
    let mut dist = vec![INF; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        for &w in &adj[v as usize] {
            if dist[w as usize] == INF {
                dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// A simple undirected graph on dense 0-based vertex ids.
#[derive(Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    connected: bool,
    /// Two-coloring when the graph is bipartite (0/1 per vertex).
    bipartition: Option<Vec<u8>>,
    dist: DistanceCache,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are deduplicated;
    /// self-loops are rejected. Disconnected inputs are accepted and flagged.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adj[u as usize].insert(v);
            adj[v as usize].insert(u);
        }
        let adj: Vec<Vec<u32>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Graph::from_sorted_adj(adj))
    }

    pub(crate) fn from_sorted_adj(adj: Vec<Vec<u32>>) -> Graph {
        let n = adj.len();
        let connected = n <= 1 || bfs(&adj, &[0]).iter().all(|&d| d != INF);
        let bipartition = two_color(&adj);
        Graph {
            n,
            adj,
            connected,
            bipartition,
            dist: DistanceCache::new(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.min_degree();
        (d == self.max_degree()).then_some(d)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Bipartition sides as a 0/1 coloring, when the graph is bipartite.
    pub fn bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    /// BFS distance row from `src`, computed once and cached.
    pub fn bfs_row(&self, src: u32) -> &[u32] {
        self.dist.row(&self.adj, src)
    }

    pub fn dist(&self, u: u32, v: u32) -> u32 {
        self.bfs_row(u)[v as usize]
    }

    /// `B_r(S)`: vertices within distance `r` of the nonempty set `S`.
    pub fn ball(&self, set: &[u32], r: u32) -> Result<Vec<u32>> {
        ball_impl(&self.adj, set, r)
    }

    /// `S_r(v)`: vertices at distance exactly `r` from `v`.
    pub fn sphere(&self, v: u32, r: u32) -> Vec<u32> {
        let row = self.bfs_row(v);
        (0..self.n as u32)
            .filter(|&w| row[w as usize] == r)
            .collect()
    }

    /// Length of a shortest cycle, or `None` for forests.
    ///
    /// Exact: for every root, a truncated BFS detects the shortest closed
    /// walk through that root; the minimum over roots is the girth.
    pub fn girth(&self) -> Option<u32> {
        girth_impl(&self.adj)
    }

    /// The largest `q` such that for every vertex `v` and every neighbor `u`
    /// of `v`, at least `q` vertices lie at distance exactly `h` from `v`
    /// and at least `h` from `u`. Returns 0 when some pair admits no such
    /// vertex. Uses depth-capped BFS so it stays cheap on large graphs.
    pub fn growth_parameter(&self, h: u32) -> usize {
        let mut q = usize::MAX;
        for v in 0..self.n as u32 {
            let dv = bfs_capped(&self.adj, v, h);
            for &u in &self.adj[v as usize] {
                let du = bfs_capped(&self.adj, u, h - 1);
                let count = (0..self.n).filter(|&w| dv[w] == h && du[w] == INF).count();
                q = q.min(count);
            }
        }
        if q == usize::MAX {
            0
        } else {
            q
        }
    }
}

fn ball_impl(adj: &[Vec<u32>], set: &[u32], r: u32) -> Result<Vec<u32>> {
    if set.is_empty() {
        return Err(Error::invalid("ball of an empty set"));
    }
    let dist = bfs(adj, set);
    Ok((0..adj.len() as u32)
        .filter(|&w| dist[w as usize] <= r)
        .collect())
}

fn two_color(adj: &[Vec<u32>]) -> Option<Vec<u8>> {
    let n = adj.len();
    let mut color = vec![u8::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        queue.push_back(start as u32);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if color[w as usize] == u8::MAX {
                    color[w as usize] = 1 - color[v as usize];
                    queue.push_back(w);
                } else if color[w as usize] == color[v as usize] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

fn girth_impl(adj: &[Vec<u32>]) -> Option<u32> {
    let n = adj.len();
    let mut best: u32 = INF;
    let mut dist = vec![INF; n];
    let mut parent = vec![INF; n];
    for root in 0..n as u32 {
        dist.fill(INF);
        parent.fill(INF);
        dist[root as usize] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            // Any closed walk found deeper than this cannot beat `best`.
            if best != INF && 2 * dv >= best {
                break;
            }
            for &w in &adj[v as usize] {
                if dist[w as usize] == INF {
                    dist[w as usize] = dv + 1;
                    parent[w as usize] = v;
                    queue.push_back(w);
                } else if w != parent[v as usize] {
                    // Non-tree edge: closed walk through the root of length
                    // dist(v) + dist(w) + 1, which contains a cycle no longer
                    // than that. The minimum over all roots is exact.
                    best = best.min(dv + dist[w as usize] + 1);
                }
            }
        }
    }
    (best != INF).then_some(best)
}

/// A directed graph with both out- and in-adjacency, plus its digon set.
#[derive(Debug)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    /// Unordered pairs {u,v} with both arcs present, stored as (min,max).
    digons: BTreeSet<(u32, u32)>,
    dist: DistanceCache,
}

impl Digraph {
    /// Builds a digraph from an arc list (`(u,v)` is the arc u -> v).
    pub fn from_arcs(n: usize, arcs: &[(u32, u32)]) -> Result<Digraph> {
        let mut out: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        for &(u, v) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "arc ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            out[u as usize].insert(v);
        }
        let mut in_adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        let mut digons = BTreeSet::new();
        for (u, targets) in out.iter().enumerate() {
            for &v in targets {
                in_adj[v as usize].insert(u as u32);
                if out[v as usize].contains(&(u as u32)) {
                    digons.insert((v.min(u as u32), v.max(u as u32)));
                }
            }
        }
        Ok(Digraph {
            n,
            out_adj: out.into_iter().map(|s| s.into_iter().collect()).collect(),
            in_adj: in_adj
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
            digons,
            dist: DistanceCache::new(n),
        })
    }

    /// The digraph with arcs u -> v and v -> u for every edge of `g`.
    pub fn bidirected(g: &Graph) -> Digraph {
        let mut arcs = Vec::with_capacity(2 * g.m());
        for v in 0..g.n() as u32 {
            for &w in g.neighbors(v) {
                arcs.push((v, w));
            }
        }
        Digraph::from_arcs(g.n(), &arcs).expect("valid graph produces valid digraph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.in_adj[v as usize]
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.out_adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn digons(&self) -> &BTreeSet<(u32, u32)> {
        &self.digons
    }

    pub fn in_digon(&self, v: u32) -> bool {
        self.digons.iter().any(|&(a, b)| a == v || b == v)
    }

    pub fn is_digon(&self, u: u32, v: u32) -> bool {
        self.digons.contains(&(u.min(v), u.max(v)))
    }

    /// Out-degree of `v`, less one if `v` lies in a digon.
    pub fn q_v(&self, v: u32) -> usize {
        let d = self.out_degree(v);
        if self.in_digon(v) {
            d.saturating_sub(1)
        } else {
            d
        }
    }

    /// `min_v q_v`, the branching parameter of the out-degree strategy.
    pub fn min_q(&self) -> usize {
        (0..self.n as u32).map(|v| self.q_v(v)).min().unwrap_or(0)
    }

    /// Directed BFS distance row from `src` along out-arcs.
    pub fn bfs_row(&self, src: u32) -> &[u32] {
        self.dist.row(&self.out_adj, src)
    }

    /// Length of a shortest directed path from `v` to `u`.
    pub fn dist(&self, v: u32, u: u32) -> u32 {
        self.bfs_row(v)[u as usize]
    }

    /// Whether every vertex reaches every other along directed paths.
    pub fn is_strongly_connected(&self) -> bool {
        self.n <= 1
            || (bfs(&self.out_adj, &[0]).iter().all(|&d| d != INF)
                && bfs(&self.in_adj, &[0]).iter().all(|&d| d != INF))
    }

    /// `B_r(S)` along out-arcs.
    pub fn ball(&self, set: &[u32], r: u32) -> Result<Vec<u32>> {
        ball_impl(&self.out_adj, set, r)
    }

    /// `S_r(v)` along out-arcs.
    pub fn sphere(&self, v: u32, r: u32) -> Vec<u32> {
        let row = self.bfs_row(v);
        (0..self.n as u32)
            .filter(|&w| row[w as usize] == r)
            .collect()
    }

    /// The underlying undirected graph (each arc or digon becomes one edge).
    pub fn underlying(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n as u32 {
            for &v in &self.out_adj[u as usize] {
                edges.push((u.min(v), u.max(v)));
            }
        }
        Graph::from_edges(self.n, &edges).expect("underlying graph is simple")
    }

    /// Directed growth: the largest `q` such that for every vertex `v` and
    /// every in-neighbor `y` of `v`, at least `q` vertices `w` satisfy
    /// `dist(v,w) = h` and `dist(y,w) >= h`.
    pub fn growth_parameter(&self, h: u32) -> usize {
        let mut q = usize::MAX;
        for v in 0..self.n as u32 {
            let dv = bfs_capped(&self.out_adj, v, h);
            for &y in &self.in_adj[v as usize] {
                let dy = bfs_capped(&self.out_adj, y, h - 1);
                let count = (0..self.n).filter(|&w| dv[w] == h && dy[w] == INF).count();
                q = q.min(count);
            }
        }
        if q == usize::MAX {
            0
        } else {
            q
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorClass;

    pub(crate) fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn petersen() -> Graph {
        crate::gen::named_fixture("petersen").unwrap()
    }

    #[test]
    fn c5_structure() {
        let g = cycle(5);
        assert_eq!(g.n(), 5);
        assert_eq!(g.min_degree(), 2);
        assert_eq!(g.max_degree(), 2);
        assert!(g.is_connected());
        assert_eq!(g.girth(), Some(5));
    }

    #[test]
    fn petersen_structure() {
        let g = petersen();
        assert_eq!(g.n(), 10);
        assert_eq!(g.is_regular(), Some(3));
        assert_eq!(g.girth(), Some(5));
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::from_edges(5, &[(3, 3)]).unwrap_err();
        assert_eq!(err.class(), ErrorClass::InvalidInput);
    }

    #[test]
    fn duplicate_edges_deduplicated() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn empty_edge_list_flags_disconnected() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.dist(0, 1), INF);
    }

    #[test]
    fn tree_has_no_girth() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn heawood_girth_six() {
        let g = crate::gen::named_fixture("heawood").unwrap();
        assert_eq!(g.n(), 14);
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn girth_matches_edge_removal_oracle() {
        // Independent route: girth = min over edges (u,v) of
        // dist_{G - uv}(u,v) + 1.
        let fixtures = [
            cycle(4),
            cycle(9),
            petersen(),
            crate::gen::named_fixture("heawood").unwrap(),
        ];
        for g in &fixtures {
            let mut best = INF;
            for u in 0..g.n() as u32 {
                for &v in g.neighbors(u) {
                    if v < u {
                        continue;
                    }
                    let mut adj: Vec<Vec<u32>> = g.adjacency().to_vec();
                    adj[u as usize].retain(|&w| w != v);
                    adj[v as usize].retain(|&w| w != u);
                    let d = bfs(&adj, &[u])[v as usize];
                    if d != INF {
                        best = best.min(d + 1);
                    }
                }
            }
            let expect = (best != INF).then_some(best);
            assert_eq!(g.girth(), expect);
        }
    }

    #[test]
    fn ball_examples() {
        let c6 = cycle(6);
        assert_eq!(c6.ball(&[0], 0).unwrap(), vec![0]);
        assert_eq!(c6.ball(&[0], 2).unwrap().len(), 5);
        let p = petersen();
        assert_eq!(p.ball(&[0], 1).unwrap().len(), 4);
        assert!(c6.ball(&[], 1).is_err());
    }

    #[test]
    fn sphere_partitions_ball() {
        let p = petersen();
        for r in 0..4u32 {
            let ball = p.ball(&[3], r).unwrap();
            let spheres: usize = (0..=r).map(|i| p.sphere(3, i).len()).sum();
            assert_eq!(ball.len(), spheres);
        }
    }

    #[test]
    fn growth_examples() {
        assert_eq!(cycle(6).growth_parameter(2), 1);
        let p = petersen();
        // Minimum degree 3 and girth 5: growth at h=1 equals delta - 1.
        assert_eq!(p.growth_parameter(1), 2);
        let sub = crate::gen::subdivide(&p, 1);
        assert_eq!(sub.growth_parameter(2), 2);
        // (1,q)-growth subdivided k times gives (k+1,q)-growth.
        let sub2 = crate::gen::subdivide(&p, 2);
        assert_eq!(sub2.growth_parameter(3), 2);
    }

    #[test]
    fn digraph_min_q_examples() {
        let dicycle = Digraph::from_arcs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(dicycle.min_q(), 1);
        assert!(dicycle.digons().is_empty());

        let bid_c5 = Digraph::bidirected(&cycle(5));
        assert_eq!(bid_c5.min_q(), 1);
        assert_eq!(bid_c5.digons().len(), 5);

        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(Digraph::bidirected(&k4).min_q(), 2);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (
                2usize..14,
                proptest::collection::vec((0u32..14, 0u32..14), 0..40),
            )
                .prop_map(|(n, pairs)| {
                    let edges: Vec<(u32, u32)> = pairs
                        .into_iter()
                        .map(|(a, b)| (a % n as u32, b % n as u32))
                        .filter(|(a, b)| a != b)
                        .collect();
                    Graph::from_edges(n, &edges).unwrap()
                })
        }

        proptest! {
            #[test]
            fn ball_is_monotone(g in arb_graph(), v in 0u32..14, r in 0u32..5) {
                let v = v % g.n() as u32;
                let small = g.ball(&[v], r).unwrap();
                let large = g.ball(&[v], r + 1).unwrap();
                prop_assert!(small.iter().all(|x| large.contains(x)));
            }

            #[test]
            fn dist_is_symmetric_and_triangular(
                g in arb_graph(),
                trip in (0u32..14, 0u32..14, 0u32..14),
            ) {
                let n = g.n() as u32;
                let (a, b, c) = (trip.0 % n, trip.1 % n, trip.2 % n);
                prop_assert_eq!(g.dist(a, b), g.dist(b, a));
                prop_assert_eq!(g.dist(a, a), 0);
                let (ab, bc, ac) = (g.dist(a, b), g.dist(b, c), g.dist(a, c));
                if ab != INF && bc != INF {
                    prop_assert!(ac != INF && ac <= ab + bc);
                }
            }

            #[test]
            fn spheres_partition_balls(g in arb_graph(), v in 0u32..14, r in 0u32..5) {
                let v = v % g.n() as u32;
                let ball = g.ball(&[v], r).unwrap().len();
                let spheres: usize = (0..=r).map(|i| g.sphere(v, i).len()).sum();
                prop_assert_eq!(ball, spheres);
            }
        }
    }

    #[test]
    fn digraph_transpose_consistency() {
        let d = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)]).unwrap();
        for u in 0..4u32 {
            for &v in d.out_neighbors(u) {
                assert!(d.in_neighbors(v).contains(&u));
            }
        }
        assert_eq!(d.digons().iter().copied().collect::<Vec<_>>(), vec![(2, 3)]);
    }
}
