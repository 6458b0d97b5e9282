//! Exact cops-and-robbers solver by retrograde fixed point over game
//! positions.
//!
//! A position is (cop multiset, robber vertex, side to move); cop positions
//! are kept sorted to quotient out the k! symmetry. Cops move
//! simultaneously (each at most one step), every agent may stay, capture is
//! coincidence. Placement order: cops pick their start multiset first, the
//! robber picks second, cops move first thereafter. Positions never marked
//! cop-win by the fixed point are robber wins, which encodes the
//! repeat-position finite win rule. The same machinery covers digraphs,
//! where both players move along out-arcs.

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

pub const DEFAULT_STATE_BUDGET: u128 = 100_000_000;

/// Whose turn it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Cops,
    Robber,
}

/// Shared view of graphs and digraphs as game arenas. `steps` are the
/// moves available from a vertex (staying is always allowed and is not
/// listed); `steps_rev` are the reverse moves, used for retrograde sweeps.
pub trait Arena {
    fn size(&self) -> usize;
    fn steps(&self, v: u32) -> &[u32];
    fn steps_rev(&self, v: u32) -> &[u32];
    fn hop_dist(&self, from: u32, to: u32) -> u32;
    fn game_connected(&self) -> bool;
}

impl Arena for Graph {
    fn size(&self) -> usize {
        self.n()
    }
    fn steps(&self, v: u32) -> &[u32] {
        self.neighbors(v)
    }
    fn steps_rev(&self, v: u32) -> &[u32] {
        self.neighbors(v)
    }
    fn hop_dist(&self, from: u32, to: u32) -> u32 {
        self.dist(from, to)
    }
    fn game_connected(&self) -> bool {
        self.is_connected()
    }
}

impl Arena for Digraph {
    fn size(&self) -> usize {
        self.n()
    }
    fn steps(&self, v: u32) -> &[u32] {
        self.out_neighbors(v)
    }
    fn steps_rev(&self, v: u32) -> &[u32] {
        self.in_neighbors(v)
    }
    fn hop_dist(&self, from: u32, to: u32) -> u32 {
        self.dist(from, to)
    }
    fn game_connected(&self) -> bool {
        self.is_strongly_connected()
    }
}

/// Ranks sorted k-multisets over {0..n-1} by the standard bijection with
/// k-combinations of {0..n+k-2} in colexicographic order.
#[derive(Debug)]
pub struct MultisetIndexer {
    n: usize,
    k: usize,
    /// binom[m][j] = C(m, j) for j <= k.
    binom: Vec<Vec<u64>>,
}

impl MultisetIndexer {
    pub fn new(n: usize, k: usize) -> MultisetIndexer {
        let rows = n + k + 1;
        let mut binom = vec![vec![0u64; k + 2]; rows];
        for m in 0..rows {
            for j in 0..=k + 1 {
                binom[m][j] = if j == 0 {
                    1
                } else if j > m {
                    0
                } else {
                    binom[m - 1][j - 1] + binom[m - 1][j]
                };
            }
        }
        MultisetIndexer { n, k, binom }
    }

    pub fn count(&self) -> usize {
        self.binom[self.n + self.k - 1][self.k] as usize
    }

    /// Rank of a sorted multiset.
    pub fn rank(&self, sorted: &[u32]) -> usize {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let mut acc = 0u64;
        for (i, &a) in sorted.iter().enumerate() {
            let b = a as usize + i;
            acc += self.binom[b][i + 1];
        }
        acc as usize
    }

    /// Inverse of `rank`; writes into `out` (length k).
    pub fn unrank(&self, mut rank: u64, out: &mut [u32]) {
        for i in (0..self.k).rev() {
            // Largest b with C(b, i+1) <= rank.
            let mut b = i;
            while self.binom[b + 1][i + 1] <= rank {
                b += 1;
            }
            rank -= self.binom[b][i + 1];
            out[i] = (b - i) as u32;
        }
    }
}

/// Converged win/loss table with capture depths.
#[derive(Debug)]
pub struct WinTable {
    pub n: usize,
    pub k: usize,
    indexer: MultisetIndexer,
    win: Vec<bool>,
    depth: Vec<u32>,
}

impl WinTable {
    fn state_id(&self, cid: usize, robber: u32, side: Side) -> usize {
        (cid * self.n + robber as usize) * 2
            + match side {
                Side::Cops => 0,
                Side::Robber => 1,
            }
    }

    fn cid_of(&self, cops: &[u32]) -> usize {
        let mut sorted = cops.to_vec();
        sorted.sort_unstable();
        self.indexer.rank(&sorted)
    }

    pub fn cop_win(&self, cops: &[u32], robber: u32, side: Side) -> bool {
        self.win[self.state_id(self.cid_of(cops), robber, side)]
    }

    /// Remaining plies to capture under optimal play, for cop-win states.
    pub fn capture_depth(&self, cops: &[u32], robber: u32, side: Side) -> Option<u32> {
        let sid = self.state_id(self.cid_of(cops), robber, side);
        self.win[sid].then_some(self.depth[sid])
    }

    pub fn states(&self) -> usize {
        self.win.len()
    }

    /// Optimal simultaneous cop move from a cops-to-move position: the
    /// successor of minimum capture depth, ties broken by lexicographically
    /// smallest per-cop target vector. `None` when the position is not a
    /// cop win.
    pub fn cop_best_move<A: Arena>(
        &self,
        arena: &A,
        cops: &[u32],
        robber: u32,
    ) -> Option<Vec<u32>> {
        let sid = self.state_id(self.cid_of(cops), robber, Side::Cops);
        if !self.win[sid] {
            return None;
        }
        let mut best: Option<(u32, Vec<u32>)> = None;
        let mut choice = vec![0u32; cops.len()];
        self.for_each_move_vector(arena, cops, 0, &mut choice, &mut |table, vector| {
            let nid = table.state_id(table.cid_of(vector), robber, Side::Robber);
            if !table.win[nid] {
                return;
            }
            let d = table.depth[nid];
            let better = match &best {
                None => true,
                Some((bd, bv)) => d < *bd || (d == *bd && vector < bv.as_slice()),
            };
            if better {
                best = Some((d, vector.to_vec()));
            }
        });
        best.map(|(_, v)| v)
    }

    fn for_each_move_vector<A: Arena>(
        &self,
        arena: &A,
        cops: &[u32],
        i: usize,
        choice: &mut Vec<u32>,
        f: &mut impl FnMut(&WinTable, &[u32]),
    ) {
        if i == cops.len() {
            f(self, choice);
            return;
        }
        for target in std::iter::once(cops[i]).chain(arena.steps(cops[i]).iter().copied()) {
            choice[i] = target;
            self.for_each_move_vector(arena, cops, i + 1, choice, f);
        }
    }

    /// Robber move from a robber-to-move position: a surviving successor if
    /// one exists (lowest id), otherwise the successor delaying capture the
    /// longest.
    pub fn robber_best_move<A: Arena>(&self, arena: &A, cops: &[u32], robber: u32) -> u32 {
        let cid = self.cid_of(cops);
        let mut best_safe: Option<u32> = None;
        let mut best_delay: Option<(u32, u32)> = None;
        for target in std::iter::once(robber).chain(arena.steps(robber).iter().copied()) {
            let nid = self.state_id(cid, target, Side::Cops);
            if !self.win[nid] {
                if best_safe.is_none_or(|b| target < b) {
                    best_safe = Some(target);
                }
            } else {
                let d = self.depth[nid];
                let better = match best_delay {
                    None => true,
                    Some((bd, bt)) => d > bd || (d == bd && target < bt),
                };
                if better {
                    best_delay = Some((d, target));
                }
            }
        }
        best_safe.or(best_delay.map(|(_, t)| t)).unwrap_or(robber)
    }
}

/// Result of solving one (arena, k) instance.
#[derive(Debug)]
pub struct SolveOutcome {
    pub cop_win: bool,
    pub states_explored: usize,
    /// A placement achieving the minimax capture depth, when cops win.
    pub best_placement: Option<Vec<u32>>,
    /// Plies to capture from the best placement against best robber play.
    pub capture_depth: Option<u32>,
    pub table: WinTable,
}

/// Decides whether k cops win on `arena` under optimal play.
pub fn k_cop_win<A: Arena>(arena: &A, k: usize, budget: u128) -> Result<SolveOutcome> {
    if !arena.game_connected() {
        return Err(Error::precondition("solver requires a connected arena"));
    }
    if k == 0 {
        return Err(Error::invalid("at least one cop is required"));
    }
    let n = arena.size();
    let cost = (k as u128) * (n as u128).saturating_pow(k as u32 + 1);
    if cost > budget {
        return Err(Error::Resource {
            what: format!("game state space for k={k}, n={n}"),
            required: cost,
            budget,
        });
    }

    let indexer = MultisetIndexer::new(n, k);
    let m_count = indexer.count();
    let states = m_count * n * 2;
    let mut table = WinTable {
        n,
        k,
        indexer,
        win: vec![false; states],
        depth: vec![0; states],
    };

    // Successor counters for robber-to-move states.
    let mut pending: Vec<u32> = vec![0; m_count * n];
    for r in 0..n as u32 {
        let moves = arena.steps(r).len() as u32 + 1;
        for cid in 0..m_count {
            pending[cid * n + r as usize] = moves;
        }
    }

    let mut queue = std::collections::VecDeque::new();
    let mut cops_buf = vec![0u32; k];

    // Capture states seed the fixed point.
    for cid in 0..m_count {
        table.indexer.unrank(cid as u64, &mut cops_buf);
        for &c in cops_buf.iter() {
            for side in [Side::Cops, Side::Robber] {
                let sid = table.state_id(cid, c, side);
                if !table.win[sid] {
                    table.win[sid] = true;
                    table.depth[sid] = 0;
                    queue.push_back(sid);
                }
            }
        }
    }

    let mut sorted_buf = vec![0u32; k];
    while let Some(sid) = queue.pop_front() {
        let side = if sid % 2 == 0 {
            Side::Cops
        } else {
            Side::Robber
        };
        let robber = ((sid / 2) % n) as u32;
        let cid = sid / 2 / n;
        let d = table.depth[sid];
        match side {
            Side::Robber => {
                // Cop moves lead here: enumerate per-position preimages.
                table.indexer.unrank(cid as u64, &mut cops_buf);
                let cops = cops_buf.clone();
                let mut choice = vec![0u32; k];
                enumerate_preimages(arena, &cops, 0, &mut choice, &mut |pred| {
                    sorted_buf.copy_from_slice(pred);
                    sorted_buf.sort_unstable();
                    let pcid = table.indexer.rank(&sorted_buf);
                    let pid = table.state_id(pcid, robber, Side::Cops);
                    if !table.win[pid] {
                        table.win[pid] = true;
                        table.depth[pid] = d + 1;
                        queue.push_back(pid);
                    }
                });
            }
            Side::Cops => {
                // Robber moves lead here: predecessents are (cid, r', Robber)
                // with r' stepping (or staying) onto `robber`.
                table.indexer.unrank(cid as u64, &mut cops_buf);
                for r_prev in std::iter::once(robber).chain(arena.steps_rev(robber).iter().copied())
                {
                    let pid = table.state_id(cid, r_prev, Side::Robber);
                    if table.win[pid] {
                        continue;
                    }
                    let slot = &mut pending[cid * n + r_prev as usize];
                    *slot -= 1;
                    if *slot == 0 {
                        table.win[pid] = true;
                        table.depth[pid] = d + 1;
                        queue.push_back(pid);
                    }
                }
            }
        }
    }

    // Placement: cops pick the multiset whose worst robber reply is best.
    let mut best: Option<(u32, usize)> = None;
    for cid in 0..m_count {
        let mut worst: u32 = 0;
        let mut all_win = true;
        for r in 0..n as u32 {
            let sid = table.state_id(cid, r, Side::Cops);
            if !table.win[sid] {
                all_win = false;
                break;
            }
            worst = worst.max(table.depth[sid]);
        }
        if all_win && best.is_none_or(|(bd, _)| worst < bd) {
            best = Some((worst, cid));
        }
    }

    let (cop_win, best_placement, capture_depth) = match best {
        Some((d, cid)) => {
            table.indexer.unrank(cid as u64, &mut cops_buf);
            (true, Some(cops_buf.clone()), Some(d))
        }
        None => (false, None, None),
    };
    Ok(SolveOutcome {
        cop_win,
        states_explored: states,
        best_placement,
        capture_depth,
        table,
    })
}

fn enumerate_preimages<A: Arena>(
    arena: &A,
    cops: &[u32],
    i: usize,
    choice: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if i == cops.len() {
        f(choice);
        return;
    }
    for source in std::iter::once(cops[i]).chain(arena.steps_rev(cops[i]).iter().copied()) {
        choice[i] = source;
        enumerate_preimages(arena, cops, i + 1, choice, f);
    }
}

/// Least k with `k_cop_win`, or a bound-exceeded error.
pub fn cop_number<A: Arena>(arena: &A, k_max: usize, budget: u128) -> Result<usize> {
    for k in 1..=k_max {
        if k_cop_win(arena, k, budget)?.cop_win {
            return Ok(k);
        }
    }
    Err(Error::BoundExceeded { k_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::Graph;
    use rand::{Rng, SeedableRng};

    fn cycle(n: usize) -> Graph {
        gen::circulant(n, &[1]).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn indexer_round_trip() {
        for (n, k) in [(5, 1), (6, 2), (7, 3)] {
            let idx = MultisetIndexer::new(n, k);
            let mut buf = vec![0u32; k];
            let mut seen = std::collections::HashSet::new();
            for rank in 0..idx.count() {
                idx.unrank(rank as u64, &mut buf);
                assert!(buf.windows(2).all(|w| w[0] <= w[1]));
                assert!(buf.iter().all(|&v| (v as usize) < n));
                assert_eq!(idx.rank(&buf), rank);
                seen.insert(buf.clone());
            }
            assert_eq!(seen.len(), idx.count());
        }
    }

    #[test]
    fn paths_are_cop_win() {
        let g = path(6);
        let out = k_cop_win(&g, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert!(out.cop_win);
        assert_eq!(cop_number(&g, 3, DEFAULT_STATE_BUDGET).unwrap(), 1);
    }

    #[test]
    fn c4_needs_two_cops() {
        let g = cycle(4);
        let out = k_cop_win(&g, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!out.cop_win);
        assert_eq!(out.states_explored, 32);
        assert_eq!(cop_number(&g, 3, DEFAULT_STATE_BUDGET).unwrap(), 2);
    }

    #[test]
    fn c5_needs_two_cops() {
        assert_eq!(cop_number(&cycle(5), 3, DEFAULT_STATE_BUDGET).unwrap(), 2);
    }

    #[test]
    fn random_trees_are_cop_win() {
        for seed in 0..6 {
            let t = gen::random_tree(14, seed);
            assert_eq!(cop_number(&t, 2, DEFAULT_STATE_BUDGET).unwrap(), 1);
        }
    }

    #[test]
    fn petersen_cop_number_three() {
        let p = gen::named_fixture("petersen").unwrap();
        assert!(!k_cop_win(&p, 2, DEFAULT_STATE_BUDGET).unwrap().cop_win);
        assert!(k_cop_win(&p, 3, DEFAULT_STATE_BUDGET).unwrap().cop_win);
    }

    #[test]
    fn monotone_in_k() {
        for seed in 0..4 {
            let g = gen::random_regular(9, 4, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let mut prev = false;
            for k in 1..=3 {
                let win = k_cop_win(&g, k, DEFAULT_STATE_BUDGET).unwrap().cop_win;
                assert!(!prev || win, "win set shrank from k={} to k={k}", k - 1);
                prev = win;
            }
        }
    }

    #[test]
    fn budget_errors_name_requirement() {
        let g = cycle(30);
        let err = k_cop_win(&g, 5, DEFAULT_STATE_BUDGET).unwrap_err();
        match err {
            Error::Resource {
                required, budget, ..
            } => {
                assert!(required > budget);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn kmax_exhaustion_reported() {
        let err = cop_number(&cycle(6), 1, DEFAULT_STATE_BUDGET).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { k_max: 1 }));
    }

    #[test]
    fn directed_cycle_needs_two_cops() {
        let d = gen::circulant_digraph(5, &[1]).unwrap();
        assert!(!k_cop_win(&d, 1, DEFAULT_STATE_BUDGET).unwrap().cop_win);
        assert!(k_cop_win(&d, 2, DEFAULT_STATE_BUDGET).unwrap().cop_win);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(k_cop_win(&g, 1, DEFAULT_STATE_BUDGET).is_err());
    }

    #[test]
    fn replay_reaches_capture_within_depth() {
        let p = gen::named_fixture("petersen").unwrap();
        let out = k_cop_win(&p, 3, DEFAULT_STATE_BUDGET).unwrap();
        assert!(out.cop_win);
        let placement = out.best_placement.clone().unwrap();
        let depth = out.capture_depth.unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);

        for trial in 0..40 {
            let mut cops = placement.clone();
            // Robber picks the best reply for trial 0, random otherwise.
            let mut robber = if trial == 0 {
                (0..10u32)
                    .max_by_key(|&r| out.table.capture_depth(&cops, r, Side::Cops).unwrap())
                    .unwrap()
            } else {
                rng.random_range(0..10u32)
            };
            let mut plies = 0u32;
            loop {
                if cops.contains(&robber) {
                    break;
                }
                cops = out.table.cop_best_move(&p, &cops, robber).unwrap();
                plies += 1;
                if cops.contains(&robber) {
                    break;
                }
                // Random robber replies, legal by construction.
                let moves: Vec<u32> = std::iter::once(robber)
                    .chain(p.neighbors(robber).iter().copied())
                    .collect();
                robber = if trial == 0 {
                    out.table.robber_best_move(&p, &cops, robber)
                } else {
                    moves[rng.random_range(0..moves.len())]
                };
                plies += 1;
                assert!(plies <= depth + 2, "no capture within depth bound");
            }
            assert!(plies <= depth, "captured in {plies} > depth {depth}");
        }
    }
}
