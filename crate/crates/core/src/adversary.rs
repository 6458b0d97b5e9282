//! Built-in cop controllers for strategy simulations. All receive the full
//! game state (the game is perfect-information) and return per-cop targets,
//! each within the closed out-neighborhood of the cop's current vertex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::solver::{Arena, Side, WinTable};

pub trait CopController<A: Arena + ?Sized> {
    fn name(&self) -> &'static str;

    /// Vertex on which the whole cop team starts, for single-stack openings.
    fn place(&mut self, _arena: &A, _k: usize) -> u32 {
        0
    }

    /// New positions, aligned with `cops`; staying is expressed by
    /// returning the current vertex.
    fn decide(&mut self, arena: &A, cops: &[u32], robber: u32) -> Vec<u32>;
}

/// Uniform random moves, seeded.
pub struct RandomCops {
    rng: ChaCha8Rng,
}

impl RandomCops {
    pub fn new(seed: u64) -> RandomCops {
        RandomCops {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl<A: Arena + ?Sized> CopController<A> for RandomCops {
    fn name(&self) -> &'static str {
        "random"
    }

    fn decide(&mut self, arena: &A, cops: &[u32], _robber: u32) -> Vec<u32> {
        cops.iter()
            .map(|&c| {
                let steps = arena.steps(c);
                let idx = self.rng.random_range(0..=steps.len());
                if idx == steps.len() {
                    c
                } else {
                    steps[idx]
                }
            })
            .collect()
    }
}

/// Every cop steps along a shortest path toward the robber (lowest-id
/// minimizer), capturing when adjacent.
pub struct GreedyCops;

impl<A: Arena + ?Sized> CopController<A> for GreedyCops {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn decide(&mut self, arena: &A, cops: &[u32], robber: u32) -> Vec<u32> {
        cops.iter()
            .map(|&c| {
                let mut best = c;
                let mut best_d = arena.hop_dist(c, robber);
                for &w in arena.steps(c) {
                    let d = arena.hop_dist(w, robber);
                    if d < best_d || (d == best_d && w < best) {
                        best = w;
                        best_d = d;
                    }
                }
                best
            })
            .collect()
    }
}

/// Plays the exact solver's optimal move whenever the current position is a
/// cop win, and falls back to shortest-path pursuit otherwise.
pub struct OptimalCops {
    table: WinTable,
}

impl OptimalCops {
    /// Solves the arena for `k` cops up front.
    pub fn new<A: Arena>(arena: &A, k: usize, budget: u128) -> Result<OptimalCops> {
        let outcome = crate::solver::k_cop_win(arena, k, budget)?;
        Ok(OptimalCops {
            table: outcome.table,
        })
    }
}

impl<A: Arena> CopController<A> for OptimalCops {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn place(&mut self, arena: &A, k: usize) -> u32 {
        // Best single-vertex stack: maximize the number of robber replies
        // that stay cop-won, then minimize the worst capture depth.
        let n = arena.size();
        let mut best: Option<(usize, u32, u32)> = None; // (wins, -depth ordering via max, vertex)
        for v in 0..n as u32 {
            let stack = vec![v; k];
            let mut wins = 0usize;
            let mut worst_depth = 0u32;
            for r in 0..n as u32 {
                if self.table.cop_win(&stack, r, Side::Robber) {
                    wins += 1;
                    worst_depth =
                        worst_depth.max(self.table.capture_depth(&stack, r, Side::Robber).unwrap());
                }
            }
            let candidate = (wins, worst_depth, v);
            let better = match best {
                None => true,
                Some((bw, bd, bv)) => {
                    wins > bw || (wins == bw && (worst_depth < bd || (worst_depth == bd && v < bv)))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
        best.map(|(_, _, v)| v).unwrap_or(0)
    }

    fn decide(&mut self, arena: &A, cops: &[u32], robber: u32) -> Vec<u32> {
        if let Some(mv) = self.table.cop_best_move(arena, cops, robber) {
            return mv;
        }
        GreedyCops.decide(arena, cops, robber)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn greedy_closes_distance() {
        let g = gen::named_fixture("petersen").unwrap();
        let mut greedy = GreedyCops;
        let moved = CopController::<crate::graph::Graph>::decide(&mut greedy, &g, &[0], 7);
        assert_eq!(moved.len(), 1);
        assert!(g.dist(moved[0], 7) < g.dist(0, 7));
    }

    #[test]
    fn random_moves_are_legal() {
        let g = gen::named_fixture("petersen").unwrap();
        let mut rnd = RandomCops::new(3);
        for _ in 0..50 {
            let moved = CopController::<crate::graph::Graph>::decide(&mut rnd, &g, &[2, 9], 5);
            for (old, new) in [2u32, 9].iter().zip(&moved) {
                assert!(new == old || g.neighbors(*old).contains(new));
            }
        }
    }

    #[test]
    fn optimal_uses_winning_move() {
        // On a path, one cop wins; the optimal controller must converge on
        // the robber rather than dance.
        let g =
            crate::graph::Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let mut opt = OptimalCops::new(&g, 1, crate::solver::DEFAULT_STATE_BUDGET).unwrap();
        let mut cop = 0u32;
        let mut robber = 5u32;
        for _ in 0..12 {
            cop = CopController::<crate::graph::Graph>::decide(&mut opt, &g, &[cop], robber)[0];
            if cop == robber {
                return;
            }
            // Robber retreats as far as possible.
            robber = *std::iter::once(&robber)
                .chain(g.neighbors(robber))
                .max_by_key(|&&v| g.dist(cop, v))
                .unwrap();
            if cop == robber {
                return;
            }
        }
        panic!("optimal cop failed to capture on a path");
    }
}
