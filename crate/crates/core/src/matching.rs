//! Maximum bipartite matching by augmenting paths, with Hall-witness
//! extraction for unsaturated instances.

/// Matching state over left vertices 0..n_left and right vertices
/// 0..n_right; `adj[l]` lists the right neighbors of left vertex l.
#[derive(Debug)]
pub struct Matching {
    /// For each right vertex, its matched left partner.
    pub right_match: Vec<Option<usize>>,
    /// For each left vertex, its matched right partner.
    pub left_match: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left_match.iter().flatten().count()
    }
}

fn try_augment(
    adj: &[Vec<usize>],
    l: usize,
    visited: &mut [bool],
    right_match: &mut [Option<usize>],
) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if right_match[r].is_none()
            || try_augment(adj, right_match[r].unwrap(), visited, right_match)
        {
            right_match[r] = Some(l);
            return true;
        }
    }
    false
}

/// Exact maximum matching.
pub fn maximum_matching(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Matching {
    assert_eq!(adj.len(), n_left);
    let mut right_match: Vec<Option<usize>> = vec![None; n_right];
    for l in 0..n_left {
        let mut visited = vec![false; n_right];
        try_augment(adj, l, &mut visited, &mut right_match);
    }
    let mut left_match = vec![None; n_left];
    for (r, l) in right_match.iter().enumerate() {
        if let Some(l) = l {
            left_match[*l] = Some(r);
        }
    }
    Matching {
        right_match,
        left_match,
    }
}

/// When some left vertex is unmatched, the set of left vertices reachable
/// from it by alternating paths is a Hall witness: its neighborhood is
/// exactly the matched right vertices of the other members, so it is
/// deficient by one.
pub fn hall_witness(adj: &[Vec<usize>], matching: &Matching) -> Option<Vec<usize>> {
    let unmatched = matching.left_match.iter().position(|m| m.is_none())?;
    let mut left_seen = vec![false; adj.len()];
    let mut right_seen = vec![false; matching.right_match.len()];
    let mut stack = vec![unmatched];
    left_seen[unmatched] = true;
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if right_seen[r] {
                continue;
            }
            right_seen[r] = true;
            if let Some(l2) = matching.right_match[r] {
                if !left_seen[l2] {
                    left_seen[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    Some(
        left_seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(l, _)| l)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive maximum matching by recursion, as an independent oracle.
    fn brute_max_matching(adj: &[Vec<usize>], l: usize, used: &mut Vec<bool>) -> usize {
        if l == adj.len() {
            return 0;
        }
        let mut best = brute_max_matching(adj, l + 1, used);
        for &r in &adj[l] {
            if !used[r] {
                used[r] = true;
                best = best.max(1 + brute_max_matching(adj, l + 1, used));
                used[r] = false;
            }
        }
        best
    }

    #[test]
    fn simple_instances() {
        let adj = vec![vec![0], vec![1], vec![2]];
        assert_eq!(maximum_matching(3, 3, &adj).size(), 3);

        let adj = vec![vec![0], vec![0], vec![0]];
        let m = maximum_matching(3, 1, &adj);
        assert_eq!(m.size(), 1);
        let witness = hall_witness(&adj, &m).unwrap();
        assert!(witness.len() >= 2);
    }

    #[test]
    fn saturating_instance_has_no_witness() {
        let adj = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let m = maximum_matching(3, 3, &adj);
        assert_eq!(m.size(), 3);
        assert!(hall_witness(&adj, &m).is_none());
    }

    #[test]
    fn witness_is_deficient() {
        // Left {0,1,2} all confined to rights {0,1}: any witness S has
        // |N(S)| < |S|.
        let adj = vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![2, 3]];
        let m = maximum_matching(4, 4, &adj);
        assert_eq!(m.size(), 3);
        let witness = hall_witness(&adj, &m).unwrap();
        let mut nbhd: Vec<usize> = witness.iter().flat_map(|&l| adj[l].clone()).collect();
        nbhd.sort_unstable();
        nbhd.dedup();
        assert!(nbhd.len() < witness.len());
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n_left = rng.random_range(1..7usize);
            let n_right = rng.random_range(1..7usize);
            let adj: Vec<Vec<usize>> = (0..n_left)
                .map(|_| {
                    (0..n_right)
                        .filter(|_| rng.random_bool(0.4))
                        .collect::<Vec<usize>>()
                })
                .collect();
            let fast = maximum_matching(n_left, n_right, &adj).size();
            let brute = brute_max_matching(&adj, 0, &mut vec![false; n_right]);
            assert_eq!(fast, brute);
        }
    }
}
