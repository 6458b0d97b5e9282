//! Vertex-expansion toolkit: brute-force h_gamma, the edge-isoperimetric
//! number, the ball-growth inequality, Tanner's neighbor bound for regular
//! bipartite graphs, the spectral lower bound on h_gamma, and the derived
//! cop-number exponents.
//!
//! Brute-force minima are exact rationals over full subset enumeration and
//! refuse inputs beyond their size caps rather than sampling silently. The
//! spectral route reports two objects: the certified finite-n profile
//! derived from Tanner's bound at lambda = lambda2^2, and the asymptotic
//! figure (d/lambda2)^2 - 1, which is informational only.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, INF};
use crate::spectral::SpectralReport;
use crate::util::{big_rational_from_u64, rational_from_f64, rational_str, rational_to_f64};

const SUBSET_CAP: usize = 24;

/// Largest subset size allowed by |S| <= n^{1-gamma}.
pub fn size_cap(n: usize, gamma: f64) -> usize {
    if !(0.0..1.0).contains(&gamma) || gamma == 0.0 {
        return n;
    }
    let cap = (n as f64).powf(1.0 - gamma) + 1e-9;
    (cap.floor() as usize).min(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpansionMethod {
    Brute,
    Spectral,
}

/// A certified lower bound on |dS|/|S| over sets of bounded size.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionProfile {
    pub gamma: f64,
    /// Certified lower bound on the vertex-boundary ratio.
    pub epsilon: f64,
    /// Exact value when brute-forced, as `num/den`.
    pub exact: Option<String>,
    pub method: ExpansionMethod,
    pub size_cap: usize,
}

/// Vertices outside `S` with a neighbor in `S`.
pub fn vertex_boundary(g: &Graph, set: &[u32]) -> Vec<u32> {
    let mut in_set = vec![false; g.n()];
    for &v in set {
        in_set[v as usize] = true;
    }
    let mut out = Vec::new();
    for v in 0..g.n() as u32 {
        if in_set[v as usize] {
            continue;
        }
        if g.neighbors(v).iter().any(|&w| in_set[w as usize]) {
            out.push(v);
        }
    }
    out
}

/// Edges with exactly one endpoint in `S`.
pub fn edge_boundary_size(g: &Graph, set: &[u32]) -> usize {
    let mut in_set = vec![false; g.n()];
    for &v in set {
        in_set[v as usize] = true;
    }
    let mut count = 0;
    for v in 0..g.n() as u32 {
        if !in_set[v as usize] {
            continue;
        }
        count += g
            .neighbors(v)
            .iter()
            .filter(|&&w| !in_set[w as usize])
            .count();
    }
    count
}

fn enumerate_subsets_of_size(n: usize, size: usize, mut f: impl FnMut(&[u32])) {
    let mut subset: Vec<u32> = (0..size as u32).collect();
    loop {
        f(&subset);
        // Next combination in lexicographic order.
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] < (n - size + i) as u32 {
                subset[i] += 1;
                for j in i + 1..size {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact h_gamma by enumeration of all nonempty S with |S| <= n^{1-gamma}.
pub fn h_gamma_bruteforce(g: &Graph, gamma: f64) -> Result<ExpansionProfile> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::invalid("gamma must lie in (0,1)"));
    }
    if g.n() > SUBSET_CAP {
        return Err(Error::Resource {
            what: "h_gamma subset enumeration".into(),
            required: g.n() as u128,
            budget: SUBSET_CAP as u128,
        });
    }
    let cap = size_cap(g.n(), gamma);
    let mut best: Option<BigRational> = None;
    for size in 1..=cap {
        enumerate_subsets_of_size(g.n(), size, |subset| {
            let ratio = BigRational::new(
                (vertex_boundary(g, subset).len() as u64).into(),
                (size as u64).into(),
            );
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        });
    }
    let exact = best.ok_or_else(|| Error::invalid("empty graph"))?;
    Ok(ExpansionProfile {
        gamma,
        epsilon: rational_to_f64(&exact),
        exact: Some(rational_str(&exact)),
        method: ExpansionMethod::Brute,
        size_cap: cap,
    })
}

/// Exact edge-isoperimetric number min |dS|/|S| over 0 < |S| <= n/2.
pub fn isoperimetric_number(g: &Graph) -> Result<BigRational> {
    if g.n() > SUBSET_CAP {
        return Err(Error::Resource {
            what: "isoperimetric subset enumeration".into(),
            required: g.n() as u128,
            budget: SUBSET_CAP as u128,
        });
    }
    if g.n() < 2 {
        return Err(Error::invalid("graph too small"));
    }
    let mut best: Option<BigRational> = None;
    for size in 1..=g.n() / 2 {
        enumerate_subsets_of_size(g.n(), size, |subset| {
            let ratio = BigRational::new(
                (edge_boundary_size(g, subset) as u64).into(),
                (size as u64).into(),
            );
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        });
    }
    Ok(best.expect("n >= 2 has nonempty sizes"))
}

#[derive(Debug, Clone, Serialize)]
pub struct BallGrowthReport {
    pub checked_sets: usize,
    pub violations: Vec<String>,
}

impl BallGrowthReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies |B_r'(S)| >= min(n^{1-gamma}, |S| (1+eps)^{r'}) for every r' <= r
/// over a set family: exhaustive when n <= 18, otherwise all singletons,
/// all edges, and `samples` random sets of size <= 4.
pub fn check_ball_growth(
    g: &Graph,
    gamma: f64,
    epsilon: &BigRational,
    r: u32,
    samples: u64,
) -> Result<BallGrowthReport> {
    if epsilon.is_negative() {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    let mut sets: Vec<Vec<u32>> = Vec::new();
    if g.n() <= 18 {
        for size in 1..=g.n() {
            enumerate_subsets_of_size(g.n(), size, |s| sets.push(s.to_vec()));
        }
    } else {
        for v in 0..g.n() as u32 {
            sets.push(vec![v]);
        }
        for v in 0..g.n() as u32 {
            for &w in g.neighbors(v) {
                if v < w {
                    sets.push(vec![v, w]);
                }
            }
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(samples);
        for _ in 0..samples {
            let size = rng.random_range(1..=4usize);
            let mut s: Vec<u32> = (0..size)
                .map(|_| rng.random_range(0..g.n() as u32))
                .collect();
            s.sort_unstable();
            s.dedup();
            sets.push(s);
        }
    }

    let cap_size = size_cap(g.n(), gamma);
    let cap = big_rational_from_u64(cap_size as u64);
    let mut report = BallGrowthReport {
        checked_sets: sets.len(),
        violations: Vec::new(),
    };
    for set in &sets {
        let dist = crate::graph::bfs(g.adjacency(), set);
        let mut counts = vec![0u64; (r + 2) as usize];
        for &d in &dist {
            if d != INF && d <= r {
                counts[d as usize] += 1;
            }
        }
        let mut ball = 0u64;
        let mut growth = big_rational_from_u64(set.len() as u64);
        let one_plus_eps = BigRational::one() + epsilon;
        for rr in 0..=r {
            ball += counts[rr as usize];
            // min(n^{1-gamma}, |S| (1+eps)^r): compare against the integer
            // size cap, which floor-matches the real bound for integer
            // sizes.
            let bound = growth.clone().min(cap.clone());
            if big_rational_from_u64(ball) < bound {
                report.violations.push(format!(
                    "|B_{rr}(S)| = {ball} < {} for |S| = {}",
                    rational_str(&bound),
                    set.len()
                ));
            }
            growth *= &one_plus_eps;
        }
    }
    Ok(report)
}

/// Tanner's bound f(s) = d^2 s / (lambda + 2 (d^2 - lambda) s / n),
/// evaluated exactly.
pub fn tanner_bound(d: u64, lambda: &BigRational, n: u64, s: u64) -> Result<BigRational> {
    if d < 1 {
        return Err(Error::invalid("degree must be positive"));
    }
    if lambda <= &BigRational::zero() {
        return Err(Error::invalid("lambda must be positive"));
    }
    let d2 = big_rational_from_u64(d * d);
    if lambda > &d2 {
        return Err(Error::invalid("lambda exceeds d^2"));
    }
    if s < 1 || 2 * s > n {
        return Err(Error::invalid("s must satisfy 1 <= s <= n/2"));
    }
    let s_big = big_rational_from_u64(s);
    let n_big = big_rational_from_u64(n);
    let numer = &d2 * &s_big;
    let denom = lambda + (&d2 - lambda) * big_rational_from_u64(2) * &s_big / &n_big;
    Ok(numer / denom)
}

/// One entry of the certified h_gamma profile: sets of size up to `s` have
/// vertex-boundary ratio at least `bound`.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileEntry {
    pub size: u64,
    pub bound: f64,
    pub bound_exact: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralExpansionBound {
    pub gamma: f64,
    /// Asymptotic figure (d/lambda2)^2 - 1; not certified at finite n.
    pub limit: f64,
    /// Certified finite-n bound: the minimum profile entry, clamped at 0.
    pub certified: f64,
    pub profile: Vec<ProfileEntry>,
    /// lambda2 = 0 saturates Tanner's bound (complete bipartite case).
    pub saturated: bool,
}

/// The finite-n certified form of the spectral lower bound on h_gamma for
/// connected d-regular bipartite graphs: for |S| <= n^{1-gamma},
/// |dS| >= f(|S cap X|) + f(|S cap Y|) - |S| with f from Tanner's bound at
/// lambda = lambda2^2. Concavity puts the minimum at the one-sided split,
/// so the profile entry at size s is f(s)/s - 1.
pub fn spectral_hgamma_bound(
    g: &Graph,
    rep: &SpectralReport,
    gamma: f64,
) -> Result<SpectralExpansionBound> {
    if g.bipartition().is_none() {
        return Err(Error::precondition(
            "spectral bound requires bipartite input",
        ));
    }
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::invalid("gamma must lie in (0,1)"));
    }
    let d = rep.d as u64;
    let n = rep.n as u64;
    // Conservative lambda: the residual certificate bounds the distance to
    // a true eigenvalue, so widen upward before squaring.
    let lambda2 = (rep.lambda2 + rep.residual).max(0.0);
    let limit = if lambda2 > 0.0 {
        (rep.d as f64 / lambda2).powi(2) - 1.0
    } else {
        f64::INFINITY
    };
    if lambda2 < 1e-9 {
        return Ok(SpectralExpansionBound {
            gamma,
            limit,
            certified: rep.d as f64 - 1.0,
            profile: Vec::new(),
            saturated: true,
        });
    }
    let lambda =
        rational_from_f64(lambda2 * lambda2).ok_or_else(|| Error::invalid("lambda2 not finite"))?;
    let cap = size_cap(rep.n, gamma).min(rep.n / 2);
    let mut profile = Vec::with_capacity(cap);
    let mut certified: Option<BigRational> = None;
    for s in 1..=cap as u64 {
        let f = tanner_bound(d, &lambda, n, s)?;
        let bound = f / big_rational_from_u64(s) - BigRational::one();
        if certified.as_ref().is_none_or(|c| bound < *c) {
            certified = Some(bound.clone());
        }
        profile.push(ProfileEntry {
            size: s,
            bound: rational_to_f64(&bound),
            bound_exact: rational_str(&bound),
        });
    }
    let certified = certified
        .map(|c| rational_to_f64(&c).max(0.0))
        .unwrap_or(0.0);
    Ok(SpectralExpansionBound {
        gamma,
        limit,
        certified,
        profile,
        saturated: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeynielExponents {
    pub delta: u64,
    pub epsilon: f64,
    /// 1 - (1/2) log_{Delta-1}(1 + eps), for vertex expansion eps.
    pub vertex_expansion_exponent: f64,
    /// 1 - (1/2) log_{Delta-1}(1 + eps/Delta), for edge expansion eps
    /// (routed through the boundary bridge |dS| >= |dS|_edges / Delta).
    pub edge_expansion_exponent: f64,
}

/// Cop-number exponents implied by expansion at maximum degree Delta.
pub fn weak_meyniel_exponent(delta: u64, epsilon: f64) -> Result<MeynielExponents> {
    if delta < 3 {
        return Err(Error::invalid("maximum degree must be at least 3"));
    }
    if !(epsilon > 0.0 && epsilon <= (delta - 2) as f64) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, {}]",
            delta - 2
        )));
    }
    let base = (delta - 1) as f64;
    let vertex = 1.0 - 0.5 * (1.0 + epsilon).ln() / base.ln();
    let edge = 1.0 - 0.5 * (1.0 + epsilon / delta as f64).ln() / base.ln();
    Ok(MeynielExponents {
        delta,
        epsilon,
        vertex_expansion_exponent: vertex,
        edge_expansion_exponent: edge,
    })
}
