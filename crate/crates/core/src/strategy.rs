//! Weight-ledger robber strategies for undirected graphs: the
//! minimum-degree version and its growth generalization.
//!
//! Both strategies track a per-cop weight ledger in exact rational
//! arithmetic. Cops near the robber whose (unique, by the girth condition)
//! geodesic enters through a designated direction are charged a weight that
//! grows as they approach; the robber always leaves through the direction
//! of least total weight. Every inequality the induction relies on is
//! audited at runtime and counted in the outcome, so a simulation doubles
//! as a machine check of the ledger argument on the given instance.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::adversary::CopController;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::{
    big_rational_from_u64, cop_budget, damped_branching, rational_pow, rational_str,
};

/// Parameters of a ledger strategy run.
#[derive(Debug, Clone)]
pub struct StrategyParams {
    /// Weight horizon.
    pub t: u32,
    /// Segment length; 1 for the degree version.
    pub h: u32,
    /// Branching: delta - 1 for the degree version, the growth parameter
    /// otherwise.
    pub q: u64,
    /// Damped branching (1 - 1/t) q, exact.
    pub r: BigRational,
    /// Cop budget floor(q^t / (e t)).
    pub k_budget: u64,
    /// Girth the argument requires: 4t+1 (degree) or 4h(t+1)-3 (growth).
    pub girth_required: u32,
    pub girth_actual: u32,
    /// False when constructed with `growth_relaxed` on a short-girth graph.
    pub girth_ok: bool,
    /// Growth variants use unit weights when t = 1.
    pub unit_weights: bool,
}

impl StrategyParams {
    /// Degree version: q = delta - 1, requires girth >= 4t+1 and (for
    /// t >= 2) minimum degree at least 3.
    pub fn degree(g: &Graph, t: u32) -> Result<StrategyParams> {
        if t < 1 {
            return Err(Error::invalid("t must be at least 1"));
        }
        let delta = g.min_degree();
        if t >= 2 && delta < 3 {
            return Err(Error::precondition(format!(
                "degree strategy with t={t} needs minimum degree 3, got {delta}"
            )));
        }
        if delta < 2 {
            return Err(Error::precondition("minimum degree must be at least 2"));
        }
        let girth_required = 4 * t + 1;
        let girth_actual = g
            .girth()
            .ok_or_else(|| Error::precondition("acyclic input"))?;
        if girth_actual < girth_required {
            return Err(Error::precondition(format!(
                "girth {girth_actual} below required {girth_required}"
            )));
        }
        let q = (delta - 1) as u64;
        Ok(Self::assemble(t, 1, q, girth_required, girth_actual, true))
    }

    /// Growth version: q = growth parameter at segment length h, requires
    /// girth >= 4h(t+1) - 3.
    pub fn growth(g: &Graph, h: u32, t: u32) -> Result<StrategyParams> {
        Self::growth_inner(g, h, t, true)
    }

    /// Growth version that tolerates a girth below the required bound; the
    /// run is audited rather than refused. Classification may become
    /// ambiguous on such inputs.
    pub fn growth_relaxed(g: &Graph, h: u32, t: u32) -> Result<StrategyParams> {
        Self::growth_inner(g, h, t, false)
    }

    fn growth_inner(g: &Graph, h: u32, t: u32, strict: bool) -> Result<StrategyParams> {
        if t < 1 || h < 1 {
            return Err(Error::invalid("t and h must be at least 1"));
        }
        let girth_required = 4 * h * (t + 1) - 3;
        let girth_actual = g
            .girth()
            .ok_or_else(|| Error::precondition("acyclic input"))?;
        let girth_ok = girth_actual >= girth_required;
        if strict && !girth_ok {
            return Err(Error::precondition(format!(
                "girth {girth_actual} below required {girth_required}"
            )));
        }
        let q = g.growth_parameter(h) as u64;
        if q == 0 {
            return Err(Error::precondition("graph has no growth at this h"));
        }
        let mut params = Self::assemble(t, h, q, girth_required, girth_actual, girth_ok);
        params.unit_weights = t == 1 && h > 1;
        Ok(params)
    }

    fn assemble(
        t: u32,
        h: u32,
        q: u64,
        girth_required: u32,
        girth_actual: u32,
        girth_ok: bool,
    ) -> StrategyParams {
        let r = damped_branching(q, t);
        let k_budget = cop_budget(q, t);
        let params = StrategyParams {
            t,
            h,
            q,
            r,
            k_budget,
            girth_required,
            girth_actual,
            girth_ok,
            unit_weights: false,
        };
        // K < q r^{t-1} / t, the opening inequality of the induction.
        if k_budget > 0 {
            let bound =
                big_rational_from_u64(q) * params.threshold() / BigRational::from_integer(t.into());
            debug_assert!(big_rational_from_u64(k_budget) < bound);
        }
        params
    }

    /// r^{t-1}, the safety threshold for class sums.
    pub fn threshold(&self) -> BigRational {
        rational_pow(&self.r, self.t - 1)
    }
}

/// Per-cop classification for one game state.
#[derive(Debug, Clone)]
pub struct WeightLedger {
    /// Designated direction targets (neighbors for h=1; h-sphere vertices
    /// otherwise), lowest ids first.
    pub candidates: Vec<u32>,
    /// Class index into `candidates`, or None for unclassified cops.
    pub class_of: Vec<Option<usize>>,
    /// Exact weight per cop.
    pub weights: Vec<BigRational>,
    /// W_i = k/q + sum of class-i weights.
    pub class_sums: Vec<BigRational>,
    /// Number of unclassified cops (the k in k/q).
    pub unclassified: usize,
    /// Total weight W.
    pub total: BigRational,
    /// Some cop matched several directions (possible only below the girth
    /// bound); classification took the lowest index.
    pub ambiguous: bool,
}

impl WeightLedger {
    /// argmin W_j with lowest-id tie-break, as (class index, target vertex).
    pub fn min_class(&self) -> (usize, u32) {
        let mut best = 0usize;
        for j in 1..self.class_sums.len() {
            if self.class_sums[j] < self.class_sums[best] {
                best = j;
            }
        }
        (best, self.candidates[best])
    }
}

/// Classifies cops for the degree version at robber vertex `v_s` with
/// previous vertex `v_prev`. Candidates are the q lowest-id neighbors of
/// `v_s` other than `v_prev`; when `all_neighbors` is set (t = 1 over-budget
/// play) every neighbor becomes a candidate.
pub fn classify_cops_degree(
    g: &Graph,
    v_s: u32,
    v_prev: u32,
    cops: &[u32],
    params: &StrategyParams,
    all_neighbors: bool,
) -> Result<WeightLedger> {
    let mut candidates: Vec<u32> = g
        .neighbors(v_s)
        .iter()
        .copied()
        .filter(|&u| all_neighbors || u != v_prev)
        .collect();
    if !all_neighbors {
        if (candidates.len() as u64) < params.q {
            return Err(Error::precondition(format!(
                "vertex {v_s} has fewer than q={} usable neighbors",
                params.q
            )));
        }
        candidates.truncate(params.q as usize);
    }
    classify(g, v_s, cops, params, candidates, 1)
}

/// Classifies cops for the growth version: candidates live at distance
/// exactly h from `v_s` and at least h from `y_s`.
pub fn classify_cops_growth(
    g: &Graph,
    v_s: u32,
    y_s: u32,
    cops: &[u32],
    params: &StrategyParams,
) -> Result<WeightLedger> {
    let h = params.h;
    let dv = g.bfs_row(v_s);
    let dy = g.bfs_row(y_s);
    let mut candidates: Vec<u32> = (0..g.n() as u32)
        .filter(|&u| dv[u as usize] == h && dy[u as usize] >= h)
        .collect();
    if (candidates.len() as u64) < params.q {
        return Err(Error::precondition(format!(
            "vertex {v_s} has fewer than q={} growth targets",
            params.q
        )));
    }
    candidates.truncate(params.q as usize);
    classify(g, v_s, cops, params, candidates, h)
}

fn classify(
    g: &Graph,
    v_s: u32,
    cops: &[u32],
    params: &StrategyParams,
    candidates: Vec<u32>,
    h: u32,
) -> Result<WeightLedger> {
    let radius = 2 * h * (params.t + 1) - 2; // equals 2t for h = 1
    let dv = g.bfs_row(v_s);
    let one = BigRational::one();

    let mut class_of = vec![None; cops.len()];
    let mut weights = vec![one.clone(); cops.len()];
    let mut ambiguous = false;
    for (ci, &c) in cops.iter().enumerate() {
        let rho = dv[c as usize];
        if rho < h || rho > radius {
            continue; // unclassified; rho = 0 is capture, handled by caller
        }
        let dc = g.bfs_row(c);
        let mut matches = candidates
            .iter()
            .enumerate()
            .filter(|&(_, &u)| dc[u as usize] == rho - h);
        let first = matches.next();
        if matches.next().is_some() {
            ambiguous = true;
        }
        if let Some((j, _)) = first {
            class_of[ci] = Some(j);
            let exponent = if params.unit_weights {
                0
            } else if h == 1 {
                params.t - rho.div_ceil(2)
            } else {
                params.t + 1 - (rho + 2).div_ceil(2 * h)
            };
            weights[ci] = rational_pow(&params.r, exponent);
        }
    }

    let unclassified = class_of.iter().filter(|c| c.is_none()).count();
    let share = big_rational_from_u64(unclassified as u64) / big_rational_from_u64(params.q);
    let mut class_sums = vec![share; candidates.len()];
    let mut total = num_traits::Zero::zero();
    for (ci, class) in class_of.iter().enumerate() {
        total += &weights[ci];
        if let Some(j) = class {
            class_sums[*j] += &weights[ci];
        }
    }
    // W must equal the sum of the class sums exactly (the unclassified
    // share splits evenly across exactly q classes; the t = 1 all-neighbor
    // mode may designate more).
    debug_assert!(
        candidates.len() as u64 != params.q
            || total
                == class_sums
                    .iter()
                    .fold(BigRational::from_integer(0.into()), |a, b| a + b)
    );
    Ok(WeightLedger {
        candidates,
        class_of,
        weights,
        class_sums,
        unclassified,
        total,
        ambiguous,
    })
}

/// Chooses the robber's direction: argmin W_j, lowest id on ties. Returns
/// the class index, the target vertex, and whether the safety predicate
/// W_j < r^{t-1} held.
pub fn robber_step(ledger: &WeightLedger, params: &StrategyParams) -> (usize, u32, bool) {
    let (j, target) = ledger.min_class();
    let safe = ledger.class_sums[j] < params.threshold();
    (j, target, safe)
}

/// One audited row of a simulation trace.
#[derive(Debug, Clone, Serialize)]
pub struct StateRow {
    pub state: usize,
    pub v_s: u32,
    /// Chosen target (None when the t=1 stay rule applied).
    pub chosen: Option<u32>,
    pub w_total: String,
    pub w_min: String,
    pub w_max: String,
    pub safety_ok: bool,
}

/// Counters for every audited inequality; a theorem-regime run must end
/// with all of them zero.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ViolationCounts {
    /// W < q r^{t-1} failed at a state boundary.
    pub ledger_bound: usize,
    /// W' <= r W_j + #cops failed across a transition.
    pub contraction: usize,
    /// A cop leaving the chosen class kept a weight above 1.
    pub class_exit_reset: usize,
    /// W_j < r^{t-1} but a cop sat in the forbidden zone around the target.
    pub safety: usize,
    /// The growth state invariant (no cop within 2h-2 except behind y_s)
    /// failed at a state boundary.
    pub state_invariant: usize,
    /// A cop qualified for more than one direction class.
    pub ambiguous_classification: usize,
    /// The averaging guarantee W_j / d_j <= Z failed at some step
    /// (digraph growth strategy only).
    pub averaging: usize,
}

impl ViolationCounts {
    pub fn total(&self) -> usize {
        self.ledger_bound
            + self.contraction
            + self.class_exit_reset
            + self.safety
            + self.state_invariant
            + self.ambiguous_classification
            + self.averaging
    }
}

#[derive(Debug, Serialize)]
pub struct EvasionOutcome {
    pub survived: bool,
    /// Completed robber states.
    pub rounds: usize,
    /// Round at which capture happened, when it did.
    pub captured_at: Option<usize>,
    pub cop_count: usize,
    pub bound_k: u64,
    /// Whether the run stayed within the ledger budget K; audits are
    /// meaningful either way but only budgeted runs are theorem regime.
    pub within_budget: bool,
    pub violations: ViolationCounts,
    #[serde(skip)]
    pub trace: Vec<StateRow>,
}

/// Plays the degree-version weight strategy from the single-stack opening
/// (all cops on one vertex, robber adjacent) against `cops` for up to
/// `max_rounds` robber states.
pub fn simulate_evasion_degree<C: CopController<Graph> + ?Sized>(
    g: &Graph,
    controller: &mut C,
    params: &StrategyParams,
    cop_count: usize,
    max_rounds: usize,
) -> Result<EvasionOutcome> {
    if params.h != 1 {
        return Err(Error::invalid("degree simulation requires h = 1"));
    }
    let allowed = if params.t == 1 {
        params.q // the neighbor-count argument tolerates delta - 1 cops
    } else {
        params.k_budget
    };
    if cop_count as u64 > allowed && params.t >= 2 && cop_count as u64 > params.k_budget {
        // Over-budget runs are permitted for experimentation; they are
        // simply flagged as outside the theorem regime below.
    }
    if !g.is_connected() {
        return Err(Error::precondition("evasion requires a connected graph"));
    }

    let v0 = controller.place(g, cop_count);
    let mut cops = vec![v0; cop_count];
    let v1 = *g
        .neighbors(v0)
        .first()
        .ok_or_else(|| Error::precondition("cop start vertex is isolated"))?;
    let mut v_s = v1;
    let mut v_prev = v0;

    let mut outcome = EvasionOutcome {
        survived: true,
        rounds: 0,
        captured_at: None,
        cop_count,
        bound_k: params.k_budget,
        within_budget: cop_count as u64 <= params.k_budget,
        violations: ViolationCounts::default(),
        trace: Vec::new(),
    };
    let threshold = params.threshold();
    let ledger_cap = big_rational_from_u64(params.q) * &threshold;
    // The t = 1 over-budget mode follows the neighbor-count argument: all
    // neighbors are candidates and the robber stays when unthreatened.
    let af_mode = params.t == 1 && cop_count as u64 > params.k_budget;

    let mut prev_ledger: Option<(WeightLedger, usize)> = None;
    for state in 1..=max_rounds {
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        let ledger = classify_cops_degree(g, v_s, v_prev, &cops, params, af_mode)?;
        if ledger.ambiguous {
            outcome.violations.ambiguous_classification += 1;
        }
        if ledger.total >= ledger_cap {
            outcome.violations.ledger_bound += 1;
        }
        // Cross-transition audits against the previous state's ledger.
        if let Some((old, j_old)) = &prev_ledger {
            let bound =
                &params.r * &old.class_sums[*j_old] + big_rational_from_u64(cop_count as u64);
            if ledger.total > bound {
                outcome.violations.contraction += 1;
            }
            for (ci, class) in old.class_of.iter().enumerate() {
                if let Some(jo) = class {
                    if jo != j_old && !ledger.weights[ci].is_one() {
                        outcome.violations.class_exit_reset += 1;
                    }
                }
            }
        }

        let (j, target, safe) = robber_step(&ledger, params);
        // Safety: a sub-threshold class sum must mean a cop-free closed
        // neighborhood around the target.
        if safe {
            let guarded = cops.iter().any(|&c| c == target || g.has_edge(c, target));
            if guarded {
                outcome.violations.safety += 1;
            }
        }

        let threatened = cops.iter().any(|&c| c == v_s || g.has_edge(c, v_s));
        let stay = af_mode && !threatened;
        let chosen = if stay { None } else { Some(target) };
        outcome.trace.push(StateRow {
            state,
            v_s,
            chosen,
            w_total: rational_str(&ledger.total),
            w_min: rational_str(&ledger.class_sums[j]),
            w_max: rational_str(ledger.class_sums.iter().max().expect("at least one class")),
            safety_ok: !safe || !cops.iter().any(|&c| c == target || g.has_edge(c, target)),
        });

        if !stay {
            v_prev = v_s;
            v_s = target;
        }
        outcome.rounds = state;
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        cops = apply_cop_moves(g, controller, &cops, v_s)?;
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        prev_ledger = if stay { None } else { Some((ledger, j)) };
    }
    Ok(outcome)
}

/// Plays the growth-version strategy: each state commits to a geodesic
/// segment of length h toward the least-weight target, with the cops
/// moving after every robber step.
pub fn simulate_evasion_growth<C: CopController<Graph> + ?Sized>(
    g: &Graph,
    controller: &mut C,
    params: &StrategyParams,
    cop_count: usize,
    max_rounds: usize,
) -> Result<EvasionOutcome> {
    if !g.is_connected() {
        return Err(Error::precondition("evasion requires a connected graph"));
    }
    let h = params.h;
    let v0 = controller.place(g, cop_count);
    let mut cops = vec![v0; cop_count];
    let v1 = *g
        .neighbors(v0)
        .first()
        .ok_or_else(|| Error::precondition("cop start vertex is isolated"))?;
    let mut v_s = v1;
    let mut y_s = v0;

    let mut outcome = EvasionOutcome {
        survived: true,
        rounds: 0,
        captured_at: None,
        cop_count,
        bound_k: params.k_budget,
        within_budget: cop_count as u64 <= params.k_budget,
        violations: ViolationCounts::default(),
        trace: Vec::new(),
    };
    let threshold = params.threshold();
    let ledger_cap = big_rational_from_u64(params.q) * &threshold;

    let mut prev_ledger: Option<(WeightLedger, usize)> = None;
    'states: for state in 1..=max_rounds {
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        // State invariant: no cop within 2h-2 of the robber except behind
        // y_s (its unique geodesic to the robber passes through y_s).
        let dv = g.bfs_row(v_s);
        let dy = g.bfs_row(y_s);
        for &c in &cops {
            let rho = dv[c as usize];
            if rho >= 1 && rho <= 2 * h - 2 && dy[c as usize] + 1 != rho {
                outcome.violations.state_invariant += 1;
            }
        }

        let ledger = classify_cops_growth(g, v_s, y_s, &cops, params)?;
        if ledger.ambiguous {
            outcome.violations.ambiguous_classification += 1;
        }
        if ledger.total >= ledger_cap {
            outcome.violations.ledger_bound += 1;
        }
        if let Some((old, j_old)) = &prev_ledger {
            let bound =
                &params.r * &old.class_sums[*j_old] + big_rational_from_u64(cop_count as u64);
            if ledger.total > bound {
                outcome.violations.contraction += 1;
            }
            for (ci, class) in old.class_of.iter().enumerate() {
                if let Some(jo) = class {
                    if jo != j_old && !ledger.weights[ci].is_one() {
                        outcome.violations.class_exit_reset += 1;
                    }
                }
            }
        }

        let (j, target, safe) = robber_step(&ledger, params);
        if safe {
            // Sub-threshold class: no classified cop of that class may sit
            // within 4h-2 of the robber.
            let breach = cops
                .iter()
                .enumerate()
                .any(|(ci, &c)| ledger.class_of[ci] == Some(j) && dv[c as usize] <= 4 * h - 2);
            if breach {
                outcome.violations.safety += 1;
            }
        }
        outcome.trace.push(StateRow {
            state,
            v_s,
            chosen: Some(target),
            w_total: rational_str(&ledger.total),
            w_min: rational_str(&ledger.class_sums[j]),
            w_max: rational_str(ledger.class_sums.iter().max().expect("at least one class")),
            safety_ok: true,
        });

        // Walk the fixed geodesic segment, cops replying to each step.
        let path = geodesic_segment(g, v_s, target, h)?;
        debug_assert!(!path.contains(&y_s));
        let mut current = v_s;
        for &next in &path {
            debug_assert!(g.has_edge(current, next));
            current = next;
            outcome.rounds = state;
            if cops.contains(&current) {
                outcome.survived = false;
                outcome.captured_at = Some(state);
                break 'states;
            }
            cops = apply_cop_moves(g, controller, &cops, current)?;
            if cops.contains(&current) {
                outcome.survived = false;
                outcome.captured_at = Some(state);
                break 'states;
            }
        }
        y_s = if h == 1 { v_s } else { path[h as usize - 2] };
        v_s = current;
        prev_ledger = Some((ledger, j));
    }
    Ok(outcome)
}

/// The geodesic from `from` to `to` (length h), excluding `from`,
/// reconstructed by distance descent with lowest-id tie-breaks.
fn geodesic_segment(g: &Graph, from: u32, to: u32, h: u32) -> Result<Vec<u32>> {
    let dt = g.bfs_row(to);
    if dt[from as usize] != h {
        return Err(Error::internal("target not at segment distance"));
    }
    let mut path = Vec::with_capacity(h as usize);
    let mut current = from;
    for step in 0..h {
        let remaining = h - step;
        let next = g
            .neighbors(current)
            .iter()
            .copied()
            .find(|&w| dt[w as usize] == remaining - 1)
            .ok_or_else(|| Error::internal("geodesic descent failed"))?;
        path.push(next);
        current = next;
    }
    Ok(path)
}

fn apply_cop_moves<C: CopController<Graph> + ?Sized>(
    g: &Graph,
    controller: &mut C,
    cops: &[u32],
    robber: u32,
) -> Result<Vec<u32>> {
    let moved = controller.decide(g, cops, robber);
    if moved.len() != cops.len() {
        return Err(Error::AdversaryFault(format!(
            "controller returned {} positions for {} cops",
            moved.len(),
            cops.len()
        )));
    }
    for (&old, &new) in cops.iter().zip(&moved) {
        if new != old && !g.has_edge(old, new) {
            return Err(Error::AdversaryFault(format!(
                "illegal cop move {old} -> {new}"
            )));
        }
    }
    Ok(moved)
}
