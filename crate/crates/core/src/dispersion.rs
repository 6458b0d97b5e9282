//! Traps, trap distance, dispersion certification, and the digraph robber
//! strategies.
//!
//! A (v,u)-trap is a pair of internally disjoint directed geodesics P: v->x
//! (at least one arc) and Q: u->x with ||Q|| <= ||P||; x is its tip and
//! ||P|| its length. The trap distance rho*(v,u) is the least trap length,
//! equivalently the least rho with S_rho(v) meeting B_rho(u). A digraph is
//! t-dispersed when no ordered pair carries two internally disjoint traps
//! of length <= t and no arc uv admits a (v,u)-trap of length <= t.
//!
//! Digons make the literal reading vacuous: the reverse arc of a digon is
//! itself a length-1 trap for the second condition. The digon exception
//! (default on) excludes exactly that degenerate trap, which restores the
//! intended behavior on bidirected graphs; a flag exposes the literal
//! reading.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::adversary::CopController;
use crate::error::{Error, Result};
use crate::graph::{Digraph, INF};
use crate::strategy::{EvasionOutcome, StateRow, ViolationCounts};
use crate::util::{
    big_rational_from_u64, cop_budget, damped_branching, rational_pow, rational_str,
};

const DEFAULT_TRAP_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct Trap {
    pub v: u32,
    pub u: u32,
    /// Geodesic v -> tip, inclusive of both endpoints.
    pub path_p: Vec<u32>,
    /// Geodesic u -> tip, inclusive; a single vertex when u is the tip.
    pub path_q: Vec<u32>,
    pub tip: u32,
    pub length: u32,
}

impl Trap {
    /// Re-validates every defining property against the digraph.
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        let fail = |msg: &str| Err(Error::internal(format!("invalid trap: {msg}")));
        if self.path_p.len() < 2 {
            return fail("P must have at least one arc");
        }
        if self.path_p.first() != Some(&self.v) || self.path_p.last() != Some(&self.tip) {
            return fail("P endpoints");
        }
        if self.path_q.first() != Some(&self.u) || self.path_q.last() != Some(&self.tip) {
            return fail("Q endpoints");
        }
        if self.path_q.len() > self.path_p.len() {
            return fail("Q longer than P");
        }
        if self.length as usize != self.path_p.len() - 1 {
            return fail("length mismatch");
        }
        if self.v == self.u && (self.path_p.len() < 3 || self.path_q.len() < 3) {
            return fail("u = v requires both paths to have two arcs");
        }
        for (path, src) in [(&self.path_p, self.v), (&self.path_q, self.u)] {
            for pair in path.windows(2) {
                if !d.has_arc(pair[0], pair[1]) {
                    return fail("missing arc");
                }
            }
            if d.dist(src, self.tip) != (path.len() - 1) as u32 {
                return fail("path not geodesic");
            }
        }
        // Internal disjointness: shared vertices may only be the tip, plus
        // the common start when u = v.
        for &a in &self.path_p {
            for &b in &self.path_q {
                if a == b && a != self.tip && !(self.v == self.u && a == self.v) {
                    return fail("paths share an internal vertex");
                }
            }
        }
        Ok(())
    }
}

/// Trap distance rho*(v,u): least rho with S_rho(v) and B_rho(u)
/// intersecting (v != u), or the least (v,v)-trap length when v = u.
/// `None` when no trap exists.
pub fn trap_distance(d: &Digraph, v: u32, u: u32) -> Option<u32> {
    if v != u {
        let dv = d.bfs_row(v);
        let du = d.bfs_row(u);
        (0..d.n())
            .filter(|&x| dv[x] != INF && du[x] != INF && du[x] <= dv[x] && dv[x] >= 1)
            .map(|x| dv[x])
            .min()
    } else {
        // Minimum over tips with two internally disjoint geodesics from v.
        let dv = d.bfs_row(v);
        (0..d.n() as u32)
            .filter(|&x| {
                let l = dv[x as usize];
                l >= 2 && l != INF && disjoint_geodesic_pair_exists(d, v, v, x, usize::MAX)
            })
            .map(|x| dv[x as usize])
            .min()
    }
}

/// All geodesics from `src` to `dst`, each as a vertex path.
fn enumerate_geodesics(
    d: &Digraph,
    src: u32,
    dst: u32,
    budget: &mut usize,
) -> Result<Vec<Vec<u32>>> {
    let dist = d.dist(src, dst);
    if dist == INF {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut path = vec![src];
    descend(d, dst, dist, &mut path, &mut out, budget)?;
    Ok(out)
}

fn descend(
    d: &Digraph,
    dst: u32,
    remaining: u32,
    path: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    budget: &mut usize,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::Resource {
            what: "geodesic enumeration".into(),
            required: DEFAULT_TRAP_BUDGET as u128 + 1,
            budget: DEFAULT_TRAP_BUDGET as u128,
        });
    }
    *budget -= 1;
    let cur = *path.last().unwrap();
    if remaining == 0 {
        out.push(path.clone());
        return Ok(());
    }
    for &w in d.out_neighbors(cur) {
        if d.dist(w, dst) == remaining - 1 {
            path.push(w);
            descend(d, dst, remaining - 1, path, out, budget)?;
            path.pop();
        }
    }
    Ok(())
}

fn paths_internally_disjoint(p: &[u32], q: &[u32], v: u32, u: u32, tip: u32) -> bool {
    for &a in p {
        for &b in q {
            if a == b && a != tip && !(v == u && a == v) {
                return false;
            }
        }
    }
    true
}

fn disjoint_geodesic_pair_exists(d: &Digraph, v: u32, u: u32, tip: u32, cap: usize) -> bool {
    let mut budget = cap.min(DEFAULT_TRAP_BUDGET);
    let Ok(ps) = enumerate_geodesics(d, v, tip, &mut budget) else {
        return false;
    };
    let Ok(qs) = enumerate_geodesics(d, u, tip, &mut budget) else {
        return false;
    };
    for p in &ps {
        for q in &qs {
            if v == u && p == q {
                continue;
            }
            if paths_internally_disjoint(p, q, v, u, tip) {
                return true;
            }
        }
    }
    false
}

/// Exhaustively enumerates all (v,u)-traps of length at most `max_len`.
pub fn enumerate_traps(d: &Digraph, v: u32, u: u32, max_len: u32) -> Result<Vec<Trap>> {
    let dv = d.bfs_row(v);
    let du = d.bfs_row(u);
    let mut out = Vec::new();
    let mut budget = DEFAULT_TRAP_BUDGET;
    for x in 0..d.n() as u32 {
        let lp = dv[x as usize];
        let lq = du[x as usize];
        if lp == 0 || lp == INF || lp > max_len || lq == INF || lq > lp {
            continue;
        }
        if v == u && (lp < 2 || lq < 2) {
            continue;
        }
        let ps = enumerate_geodesics(d, v, x, &mut budget)?;
        let qs = enumerate_geodesics(d, u, x, &mut budget)?;
        for p in &ps {
            for q in &qs {
                if v == u && p == q {
                    continue;
                }
                if paths_internally_disjoint(p, q, v, u, x) {
                    out.push(Trap {
                        v,
                        u,
                        path_p: p.clone(),
                        path_q: q.clone(),
                        tip: x,
                        length: lp,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Dispersed,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertMethod {
    /// Pairwise exhaustive trap enumeration.
    Exhaustive,
    /// Underlying undirected girth at least 4t+1 with the digon exception.
    ByGirth,
}

#[derive(Debug, Clone, Serialize)]
pub enum DispersionWitness {
    /// Two internally disjoint traps for one ordered pair (condition 1).
    DisjointTraps { trap_a: Trap, trap_b: Trap },
    /// A trap against an existing arc u -> v (condition 2).
    EdgeTrap { trap: Trap },
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionCertificate {
    pub t: u32,
    pub verdict: Verdict,
    pub method: CertMethod,
    pub digon_exception: bool,
    pub witness: Option<DispersionWitness>,
}

impl DispersionCertificate {
    pub fn is_dispersed(&self) -> bool {
        self.verdict == Verdict::Dispersed
    }

    /// Re-validates the stored witness against the digraph.
    pub fn validate_witness(&self, d: &Digraph) -> Result<()> {
        match &self.witness {
            None => Ok(()),
            Some(DispersionWitness::EdgeTrap { trap }) => {
                trap.validate(d)?;
                if !d.has_arc(trap.u, trap.v) {
                    return Err(Error::internal("edge witness without the arc"));
                }
                Ok(())
            }
            Some(DispersionWitness::DisjointTraps { trap_a, trap_b }) => {
                trap_a.validate(d)?;
                trap_b.validate(d)?;
                if trap_a.v != trap_b.v || trap_a.u != trap_b.u {
                    return Err(Error::internal("witness traps for different pairs"));
                }
                if !traps_internally_disjoint(trap_a, trap_b) {
                    return Err(Error::internal("witness traps not disjoint"));
                }
                Ok(())
            }
        }
    }
}

/// Whether the degenerate digon trap is being looked at: P is exactly the
/// reverse arc of a digon and Q is trivial.
fn is_digon_trap(d: &Digraph, trap: &Trap) -> bool {
    trap.length == 1
        && trap.path_q.len() == 1
        && trap.tip == trap.u
        && d.has_arc(trap.u, trap.v)
        && d.has_arc(trap.v, trap.u)
}

/// Two traps for the same (v,u) are internally disjoint when, as
/// subdigraphs, they share no arc and no vertex beyond v and u.
fn traps_internally_disjoint(a: &Trap, b: &Trap) -> bool {
    let verts = |t: &Trap| {
        let mut s: Vec<u32> = t.path_p.iter().chain(&t.path_q).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let arcs = |t: &Trap| {
        let mut s: Vec<(u32, u32)> = t
            .path_p
            .windows(2)
            .chain(t.path_q.windows(2))
            .map(|w| (w[0], w[1]))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let bv = verts(b);
    for x in verts(a) {
        if x == a.v || x == a.u {
            continue;
        }
        if bv.contains(&x) {
            return false;
        }
    }
    let ba = arcs(b);
    arcs(a).iter().all(|arc| !ba.contains(arc))
}

/// Exhaustive t-dispersion check over all ordered pairs and all arcs.
pub fn is_t_dispersed(d: &Digraph, t: u32, digon_exception: bool) -> Result<DispersionCertificate> {
    // Condition 2: no arc uv with a (v,u)-trap of length <= t.
    for u in 0..d.n() as u32 {
        for &v in d.out_neighbors(u) {
            let traps = enumerate_traps(d, v, u, t)?;
            for trap in traps {
                if digon_exception && is_digon_trap(d, &trap) {
                    continue;
                }
                return Ok(DispersionCertificate {
                    t,
                    verdict: Verdict::Violated,
                    method: CertMethod::Exhaustive,
                    digon_exception,
                    witness: Some(DispersionWitness::EdgeTrap { trap }),
                });
            }
        }
    }
    // Condition 1: no ordered pair with two internally disjoint traps.
    for v in 0..d.n() as u32 {
        for u in 0..d.n() as u32 {
            if v == u {
                continue;
            }
            let traps = enumerate_traps(d, v, u, t)?;
            for (i, a) in traps.iter().enumerate() {
                for b in &traps[i + 1..] {
                    if traps_internally_disjoint(a, b) {
                        return Ok(DispersionCertificate {
                            t,
                            verdict: Verdict::Violated,
                            method: CertMethod::Exhaustive,
                            digon_exception,
                            witness: Some(DispersionWitness::DisjointTraps {
                                trap_a: a.clone(),
                                trap_b: b.clone(),
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(DispersionCertificate {
        t,
        verdict: Verdict::Dispersed,
        method: CertMethod::Exhaustive,
        digon_exception,
        witness: None,
    })
}

/// Fast certificate for bidirected graphs: underlying girth >= 4t+1 implies
/// t-dispersed (digon exception on). The implication itself is
/// property-checked against the exhaustive certifier on small instances.
pub fn certify_by_girth(d: &Digraph, t: u32) -> Result<DispersionCertificate> {
    let girth = d
        .underlying()
        .girth()
        .ok_or_else(|| Error::precondition("acyclic underlying graph"))?;
    if girth < 4 * t + 1 {
        return Err(Error::precondition(format!(
            "underlying girth {girth} below 4t+1 = {}",
            4 * t + 1
        )));
    }
    Ok(DispersionCertificate {
        t,
        verdict: Verdict::Dispersed,
        method: CertMethod::ByGirth,
        digon_exception: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaCounterexample {
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub checked: usize,
    pub counterexamples: Vec<LemmaCounterexample>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// On a t-dispersed digraph: every pair at distance <= t has a unique
/// geodesic, and an arc uv forces dist(u,x) > dist(v,x) for all x within
/// distance t of v. With the digon exception the arc condition is scoped
/// to non-digon arcs, matching the certificate semantics: a digon's
/// reverse arc is exactly the trap the exception tolerates, and the claim
/// is false for it in general.
pub fn check_lemma_unique_geodesic(
    d: &Digraph,
    t: u32,
    digon_exception: bool,
) -> Result<LemmaReport> {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for v in 0..d.n() as u32 {
        let dv = d.bfs_row(v);
        for x in 0..d.n() as u32 {
            let dist = dv[x as usize];
            if dist == 0 || dist == INF || dist > t {
                continue;
            }
            checked += 1;
            let mut budget = DEFAULT_TRAP_BUDGET;
            let geodesics = enumerate_geodesics(d, v, x, &mut budget)?;
            if geodesics.len() != 1 {
                counterexamples.push(LemmaCounterexample {
                    description: format!(
                        "{} geodesics from {v} to {x} at distance {dist}",
                        geodesics.len()
                    ),
                });
            }
            for &u in d.in_neighbors(v) {
                if digon_exception && d.is_digon(u, v) {
                    continue;
                }
                if d.dist(u, x) <= dist {
                    counterexamples.push(LemmaCounterexample {
                        description: format!(
                            "arc {u}->{v} but dist({u},{x}) = {} <= dist({v},{x}) = {dist}",
                            d.dist(u, x)
                        ),
                    });
                }
            }
        }
    }
    Ok(LemmaReport {
        checked,
        counterexamples,
    })
}

/// On a t-dispersed digraph all (v,u)-traps of length <= t leave v by the
/// same out-neighbor.
pub fn check_lemma_same_outneighbor(d: &Digraph, t: u32) -> Result<LemmaReport> {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for v in 0..d.n() as u32 {
        for u in 0..d.n() as u32 {
            if v == u {
                continue;
            }
            let traps = enumerate_traps(d, v, u, t)?;
            if traps.is_empty() {
                continue;
            }
            checked += 1;
            let first = traps[0].path_p[1];
            if traps.iter().any(|tr| tr.path_p[1] != first) {
                counterexamples.push(LemmaCounterexample {
                    description: format!("traps from {v} to {u} use different out-neighbors"),
                });
            }
        }
    }
    Ok(LemmaReport {
        checked,
        counterexamples,
    })
}

/// For distinct u,v with out-neighbors u',v': rho*(v',u') <= t implies
/// rho*(v,u) <= rho*(v',u') + 1. Quadruples with v' = u' are skipped (the
/// players would have collided). On non-dispersed inputs violations are
/// reported, not asserted.
pub fn check_lemma_rho_decrease(d: &Digraph, t: u32) -> Result<LemmaReport> {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for v in 0..d.n() as u32 {
        for u in 0..d.n() as u32 {
            if v == u {
                continue;
            }
            let rho_vu = trap_distance(d, v, u);
            for &vp in d.out_neighbors(v) {
                for &up in d.out_neighbors(u) {
                    if vp == up {
                        continue;
                    }
                    let Some(rho_p) = trap_distance(d, vp, up) else {
                        continue;
                    };
                    if rho_p > t {
                        continue;
                    }
                    checked += 1;
                    let ok = rho_vu.is_some_and(|r| r <= rho_p + 1);
                    if !ok {
                        counterexamples.push(LemmaCounterexample {
                            description: format!(
                                "rho*({vp},{up}) = {rho_p} but rho*({v},{u}) = {rho_vu:?}"
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(LemmaReport {
        checked,
        counterexamples,
    })
}

fn require_cert(cert: &DispersionCertificate, needed_t: u32) -> Result<()> {
    if !cert.is_dispersed() || cert.t < needed_t {
        return Err(Error::precondition(format!(
            "needs a {needed_t}-dispersed certificate, got verdict {:?} at t = {}",
            cert.verdict, cert.t
        )));
    }
    Ok(())
}

/// Weight strategy on a t-dispersed digraph with branching q = min_v q_v.
/// Classification follows the sphere condition: a cop C belongs to the
/// class of the designated out-neighbor u_i when
/// S_rho(v_s) * S_{rho-1}(u_i) * B_rho(C) is nonempty for some rho <= t.
pub fn simulate_evasion_outdegree<C: CopController<Digraph> + ?Sized>(
    d: &Digraph,
    controller: &mut C,
    t: u32,
    cop_count: usize,
    max_rounds: usize,
    cert: &DispersionCertificate,
) -> Result<EvasionOutcome> {
    require_cert(cert, t)?;
    let q = d.min_q() as u64;
    if q == 0 {
        return Err(Error::precondition("minimum branching q is zero"));
    }
    let r = damped_branching(q, t);
    let k_budget = cop_budget(q, t);
    let threshold = rational_pow(&r, t - 1);
    let ledger_cap = big_rational_from_u64(q) * &threshold;

    let y1 = controller.place(d, cop_count);
    let mut cops = vec![y1; cop_count];
    let v1 = *d
        .out_neighbors(y1)
        .first()
        .ok_or_else(|| Error::precondition("cop start has no out-neighbors"))?;
    let mut v_s = v1;
    let mut v_prev = y1;

    let mut outcome = EvasionOutcome {
        survived: true,
        rounds: 0,
        captured_at: None,
        cop_count,
        bound_k: k_budget,
        within_budget: cop_count as u64 <= k_budget,
        violations: ViolationCounts::default(),
        trace: Vec::new(),
    };

    // Previous state's (classification, chosen class, W_j), for the
    // cross-transition audits.
    let mut prev: Option<(Vec<Option<usize>>, usize, BigRational)> = None;
    for state in 1..=max_rounds {
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        let candidates: Vec<u32> = d
            .out_neighbors(v_s)
            .iter()
            .copied()
            .filter(|&w| w != v_prev)
            .take(q as usize)
            .collect();
        if (candidates.len() as u64) < q {
            return Err(Error::precondition(format!(
                "vertex {v_s} has fewer than q = {q} usable out-neighbors"
            )));
        }

        // Sphere-condition classification plus trap-distance weights.
        let dv = d.bfs_row(v_s);
        let mut class_of: Vec<Option<usize>> = vec![None; cop_count];
        let mut weights: Vec<BigRational> = vec![BigRational::one(); cop_count];
        let mut ambiguous = false;
        for (ci, &c) in cops.iter().enumerate() {
            let dc = d.bfs_row(c);
            let mut matched: Option<usize> = None;
            'classes: for (j, &u_i) in candidates.iter().enumerate() {
                let du = d.bfs_row(u_i);
                for x in 0..d.n() {
                    let rho = dv[x];
                    if rho >= 1 && rho <= t && du[x] == rho - 1 && dc[x] <= rho {
                        if matched.is_some() {
                            ambiguous = true;
                        } else {
                            matched = Some(j);
                        }
                        continue 'classes;
                    }
                }
            }
            if let Some(j) = matched {
                class_of[ci] = Some(j);
                let rho_star = trap_distance(d, v_s, c)
                    .ok_or_else(|| Error::internal("classified cop without trap"))?;
                weights[ci] = rational_pow(&r, t.saturating_sub(rho_star));
            }
        }
        if ambiguous {
            outcome.violations.ambiguous_classification += 1;
        }

        let unclassified = class_of.iter().filter(|c| c.is_none()).count() as u64;
        let share = big_rational_from_u64(unclassified) / big_rational_from_u64(q);
        let mut class_sums = vec![share; candidates.len()];
        let mut total = BigRational::zero();
        for (ci, class) in class_of.iter().enumerate() {
            total += &weights[ci];
            if let Some(j) = class {
                class_sums[*j] += &weights[ci];
            }
        }
        if total >= ledger_cap {
            outcome.violations.ledger_bound += 1;
        }
        if let Some((old_class, old_j, old_wj)) = &prev {
            let bound = &r * old_wj + big_rational_from_u64(cop_count as u64);
            if total > bound {
                outcome.violations.contraction += 1;
            }
            // Cops that were classified outside the chosen class must have
            // reset to weight 1 by now.
            for ci in 0..cop_count {
                if let Some(jo) = old_class[ci] {
                    if jo != *old_j && !weights[ci].is_one() {
                        outcome.violations.class_exit_reset += 1;
                    }
                }
            }
        }

        let mut j_min = 0usize;
        for j in 1..class_sums.len() {
            if class_sums[j] < class_sums[j_min] {
                j_min = j;
            }
        }
        let target = candidates[j_min];
        let safe = class_sums[j_min] < threshold;
        if safe {
            let guarded = cops.iter().any(|&c| c == target || d.has_arc(c, target));
            if guarded {
                outcome.violations.safety += 1;
            }
        }
        outcome.trace.push(StateRow {
            state,
            v_s,
            chosen: Some(target),
            w_total: rational_str(&total),
            w_min: rational_str(&class_sums[j_min]),
            w_max: rational_str(class_sums.iter().max().expect("nonempty")),
            safety_ok: true,
        });

        v_prev = v_s;
        v_s = target;
        outcome.rounds = state;
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        cops = apply_digraph_cop_moves(d, controller, &cops, v_s)?;
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        prev = Some((class_of, j_min, class_sums[j_min].clone()));
    }
    Ok(outcome)
}

fn apply_digraph_cop_moves<C: CopController<Digraph> + ?Sized>(
    d: &Digraph,
    controller: &mut C,
    cops: &[u32],
    robber: u32,
) -> Result<Vec<u32>> {
    let moved = controller.decide(d, cops, robber);
    if moved.len() != cops.len() {
        return Err(Error::AdversaryFault(format!(
            "controller returned {} positions for {} cops",
            moved.len(),
            cops.len()
        )));
    }
    for (&old, &new) in cops.iter().zip(&moved) {
        if new != old && !d.has_arc(old, new) {
            return Err(Error::AdversaryFault(format!(
                "illegal cop move {old} -> {new}"
            )));
        }
    }
    Ok(moved)
}

/// Growth strategy on an (h(t+1)-1)-dispersed digraph with (h,q)-growth.
/// The robber's segment is built one arc at a time: at each step it moves
/// to the out-neighbor minimizing W_l / d_l over the surviving targets,
/// with per-cop weights frozen at the state opening (unit weights when
/// t = 1, per the averaging argument).
pub fn simulate_evasion_digraph_growth<C: CopController<Digraph> + ?Sized>(
    d: &Digraph,
    controller: &mut C,
    h: u32,
    t: u32,
    cop_count: usize,
    max_rounds: usize,
    cert: &DispersionCertificate,
) -> Result<EvasionOutcome> {
    if h < 1 || t < 1 {
        return Err(Error::invalid("h and t must be at least 1"));
    }
    let t_disp = h * (t + 1) - 1;
    require_cert(cert, t_disp)?;
    let q = d.growth_parameter(h) as u64;
    if q == 0 {
        return Err(Error::precondition("digraph has no growth at this h"));
    }
    let r = damped_branching(q, t);
    let k_budget = cop_budget(q, t);
    let unit_weights = t == 1;
    let threshold = rational_pow(&r, t - 1);
    let ledger_cap = big_rational_from_u64(q) * &threshold;

    let y1 = controller.place(d, cop_count);
    let mut cops = vec![y1; cop_count];
    let v1 = *d
        .out_neighbors(y1)
        .first()
        .ok_or_else(|| Error::precondition("cop start has no out-neighbors"))?;
    let mut v_s = v1;
    let mut y_s = y1;

    let mut outcome = EvasionOutcome {
        survived: true,
        rounds: 0,
        captured_at: None,
        cop_count,
        bound_k: k_budget,
        within_budget: cop_count as u64 <= k_budget,
        violations: ViolationCounts::default(),
        trace: Vec::new(),
    };

    // Carried across states for the transition audits: which cops stayed
    // threatening through every step (the set D), and Z.
    let mut prev: Option<(Vec<bool>, BigRational)> = None;

    'states: for state in 1..=max_rounds {
        if cops.contains(&v_s) {
            outcome.survived = false;
            outcome.captured_at = Some(state);
            break;
        }
        // State invariant: every (v_s, cop)-trap of length <= h-1 passes
        // through y_s.
        if h >= 2 {
            for &c in &cops {
                for trap in enumerate_traps(d, v_s, c, h - 1)? {
                    if !trap.path_p.contains(&y_s) && !trap.path_q.contains(&y_s) {
                        outcome.violations.state_invariant += 1;
                    }
                }
            }
        }

        // Designated targets at distance h, away from y_s.
        let dv = d.bfs_row(v_s);
        let dy = d.bfs_row(y_s);
        let targets: Vec<u32> = (0..d.n() as u32)
            .filter(|&u| dv[u as usize] == h && dy[u as usize] >= h)
            .take(q as usize)
            .collect();
        if (targets.len() as u64) < q {
            return Err(Error::precondition(format!(
                "vertex {v_s} has fewer than q = {q} growth targets"
            )));
        }

        // Weights are frozen for the whole state from the trap distances
        // measured at its opening.
        let rho_star: Vec<Option<u32>> = cops.iter().map(|&c| trap_distance(d, v_s, c)).collect();
        let frozen: Vec<BigRational> = rho_star
            .iter()
            .map(|rho| match rho {
                Some(rho) if !unit_weights && *rho <= t_disp => {
                    rational_pow(&r, t + 1 - (rho + 1).div_ceil(h))
                }
                _ => BigRational::one(),
            })
            .collect();

        // Step-1 classification defines Z and the opening ledger.
        let (classes1, sums1, ds1, outs1) =
            step_classification(d, v_s, &targets, h, 1, t_disp, &cops, &frozen)?;
        let w_sum = sums1.iter().fold(BigRational::zero(), |a, b| a + b);
        let z = &w_sum / big_rational_from_u64(q);
        let unclassified = classes1.iter().filter(|c| c.is_none()).count() as u64;
        let total = sums1
            .iter()
            .fold(big_rational_from_u64(unclassified), |a, b| a + b);
        if total >= ledger_cap {
            outcome.violations.ledger_bound += 1;
        }
        if let Some((old_d, old_z)) = &prev {
            let bound = &r * old_z + big_rational_from_u64(cop_count as u64);
            if total > bound {
                outcome.violations.contraction += 1;
            }
            for ci in 0..cop_count {
                if !old_d[ci] && !frozen[ci].is_one() {
                    outcome.violations.class_exit_reset += 1;
                }
            }
        }
        // Walk the h steps.
        let mut current = v_s;
        let mut before_current = y_s;
        let mut survivors = targets.clone();
        let mut threatening = vec![true; cop_count];
        let mut trace_row: Option<StateRow> = None;
        for step in 1..=h {
            let (classes, sums, ds, outs) = if step == 1 {
                (classes1.clone(), sums1.clone(), ds1.clone(), outs1.clone())
            } else {
                step_classification(d, current, &survivors, h, step, t_disp, &cops, &frozen)?
            };
            // argmin W_l / d_l, ties to the lowest out-neighbor id.
            let mut best: Option<(BigRational, u32)> = None;
            for (l, &w_l) in outs.iter().enumerate() {
                let ratio = &sums[l] / big_rational_from_u64(ds[l] as u64);
                let better = match &best {
                    None => true,
                    Some((bv, bw)) => ratio < *bv || (ratio == *bv && w_l < *bw),
                };
                if better {
                    best = Some((ratio, w_l));
                }
            }
            let (ratio, w_j) = best.ok_or_else(|| Error::internal("no step choices"))?;
            if ratio > z {
                outcome.violations.averaging += 1;
            }
            if step == 1 {
                let ratios: Vec<BigRational> = outs
                    .iter()
                    .enumerate()
                    .map(|(l, _)| &sums[l] / big_rational_from_u64(ds[l] as u64))
                    .collect();
                trace_row = Some(StateRow {
                    state,
                    v_s,
                    chosen: Some(w_j),
                    w_total: rational_str(&total),
                    w_min: rational_str(&ratio),
                    w_max: rational_str(ratios.iter().max().expect("nonempty")),
                    safety_ok: true,
                });
            }

            // Threat bookkeeping: only cops sitting in the chosen class
            // remain threatening through this step; D is the intersection
            // over all h steps.
            let j_class = outs.iter().position(|&w| w == w_j).expect("chosen out");
            for ci in 0..cop_count {
                if threatening[ci] && classes[ci] != Some(j_class) {
                    threatening[ci] = false;
                }
            }

            let remaining = h - step;
            survivors.retain(|&u| d.dist(w_j, u) == remaining);
            before_current = current;
            current = w_j;
            outcome.rounds = state;
            if cops.contains(&current) {
                outcome.survived = false;
                outcome.captured_at = Some(state);
                break 'states;
            }
            cops = apply_digraph_cop_moves(d, controller, &cops, current)?;
            if cops.contains(&current) {
                outcome.survived = false;
                outcome.captured_at = Some(state);
                break 'states;
            }
        }
        outcome.trace.push(trace_row.expect("h >= 1 records a row"));

        // Cops threatening through all h steps carry total frozen weight
        // at most Z; and when Z sat below the safety threshold, every such
        // cop opened the state at trap distance at least 2h.
        let d_total = threatening
            .iter()
            .zip(&frozen)
            .filter(|(alive, _)| **alive)
            .fold(BigRational::zero(), |a, (_, w)| a + w);
        if d_total > z {
            outcome.violations.averaging += 1;
        }
        if z < threshold {
            for (ci, alive) in threatening.iter().enumerate() {
                if *alive && rho_star[ci].is_some_and(|r| r < 2 * h) {
                    outcome.violations.safety += 1;
                }
            }
        }

        y_s = before_current;
        v_s = current;
        prev = Some((threatening, z));
    }
    Ok(outcome)
}

/// Per-step classification: the out-neighbors of `current` that continue a
/// geodesic toward a surviving target, the cop classes over them (sphere
/// condition within the shrinking horizon), their frozen-weight sums, and
/// the multiplicities d_l.
#[allow(clippy::type_complexity, clippy::too_many_arguments)]
fn step_classification(
    d: &Digraph,
    current: u32,
    survivors: &[u32],
    h: u32,
    step: u32,
    t_disp: u32,
    cops: &[u32],
    frozen: &[BigRational],
) -> Result<(Vec<Option<usize>>, Vec<BigRational>, Vec<usize>, Vec<u32>)> {
    let remaining = h - step;
    let outs: Vec<u32> = d
        .out_neighbors(current)
        .iter()
        .copied()
        .filter(|&w| survivors.iter().any(|&u| d.dist(w, u) == remaining))
        .collect();
    if outs.is_empty() {
        return Err(Error::internal("no geodesic continuation"));
    }
    let ds: Vec<usize> = outs
        .iter()
        .map(|&w| {
            survivors
                .iter()
                .filter(|&&u| d.dist(w, u) == remaining)
                .count()
        })
        .collect();
    // Threat horizon h(t+1) - step, expressed through t_disp = h(t+1) - 1.
    let cap = t_disp + 1 - step;
    let dv = d.bfs_row(current);
    let mut class_of: Vec<Option<usize>> = vec![None; cops.len()];
    let mut sums: Vec<BigRational> = vec![BigRational::zero(); outs.len()];
    for (ci, &c) in cops.iter().enumerate() {
        let dc = d.bfs_row(c);
        for (l, &w_l) in outs.iter().enumerate() {
            let dw = d.bfs_row(w_l);
            let hit = (0..d.n()).any(|x| {
                let rho = dv[x];
                rho >= 1 && rho <= cap && dw[x] == rho.wrapping_sub(1) && dc[x] <= rho
            });
            if hit {
                class_of[ci] = Some(l);
                sums[l] += &frozen[ci];
                break;
            }
        }
    }
    Ok((class_of, sums, ds, outs))
}
