//! Command-line surface for the pursuit toolkit. Every command emits one
//! JSON document embedding its configuration and the crate version, so
//! identical (config, seed) pairs produce byte-identical output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pursuit::adversary::{CopController, GreedyCops, OptimalCops, RandomCops};
use pursuit::error::{Error, ErrorClass};
use pursuit::graph::{Digraph, Graph};
use pursuit::solver::DEFAULT_STATE_BUDGET;
use pursuit::strategy::{EvasionOutcome, StrategyParams};
use pursuit::{dispersion, expander, expansion, gen, io as gio, solver, spectral, strategy};

#[derive(Parser, Serialize)]
#[command(name = "pursuit", version, about = "cops-and-robbers laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
enum AdversaryKind {
    Greedy,
    Random,
    Optimal,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand, Serialize, Debug)]
enum Command {
    /// Exact girth of a graph.
    Girth { graph: String },
    /// Exact cop number by the retrograde solver.
    CopNumber {
        graph: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// State-space budget; defaults to PURSUIT_STATE_BUDGET or 1e8.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Robber evasion strategies on undirected graphs, fully audited.
    VerifyLowerBound {
        graph: String,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long, value_enum, default_value_t = AdversaryKind::Greedy)]
        adversary: AdversaryKind,
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        /// Cop count; defaults to the strategy budget K.
        #[arg(long)]
        cops: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional TSV trace destination.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Tolerate a girth below the growth bound (audited, not refused).
        #[arg(long, default_value_t = false)]
        relaxed: bool,
    },
    /// Dispersion certification for a digraph.
    Dispersion {
        digraph: String,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        digon_exception: Toggle,
        /// Also run the executable lemma checks.
        #[arg(long, default_value_t = false)]
        lemmas: bool,
    },
    /// Robber evasion strategies on digraphs.
    VerifyLowerBoundDigraph {
        digraph: String,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long, value_enum, default_value_t = AdversaryKind::Greedy)]
        adversary: AdversaryKind,
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        #[arg(long)]
        cops: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Certify dispersion through the girth bound instead of
        /// exhaustive enumeration (bidirected inputs only).
        #[arg(long, default_value_t = false)]
        by_girth: bool,
    },
    /// Spectral and expansion reports.
    Spectral {
        graph: String,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Generate an LPS Ramanujan graph with its provenance report.
    Lps {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Optional edge-list destination.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo validation of the expander cop strategy.
    ExpanderCapture {
        graph: String,
        #[arg(long, default_value_t = 0.1)]
        delta_slack: f64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex expansion; defaults to the spectral bound when omitted.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Exponent arithmetic linking the upper and lower bounds.
    ExponentReport {
        graph: String,
        #[arg(long, default_value_t = 0.1)]
        delta_slack: f64,
    },
    /// Write a named fixture as an edge list.
    Fixture {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Resolves a graph argument: `fixture:<name>`, `lps:<p>,<q>`,
/// `subdivide:<k>:<spec>`, or an edge-list path.
/// Budget override through the environment, for deliberate raises.
fn state_budget_default() -> u128 {
    std::env::var("PURSUIT_STATE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_STATE_BUDGET)
}

fn resolve_graph(arg: &str) -> Result<Graph, Error> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        return gen::named_fixture(name);
    }
    if let Some(rest) = arg.strip_prefix("lps:") {
        let (p, q) = rest
            .split_once(',')
            .ok_or_else(|| Error::invalid("expected lps:<p>,<q>"))?;
        let params = gen::LpsParams::new(
            p.trim().parse().map_err(|_| Error::invalid("bad p"))?,
            q.trim().parse().map_err(|_| Error::invalid("bad q"))?,
        )?;
        return gen::lps_graph(&params);
    }
    if let Some(rest) = arg.strip_prefix("subdivide:") {
        let (k, spec) = rest
            .split_once(':')
            .ok_or_else(|| Error::invalid("expected subdivide:<k>:<spec>"))?;
        let k: usize = k.parse().map_err(|_| Error::invalid("bad k"))?;
        return Ok(gen::subdivide(&resolve_graph(spec)?, k));
    }
    Ok(gio::load_graph(std::path::Path::new(arg))?.0)
}

/// Resolves a digraph argument: `bidirected:<graph-spec>`,
/// `dicycle:<n>`, `dicirculant:<n>:<a>,<b>,...`, or an edge-list path.
fn resolve_digraph(arg: &str) -> Result<Digraph, Error> {
    if let Some(spec) = arg.strip_prefix("bidirected:") {
        return Ok(Digraph::bidirected(&resolve_graph(spec)?));
    }
    if let Some(n) = arg.strip_prefix("dicycle:") {
        let n: usize = n.parse().map_err(|_| Error::invalid("bad n"))?;
        return gen::circulant_digraph(n, &[1]);
    }
    if let Some(rest) = arg.strip_prefix("dicirculant:") {
        let (n, offs) = rest
            .split_once(':')
            .ok_or_else(|| Error::invalid("expected dicirculant:<n>:<a>,<b>"))?;
        let n: usize = n.parse().map_err(|_| Error::invalid("bad n"))?;
        let offsets: Vec<u32> = offs
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::invalid("bad offset")))
            .collect::<Result<_, _>>()?;
        return gen::circulant_digraph(n, &offsets);
    }
    Ok(gio::load_digraph(std::path::Path::new(arg))?.0)
}

fn write_trace(path: &PathBuf, outcome: &EvasionOutcome) -> Result<(), Error> {
    use std::fmt::Write as _;
    let mut tsv = String::from("state\tv_s\tu_j\tW\tmax_Wi\tmin_Wi\tsafety\n");
    for row in &outcome.trace {
        writeln!(
            tsv,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.state,
            row.v_s,
            row.chosen.map_or("stay".to_string(), |u| u.to_string()),
            row.w_total,
            row.w_max,
            row.w_min,
            if row.safety_ok { "ok" } else { "VIOLATED" }
        )
        .expect("string write");
    }
    std::fs::write(path, tsv)?;
    Ok(())
}

fn summarize(outcome: &EvasionOutcome) -> serde_json::Value {
    json!({
        "survived": outcome.survived,
        "rounds": outcome.rounds,
        "captured_at": outcome.captured_at,
        "bound_K": outcome.bound_k,
        "cops": outcome.cop_count,
        "within_budget": outcome.within_budget,
        "vacuous": outcome.cop_count == 0,
        "invariant_violations": outcome.violations.total(),
        "violations": outcome.violations,
    })
}

fn run_graph_adversary(
    g: &Graph,
    kind: AdversaryKind,
    seed: u64,
    cops: usize,
    budget: u128,
    sim: impl Fn(&mut dyn CopController<Graph>) -> Result<EvasionOutcome, Error>,
) -> Result<EvasionOutcome, Error> {
    match kind {
        AdversaryKind::Greedy => sim(&mut GreedyCops),
        AdversaryKind::Random => sim(&mut RandomCops::new(seed)),
        AdversaryKind::Optimal => sim(&mut OptimalCops::new(g, cops.max(1), budget)?),
    }
}

fn run_digraph_adversary(
    d: &Digraph,
    kind: AdversaryKind,
    seed: u64,
    cops: usize,
    budget: u128,
    sim: impl Fn(&mut dyn CopController<Digraph>) -> Result<EvasionOutcome, Error>,
) -> Result<EvasionOutcome, Error> {
    match kind {
        AdversaryKind::Greedy => sim(&mut GreedyCops),
        AdversaryKind::Random => sim(&mut RandomCops::new(seed)),
        AdversaryKind::Optimal => sim(&mut OptimalCops::new(d, cops.max(1), budget)?),
    }
}

fn execute(command: &Command) -> Result<serde_json::Value, Error> {
    match command {
        Command::Girth { graph } => {
            let g = resolve_graph(graph)?;
            Ok(json!({
                "n": g.n(),
                "m": g.m(),
                "connected": g.is_connected(),
                "girth": g.girth(),
            }))
        }
        Command::CopNumber {
            graph,
            kmax,
            budget,
        } => {
            let g = resolve_graph(graph)?;
            let budget = budget.unwrap_or_else(state_budget_default);
            let mut attempts = Vec::new();
            let mut found = None;
            for k in 1..=*kmax {
                let outcome = solver::k_cop_win(&g, k, budget)?;
                attempts.push(json!({
                    "k": k,
                    "cop_win": outcome.cop_win,
                    "states_explored": outcome.states_explored,
                    "capture_depth": outcome.capture_depth,
                    "best_placement": outcome.best_placement,
                }));
                if outcome.cop_win {
                    found = Some(k);
                    break;
                }
            }
            let cop_number = found.ok_or(Error::BoundExceeded { k_max: *kmax })?;
            Ok(json!({"cop_number": cop_number, "attempts": attempts}))
        }
        Command::VerifyLowerBound {
            graph,
            t,
            h,
            adversary,
            rounds,
            cops,
            seed,
            trace,
            relaxed,
        } => {
            let g = resolve_graph(graph)?;
            let params = if *h == 1 {
                StrategyParams::degree(&g, *t)?
            } else if *relaxed {
                StrategyParams::growth_relaxed(&g, *h, *t)?
            } else {
                StrategyParams::growth(&g, *h, *t)?
            };
            let cop_count = cops.unwrap_or(params.k_budget as usize);
            let outcome = run_graph_adversary(
                &g,
                *adversary,
                *seed,
                cop_count,
                DEFAULT_STATE_BUDGET,
                |ctl| {
                    if *h == 1 {
                        strategy::simulate_evasion_degree(&g, ctl, &params, cop_count, *rounds)
                    } else {
                        strategy::simulate_evasion_growth(&g, ctl, &params, cop_count, *rounds)
                    }
                },
            )?;
            if let Some(path) = trace {
                write_trace(path, &outcome)?;
            }
            Ok(json!({
                "t": t, "h": h, "q": params.q,
                "girth": params.girth_actual,
                "girth_required": params.girth_required,
                "girth_ok": params.girth_ok,
                "summary": summarize(&outcome),
            }))
        }
        Command::Dispersion {
            digraph,
            t,
            digon_exception,
            lemmas,
        } => {
            let d = resolve_digraph(digraph)?;
            let exception = matches!(digon_exception, Toggle::On);
            let cert = dispersion::is_t_dispersed(&d, *t, exception)?;
            cert.validate_witness(&d)?;
            let lemma_reports = if *lemmas && cert.is_dispersed() {
                let unique = dispersion::check_lemma_unique_geodesic(&d, *t, exception)?;
                let outn = dispersion::check_lemma_same_outneighbor(&d, *t)?;
                let rho = dispersion::check_lemma_rho_decrease(&d, *t)?;
                Some(json!({
                    "unique_geodesic": {"holds": unique.holds(), "checked": unique.checked},
                    "same_outneighbor": {"holds": outn.holds(), "checked": outn.checked},
                    "rho_decrease": {"holds": rho.holds(), "checked": rho.checked},
                }))
            } else {
                None
            };
            Ok(json!({
                "n": d.n(),
                "digons": d.digons().len(),
                "min_q": d.min_q(),
                "certificate": cert,
                "lemmas": lemma_reports,
            }))
        }
        Command::VerifyLowerBoundDigraph {
            digraph,
            t,
            h,
            adversary,
            rounds,
            cops,
            seed,
            trace,
            by_girth,
        } => {
            let d = resolve_digraph(digraph)?;
            let needed_t = if *h == 1 { *t } else { h * (t + 1) - 1 };
            let cert = if *by_girth {
                dispersion::certify_by_girth(&d, needed_t)?
            } else {
                dispersion::is_t_dispersed(&d, needed_t, true)?
            };
            let q = if *h == 1 {
                d.min_q() as u64
            } else {
                d.growth_parameter(*h) as u64
            };
            let k_budget = pursuit::util::cop_budget(q, *t);
            let cop_count = cops.unwrap_or(k_budget as usize);
            let outcome = run_digraph_adversary(
                &d,
                *adversary,
                *seed,
                cop_count,
                DEFAULT_STATE_BUDGET,
                |ctl| {
                    if *h == 1 {
                        dispersion::simulate_evasion_outdegree(
                            &d, ctl, *t, cop_count, *rounds, &cert,
                        )
                    } else {
                        dispersion::simulate_evasion_digraph_growth(
                            &d, ctl, *h, *t, cop_count, *rounds, &cert,
                        )
                    }
                },
            )?;
            if let Some(path) = trace {
                write_trace(path, &outcome)?;
            }
            Ok(json!({
                "t": t, "h": h, "q": q,
                "certificate_t": cert.t,
                "certificate_method": cert.method,
                "summary": summarize(&outcome),
            }))
        }
        Command::Spectral { graph, gamma, tol } => {
            let g = resolve_graph(graph)?;
            let rep = spectral::second_eigenvalue(&g, *tol)?;
            let hgamma = if g.bipartition().is_some() {
                let bound = expansion::spectral_hgamma_bound(&g, &rep, *gamma)?;
                json!({
                    "hgamma_limit": bound.limit,
                    "hgamma_certified": bound.certified,
                    "hgamma_certified_profile": bound.profile.iter().map(|e| json!([e.size, e.bound])).collect::<Vec<_>>(),
                    "saturated": bound.saturated,
                })
            } else {
                json!(null)
            };
            Ok(json!({
                "n": rep.n, "d": rep.d,
                "lambda2": rep.lambda2,
                "residual": rep.residual,
                "lambda_min": rep.lambda_min,
                "ramanujan": rep.ramanujan,
                "bipartite": rep.bipartite,
                "expansion": hgamma,
            }))
        }
        Command::Lps { p, q, out } => {
            let params = gen::LpsParams::new(*p, *q)?;
            let (g, report) = gen::lps_provenance(&params, 1e-8)?;
            if let Some(path) = out {
                std::fs::write(path, gio::write_graph(&g))?;
            }
            Ok(serde_json::to_value(report).expect("report serializes"))
        }
        Command::ExpanderCapture {
            graph,
            delta_slack,
            trials,
            seed,
            epsilon,
        } => {
            let g = resolve_graph(graph)?;
            let eps = match epsilon {
                Some(e) => *e,
                None => {
                    let rep = spectral::second_eigenvalue(&g, 1e-8)?;
                    let lambda2 = (rep.lambda2 + rep.residual).max(1e-9);
                    // A certified expansion bound may be weakened freely;
                    // staying strictly below Delta - 2 keeps the admissible
                    // gamma interval nonempty.
                    ((rep.d as f64 / lambda2).powi(2) - 1.0).clamp(0.05, (rep.d - 2) as f64 - 0.05)
                }
            };
            let params = expander::ExpanderParams::new(&g, eps, None, *delta_slack, *seed)?;
            let mc = expander::monte_carlo_capture_rate(&g, &params, *trials)?;
            let exec = expander::execution_stats(&g, &params, 0)?;
            Ok(json!({
                "n": params.n,
                "kappa": params.kappa,
                "r": params.r,
                "p_prob": params.p_prob,
                "p_raw": params.p_raw,
                "epsilon": params.epsilon,
                "diagnostics": params.diagnostics,
                "cops": mc.mean_cop_set,
                "chernoff_bound": mc.chernoff_bound,
                "success_rate": mc.success_rate,
                "ci95": [mc.wilson_low, mc.wilson_high],
                "mean_capture_round": exec.mean_capture_round,
                "executions": exec.executions,
                "captures": exec.captures,
                "confinement_failures": exec.confinement_failures,
            }))
        }
        Command::ExponentReport { graph, delta_slack } => {
            let g = resolve_graph(graph)?;
            let rep = spectral::second_eigenvalue(&g, 1e-8)?;
            let report = expander::girth_exponent_report(&g, &rep, *delta_slack)?;
            Ok(serde_json::to_value(report).expect("report serializes"))
        }
        Command::Fixture { name, out } => {
            let g = gen::named_fixture(name)?;
            let text = gio::write_graph(&g);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(json!({
                "name": name,
                "n": g.n(),
                "m": g.m(),
                "girth": g.girth(),
                "regular": g.is_regular(),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = serde_json::to_value(&cli.command).expect("config serializes");
    match execute(&cli.command) {
        Ok(result) => {
            let doc = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "result": result,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err.class() {
                ErrorClass::InvalidInput => 2,
                ErrorClass::Precondition => 3,
                ErrorClass::Resource => 4,
                ErrorClass::Numerical => 5,
                ErrorClass::Other => 1,
            })
        }
    }
}
