//! The large-neighborhood-search engine and its destroy heuristics.
//!
//! Each iteration selects a set of variables to destroy, re-optimizes them
//! with branch-and-bound while the rest stay fixed at the incumbent, and
//! accepts the repaired solution only on strict improvement. Neighborhood
//! selection is pluggable: uniform sampling, bipartite-graph BFS, the local
//! branching ILP itself, or the local-branching-relaxation family that reads
//! the selection off the LP relaxation of the LB ILP.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, ExactError, SolveBudget};
use crate::model::{Assignment, IlpInstance, ModelError};
use crate::scalar::Scalar;
use crate::simplex::{self, LpStatus};

/// Strict-improvement acceptance threshold on the internal objective.
const ACCEPT_TOL: f64 = 1e-9;
/// Membership threshold for the positive-difference set of the relaxation.
const DELTA_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LnsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no initial solution found within the budget")]
    NoInitialSolution,
    #[error("LP relaxation of the LB ILP reported infeasible for a feasible incumbent")]
    LpUnexpectedlyInfeasible,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Destroy heuristic selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heuristic {
    Random,
    Graph,
    Lb,
    LbRelax,
    LbRelaxS,
    LbRelaxRr,
}

impl Heuristic {
    pub const ALL: [Heuristic; 6] = [
        Heuristic::Random,
        Heuristic::Graph,
        Heuristic::Lb,
        Heuristic::LbRelax,
        Heuristic::LbRelaxS,
        Heuristic::LbRelaxRr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Random => "RANDOM",
            Heuristic::Graph => "GRAPH",
            Heuristic::Lb => "LB",
            Heuristic::LbRelax => "LBRELAX",
            Heuristic::LbRelaxS => "LBRELAX_S",
            Heuristic::LbRelaxRr => "LBRELAX_RR",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "RANDOM" => Ok(Heuristic::Random),
            "GRAPH" => Ok(Heuristic::Graph),
            "LB" => Ok(Heuristic::Lb),
            "LBRELAX" => Ok(Heuristic::LbRelax),
            "LBRELAX_S" | "LBRELAXS" => Ok(Heuristic::LbRelaxS),
            "LBRELAX_RR" | "LBRELAXRR" => Ok(Heuristic::LbRelaxRr),
            other => Err(format!("unknown heuristic `{other}`")),
        }
    }
}

/// How the engine measures time for budgets, traces and the restart clock.
/// `Logical` counts completed iterations instead of wall seconds, which makes
/// whole runs reproducible byte-for-byte under node budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ClockMode {
    #[default]
    Wall,
    Logical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LnsConfig {
    pub heuristic: Heuristic,
    /// Initial neighborhood size.
    pub k0: usize,
    /// Growth factor applied to k after a non-improving iteration.
    pub alpha: f64,
    /// Cap on k as a fraction of the variable count.
    pub beta: f64,
    /// Randomized-phase dwell (seconds) for the restart variant.
    pub gamma: f64,
    /// When false, k stays at k0 (fixed-size protocol).
    pub adaptive: bool,
    pub repair_budget: SolveBudget,
    /// Budget for the LB ILP solve; larger than the repair budget because the
    /// LB ILP has the full variable count.
    pub lb_repair_budget: SolveBudget,
    pub initial_budget: SolveBudget,
    /// Stop after this many seconds (clock-mode units).
    pub wall_limit: Option<f64>,
    /// Stop after this many iterations.
    pub iteration_limit: Option<u64>,
    pub seed: u64,
    pub clock: ClockMode,
}

impl LnsConfig {
    /// Full-scale defaults; benchmark presets override the budgets.
    pub fn new(heuristic: Heuristic, k0: usize, seed: u64) -> Self {
        LnsConfig {
            heuristic,
            k0,
            alpha: 1.02,
            beta: 0.5,
            gamma: 30.0,
            adaptive: true,
            repair_budget: SolveBudget::seconds(120.0),
            lb_repair_budget: SolveBudget::seconds(600.0),
            initial_budget: SolveBudget::seconds(10.0),
            wall_limit: Some(3600.0),
            iteration_limit: None,
            seed,
            clock: ClockMode::Wall,
        }
    }

    pub fn validate(&self) -> Result<(), LnsError> {
        if self.k0 < 1 {
            return Err(LnsError::InvalidConfig("k0 must be at least 1".into()));
        }
        if !(self.alpha > 1.0) {
            return Err(LnsError::InvalidConfig("alpha must exceed 1".into()));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(LnsError::InvalidConfig("beta must lie in (0, 1]".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(LnsError::InvalidConfig("gamma must be positive".into()));
        }
        if self.wall_limit.is_none() && self.iteration_limit.is_none() {
            return Err(LnsError::InvalidConfig(
                "either a wall limit or an iteration limit is required".into(),
            ));
        }
        for (name, b) in [
            ("repair_budget", &self.repair_budget),
            ("lb_repair_budget", &self.lb_repair_budget),
            ("initial_budget", &self.initial_budget),
        ] {
            if !b.is_valid() {
                return Err(LnsError::InvalidConfig(format!("{name} is invalid")));
            }
        }
        Ok(())
    }
}

/// The destroyed variable set of one iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    indices: Vec<usize>,
    k_used: usize,
}

impl Neighborhood {
    fn new(mut indices: Vec<usize>, k_used: usize) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Neighborhood { indices, k_used }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn k_used(&self) -> usize {
        self.k_used
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent<S> {
    /// Elapsed clock units at the end of the iteration.
    pub wall_time: f64,
    pub iter: u64,
    /// Internal (minimization) incumbent objective after the iteration.
    pub objective: S,
    pub tag: String,
    pub k: usize,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace<S> {
    pub instance: String,
    pub heuristic: Heuristic,
    pub seed: u64,
    pub config: LnsConfig,
    pub events: Vec<TraceEvent<S>>,
}

/// k update rule: keep k on improvement, otherwise grow by alpha and cap at
/// the beta fraction of the variable count. Never drops below 1.
pub fn next_neighborhood_size(k: usize, improved: bool, alpha: f64, beta: f64, n: usize) -> usize {
    if improved {
        return k.max(1);
    }
    let grown = (alpha * k as f64).ceil() as usize;
    let cap = ((beta * n as f64).floor() as usize).max(1);
    grown.min(cap).max(1)
}

/// k distinct indices sampled uniformly without replacement from `[0, n)`.
pub fn destroy_random<R: Rng>(rng: &mut R, n: usize, k: usize) -> Neighborhood {
    let k = k.min(n);
    let picked = index::sample(rng, n, k).into_vec();
    Neighborhood::new(picked, k)
}

/// Variable-constraint incidence of an instance: an edge connects a variable
/// and a row when the variable has a nonzero coefficient in the row.
#[derive(Debug, Clone)]
pub struct VarConstraintGraph {
    var_rows: Vec<Vec<usize>>,
}

impl VarConstraintGraph {
    pub fn new<S: Scalar>(inst: &IlpInstance<S>) -> Self {
        let mut var_rows = vec![Vec::new(); inst.num_vars()];
        for (r, (row, _, _)) in inst.rows().enumerate() {
            for &(j, coef) in row {
                if coef != S::zero() {
                    var_rows[j].push(r);
                }
            }
        }
        VarConstraintGraph { var_rows }
    }
}

/// Breadth-first search over the bipartite graph from a random variable node,
/// collecting the first k variables expanded. When a connected component is
/// exhausted early, the search restarts from a fresh random unvisited
/// variable.
pub fn destroy_graph<S: Scalar, R: Rng>(
    inst: &IlpInstance<S>,
    graph: &VarConstraintGraph,
    rng: &mut R,
    k: usize,
) -> Neighborhood {
    let n = inst.num_vars();
    let k = k.min(n);
    let mut collected = Vec::with_capacity(k);
    let mut var_seen = vec![false; n];
    let mut row_seen = vec![false; inst.num_rows()];
    let mut queue: VecDeque<Node> = VecDeque::new();

    enum Node {
        Var(usize),
        Row(usize),
    }

    while collected.len() < k {
        if queue.is_empty() {
            let unvisited: Vec<usize> = (0..n).filter(|&j| !var_seen[j]).collect();
            let start = unvisited[rng.gen_range(0..unvisited.len())];
            var_seen[start] = true;
            queue.push_back(Node::Var(start));
        }
        match queue.pop_front().unwrap() {
            Node::Var(j) => {
                collected.push(j);
                if collected.len() == k {
                    break;
                }
                for &r in &graph.var_rows[j] {
                    if !row_seen[r] {
                        row_seen[r] = true;
                        queue.push_back(Node::Row(r));
                    }
                }
            }
            Node::Row(r) => {
                for &(j, _) in inst.row(r) {
                    if !var_seen[j] {
                        var_seen[j] = true;
                        queue.push_back(Node::Var(j));
                    }
                }
            }
        }
    }
    Neighborhood::new(collected, k)
}

/// Outcome of the local-branching destroy step.
#[derive(Debug, Clone)]
pub struct LbDestroy<S> {
    pub neighborhood: Neighborhood,
    /// The improving LB ILP solution, when one was found; the engine adopts
    /// it directly instead of re-solving the repair sub-ILP.
    pub adopted: Option<Assignment<S>>,
}

/// Solve the LB ILP around the incumbent and destroy the variables on which
/// its best solution differs, padded with random indices up to k. Falls back
/// to uniform sampling when the ball holds nothing better.
pub fn destroy_lb<S: Scalar, R: Rng>(
    inst: &IlpInstance<S>,
    incumbent: &Assignment<S>,
    k: usize,
    budget: SolveBudget,
    rng: &mut R,
) -> Result<LbDestroy<S>, LnsError> {
    let n = inst.num_vars();
    let k = k.min(n).max(1);
    let lb_ilp = inst.build_lb_ilp(incumbent, k)?;
    let lb_incumbent = Assignment::new(&lb_ilp, incumbent.values().to_vec())?;
    let result = exact::branch_and_bound(&lb_ilp, budget, Some(&lb_incumbent))?;

    let best = match result.best {
        Some(b) => b,
        None => {
            return Ok(LbDestroy { neighborhood: destroy_random(rng, n, k), adopted: None });
        }
    };
    let differing: Vec<usize> = best
        .values()
        .iter()
        .zip(incumbent.values())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect();
    if differing.is_empty() {
        return Ok(LbDestroy { neighborhood: destroy_random(rng, n, k), adopted: None });
    }
    debug_assert!(differing.len() <= k);

    let mut picked = differing.clone();
    if picked.len() < k {
        let mut outside: Vec<usize> = (0..n).filter(|i| !differing.contains(i)).collect();
        outside.sort_unstable();
        let extra = index::sample(rng, outside.len(), k - picked.len());
        picked.extend(extra.into_iter().map(|i| outside[i]));
    }

    let adopted = if best.objective() < incumbent.objective() - S::of(ACCEPT_TOL) {
        Some(Assignment::new(inst, best.values().to_vec())?)
    } else {
        None
    };
    Ok(LbDestroy { neighborhood: Neighborhood::new(picked, k), adopted })
}

/// Greedy top-k by difference magnitude, or uniform sampling from the
/// positive-difference set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxSelection {
    Greedy,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct RelaxDestroy<S> {
    pub neighborhood: Neighborhood,
    /// Per-variable |relaxation - incumbent| from the LB ILP relaxation.
    pub deltas: Vec<S>,
    /// The LP hit its pivot budget; the selection used its best point.
    pub lp_truncated: bool,
}

/// Solve the LP relaxation of the LB ILP and select variables by how far the
/// relaxed point moves them away from the incumbent.
pub fn destroy_lb_relax<S: Scalar, R: Rng>(
    inst: &IlpInstance<S>,
    incumbent: &Assignment<S>,
    k: usize,
    rng: &mut R,
    selection: RelaxSelection,
) -> Result<RelaxDestroy<S>, LnsError> {
    let n = inst.num_vars();
    let k = k.min(n).max(1);
    let lb_ilp = inst.build_lb_ilp(incumbent, k)?;
    // The incumbent is feasible for the LB ILP, so starting the LP from it
    // skips phase 1.
    let lp = simplex::solve_lp_with_start(
        &lb_ilp,
        simplex::default_iteration_limit(&lb_ilp),
        incumbent.values(),
    );
    let (point, lp_truncated) = match lp.status {
        LpStatus::Optimal => (Some(lp.values), false),
        LpStatus::Infeasible => return Err(LnsError::LpUnexpectedlyInfeasible),
        LpStatus::IterationLimit { feasible_point } => {
            (feasible_point.then_some(lp.values), true)
        }
    };

    let deltas: Vec<S> = match &point {
        Some(p) => p
            .values()
            .iter()
            .zip(incumbent.values())
            .map(|(&rel, &cur)| (rel - S::of(cur as f64)).abs())
            .collect(),
        None => vec![S::zero(); n],
    };

    let picked = select_by_delta(&deltas, k, rng, selection);
    Ok(RelaxDestroy { neighborhood: Neighborhood::new(picked, k), deltas, lp_truncated })
}

/// Selection core shared by the greedy and sampled variants: the positive-
/// difference set first (top-k with random tie-breaking, or a uniform
/// sample), topped up with uniform draws from the zero-difference rest.
fn select_by_delta<S: Scalar, R: Rng>(
    deltas: &[S],
    k: usize,
    rng: &mut R,
    selection: RelaxSelection,
) -> Vec<usize> {
    let n = deltas.len();
    let k = k.min(n);
    let tol = S::of(DELTA_TOL);
    let mut positive: Vec<usize> = (0..n).filter(|&i| deltas[i] > tol).collect();

    if positive.len() >= k {
        return match selection {
            RelaxSelection::Sampled => {
                index::sample(rng, positive.len(), k).into_iter().map(|i| positive[i]).collect()
            }
            RelaxSelection::Greedy => {
                positive.sort_by(|&a, &b| {
                    deltas[b].partial_cmp(&deltas[a]).unwrap().then(a.cmp(&b))
                });
                let threshold = deltas[positive[k - 1]];
                let above: Vec<usize> =
                    positive.iter().copied().filter(|&i| deltas[i] > threshold).collect();
                let boundary: Vec<usize> =
                    positive.iter().copied().filter(|&i| deltas[i] == threshold).collect();
                let mut picked = above;
                let need = k - picked.len();
                picked.extend(
                    index::sample(rng, boundary.len(), need).into_iter().map(|i| boundary[i]),
                );
                picked
            }
        };
    }

    // Fewer positive differences than k: take them all plus a random subset
    // of the remainder. With an empty positive set this consumes the RNG
    // exactly like `destroy_random`.
    let rest: Vec<usize> = (0..n).filter(|&i| !(deltas[i] > tol)).collect();
    let need = k - positive.len();
    positive.extend(index::sample(rng, rest.len(), need).into_iter().map(|i| rest[i]));
    positive
}

/// Mode of the randomized-restart variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RrMode {
    Relax,
    Randomized,
}

/// State machine of the randomized-restart variant: two consecutive
/// non-improving relaxation iterations switch to uniform destroys; the search
/// switches back only after at least gamma clock units in the randomized
/// phase and an improvement found during it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrState {
    mode: RrMode,
    failures: u32,
    phase_started: f64,
    improved_in_phase: bool,
}

impl Default for RrState {
    fn default() -> Self {
        Self::new()
    }
}

impl RrState {
    pub fn new() -> Self {
        RrState { mode: RrMode::Relax, failures: 0, phase_started: 0.0, improved_in_phase: false }
    }

    pub fn mode(&self) -> RrMode {
        self.mode
    }

    pub fn consecutive_failures(&self) -> u32 {
        self.failures
    }

    /// Feed the outcome of the iteration that just finished at clock `now`.
    pub fn on_outcome(&mut self, improved: bool, now: f64, gamma: f64) {
        match self.mode {
            RrMode::Relax => {
                if improved {
                    self.failures = 0;
                } else {
                    self.failures += 1;
                    if self.failures >= 2 {
                        self.mode = RrMode::Randomized;
                        self.phase_started = now;
                        self.failures = 0;
                        self.improved_in_phase = false;
                    }
                }
            }
            RrMode::Randomized => {
                if improved {
                    self.improved_in_phase = true;
                }
                if now - self.phase_started >= gamma && self.improved_in_phase {
                    self.mode = RrMode::Relax;
                    self.failures = 0;
                    self.improved_in_phase = false;
                }
            }
        }
    }
}

struct EngineClock {
    mode: ClockMode,
    start: Instant,
    completed_iterations: u64,
}

impl EngineClock {
    fn new(mode: ClockMode) -> Self {
        EngineClock { mode, start: Instant::now(), completed_iterations: 0 }
    }

    fn now(&self) -> f64 {
        match self.mode {
            ClockMode::Wall => self.start.elapsed().as_secs_f64(),
            ClockMode::Logical => self.completed_iterations as f64,
        }
    }
}

/// Find an initial solution under the configured budget, then improve it
/// until the run budget is exhausted.
pub fn run_lns<S: Scalar>(
    inst: &IlpInstance<S>,
    config: &LnsConfig,
) -> Result<(Assignment<S>, RunTrace<S>), LnsError> {
    config.validate()?;
    let initial = exact::find_initial_solution(inst, config.initial_budget)
        .map_err(|_| LnsError::NoInitialSolution)?;
    run_lns_from(inst, config, initial)
}

/// Run the search from a caller-provided initial solution (the benchmark
/// harness computes one per instance and shares it across heuristics).
pub fn run_lns_from<S: Scalar>(
    inst: &IlpInstance<S>,
    config: &LnsConfig,
    initial: Assignment<S>,
) -> Result<(Assignment<S>, RunTrace<S>), LnsError> {
    config.validate()?;
    if !inst.is_feasible(&initial)? {
        return Err(LnsError::Model(ModelError::InfeasibleIncumbent {
            row: 0,
            violation: f64::NAN,
        }));
    }

    let n = inst.num_vars();
    let accept_tol = S::of(ACCEPT_TOL);
    let cap = ((config.beta * n as f64).floor() as usize).max(1);
    let mut k = config.k0.min(cap).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let graph = match config.heuristic {
        Heuristic::Graph => Some(VarConstraintGraph::new(inst)),
        _ => None,
    };
    let mut rr = RrState::new();
    let clock = EngineClock::new(config.clock);
    let mut clock = clock;

    let mut incumbent = initial;
    let mut events = Vec::new();
    events.push(TraceEvent {
        wall_time: clock.now(),
        iter: 0,
        objective: incumbent.objective(),
        tag: "init".to_string(),
        k,
        improved: true,
    });

    let mut t: u64 = 0;
    loop {
        if let Some(limit) = config.iteration_limit {
            if t >= limit {
                break;
            }
        }
        if let Some(limit) = config.wall_limit {
            if clock.now() >= limit {
                break;
            }
        }
        t += 1;
        let k_eff = k.min(n).max(1);

        let mut tag = config.heuristic.name().to_string();
        let mut adopted: Option<Assignment<S>> = None;
        let neighborhood = match config.heuristic {
            Heuristic::Random => destroy_random(&mut rng, n, k_eff),
            Heuristic::Graph => {
                destroy_graph(inst, graph.as_ref().unwrap(), &mut rng, k_eff)
            }
            Heuristic::Lb => {
                let out =
                    destroy_lb(inst, &incumbent, k_eff, config.lb_repair_budget, &mut rng)?;
                adopted = out.adopted;
                out.neighborhood
            }
            Heuristic::LbRelax | Heuristic::LbRelaxS => {
                let selection = if config.heuristic == Heuristic::LbRelax {
                    RelaxSelection::Greedy
                } else {
                    RelaxSelection::Sampled
                };
                let out = destroy_lb_relax(inst, &incumbent, k_eff, &mut rng, selection)?;
                if out.lp_truncated {
                    tag.push_str("!lp-limit");
                }
                out.neighborhood
            }
            Heuristic::LbRelaxRr => match rr.mode() {
                RrMode::Relax => {
                    let out = destroy_lb_relax(
                        inst,
                        &incumbent,
                        k_eff,
                        &mut rng,
                        RelaxSelection::Greedy,
                    )?;
                    tag.push_str("/relax");
                    if out.lp_truncated {
                        tag.push_str("!lp-limit");
                    }
                    out.neighborhood
                }
                RrMode::Randomized => {
                    tag.push_str("/random");
                    destroy_random(&mut rng, n, k_eff)
                }
            },
        };

        let improved = match adopted {
            Some(candidate) => {
                // The LB ILP solve already performed the repair.
                incumbent = candidate;
                true
            }
            None => {
                let sub = inst.fix_and_project(&incumbent, neighborhood.indices())?;
                let warm =
                    Assignment::new(&sub.instance, sub.project(incumbent.values()))?;
                let repaired =
                    exact::branch_and_bound(&sub.instance, config.repair_budget, Some(&warm))?;
                let best = repaired.best.expect("warm-started repair always has a solution");
                let candidate = sub.lift(inst, best.values())?;
                let improved = candidate.objective() < incumbent.objective() - accept_tol;
                if improved {
                    incumbent = candidate;
                }
                improved
            }
        };

        clock.completed_iterations = t;
        if config.adaptive {
            k = next_neighborhood_size(k, improved, config.alpha, config.beta, n);
        }
        if config.heuristic == Heuristic::LbRelaxRr {
            rr.on_outcome(improved, clock.now(), config.gamma);
        }
        events.push(TraceEvent {
            wall_time: clock.now(),
            iter: t,
            objective: incumbent.objective(),
            tag,
            k: k_eff,
            improved,
        });
    }

    let trace = RunTrace {
        instance: inst.name().to_string(),
        heuristic: config.heuristic,
        seed: config.seed,
        config: config.clone(),
        events,
    };
    Ok((incumbent, trace))
}
