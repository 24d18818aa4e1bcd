//! Exact binary-ILP solving: best-first branch-and-bound on LP-relaxation
//! bounds, and a brute-force enumerator used as the ground-truth oracle in
//! tests.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use thiserror::Error;

use crate::model::{Assignment, Feasibility, IlpInstance, ModelError};
use crate::scalar::Scalar;
use crate::simplex::{self, LpStatus};

/// Variables at most this many for exhaustive enumeration.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

/// Incumbents must improve by more than this to be accepted.
const IMPROVE_TOL: f64 = 1e-9;
/// Integrality tolerance on LP values.
const INT_TOL: f64 = 1e-6;


#[derive(Debug, Error)]
pub enum ExactError {
    #[error("{n} variables exceed the brute-force cap of {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("warm start is not feasible (row {row})")]
    InfeasibleWarmStart { row: usize },
    #[error("no solution found within budget ({status:?})")]
    NoSolution { status: BnbStatus },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Stopping rules for one solve. At least one of the time and node limits
/// should be finite for production use; the oracle paths run exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveBudget {
    pub time_limit: Option<f64>,
    pub node_limit: Option<u64>,
    /// Relative optimality gap at which to stop and call the result optimal.
    pub gap_limit: f64,
}

impl SolveBudget {
    pub fn nodes(node_limit: u64) -> Self {
        SolveBudget { time_limit: None, node_limit: Some(node_limit), gap_limit: 1e-6 }
    }

    pub fn seconds(time_limit: f64) -> Self {
        SolveBudget { time_limit: Some(time_limit), node_limit: None, gap_limit: 1e-6 }
    }

    pub fn seconds_or_nodes(time_limit: f64, node_limit: u64) -> Self {
        SolveBudget {
            time_limit: Some(time_limit),
            node_limit: Some(node_limit),
            gap_limit: 1e-6,
        }
    }

    /// No limits: runs to proven optimality or infeasibility.
    pub fn exhaustive() -> Self {
        SolveBudget { time_limit: None, node_limit: None, gap_limit: 1e-6 }
    }

    pub fn is_valid(&self) -> bool {
        self.gap_limit >= 0.0
            && self.time_limit.map_or(true, |t| t > 0.0)
            && self.node_limit.map_or(true, |n| n > 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnbStatus {
    Optimal,
    FeasibleTimeout,
    InfeasibleProven,
    NoSolutionTimeout,
}

#[derive(Debug, Clone)]
pub struct BnbResult<S> {
    pub best: Option<Assignment<S>>,
    /// Best proven lower bound on the optimum (minimization sense).
    pub bound: S,
    pub status: BnbStatus,
    pub nodes_explored: u64,
    pub wall_time: f64,
    /// Objective of each incumbent in the order it was found.
    pub incumbent_objectives: Vec<S>,
}

/// Best-first branch-and-bound with depth-first plunging until the first
/// incumbent is found; bounds come from the box-relaxation LP of each node's
/// reduced instance.
pub fn branch_and_bound<S: Scalar>(
    inst: &IlpInstance<S>,
    budget: SolveBudget,
    warm_start: Option<&Assignment<S>>,
) -> Result<BnbResult<S>, ExactError> {
    search(inst, budget, warm_start, false)
}

/// First incumbent under the budget, for seeding a search.
pub fn find_initial_solution<S: Scalar>(
    inst: &IlpInstance<S>,
    budget: SolveBudget,
) -> Result<Assignment<S>, ExactError> {
    let result = search(inst, budget, None, true)?;
    result.best.ok_or(ExactError::NoSolution { status: result.status })
}

/// Exhaustive enumeration of all 2^n assignments; the ground truth for the
/// oracle-equivalence tests. Guarded to n <= 24.
pub fn brute_force<S: Scalar>(inst: &IlpInstance<S>) -> Result<BnbResult<S>, ExactError> {
    let n = inst.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(ExactError::TooManyVariables { n, max: BRUTE_FORCE_MAX_VARS });
    }
    let start = Instant::now();
    let mut best: Option<(S, Vec<u8>)> = None;
    let mut values = vec![0u8; n];
    for mask in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((mask >> i) & 1) as u8;
        }
        if matches!(inst.check_feasible(&values)?, Feasibility::Feasible) {
            let obj = inst.objective_value(&values);
            if best.as_ref().map_or(true, |(b, _)| obj < *b) {
                best = Some((obj, values.clone()));
            }
        }
    }
    let wall_time = start.elapsed().as_secs_f64();
    let nodes_explored = 1u64 << n;
    match best {
        Some((obj, values)) => Ok(BnbResult {
            best: Some(Assignment::new(inst, values)?),
            bound: obj,
            status: BnbStatus::Optimal,
            nodes_explored,
            wall_time,
            incumbent_objectives: vec![obj],
        }),
        None => Ok(BnbResult {
            best: None,
            bound: S::infinity(),
            status: BnbStatus::InfeasibleProven,
            nodes_explored,
            wall_time,
            incumbent_objectives: Vec::new(),
        }),
    }
}

struct NodeData {
    parent: usize,
    var: usize,
    value: bool,
}

struct Open<S> {
    bound: S,
    seq: u64,
    id: usize,
}

impl<S: Scalar> PartialEq for Open<S> {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl<S: Scalar> Eq for Open<S> {}
impl<S: Scalar> PartialOrd for Open<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<S: Scalar> Ord for Open<S> {
    // Reversed so the max-heap pops the smallest bound; ties go to the
    // earliest-created node for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .expect("bounds are never NaN")
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn search<S: Scalar>(
    inst: &IlpInstance<S>,
    budget: SolveBudget,
    warm_start: Option<&Assignment<S>>,
    stop_at_first_incumbent: bool,
) -> Result<BnbResult<S>, ExactError> {
    let start = Instant::now();
    let n = inst.num_vars();
    let improve_tol = S::of(IMPROVE_TOL);
    let int_tol = S::of(INT_TOL);

    let mut best: Option<Assignment<S>> = None;
    let mut incumbent_objectives = Vec::new();
    if let Some(w) = warm_start {
        if let Feasibility::Violated { row, .. } = inst.check_feasible(w.values())? {
            return Err(ExactError::InfeasibleWarmStart { row });
        }
        incumbent_objectives.push(w.objective());
        best = Some(w.clone());
    }

    let mut arena: Vec<NodeData> = Vec::new();
    arena.push(NodeData { parent: usize::MAX, var: 0, value: false });
    let mut heap: BinaryHeap<Open<S>> = BinaryHeap::new();
    let mut dive: Vec<Open<S>> = Vec::new();
    let mut seq = 0u64;
    let root = Open { bound: S::neg_infinity(), seq, id: 0 };
    if best.is_none() {
        dive.push(root);
    } else {
        heap.push(root);
    }

    let mut nodes_explored = 0u64;
    let mut fixed = vec![None::<bool>; n];

    let finish = |best: Option<Assignment<S>>,
                  bound: S,
                  proven: bool,
                  nodes: u64,
                  incumbents: Vec<S>,
                  start: &Instant| {
        let status = match (&best, proven) {
            (Some(_), true) => BnbStatus::Optimal,
            (None, true) => BnbStatus::InfeasibleProven,
            (Some(_), false) => BnbStatus::FeasibleTimeout,
            (None, false) => BnbStatus::NoSolutionTimeout,
        };
        let bound = match status {
            BnbStatus::Optimal => best.as_ref().map(|b| b.objective()).unwrap_or(bound),
            BnbStatus::InfeasibleProven => S::infinity(),
            _ => bound,
        };
        Ok(BnbResult {
            best,
            bound,
            status,
            nodes_explored: nodes,
            wall_time: start.elapsed().as_secs_f64(),
            incumbent_objectives: incumbents,
        })
    };

    loop {
        // Open-set lower bound: the smallest key among unexplored nodes.
        let open_bound = heap
            .peek()
            .map(|o| o.bound)
            .into_iter()
            .chain(dive.iter().map(|o| o.bound))
            .fold(S::infinity(), |a, b| a.min(b));

        if let Some(b) = &best {
            if stop_at_first_incumbent {
                return finish(best, open_bound, false, nodes_explored, incumbent_objectives, &start);
            }
            let gap_ok = b.objective() - open_bound
                <= S::of(budget.gap_limit) * S::one().max(b.objective().abs());
            if gap_ok {
                return finish(best, open_bound, true, nodes_explored, incumbent_objectives, &start);
            }
        }

        let node = if best.is_none() && !dive.is_empty() {
            dive.pop()
        } else {
            if !dive.is_empty() {
                heap.extend(dive.drain(..));
            }
            heap.pop()
        };
        let node = match node {
            Some(o) => o,
            None => {
                return finish(best, open_bound, true, nodes_explored, incumbent_objectives, &start)
            }
        };

        // A node costs an LP solve, so a clock read per node is free.
        let out_of_budget = budget.node_limit.map_or(false, |nl| nodes_explored >= nl)
            || budget
                .time_limit
                .map_or(false, |tl| start.elapsed().as_secs_f64() >= tl);
        if out_of_budget {
            heap.push(node);
            heap.extend(dive.drain(..));
            let ob = heap.iter().map(|o| o.bound).fold(S::infinity(), |a, b| a.min(b));
            return finish(best, ob, false, nodes_explored, incumbent_objectives, &start);
        }
        nodes_explored += 1;

        // Prune on the inherited key before paying for the LP.
        if let Some(b) = &best {
            if node.bound >= b.objective() - improve_tol {
                continue;
            }
        }

        // Materialize the fixings along the parent chain.
        fixed.iter_mut().for_each(|f| *f = None);
        let mut walk = node.id;
        while walk != 0 {
            let data = &arena[walk];
            fixed[data.var] = Some(data.value);
            walk = data.parent;
        }

        let sub = match inst.restrict(&fixed) {
            Ok(sub) => sub,
            Err(ModelError::FixedRowViolated { .. }) => continue,
            Err(e) => return Err(e.into()),
        };

        if sub.instance.num_vars() == 0 {
            // Fully fixed and feasible: a leaf solution.
            let candidate = sub.lift(inst, &[])?;
            accept(&mut best, &mut incumbent_objectives, candidate, improve_tol);
            continue;
        }

        let lp = {
            let limit = simplex::default_iteration_limit(&sub.instance);
            // Seed the node LP's bound pattern from the incumbent; rows the
            // projected point violates still get phase-1 artificials.
            match &best {
                Some(b) => {
                    simplex::solve_lp_with_start(&sub.instance, limit, &sub.project(b.values()))
                }
                None => simplex::solve_lp(&sub.instance, limit),
            }
        };
        let (node_bound, lp_point) = match lp.status {
            LpStatus::Infeasible => continue,
            LpStatus::Optimal => (node.bound.max(lp.objective + sub.offset), Some(lp.values)),
            LpStatus::IterationLimit { feasible_point } => {
                (node.bound, feasible_point.then_some(lp.values))
            }
        };
        if let Some(b) = &best {
            if node_bound >= b.objective() - improve_tol {
                continue;
            }
        }

        let branch_var: usize;
        let branch_toward: bool;
        match &lp_point {
            Some(point) => {
                let vals = point.values();
                // Integral LP point: the node is solved.
                if vals.iter().all(|&v| (v - v.round()).abs() <= int_tol) {
                    let rounded: Vec<u8> =
                        vals.iter().map(|&v| u8::from(v >= S::of(0.5))).collect();
                    if matches!(sub.instance.check_feasible(&rounded)?, Feasibility::Feasible) {
                        let candidate = sub.lift(inst, &rounded)?;
                        accept(&mut best, &mut incumbent_objectives, candidate, improve_tol);
                        continue;
                    }
                }
                // Rounding probes: cheap primal attempts at each node.
                for mode in 0..3 {
                    let probe: Vec<u8> = vals
                        .iter()
                        .map(|&v| match mode {
                            0 => u8::from(v >= S::of(0.5)),
                            1 => u8::from(v > S::one() - int_tol),
                            _ => u8::from(v > int_tol),
                        })
                        .collect();
                    if matches!(sub.instance.check_feasible(&probe)?, Feasibility::Feasible) {
                        let candidate = sub.lift(inst, &probe)?;
                        accept(&mut best, &mut incumbent_objectives, candidate, improve_tol);
                    }
                }
                // Most-fractional branching, ties to the lowest index.
                let (bi, bv) = vals
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        let fa = (**a - S::of(0.5)).abs();
                        let fb = (**b - S::of(0.5)).abs();
                        fa.partial_cmp(&fb).unwrap()
                    })
                    .expect("nonempty sub-instance");
                branch_var = sub.to_full[bi];
                branch_toward = *bv >= S::of(0.5);
            }
            None => {
                branch_var = sub.to_full[0];
                branch_toward = true;
            }
        }

        for &(value, plunge) in &[(!branch_toward, false), (branch_toward, true)] {
            arena.push(NodeData { parent: node.id, var: branch_var, value });
            seq += 1;
            let open = Open { bound: node_bound, seq, id: arena.len() - 1 };
            if best.is_none() && plunge {
                dive.push(open);
            } else {
                heap.push(open);
            }
        }
    }
}

fn accept<S: Scalar>(
    best: &mut Option<Assignment<S>>,
    log: &mut Vec<S>,
    candidate: Assignment<S>,
    improve_tol: S,
) {
    let better = best
        .as_ref()
        .map_or(true, |b| candidate.objective() < b.objective() - improve_tol);
    if better {
        log.push(candidate.objective());
        *best = Some(candidate);
    }
}
