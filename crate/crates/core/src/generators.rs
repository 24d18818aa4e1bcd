//! Seeded generators for the benchmark families: minimum vertex cover and
//! maximum independent set on preferential-attachment graphs, set covering,
//! and multiple knapsack. All instances are feasible by construction and all
//! coefficients are integral.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Direction, IlpInstance, RawProblem, Sense};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
}

/// An undirected preferential-attachment graph: a d-clique seed plus one new
/// node at a time, each attaching to d distinct existing nodes with
/// probability proportional to current degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaGraph {
    pub nodes: usize,
    pub attachment: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BaGraph {
    pub fn from_edges(nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        BaGraph { nodes, attachment: 0, edges }
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.nodes as f64
    }
}

pub fn generate_ba_graph(nodes: usize, attachment: usize, seed: u64) -> Result<BaGraph, GenError> {
    if attachment < 1 {
        return Err(GenError::BadParams("attachment parameter must be at least 1".into()));
    }
    if nodes <= attachment {
        return Err(GenError::BadParams(format!(
            "need more than {attachment} nodes for attachment parameter {attachment}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(attachment * (nodes - attachment));
    // Each edge endpoint appears once, so sampling an entry is sampling a
    // node with probability proportional to its degree.
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..attachment {
        for v in (u + 1)..attachment {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets = Vec::with_capacity(attachment);
    for v in attachment..nodes {
        targets.clear();
        while targets.len() < attachment {
            let candidate = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        for &u in &targets {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    Ok(BaGraph { nodes, attachment, edges })
}

/// Minimum vertex cover: one variable per node, one covering row per edge.
pub fn mvc_instance<S: Scalar>(name: impl Into<String>, graph: &BaGraph) -> IlpInstance<S> {
    let mut raw = RawProblem::binary(name, Direction::Minimize, vec![S::one(); graph.nodes]);
    for &(u, v) in &graph.edges {
        raw.push_row(vec![(u, S::one()), (v, S::one())], Sense::Ge, S::one());
    }
    raw.normalize().expect("vertex cover encoding is always valid")
}

/// Maximum independent set: one variable per node, one packing row per edge.
pub fn mis_instance<S: Scalar>(name: impl Into<String>, graph: &BaGraph) -> IlpInstance<S> {
    let mut raw = RawProblem::binary(name, Direction::Maximize, vec![S::one(); graph.nodes]);
    for &(u, v) in &graph.edges {
        raw.push_row(vec![(u, S::one()), (v, S::one())], Sense::Le, S::one());
    }
    raw.normalize().expect("independent set encoding is always valid")
}

pub fn generate_mvc<S: Scalar>(
    nodes: usize,
    attachment: usize,
    seed: u64,
) -> Result<IlpInstance<S>, GenError> {
    let graph = generate_ba_graph(nodes, attachment, seed)?;
    Ok(mvc_instance(format!("mvc_n{nodes}_d{attachment}_s{seed}"), &graph))
}

pub fn generate_mis<S: Scalar>(
    nodes: usize,
    attachment: usize,
    seed: u64,
) -> Result<IlpInstance<S>, GenError> {
    let graph = generate_ba_graph(nodes, attachment, seed)?;
    Ok(mis_instance(format!("mis_n{nodes}_d{attachment}_s{seed}"), &graph))
}

/// Set covering: every row draws each column independently at the given
/// density; empty rows and uncovered columns are patched by forced
/// insertions, so the all-ones point is always feasible.
pub fn generate_sc<S: Scalar>(
    n_vars: usize,
    n_rows: usize,
    density: f64,
    cost_range: (u32, u32),
    seed: u64,
) -> Result<IlpInstance<S>, GenError> {
    if n_vars == 0 || n_rows == 0 {
        return Err(GenError::BadParams("need at least one variable and one row".into()));
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(GenError::BadParams("density must lie strictly between 0 and 1".into()));
    }
    let (lo, hi) = cost_range;
    if lo < 1 || lo > hi {
        return Err(GenError::BadParams("cost range must satisfy 1 <= lo <= hi".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs: Vec<S> = (0..n_vars).map(|_| S::of(rng.gen_range(lo..=hi) as f64)).collect();

    let mut members: Vec<Vec<usize>> = Vec::with_capacity(n_rows);
    let mut covered = vec![false; n_vars];
    for _ in 0..n_rows {
        let mut row: Vec<usize> = (0..n_vars).filter(|_| rng.gen_bool(density)).collect();
        if row.is_empty() {
            row.push(rng.gen_range(0..n_vars));
        }
        for &j in &row {
            covered[j] = true;
        }
        members.push(row);
    }
    for j in 0..n_vars {
        if !covered[j] {
            let r = rng.gen_range(0..n_rows);
            members[r].push(j);
        }
    }

    let mut raw = RawProblem::binary(
        format!("sc_v{n_vars}_r{n_rows}_s{seed}"),
        Direction::Minimize,
        costs,
    );
    for row in members {
        raw.push_row(row.into_iter().map(|j| (j, S::one())).collect(), Sense::Ge, S::one());
    }
    Ok(raw.normalize().expect("set covering encoding is always valid"))
}

/// Multiple knapsack over explicit data: variable (item i, knapsack j) at
/// index `i * capacities.len() + j`, one assignment row per item and one
/// capacity row per knapsack. Profits are maximized.
pub fn mk_instance<S: Scalar>(
    name: impl Into<String>,
    profits: &[u32],
    weights: &[u32],
    capacities: &[u32],
) -> IlpInstance<S> {
    assert_eq!(profits.len(), weights.len());
    let items = profits.len();
    let sacks = capacities.len();
    let objective: Vec<S> = (0..items)
        .flat_map(|i| std::iter::repeat(S::of(profits[i] as f64)).take(sacks))
        .collect();
    let mut raw = RawProblem::binary(name, Direction::Maximize, objective);
    for i in 0..items {
        let row = (0..sacks).map(|j| (i * sacks + j, S::one())).collect();
        raw.push_row(row, Sense::Le, S::one());
    }
    for (j, &cap) in capacities.iter().enumerate() {
        let row = (0..items).map(|i| (i * sacks + j, S::of(weights[i] as f64))).collect();
        raw.push_row(row, Sense::Le, S::of(cap as f64));
    }
    raw.normalize().expect("knapsack encoding is always valid")
}

/// Multiple knapsack with sampled data: profits and weights uniform in
/// [10, 100], identical capacities sized to half the total weight.
pub fn generate_mk<S: Scalar>(
    n_items: usize,
    n_knapsacks: usize,
    seed: u64,
) -> Result<IlpInstance<S>, GenError> {
    if n_knapsacks < 1 || n_items < n_knapsacks {
        return Err(GenError::BadParams(
            "need at least one knapsack and at least as many items".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profits: Vec<u32> = (0..n_items).map(|_| rng.gen_range(10..=100)).collect();
    let weights: Vec<u32> = (0..n_items).map(|_| rng.gen_range(10..=100)).collect();
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    let cap = ((total as f64 * 0.5) / n_knapsacks as f64).floor() as u32;
    let capacities = vec![cap.max(1); n_knapsacks];
    Ok(mk_instance(
        format!("mk_i{n_items}_k{n_knapsacks}_s{seed}"),
        &profits,
        &weights,
        &capacities,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::model::Feasibility;

    #[test]
    fn ba_with_minimal_nodes_is_complete() {
        let g = generate_ba_graph(3, 2, 1).unwrap();
        let mut edges = g.edges.clone();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn ba_edge_count_is_exact() {
        // C(2,2 choose) + d*(N-d) = 1 + 2*498 = 997 edges for N=500, d=2.
        let g = generate_ba_graph(500, 2, 9).unwrap();
        assert_eq!(g.edges.len(), 997);
        assert!(g.average_degree() >= 3.9 && g.average_degree() < 4.0);
        assert!(g.edges.iter().all(|&(u, v)| u < v && v < 500));
        // No multi-edges.
        let mut sorted = g.edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 997);
    }

    #[test]
    fn ba_is_seed_deterministic() {
        let a = generate_ba_graph(60, 3, 44).unwrap();
        let b = generate_ba_graph(60, 3, 44).unwrap();
        assert_eq!(a, b);
        let c = generate_ba_graph(60, 3, 45).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn ba_attachment_one_works_from_zero_degree_seed() {
        let g = generate_ba_graph(2, 1, 0).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
    }

    #[test]
    fn ba_rejects_too_few_nodes() {
        assert!(generate_ba_graph(2, 2, 0).is_err());
    }

    #[test]
    fn mvc_single_edge_and_triangle() {
        let edge = BaGraph::from_edges(2, vec![(0, 1)]);
        let p: IlpInstance<f64> = mvc_instance("edge", &edge);
        assert_eq!(brute_force(&p).unwrap().best.unwrap().objective(), 1.0);

        let tri = BaGraph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]);
        let p: IlpInstance<f64> = mvc_instance("tri", &tri);
        assert_eq!(brute_force(&p).unwrap().best.unwrap().objective(), 2.0);
    }

    #[test]
    fn mis_single_edge_and_triangle() {
        let edge = BaGraph::from_edges(2, vec![(0, 1)]);
        let p: IlpInstance<f64> = mis_instance("edge", &edge);
        let best = brute_force(&p).unwrap().best.unwrap();
        assert_eq!(best.original_objective(&p), 1.0);

        let tri = BaGraph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]);
        let p: IlpInstance<f64> = mis_instance("tri", &tri);
        let best = brute_force(&p).unwrap().best.unwrap();
        assert_eq!(best.original_objective(&p), 1.0);
    }

    #[test]
    fn mvc_plus_mis_equals_node_count() {
        for seed in 0..6 {
            let g = generate_ba_graph(11, 2, seed).unwrap();
            let mvc: IlpInstance<f64> = mvc_instance("mvc", &g);
            let mis: IlpInstance<f64> = mis_instance("mis", &g);
            let cover = brute_force(&mvc).unwrap().best.unwrap().original_objective(&mvc);
            let indep = brute_force(&mis).unwrap().best.unwrap().original_objective(&mis);
            assert_eq!(cover + indep, 11.0, "seed {seed}");
        }
    }

    #[test]
    fn mvc_generated_matches_brute_force_bound() {
        let p: IlpInstance<f64> = generate_mvc(12, 2, 5).unwrap();
        let bf = brute_force(&p).unwrap();
        let bb = crate::exact::branch_and_bound(&p, crate::exact::SolveBudget::exhaustive(), None)
            .unwrap();
        assert_eq!(
            bf.best.unwrap().objective(),
            bb.best.unwrap().objective()
        );
    }

    #[test]
    fn sc_single_covering_row_unit_costs() {
        let p: IlpInstance<f64> = generate_sc(10, 8, 0.3, (1, 1), 3).unwrap();
        // All-ones is feasible by construction.
        assert!(matches!(
            p.check_feasible(&vec![1; 10]).unwrap(),
            Feasibility::Feasible
        ));
        // Every row is nonempty and every column appears somewhere.
        let mut seen = vec![false; 10];
        for (row, sense, rhs) in p.rows() {
            assert!(!row.is_empty());
            assert_eq!(sense, Sense::Ge);
            assert_eq!(rhs, 1.0);
            for &(j, _) in row {
                seen[j] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        let optimum = brute_force(&p).unwrap().best.unwrap().objective();
        assert!(optimum >= 1.0);
    }

    #[test]
    fn sc_rejects_bad_parameters() {
        assert!(generate_sc::<f64>(0, 5, 0.1, (1, 10), 0).is_err());
        assert!(generate_sc::<f64>(5, 5, 0.0, (1, 10), 0).is_err());
        assert!(generate_sc::<f64>(5, 5, 0.1, (5, 2), 0).is_err());
    }

    #[test]
    fn mk_forced_capacity_choice() {
        // One knapsack of capacity 5, items (w=3,p=3) and (w=4,p=4): only one
        // item fits and the heavier one pays more.
        let p: IlpInstance<f64> = mk_instance("mk-toy", &[3, 4], &[3, 4], &[5]);
        let best = brute_force(&p).unwrap().best.unwrap();
        assert_eq!(best.original_objective(&p), 4.0);
    }

    #[test]
    fn mk_all_zeros_is_feasible() {
        let p: IlpInstance<f64> = generate_mk(8, 2, 7).unwrap();
        assert_eq!(p.num_vars(), 16);
        assert!(matches!(
            p.check_feasible(&vec![0; 16]).unwrap(),
            Feasibility::Feasible
        ));
    }

    #[test]
    fn mk_small_matches_brute_force() {
        let p: IlpInstance<f64> = generate_mk(6, 2, 11).unwrap();
        let bf = brute_force(&p).unwrap();
        let bb = crate::exact::branch_and_bound(&p, crate::exact::SolveBudget::exhaustive(), None)
            .unwrap();
        assert_eq!(bf.best.unwrap().objective(), bb.best.unwrap().objective());
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let a: IlpInstance<f64> = generate_sc(20, 15, 0.2, (1, 100), 31).unwrap();
        let b: IlpInstance<f64> = generate_sc(20, 15, 0.2, (1, 100), 31).unwrap();
        assert_eq!(a, b);
        let a: IlpInstance<f64> = generate_mk(10, 3, 31).unwrap();
        let b: IlpInstance<f64> = generate_mk(10, 3, 31).unwrap();
        assert_eq!(a, b);
    }
}
