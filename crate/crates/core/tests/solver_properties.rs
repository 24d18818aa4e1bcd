//! Cross-module solver properties: the LP relaxation bounds the binary
//! optimum, integral polytopes close the gap, and the canonical instance
//! format round-trips every generator family.

use lnsolve::exact::{self, BnbStatus, SolveBudget};
use lnsolve::generators::{self, BaGraph};
use lnsolve::io;
use lnsolve::lns::{self, Heuristic, LnsConfig};
use lnsolve::model::{Assignment, Direction, IlpInstance, RawProblem, Sense};
use lnsolve::simplex::{self, LpStatus};

use proptest::prelude::*;

fn random_instance(rng: &mut impl rand::Rng, n: usize, m: usize) -> IlpInstance<f64> {
    let obj: Vec<f64> = (0..n).map(|_| rng.gen_range(-5..=5) as f64).collect();
    let mut raw = RawProblem::binary("prop", Direction::Minimize, obj);
    for _ in 0..m {
        let mut terms = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.4) {
                let c = rng.gen_range(-3..=3) as f64;
                if c != 0.0 {
                    terms.push((j, c));
                }
            }
        }
        let sense = if rng.gen_bool(0.5) { Sense::Le } else { Sense::Ge };
        raw.push_row(terms, sense, rng.gen_range(-2..=4) as f64);
    }
    raw.normalize().unwrap()
}

#[test]
fn lp_objective_bounds_binary_optimum() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
    let mut feasible_seen = 0;
    for _ in 0..200 {
        if feasible_seen == 15 {
            break;
        }
        let p = random_instance(&mut rng, 10, 7);
        let bf = exact::brute_force(&p).unwrap();
        if bf.status != BnbStatus::Optimal {
            continue;
        }
        feasible_seen += 1;
        let lp = simplex::solve_lp(&p, simplex::default_iteration_limit(&p));
        assert_eq!(lp.status, LpStatus::Optimal);
        assert!(lp.objective <= bf.best.unwrap().objective() + 1e-6);
    }
    assert_eq!(feasible_seen, 15, "corpus too infeasible to be meaningful");
}

#[test]
fn bipartite_cover_lp_is_tight() {
    // Even cycles and paths are bipartite, so the cover polytope is integral
    // and the LP matches the ILP exactly.
    for n in [4usize, 6, 8] {
        let cycle: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = BaGraph::from_edges(n, cycle);
        let p: IlpInstance<f64> = generators::mvc_instance("cycle", &g);
        let lp = simplex::solve_lp(&p, simplex::default_iteration_limit(&p));
        let ilp = exact::brute_force(&p).unwrap().best.unwrap().objective();
        assert_eq!(lp.status, LpStatus::Optimal);
        assert!((lp.objective - ilp).abs() <= 1e-6, "n={n}: {} vs {ilp}", lp.objective);
    }
}

#[test]
fn lb_radius_one_agrees_with_best_single_flip() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    for _ in 0..20 {
        let p = random_instance(&mut rng, 9, 5);
        let Ok(initial) = exact::find_initial_solution(&p, SolveBudget::exhaustive()) else {
            continue;
        };
        checked += 1;
        let lb = p.build_lb_ilp(&initial, 1).unwrap();
        let lb_best = exact::branch_and_bound(&lb, SolveBudget::exhaustive(), None)
            .unwrap()
            .best
            .unwrap()
            .objective();
        // Oracle: the incumbent and every single-variable flip.
        let mut best = initial.objective();
        for i in 0..p.num_vars() {
            let mut v = initial.values().to_vec();
            v[i] ^= 1;
            if matches!(
                p.check_feasible(&v).unwrap(),
                lnsolve::model::Feasibility::Feasible
            ) {
                best = best.min(p.objective_value(&v));
            }
        }
        assert_eq!(lb_best, best);
    }
    assert!(checked >= 8);
}

#[test]
fn full_neighborhood_repair_reaches_global_optimum() {
    let p: IlpInstance<f64> = generators::generate_mvc(11, 2, 4).unwrap();
    let optimum = exact::brute_force(&p).unwrap().best.unwrap().objective();
    let mut config = LnsConfig::new(Heuristic::Random, p.num_vars(), 9);
    config.repair_budget = SolveBudget::exhaustive();
    config.initial_budget = SolveBudget::exhaustive();
    config.wall_limit = None;
    config.iteration_limit = Some(1);
    config.clock = lns::ClockMode::Logical;
    let (best, _) = lns::run_lns(&p, &config).unwrap();
    assert_eq!(best.objective(), optimum);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_format_round_trips_every_family(seed in 0u64..500) {
        let instances: Vec<IlpInstance<f64>> = vec![
            generators::generate_mvc(10, 2, seed).unwrap(),
            generators::generate_mis(10, 2, seed).unwrap(),
            generators::generate_sc(12, 9, 0.25, (1, 50), seed).unwrap(),
            generators::generate_mk(5, 2, seed).unwrap(),
        ];
        for inst in instances {
            let back: IlpInstance<f64> = io::parse_instance(&io::serialize_instance(&inst)).unwrap();
            prop_assert_eq!(inst, back);
        }
    }

    #[test]
    fn neighborhood_sizes_match_min_k_n(seed in 0u64..500, k in 1usize..16) {
        use rand_chacha::rand_core::SeedableRng;
        let p: IlpInstance<f64> = generators::generate_sc(10, 8, 0.3, (1, 9), seed).unwrap();
        let incumbent = Assignment::new(&p, vec![1; 10]).unwrap();
        let n = p.num_vars();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let graph = lns::VarConstraintGraph::new(&p);

        let nb = lns::destroy_random(&mut rng, n, k);
        prop_assert_eq!(nb.len(), k.min(n));
        let nb = lns::destroy_graph(&p, &graph, &mut rng, k);
        prop_assert_eq!(nb.len(), k.min(n));
        let nb = lns::destroy_lb_relax(&p, &incumbent, k, &mut rng, lns::RelaxSelection::Greedy)
            .unwrap()
            .neighborhood;
        prop_assert_eq!(nb.len(), k.min(n).max(1));
        let nb = lns::destroy_lb_relax(&p, &incumbent, k, &mut rng, lns::RelaxSelection::Sampled)
            .unwrap()
            .neighborhood;
        prop_assert_eq!(nb.len(), k.min(n).max(1));
    }

    #[test]
    fn k_recurrence_is_reproduced(k0 in 1usize..300, flags in proptest::collection::vec(any::<bool>(), 1..60)) {
        let (alpha, beta, n) = (1.02, 0.5, 400usize);
        let mut k = k0.min((beta * n as f64).floor() as usize).max(1);
        for &improved in &flags {
            let next = lns::next_neighborhood_size(k, improved, alpha, beta, n);
            let expected = if improved {
                k
            } else {
                ((alpha * k as f64).ceil() as usize).min((beta * n as f64).floor() as usize).max(1)
            };
            prop_assert_eq!(next, expected);
            prop_assert!(next >= 1 && next <= (beta * n as f64).ceil() as usize);
            k = next;
        }
    }
}
