use std::time::Instant;

fn main() {
    // LB-LP cost with and without the incumbent start, MVC at benchmark-mini size.
    let inst: lnsolve::Instance = lnsolve::generators::generate_mvc(500, 3, 1000).unwrap();
    let initial = lnsolve::exact::find_initial_solution(
        &inst, lnsolve::exact::SolveBudget::seconds_or_nodes(2.0, 50_000)).unwrap();
    let lb = inst.build_lb_ilp(&initial, 30).unwrap();
    let limit = lnsolve::simplex::default_iteration_limit(&lb);

    let t = Instant::now();
    let cold = lnsolve::simplex::solve_lp(&lb, limit);
    let cold_time = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let warm = lnsolve::simplex::solve_lp_with_start(&lb, limit, initial.values());
    let warm_time = t.elapsed().as_secs_f64();
    println!(
        "cold: {:?} obj {:.3} in {cold_time:.2}s ({} pivots); warm: {:?} obj {:.3} in {warm_time:.2}s ({} pivots)",
        cold.status, cold.objective, cold.iterations, warm.status, warm.objective, warm.iterations
    );
}
