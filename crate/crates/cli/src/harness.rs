//! Instance generation and the portfolio runner.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};

use lnsolve::exact::{self, SolveBudget};
use lnsolve::io::{self, ResultRecord};
use lnsolve::lns::{self, ClockMode, Heuristic, LnsConfig};
use lnsolve::model::Assignment;
use lnsolve::{generators, Instance, Solution};

use crate::args::{Family, GenerateArgs, RunArgs, TimeMode};
use crate::presets::{self, Preset};

pub fn generate_instance(args: &GenerateArgs, seed: u64) -> Result<Instance> {
    let defaults = presets::preset(args.preset).gen;
    let inst = match args.family {
        Family::Mvc => generators::generate_mvc(
            args.nodes.unwrap_or(defaults.nodes),
            args.degree_param.unwrap_or(defaults.degree_param),
            seed,
        )?,
        Family::Mis => generators::generate_mis(
            args.nodes.unwrap_or(defaults.nodes),
            args.degree_param.unwrap_or(defaults.degree_param),
            seed,
        )?,
        Family::Sc => generators::generate_sc(
            args.vars.unwrap_or(defaults.sc_vars),
            args.rows.unwrap_or(defaults.sc_rows),
            args.density.unwrap_or(defaults.sc_density),
            (
                args.cost_lo.unwrap_or(defaults.sc_costs.0),
                args.cost_hi.unwrap_or(defaults.sc_costs.1),
            ),
            seed,
        )?,
        Family::Mk => generators::generate_mk(
            args.items.unwrap_or(defaults.mk_items),
            args.knapsacks.unwrap_or(defaults.mk_knapsacks),
            seed,
        )?,
    };
    Ok(inst)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    fs::create_dir_all(&args.out)?;
    for i in 0..args.count {
        let inst = generate_instance(args, args.seed + i as u64)?;
        let path = args.out.join(format!("{}.ilp.json", inst.name()));
        io::write_instance(&path, &inst)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Stable 64-bit hash for per-heuristic seed streams.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn strip_time_limits(budget: SolveBudget) -> SolveBudget {
    SolveBudget { time_limit: None, ..budget }
}

/// One fully-resolved run request.
pub struct RunTask {
    pub instance_index: usize,
    pub heuristic: Heuristic,
    pub config: LnsConfig,
}

pub struct ResolvedRun {
    pub instances: Vec<Instance>,
    pub tasks: Vec<RunTask>,
    pub horizon: f64,
    pub checkpoints: Vec<f64>,
    pub jobs: usize,
    pub out: PathBuf,
}

pub fn resolve_run(args: &RunArgs) -> Result<ResolvedRun> {
    let preset = presets::preset(args.preset);

    let heuristics: Vec<Heuristic> = args
        .heuristics
        .iter()
        .map(|h| h.parse::<Heuristic>().map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    if heuristics.is_empty() {
        bail!("at least one heuristic is required");
    }

    let instances = load_instances(args, &preset)?;
    if instances.is_empty() {
        bail!("no instances to run");
    }

    let logical = args.time_mode == TimeMode::Logical;
    let (wall_limit, iteration_limit) = match (args.horizon, args.iterations) {
        (None, None) => (Some(preset.horizon), None),
        (h, i) => (h, i),
    };
    let horizon = wall_limit.unwrap_or_else(|| iteration_limit.unwrap_or(1) as f64);
    let checkpoints = if args.checkpoints.is_empty() {
        (1..=4).map(|i| horizon * i as f64 / 4.0).collect()
    } else {
        args.checkpoints.clone()
    };
    if checkpoints.iter().any(|&c| c > horizon + 1e-9) {
        bail!("checkpoints must not exceed the horizon {horizon}");
    }

    let mut repair = preset.repair;
    if args.repair_time_limit.is_some() || args.repair_node_limit.is_some() {
        repair = SolveBudget {
            time_limit: args.repair_time_limit,
            node_limit: args.repair_node_limit,
            gap_limit: 1e-6,
        };
    }
    // The LB ILP spans all variables, so its solve gets five times the
    // repair budget, mirroring the benchmark protocol ratio.
    let lb_repair = SolveBudget {
        time_limit: repair.time_limit.map(|t| t * 5.0),
        node_limit: repair.node_limit.map(|n| n.saturating_mul(5)),
        gap_limit: 1e-6,
    };
    let (repair, lb_repair, mut initial) = if logical {
        (
            strip_time_limits(repair),
            strip_time_limits(lb_repair),
            strip_time_limits(preset.initial),
        )
    } else {
        (repair, lb_repair, preset.initial)
    };
    if !repair.is_valid() || repair.time_limit.is_none() && repair.node_limit.is_none() {
        bail!("the repair budget needs a time or node limit");
    }
    if initial.time_limit.is_none() && initial.node_limit.is_none() {
        initial = SolveBudget::nodes(50_000);
    }

    let mut tasks = Vec::new();
    for (instance_index, inst) in instances.iter().enumerate() {
        let k0_default = presets::family_from_name(inst.name())
            .map(|f| preset.k0_for(f))
            .unwrap_or_else(|| (inst.num_vars() / 5).max(1));
        let k0 = args.k0.unwrap_or(k0_default);
        for &heuristic in &heuristics {
            let seed = args
                .seed
                .wrapping_add(instance_index as u64)
                .wrapping_add(fnv1a(heuristic.name().as_bytes()));
            let mut config = LnsConfig::new(heuristic, k0, seed);
            config.alpha = args.alpha;
            config.beta = args.beta;
            config.gamma = args.gamma;
            config.adaptive = !args.fixed_k;
            config.repair_budget = repair;
            config.lb_repair_budget = lb_repair;
            config.initial_budget = initial;
            config.wall_limit = wall_limit;
            config.iteration_limit = iteration_limit;
            config.clock = if logical { ClockMode::Logical } else { ClockMode::Wall };
            config.validate().map_err(anyhow::Error::msg)?;
            tasks.push(RunTask { instance_index, heuristic, config });
        }
    }

    let jobs = args.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
    });
    Ok(ResolvedRun {
        instances,
        tasks,
        horizon,
        checkpoints,
        jobs: jobs.max(1),
        out: args.out.clone(),
    })
}

fn load_instances(args: &RunArgs, preset: &Preset) -> Result<Vec<Instance>> {
    if let Some(family) = args.family {
        let count = args.count.unwrap_or(1);
        if count == 0 {
            bail!("--count must be at least 1");
        }
        let gen_args = GenerateArgs {
            family,
            count,
            seed: args.seed,
            out: PathBuf::new(),
            preset: args.preset,
            nodes: None,
            degree_param: None,
            vars: None,
            rows: None,
            density: None,
            cost_lo: None,
            cost_hi: None,
            items: None,
            knapsacks: None,
        };
        let _ = preset;
        return (0..count)
            .map(|i| generate_instance(&gen_args, args.seed + i as u64))
            .collect();
    }

    let mut files: Vec<PathBuf> = Vec::new();
    for path in &args.instances {
        if path.is_dir() {
            for entry in fs::read_dir(path)? {
                let p = entry?.path();
                if p.to_string_lossy().ends_with(".ilp.json") {
                    files.push(p);
                }
            }
        } else {
            files.push(path.clone());
        }
    }
    files.sort();
    files
        .iter()
        .map(|p| {
            io::read_instance(p).with_context(|| format!("reading {}", p.display()))
        })
        .collect()
}

/// Run every (instance, heuristic) pair with a shared per-instance initial
/// solution, in a fixed-size worker pool. Results come back sorted by
/// (instance, heuristic, seed) so output files are order-independent.
pub fn execute(run: &ResolvedRun) -> Vec<ResultRecord> {
    // Initial solutions, one per instance, shared across heuristics.
    let initial_budget: Vec<SolveBudget> = run
        .tasks
        .iter()
        .fold(vec![None; run.instances.len()], |mut acc, t| {
            acc[t.instance_index].get_or_insert(t.config.initial_budget);
            acc
        })
        .into_iter()
        .map(|b| b.unwrap_or_else(|| SolveBudget::nodes(50_000)))
        .collect();
    let initials: Vec<Result<Solution, String>> = parallel_map(run.jobs, run.instances.len(), |i| {
        exact::find_initial_solution(&run.instances[i], initial_budget[i])
            .map_err(|e| e.to_string())
    });

    let records = Mutex::new(Vec::with_capacity(run.tasks.len()));
    parallel_for(run.jobs, run.tasks.len(), |ti| {
        let task = &run.tasks[ti];
        let inst = &run.instances[task.instance_index];
        let record = match &initials[task.instance_index] {
            Ok(initial) => run_one(inst, task, initial.clone(), run.horizon),
            Err(e) => ResultRecord::failed(
                inst.name(),
                task.heuristic.name(),
                task.config.seed,
                inst.is_maximization(),
                run.horizon,
                format!("no_initial_solution: {e}"),
            ),
        };
        records.lock().unwrap().push(record);
    });

    let mut records = records.into_inner().unwrap();
    records.sort_by(|a, b| {
        (&a.instance, &a.heuristic, a.seed).cmp(&(&b.instance, &b.heuristic, b.seed))
    });
    records
}

fn run_one(inst: &Instance, task: &RunTask, initial: Solution, horizon: f64) -> ResultRecord {
    match lns::run_lns_from(inst, &task.config, initial) {
        Ok((_, trace)) => ResultRecord::from_trace(inst, &trace, horizon),
        Err(e) => ResultRecord::failed(
            inst.name(),
            task.heuristic.name(),
            task.config.seed,
            inst.is_maximization(),
            horizon,
            format!("error: {e}"),
        ),
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let run = resolve_run(args)?;
    fs::create_dir_all(&run.out)?;
    let records = execute(&run);
    let jsonl = run.out.join("results.jsonl");
    let csv = run.out.join("summary.csv");
    io::write_results(&records, &jsonl, &csv, &run.checkpoints)?;
    let failures = records.iter().filter(|r| r.status != "ok").count();
    println!(
        "{} runs ({} failed) -> {} and {}",
        records.len(),
        failures,
        jsonl.display(),
        csv.display()
    );
    Ok(())
}

/// Fixed worker pool over `0..count`, in-order work stealing by atomic index.
fn parallel_for(jobs: usize, count: usize, body: impl Fn(usize) + Sync) {
    if jobs <= 1 || count <= 1 {
        for i in 0..count {
            body(i);
        }
        return;
    }
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(count) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                body(i);
            });
        }
    });
}

fn parallel_map<T: Send>(jobs: usize, count: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let slots: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
    parallel_for(jobs, count, |i| {
        *slots[i].lock().unwrap() = Some(f(i));
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().unwrap()).collect()
}

// Keep the warm-start helper visible for integration tests that drive the
// solver pieces directly.
pub fn initial_solution(inst: &Instance, budget: SolveBudget) -> Result<Assignment<f64>> {
    Ok(exact::find_initial_solution(inst, budget)?)
}
