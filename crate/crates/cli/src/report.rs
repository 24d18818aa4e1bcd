//! Report tables over persisted results: per-approach gap/integral summary,
//! survival-rate curves, best-performing-rate curves and gap to the virtual
//! best.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use lnsolve::io::{self, ResultRecord};
use lnsolve::metrics;

use crate::args::{ReportArgs, ReportKind};

struct Table {
    approaches: Vec<String>,
    instances: Vec<String>,
    /// Row per instance, column per approach.
    records: Vec<Vec<Option<ResultRecord>>>,
    /// Portfolio best at the horizon, per instance.
    v_star: Vec<Option<f64>>,
    maximize: Vec<bool>,
    horizon: f64,
}

impl Table {
    fn build(records: Vec<ResultRecord>) -> Result<Table> {
        if records.is_empty() {
            bail!("no records in the results file");
        }
        let mut approaches: Vec<String> =
            records.iter().map(|r| r.heuristic.clone()).collect();
        approaches.sort();
        approaches.dedup();
        let mut instances: Vec<String> = records.iter().map(|r| r.instance.clone()).collect();
        instances.sort();
        instances.dedup();
        let horizon = records[0].horizon;

        let best = io::virtual_best_by_instance(&records);
        let mut table: Vec<Vec<Option<ResultRecord>>> =
            vec![vec![None; approaches.len()]; instances.len()];
        let mut maximize = vec![false; instances.len()];
        let index: HashMap<&str, usize> =
            instances.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let aindex: HashMap<&str, usize> =
            approaches.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        for record in records {
            let i = index[record.instance.as_str()];
            let a = aindex[record.heuristic.as_str()];
            maximize[i] = record.maximize;
            // First record wins if a pair was run more than once.
            table[i][a].get_or_insert(record);
        }
        let v_star = instances.iter().map(|n| best.get(n).copied()).collect();
        Ok(Table { approaches, instances, records: table, v_star, maximize, horizon })
    }

    fn objective_at(&self, i: usize, a: usize, q: f64) -> Option<f64> {
        self.records[i][a].as_ref().and_then(|r| r.objective_at(q))
    }

    /// Primal gap of approach `a` on instance `i` at time `q`, against the
    /// portfolio best at the horizon.
    fn gap_at(&self, i: usize, a: usize, q: f64) -> f64 {
        match self.v_star[i] {
            Some(v_star) => {
                metrics::primal_gap(self.objective_at(i, a, q), v_star, metrics::DEFAULT_EPSILON)
            }
            None => 1.0,
        }
    }

    fn integral_at(&self, i: usize, a: usize, q: f64) -> f64 {
        match (&self.records[i][a], self.v_star[i]) {
            (Some(r), Some(v_star)) => r
                .gap_series(v_star)
                .primal_integral(q)
                .expect("checkpoints are nonnegative"),
            _ => q,
        }
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let records = io::read_results(&args.results)
        .with_context(|| format!("reading {}", args.results.display()))?;
    let table = Table::build(records)?;
    let checkpoints: Vec<f64> = if args.checkpoints.is_empty() {
        (1..=4).map(|i| table.horizon * i as f64 / 4.0).collect()
    } else {
        args.checkpoints.clone()
    };
    if checkpoints.iter().any(|&c| c > table.horizon + 1e-9) {
        bail!("checkpoints must not exceed the recorded horizon {}", table.horizon);
    }
    fs::create_dir_all(&args.out)?;

    let wants = |kind: ReportKind| args.kind == ReportKind::All || args.kind == kind;

    if wants(ReportKind::Summary) {
        let mut rows = Vec::new();
        for (a, name) in table.approaches.iter().enumerate() {
            for &q in &checkpoints {
                let gaps: Vec<f64> =
                    (0..table.instances.len()).map(|i| table.gap_at(i, a, q) * 100.0).collect();
                let pis: Vec<f64> =
                    (0..table.instances.len()).map(|i| table.integral_at(i, a, q)).collect();
                let (gm, gs) = metrics::mean_std(&gaps);
                let (pm, ps) = metrics::mean_std(&pis);
                rows.push(vec![
                    name.clone(),
                    format!("{q}"),
                    format!("{gm}"),
                    format!("{gs}"),
                    format!("{pm}"),
                    format!("{ps}"),
                    format!("{}", gaps.len()),
                ]);
            }
        }
        write_csv(
            &args.out.join("summary.csv"),
            &["heuristic", "time", "pg_pct_mean", "pg_pct_std", "pi_mean", "pi_std", "instances"],
            &rows,
        )?;
    }

    if wants(ReportKind::Survival) {
        let threshold = match args.threshold {
            Some(t) => t,
            None => {
                let mean_gaps: Vec<f64> = (0..table.approaches.len())
                    .map(|a| {
                        let gaps: Vec<f64> = (0..table.instances.len())
                            .map(|i| table.gap_at(i, a, table.horizon))
                            .collect();
                        metrics::mean_std(&gaps).0
                    })
                    .collect();
                metrics::rounded_median_threshold(&mean_gaps)?
            }
        };
        let mut rows = Vec::new();
        for (a, name) in table.approaches.iter().enumerate() {
            for &q in &checkpoints {
                let gaps: Vec<f64> =
                    (0..table.instances.len()).map(|i| table.gap_at(i, a, q)).collect();
                let rate = metrics::survival_rate(&gaps, threshold)?;
                rows.push(vec![
                    name.clone(),
                    format!("{q}"),
                    format!("{threshold}"),
                    format!("{rate}"),
                ]);
            }
        }
        write_csv(
            &args.out.join("survival.csv"),
            &["heuristic", "time", "threshold", "survival_rate"],
            &rows,
        )?;
    }

    if wants(ReportKind::BestRate) {
        let mut rows = Vec::new();
        for &q in &checkpoints {
            let objectives: Vec<Vec<Option<f64>>> = (0..table.instances.len())
                .map(|i| {
                    (0..table.approaches.len())
                        .map(|a| {
                            let v = table.objective_at(i, a, q);
                            // Objectives are compared in minimization sense.
                            if table.maximize[i] {
                                v.map(|v| -v)
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            let rates = metrics::best_performing_rate(&objectives, false);
            for (name, rate) in table.approaches.iter().zip(rates) {
                rows.push(vec![name.clone(), format!("{q}"), format!("{rate}")]);
            }
        }
        write_csv(
            &args.out.join("best_rate.csv"),
            &["heuristic", "time", "best_performing_rate"],
            &rows,
        )?;
    }

    if wants(ReportKind::VirtualBest) {
        let mut rows = Vec::new();
        for &q in &checkpoints {
            // Per-instance gaps against the best bound any approach holds at
            // this time, honoring each instance's direction.
            let mut per_approach: Vec<Vec<f64>> = vec![Vec::new(); table.approaches.len()];
            for i in 0..table.instances.len() {
                let row: Vec<Option<f64>> = (0..table.approaches.len())
                    .map(|a| table.objective_at(i, a, q))
                    .collect();
                let gaps = metrics::gap_to_virtual_best(
                    std::slice::from_ref(&row),
                    table.maximize[i],
                    metrics::DEFAULT_EPSILON,
                );
                for (a, g) in gaps[0].iter().enumerate() {
                    per_approach[a].push(*g);
                }
            }
            for (name, gaps) in table.approaches.iter().zip(&per_approach) {
                let (mean, _) = metrics::mean_std(gaps);
                rows.push(vec![name.clone(), format!("{q}"), format!("{mean}")]);
            }
        }
        write_csv(
            &args.out.join("virtual_best.csv"),
            &["heuristic", "time", "gap_to_virtual_best_mean"],
            &rows,
        )?;
    }

    println!("report written to {}", args.out.display());
    Ok(())
}
