//! Evaluation metrics over incumbent-objective time series: primal gap,
//! primal integral, survival rate, best-performing rate and gap to the
//! virtual best. All objectives here are in the source problem's original
//! sense; "best" is direction-aware and picked by the caller or by the
//! portfolio helpers below.

use thiserror::Error;

/// Division guard of the primal-gap formula.
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Objectives this close count as ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("metric requires at least one value")]
    EmptySet,
    #[error("time {0} is negative")]
    NegativeTime(f64),
    #[error("breakpoint times must be strictly increasing")]
    UnorderedTimes,
}

/// Normalized distance from a primal bound `v` to the best known value:
/// `|v - v*| / max(v, v*, epsilon)` when `v` exists and `v * v* >= 0`,
/// otherwise 1. Clamped into `[0, 1]`, so a vanishing denominator counts as
/// the worst case.
pub fn primal_gap(v: Option<f64>, v_star: f64, epsilon: f64) -> f64 {
    let v = match v {
        Some(v) => v,
        None => return 1.0,
    };
    if v * v_star >= 0.0 {
        let denom = v.max(v_star).max(epsilon);
        ((v - v_star).abs() / denom).clamp(0.0, 1.0)
    } else {
        1.0
    }
}

/// Piecewise-constant primal gap over time: right-continuous steps at the
/// breakpoints, gap 1 before the first one (no solution yet).
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    points: Vec<(f64, f64)>,
}

impl GapSeries {
    /// Build from explicit (time, gap) breakpoints.
    pub fn from_gap_points(points: Vec<(f64, f64)>) -> Result<Self, MetricsError> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(MetricsError::UnorderedTimes);
            }
        }
        if let Some(&(t, _)) = points.first() {
            if t < 0.0 {
                return Err(MetricsError::NegativeTime(t));
            }
        }
        let points = points.into_iter().map(|(t, g)| (t, g.clamp(0.0, 1.0))).collect();
        Ok(GapSeries { points })
    }

    /// Build from a (time, objective) series and the best known value. Times
    /// must be nondecreasing; a repeated time keeps the latest objective.
    pub fn from_objectives(
        events: &[(f64, f64)],
        v_star: f64,
        epsilon: f64,
    ) -> Result<Self, MetricsError> {
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(events.len());
        for &(t, v) in events {
            if t < 0.0 {
                return Err(MetricsError::NegativeTime(t));
            }
            let gap = primal_gap(Some(v), v_star, epsilon);
            match points.last_mut() {
                Some(last) if last.0 == t => last.1 = gap,
                Some(last) if last.0 > t => return Err(MetricsError::UnorderedTimes),
                _ => points.push((t, gap)),
            }
        }
        Ok(GapSeries { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Gap at time `q` under the right-continuous step convention.
    pub fn gap_at(&self, q: f64) -> f64 {
        let mut gap = 1.0;
        for &(t, g) in &self.points {
            if t <= q {
                gap = g;
            } else {
                break;
            }
        }
        gap
    }

    /// Exact step-function integral of the gap over `[0, q]`.
    pub fn primal_integral(&self, q: f64) -> Result<f64, MetricsError> {
        if q < 0.0 {
            return Err(MetricsError::NegativeTime(q));
        }
        let mut total = 0.0;
        let mut prev_t = 0.0;
        let mut prev_gap = 1.0;
        for &(t, g) in &self.points {
            if t >= q {
                break;
            }
            total += prev_gap * (t - prev_t);
            prev_t = t;
            prev_gap = g;
        }
        total += prev_gap * (q - prev_t);
        Ok(total)
    }
}

/// Fraction of gaps strictly below the threshold.
pub fn survival_rate(gaps: &[f64], threshold: f64) -> Result<f64, MetricsError> {
    if gaps.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let below = gaps.iter().filter(|&&g| g < threshold).count();
    Ok(below as f64 / gaps.len() as f64)
}

/// Direction-aware best value of a slice of optional objectives.
pub fn portfolio_best(values: &[Option<f64>], maximize: bool) -> Option<f64> {
    values.iter().flatten().copied().reduce(|a, b| if maximize { a.max(b) } else { a.min(b) })
}

/// Per-approach fraction of instances on which it matches the best objective,
/// ties counted for every tying approach (so the fractions can sum past 1).
/// `objectives[instance][approach]` holds each approach's bound at the
/// evaluation time.
pub fn best_performing_rate(objectives: &[Vec<Option<f64>>], maximize: bool) -> Vec<f64> {
    let approaches = objectives.first().map_or(0, Vec::len);
    let mut wins = vec![0usize; approaches];
    for row in objectives {
        if let Some(best) = portfolio_best(row, maximize) {
            for (a, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if (v - best).abs() <= TIE_TOL {
                        wins[a] += 1;
                    }
                }
            }
        }
    }
    let count = objectives.len().max(1) as f64;
    wins.into_iter().map(|w| w as f64 / count).collect()
}

/// Per-instance, per-approach primal gap against the best bound any approach
/// holds at the evaluation time.
pub fn gap_to_virtual_best(
    objectives: &[Vec<Option<f64>>],
    maximize: bool,
    epsilon: f64,
) -> Vec<Vec<f64>> {
    objectives
        .iter()
        .map(|row| {
            let best = portfolio_best(row, maximize);
            row.iter()
                .map(|v| match best {
                    Some(best) => primal_gap(*v, best, epsilon),
                    None => 1.0,
                })
                .collect()
        })
        .collect()
}

/// Survival-curve threshold rule: the median of per-approach average gaps,
/// rounded to the nearest 0.05%.
pub fn rounded_median_threshold(mean_gaps: &[f64]) -> Result<f64, MetricsError> {
    if mean_gaps.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let mut sorted = mean_gaps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    Ok((median / 0.0005).round() * 0.0005)
}

/// Sample mean and standard deviation (n-1 denominator, 0 for singletons).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}
