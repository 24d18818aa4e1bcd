//! Bounded-variable two-phase simplex over the `[0,1]` box.
//!
//! Dense-tableau implementation sized for desk-scale instances. Rows keep
//! their `LE`/`GE`/`EQ` sense; phase 1 drives per-row artificials to zero,
//! phase 2 optimizes the true objective. Pivoting uses the largest-reduced-
//! cost rule with Bland's rule engaged after a run of degenerate pivots, so
//! identical inputs always produce the identical basis sequence.

use crate::model::{FractionalAssignment, IlpInstance, Sense};
use crate::scalar::Scalar;

/// Entering-variable eligibility threshold on reduced costs.
const PIVOT_TOL: f64 = 1e-9;
/// Primal feasibility tolerance for certificates and phase-1 acceptance.
const FEAS_TOL: f64 = 1e-7;
/// Step sizes at or below this count as degenerate pivots.
const DEGEN_TOL: f64 = 1e-12;
/// Cap on exact reduced-cost refreshes before trusting the maintained row.
const MAX_REFINES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// The pivot budget ran out. `feasible_point` is true when phase 1 had
    /// already finished, so the returned point satisfies the rows.
    IterationLimit { feasible_point: bool },
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub values: FractionalAssignment<S>,
    pub objective: S,
    pub status: LpStatus,
    /// One dual multiplier per row, recovered from the final reduced costs.
    pub duals: Vec<S>,
    pub iterations: usize,
}

/// Default pivot budget: generous for nondegenerate instances, bounds the
/// pathological ones.
pub fn default_iteration_limit<S: Scalar>(inst: &IlpInstance<S>) -> usize {
    50 * (inst.num_vars() + inst.num_rows())
}

/// Minimize the instance objective over the box relaxation.
pub fn solve_lp<S: Scalar>(inst: &IlpInstance<S>, iteration_limit: usize) -> LpSolution<S> {
    Tableau::build(inst, None).solve(inst, iteration_limit)
}

/// Same solve, but the initial nonbasic bounds come from a 0/1 point.
/// Rows the point satisfies need no phase-1 artificials, so starting from a
/// feasible incumbent skips phase 1 entirely. The point does not have to be
/// feasible; violated rows get artificials as usual.
pub fn solve_lp_with_start<S: Scalar>(
    inst: &IlpInstance<S>,
    iteration_limit: usize,
    start: &[u8],
) -> LpSolution<S> {
    assert_eq!(start.len(), inst.num_vars());
    Tableau::build(inst, Some(start)).solve(inst, iteration_limit)
}

/// Verify primal feasibility and the reduced-cost (KKT) conditions of an
/// `Optimal` solution at the `1e-7` tolerance. Test-path helper, not used on
/// the hot path.
pub fn check_optimality_certificate<S: Scalar>(
    inst: &IlpInstance<S>,
    sol: &LpSolution<S>,
) -> bool {
    let tol = S::of(FEAS_TOL);
    let x = sol.values.values();
    // Bounds are exact after clamping.
    if x.iter().any(|&v| v < S::zero() || v > S::one()) {
        return false;
    }
    // Row feasibility plus complementary slackness.
    for (i, (row, sense, rhs)) in inst.rows().enumerate() {
        let activity: S = row.iter().map(|&(j, a)| a * x[j]).sum();
        if !sense.holds(activity, rhs, tol) {
            return false;
        }
        let y = sol.duals[i];
        match sense {
            Sense::Le => {
                if y > tol {
                    return false;
                }
            }
            Sense::Ge => {
                if y < -tol {
                    return false;
                }
            }
            Sense::Eq => {}
        }
        if y.abs() > tol && (activity - rhs).abs() > tol {
            return false;
        }
    }
    // Reduced costs sign-consistent with the bound each variable sits at.
    let mut reduced: Vec<S> = inst.objective().to_vec();
    for (i, (row, _, _)) in inst.rows().enumerate() {
        let y = sol.duals[i];
        if y != S::zero() {
            for &(j, a) in row {
                reduced[j] = reduced[j] - y * a;
            }
        }
    }
    for (j, (&v, &d)) in x.iter().zip(&reduced).enumerate() {
        let _ = j;
        let at_lower = v <= tol;
        let at_upper = v >= S::one() - tol;
        let ok = if at_lower {
            d >= -tol
        } else if at_upper {
            d <= tol
        } else {
            d.abs() <= tol
        };
        if !ok {
            return false;
        }
    }
    // Objective consistent with the point.
    let obj: S = inst.objective().iter().zip(x).map(|(&c, &v)| c * v).sum();
    (obj - sol.objective).abs() <= S::of(1e-9) * (S::one() + obj.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

enum LoopExit {
    NoEntering,
    IterationLimit,
    /// Ratio test found no blocking bound: numerically impossible for a box
    /// LP, treated as a solve breakdown.
    Breakdown,
}

struct Tableau<S> {
    n: usize,
    m: usize,
    ncols: usize,
    /// Row-major m x ncols tableau, kept equal to B^-1 * A by elimination.
    t: Vec<S>,
    /// Current values of the basic variables, one per row.
    xb: Vec<S>,
    basis: Vec<usize>,
    status: Vec<ColStatus>,
    lower: Vec<S>,
    upper: Vec<S>,
    /// Current-phase reduced cost row, maintained by elimination.
    d: Vec<S>,
    costs: Vec<S>,
    /// Slack/surplus column per LE/GE row.
    aux_col: Vec<Option<usize>>,
    art_col: Vec<Option<usize>>,
    row_scale: Vec<S>,
    iterations: usize,
    degenerate_run: usize,
    bland: bool,
}

impl<S: Scalar> Tableau<S> {
    fn build(inst: &IlpInstance<S>, start: Option<&[u8]>) -> Self {
        let n = inst.num_vars();
        let m = inst.num_rows();
        let inf = S::infinity();

        // Row residuals at the starting point decide which rows need a
        // phase-1 artificial and which get their slack/surplus as the
        // initial basic variable.
        let residual: Vec<S> = inst
            .rows()
            .map(|(row, _, rhs)| {
                let activity: S = match start {
                    Some(x) => row
                        .iter()
                        .filter(|&&(j, _)| x[j] != 0)
                        .map(|&(_, a)| a)
                        .sum(),
                    None => S::zero(),
                };
                rhs - activity
            })
            .collect();

        let mut aux_col = vec![None; m];
        let mut art_col = vec![None; m];
        let mut row_scale = vec![S::one(); m];
        let mut ncols = n;
        for (i, (_, sense, _)) in inst.rows().enumerate() {
            let r = residual[i];
            match sense {
                Sense::Le => {
                    aux_col[i] = Some(ncols);
                    ncols += 1;
                    if r < S::zero() {
                        row_scale[i] = -S::one();
                        art_col[i] = Some(usize::MAX); // placeholder
                    }
                }
                Sense::Ge => {
                    aux_col[i] = Some(ncols);
                    ncols += 1;
                    if r <= S::zero() {
                        row_scale[i] = -S::one();
                    } else {
                        art_col[i] = Some(usize::MAX);
                    }
                }
                Sense::Eq => {
                    if r < S::zero() {
                        row_scale[i] = -S::one();
                    }
                    art_col[i] = Some(usize::MAX);
                }
            }
        }
        for i in 0..m {
            if art_col[i].is_some() {
                art_col[i] = Some(ncols);
                ncols += 1;
            }
        }

        let mut t = vec![S::zero(); m * ncols];
        let lower = vec![S::zero(); ncols];
        let mut upper = vec![inf; ncols];
        for j in 0..n {
            upper[j] = S::one();
        }
        let mut basis = Vec::with_capacity(m);
        let mut xb = Vec::with_capacity(m);
        let mut status = vec![ColStatus::AtLower; ncols];
        if let Some(x) = start {
            for j in 0..n {
                if x[j] != 0 {
                    status[j] = ColStatus::AtUpper;
                }
            }
        }

        for (i, (row, sense, _)) in inst.rows().enumerate() {
            let scale = row_scale[i];
            let trow = &mut t[i * ncols..(i + 1) * ncols];
            for &(j, a) in row {
                trow[j] = scale * a;
            }
            if let Some(a) = aux_col[i] {
                let sign = if sense == Sense::Le { S::one() } else { -S::one() };
                trow[a] = scale * sign;
            }
            if let Some(a) = art_col[i] {
                trow[a] = S::one();
            }
            // Initial basic column: the artificial when present, otherwise
            // the slack/surplus, which has coefficient +1 after scaling.
            let b = if let Some(a) = art_col[i] { a } else { aux_col[i].unwrap() };
            status[b] = ColStatus::Basic(i);
            basis.push(b);
            xb.push(scale * residual[i]);
        }

        Tableau {
            n,
            m,
            ncols,
            t,
            xb,
            basis,
            status,
            lower,
            upper,
            d: vec![S::zero(); ncols],
            costs: vec![S::zero(); ncols],
            aux_col,
            art_col,
            row_scale,
            iterations: 0,
            degenerate_run: 0,
            bland: false,
        }
    }

    fn solve(mut self, inst: &IlpInstance<S>, iteration_limit: usize) -> LpSolution<S> {
        let bland_after = 5 * (self.n + self.m);
        let has_artificials = self.art_col.iter().any(|a| a.is_some());

        if has_artificials {
            for i in 0..self.m {
                if let Some(a) = self.art_col[i] {
                    self.costs[a] = S::one();
                }
            }
            match self.run_phase(iteration_limit, bland_after) {
                LoopExit::NoEntering => {}
                LoopExit::IterationLimit | LoopExit::Breakdown => {
                    return self.extract(inst, LpStatus::IterationLimit { feasible_point: false });
                }
            }
            let infeasibility: S = (0..self.m)
                .filter_map(|i| {
                    let col = self.basis[i];
                    self.art_col[i]
                        .filter(|&a| a == col)
                        .map(|_| self.xb[i].max(S::zero()))
                })
                .sum();
            if infeasibility > S::of(FEAS_TOL) {
                return self.extract(inst, LpStatus::Infeasible);
            }
            // Pin every artificial at zero for phase 2.
            for i in 0..self.m {
                if let Some(a) = self.art_col[i] {
                    self.upper[a] = S::zero();
                    if self.basis[i] == a && self.xb[i].abs() <= S::of(FEAS_TOL) {
                        self.xb[i] = S::zero();
                    }
                }
            }
        }

        self.costs = vec![S::zero(); self.ncols];
        self.costs[..self.n].copy_from_slice(inst.objective());
        match self.run_phase(iteration_limit, bland_after) {
            LoopExit::NoEntering => {
                let sol = self.extract(inst, LpStatus::Optimal);
                if check_optimality_certificate(inst, &sol) {
                    sol
                } else {
                    LpSolution {
                        status: LpStatus::IterationLimit { feasible_point: true },
                        ..sol
                    }
                }
            }
            LoopExit::IterationLimit | LoopExit::Breakdown => {
                self.extract(inst, LpStatus::IterationLimit { feasible_point: true })
            }
        }
    }

    /// Pivot until the exactly-recomputed reduced costs admit no entering
    /// column, or the budget runs out.
    fn run_phase(&mut self, iteration_limit: usize, bland_after: usize) -> LoopExit {
        self.recompute_reduced_costs();
        for _ in 0..=MAX_REFINES {
            loop {
                if self.iterations >= iteration_limit {
                    return LoopExit::IterationLimit;
                }
                let entering = match self.choose_entering() {
                    Some(j) => j,
                    None => break,
                };
                self.iterations += 1;
                if !self.step(entering) {
                    return LoopExit::Breakdown;
                }
                if self.degenerate_run > bland_after {
                    self.bland = true;
                }
            }
            // The maintained row drifts over long pivot runs; only trust a
            // fresh recomputation to declare the phase finished.
            self.recompute_reduced_costs();
            if self.choose_entering().is_none() {
                return LoopExit::NoEntering;
            }
        }
        LoopExit::NoEntering
    }

    fn recompute_reduced_costs(&mut self) {
        self.d.copy_from_slice(&self.costs);
        for i in 0..self.m {
            let cb = self.costs[self.basis[i]];
            if cb != S::zero() {
                let row = &self.t[i * self.ncols..(i + 1) * self.ncols];
                for (dj, &tij) in self.d.iter_mut().zip(row) {
                    *dj = *dj - cb * tij;
                }
            }
        }
        for i in 0..self.m {
            self.d[self.basis[i]] = S::zero();
        }
    }

    fn choose_entering(&self) -> Option<usize> {
        let tol = S::of(PIVOT_TOL);
        let mut best: Option<(usize, S)> = None;
        for j in 0..self.ncols {
            if self.upper[j] <= self.lower[j] {
                continue;
            }
            let score = match self.status[j] {
                ColStatus::AtLower if self.d[j] < -tol => -self.d[j],
                ColStatus::AtUpper if self.d[j] > tol => self.d[j],
                _ => continue,
            };
            if self.bland {
                return Some(j);
            }
            match best {
                Some((_, s)) if score <= s => {}
                _ => best = Some((j, score)),
            }
        }
        best.map(|(j, _)| j)
    }

    /// One simplex step on the entering column: either a bound flip or a
    /// basis pivot. Returns false on a (numerically impossible) unbounded ray.
    fn step(&mut self, j: usize) -> bool {
        let tol = S::of(PIVOT_TOL);
        let dir = if self.status[j] == ColStatus::AtLower { S::one() } else { -S::one() };

        let mut best_step = self.upper[j] - self.lower[j]; // bound-flip distance
        let mut leave: Option<(usize, bool)> = None; // (row, hits_lower)
        for i in 0..self.m {
            let rate = dir * self.t[i * self.ncols + j];
            let bcol = self.basis[i];
            let (step_i, hits_lower) = if rate > tol {
                ((self.xb[i] - self.lower[bcol]) / rate, true)
            } else if rate < -tol {
                if self.upper[bcol].is_infinite() {
                    continue;
                }
                ((self.upper[bcol] - self.xb[i]) / -rate, false)
            } else {
                continue;
            };
            let step_i = step_i.max(S::zero());
            let better = match leave {
                None => step_i < best_step,
                Some((r, _)) => {
                    step_i < best_step || (step_i == best_step && bcol < self.basis[r])
                }
            };
            if better {
                best_step = step_i;
                leave = Some((i, hits_lower));
            }
        }

        if best_step.is_infinite() {
            return false;
        }
        if best_step > S::of(DEGEN_TOL) {
            self.degenerate_run = 0;
            self.bland = false;
        } else {
            self.degenerate_run += 1;
        }

        match leave {
            None => {
                // Bound flip: the entering variable crosses to its other bound.
                for i in 0..self.m {
                    let rate = dir * self.t[i * self.ncols + j];
                    self.xb[i] = self.xb[i] - rate * best_step;
                }
                self.status[j] = if dir > S::zero() { ColStatus::AtUpper } else { ColStatus::AtLower };
            }
            Some((r, hits_lower)) => {
                let entering_value = if dir > S::zero() {
                    self.lower[j] + best_step
                } else {
                    self.upper[j] - best_step
                };
                for i in 0..self.m {
                    if i != r {
                        let rate = dir * self.t[i * self.ncols + j];
                        self.xb[i] = self.xb[i] - rate * best_step;
                    }
                }
                let leaving = self.basis[r];
                self.status[leaving] =
                    if hits_lower { ColStatus::AtLower } else { ColStatus::AtUpper };
                self.eliminate(r, j);
                self.basis[r] = j;
                self.status[j] = ColStatus::Basic(r);
                self.xb[r] = entering_value;
            }
        }
        true
    }

    fn eliminate(&mut self, r: usize, j: usize) {
        let ncols = self.ncols;
        let pivot = self.t[r * ncols + j];
        debug_assert!(pivot.abs() > S::of(DEGEN_TOL));
        let inv = S::one() / pivot;
        for v in &mut self.t[r * ncols..(r + 1) * ncols] {
            *v = *v * inv;
        }
        self.t[r * ncols + j] = S::one();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.t[i * ncols + j];
            if factor.abs() <= S::of(1e-12) {
                self.t[i * ncols + j] = S::zero();
                continue;
            }
            // Split borrows: the pivot row is disjoint from row i.
            let (pivot_row, row_i) = if i < r {
                let (a, b) = self.t.split_at_mut(r * ncols);
                (&b[..ncols], &mut a[i * ncols..(i + 1) * ncols])
            } else {
                let (a, b) = self.t.split_at_mut(i * ncols);
                (&a[r * ncols..(r + 1) * ncols], &mut b[..ncols])
            };
            for (vi, &vr) in row_i.iter_mut().zip(pivot_row) {
                *vi = *vi - factor * vr;
            }
            row_i[j] = S::zero();
        }
        let factor = self.d[j];
        if factor != S::zero() {
            let pivot_row = &self.t[r * ncols..(r + 1) * ncols];
            for (dj, &vr) in self.d.iter_mut().zip(pivot_row) {
                *dj = *dj - factor * vr;
            }
            self.d[j] = S::zero();
        }
    }

    fn extract(&self, inst: &IlpInstance<S>, status: LpStatus) -> LpSolution<S> {
        let mut x = vec![S::zero(); self.n];
        for j in 0..self.n {
            let v = match self.status[j] {
                ColStatus::Basic(r) => self.xb[r],
                ColStatus::AtLower => self.lower[j],
                ColStatus::AtUpper => self.upper[j],
            };
            x[j] = v.max(S::zero()).min(S::one());
        }
        let objective = inst.objective().iter().zip(&x).map(|(&c, &v)| c * v).sum();
        let mut duals = vec![S::zero(); self.m];
        for i in 0..self.m {
            duals[i] = match inst.sense(i) {
                Sense::Le => -self.d[self.aux_col[i].unwrap()],
                Sense::Ge => self.d[self.aux_col[i].unwrap()],
                Sense::Eq => -self.row_scale[i] * self.d[self.art_col[i].unwrap()],
            };
        }
        let values = FractionalAssignment::new(inst, x).expect("clamped LP point");
        LpSolution { values, objective, status, duals, iterations: self.iterations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Direction, RawProblem};

    fn inst(
        direction: Direction,
        obj: Vec<f64>,
        rows: Vec<(Vec<(usize, f64)>, Sense, f64)>,
    ) -> IlpInstance<f64> {
        let mut raw = RawProblem::binary("lp-test", direction, obj);
        for (terms, sense, rhs) in rows {
            raw.push_row(terms, sense, rhs);
        }
        raw.normalize().unwrap()
    }

    #[test]
    fn single_variable_hits_row_bound() {
        let p = inst(
            Direction::Minimize,
            vec![-1.0],
            vec![(vec![(0, 2.0)], Sense::Le, 1.0)],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values.values()[0] - 0.5).abs() < 1e-9);
        assert!((sol.objective - (-0.5)).abs() < 1e-9);
        assert!(check_optimality_certificate(&p, &sol));
    }

    #[test]
    fn covering_row_forces_objective_one() {
        let p = inst(
            Direction::Minimize,
            vec![1.0, 1.0],
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!(check_optimality_certificate(&p, &sol));
    }

    #[test]
    fn degenerate_eq_row() {
        let p = inst(
            Direction::Minimize,
            vec![1.0, 0.0],
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0)],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 0.0).abs() < 1e-9);
        assert!((sol.values.values()[1] - 1.0).abs() < 1e-9);
        assert!(check_optimality_certificate(&p, &sol));
    }

    #[test]
    fn perturbed_point_fails_certificate() {
        let p = inst(
            Direction::Minimize,
            vec![-1.0],
            vec![(vec![(0, 2.0)], Sense::Le, 1.0)],
        );
        let mut sol = solve_lp(&p, default_iteration_limit(&p));
        let mut vals = sol.values.values().to_vec();
        vals[0] += 0.1;
        sol.values = FractionalAssignment::new(&p, vals).unwrap();
        assert!(!check_optimality_certificate(&p, &sol));
    }

    #[test]
    fn infeasible_rows_detected() {
        let p = inst(
            Direction::Minimize,
            vec![0.0],
            vec![
                (vec![(0, 1.0)], Sense::Le, 0.0),
                (vec![(0, 1.0)], Sense::Ge, 1.0),
            ],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn negative_rhs_le_row_needs_phase_one() {
        // -x1 - x2 <= -1, minimize x1 + 2 x2: optimum x = (1, 0).
        let p = inst(
            Direction::Minimize,
            vec![1.0, 2.0],
            vec![(vec![(0, -1.0), (1, -1.0)], Sense::Le, -1.0)],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!(check_optimality_certificate(&p, &sol));
    }

    #[test]
    fn maximization_is_negated_internally() {
        let p = inst(
            Direction::Maximize,
            vec![1.0, 1.0],
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0)],
        );
        let sol = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - (-1.0)).abs() < 1e-9);
    }

    #[test]
    fn deterministic_resolve_is_bitwise_identical() {
        let p = inst(
            Direction::Minimize,
            vec![-3.0, 1.0, -2.0, 0.5, -1.0],
            vec![
                (vec![(0, 1.0), (1, 2.0), (2, 1.0)], Sense::Le, 2.0),
                (vec![(1, 1.0), (3, -1.0), (4, 2.0)], Sense::Ge, 1.0),
                (vec![(0, 1.0), (4, 1.0)], Sense::Eq, 1.0),
            ],
        );
        let a = solve_lp(&p, default_iteration_limit(&p));
        let b = solve_lp(&p, default_iteration_limit(&p));
        assert_eq!(a.status, b.status);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.values.values(), b.values.values());
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }

    #[test]
    fn iteration_limit_is_reported() {
        let p = inst(
            Direction::Minimize,
            vec![-1.0, -1.0, -1.0],
            vec![
                (vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0),
                (vec![(1, 1.0), (2, 1.0)], Sense::Le, 1.0),
            ],
        );
        let sol = solve_lp(&p, 0);
        assert!(matches!(sol.status, LpStatus::IterationLimit { .. }));
    }

    #[test]
    fn empty_instance_is_trivially_optimal() {
        let p = inst(Direction::Minimize, vec![], vec![]);
        let sol = solve_lp(&p, 10);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, 0.0);
    }

    /// Independent oracle: enumerate candidate vertices of the box polytope
    /// by choosing a set of rows to make tight and a bound pattern for the
    /// remaining variables, solving the small linear system, and keeping the
    /// best feasible point.
    mod vertex_oracle {
        use super::*;

        fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
            let n = b.len();
            for col in 0..n {
                let piv = (col..n).max_by(|&i, &j| {
                    a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
                })?;
                if a[piv][col].abs() < 1e-10 {
                    return None;
                }
                a.swap(col, piv);
                b.swap(col, piv);
                for i in 0..n {
                    if i != col {
                        let f = a[i][col] / a[col][col];
                        if f != 0.0 {
                            for k in col..n {
                                a[i][k] -= f * a[col][k];
                            }
                            b[i] -= f * b[col];
                        }
                    }
                }
            }
            Some((0..n).map(|i| b[i] / a[i][i]).collect())
        }

        fn feasible(inst: &IlpInstance<f64>, x: &[f64]) -> bool {
            if x.iter().any(|&v| !(-1e-7..=1.0 + 1e-7).contains(&v)) {
                return false;
            }
            inst.rows().all(|(row, sense, rhs)| {
                let act: f64 = row.iter().map(|&(j, a)| a * x[j]).sum();
                sense.holds(act, rhs, 1e-7)
            })
        }

        pub fn best_vertex_objective(inst: &IlpInstance<f64>) -> Option<f64> {
            let n = inst.num_vars();
            let m = inst.num_rows();
            let mut best: Option<f64> = None;
            for row_mask in 0u32..(1 << m) {
                let tight: Vec<usize> = (0..m).filter(|i| (row_mask >> i) & 1 == 1).collect();
                let t = tight.len();
                if t > n {
                    continue;
                }
                for free_mask in 0u32..(1 << n) {
                    if (free_mask.count_ones() as usize) != t {
                        continue;
                    }
                    let free: Vec<usize> = (0..n).filter(|j| (free_mask >> j) & 1 == 1).collect();
                    let fixed: Vec<usize> = (0..n).filter(|j| (free_mask >> j) & 1 == 0).collect();
                    for bound_mask in 0u32..(1 << fixed.len()) {
                        let mut x = vec![0.0; n];
                        for (bit, &j) in fixed.iter().enumerate() {
                            x[j] = ((bound_mask >> bit) & 1) as f64;
                        }
                        if t > 0 {
                            let mut a = vec![vec![0.0; t]; t];
                            let mut b = vec![0.0; t];
                            for (ri, &r) in tight.iter().enumerate() {
                                b[ri] = inst.rhs(r);
                                for &(j, coef) in inst.row(r) {
                                    if let Some(ci) = free.iter().position(|&f| f == j) {
                                        a[ri][ci] = coef;
                                    } else {
                                        b[ri] -= coef * x[j];
                                    }
                                }
                            }
                            match solve_dense(a, b) {
                                Some(sol) => {
                                    for (ci, &j) in free.iter().enumerate() {
                                        x[j] = sol[ci];
                                    }
                                }
                                None => continue,
                            }
                        }
                        if feasible(inst, &x) {
                            let obj: f64 =
                                inst.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                            best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                        }
                    }
                }
            }
            best
        }
    }

    #[test]
    fn random_instances_match_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240811);
        for case in 0..12 {
            let n = 8;
            let m = 6;
            let obj: Vec<f64> = (0..n).map(|_| rng.gen_range(-5..=5) as f64).collect();
            let rows: Vec<(Vec<(usize, f64)>, Sense, f64)> = (0..m)
                .map(|_| {
                    let mut terms: Vec<(usize, f64)> = Vec::new();
                    for j in 0..n {
                        if rng.gen_bool(0.5) {
                            let c = rng.gen_range(-3..=3) as f64;
                            if c != 0.0 {
                                terms.push((j, c));
                            }
                        }
                    }
                    let sense = match rng.gen_range(0..3) {
                        0 => Sense::Le,
                        1 => Sense::Ge,
                        _ => Sense::Eq,
                    };
                    let rhs = rng.gen_range(-2..=4) as f64;
                    (terms, sense, rhs)
                })
                .collect();
            let p = inst(Direction::Minimize, obj, rows);
            let sol = solve_lp(&p, default_iteration_limit(&p));
            match vertex_oracle::best_vertex_objective(&p) {
                Some(expected) => {
                    assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
                    assert!(
                        (sol.objective - expected).abs() < 1e-7,
                        "case {case}: got {} expected {expected}",
                        sol.objective
                    );
                    assert!(check_optimality_certificate(&p, &sol), "case {case}");
                }
                None => {
                    assert_eq!(sol.status, LpStatus::Infeasible, "case {case}");
                }
            }
        }
    }
}
