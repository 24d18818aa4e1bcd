//! Canonical data model for pure-binary integer linear programs.
//!
//! An [`IlpInstance`] is always stored in minimization form; problems that
//! arrive as maximizations are negated on construction and flagged, so the
//! original objective value of any solution can be recovered exactly.
//! Constraint rows keep their native sense (`LE`/`GE`/`EQ`); the LP and
//! branch-and-bound engines handle all three directly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Absolute tolerance used when checking constraint satisfaction.
pub const FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("variable `{0}` is not binary")]
    NonBinaryVariable(String),
    #[error("expected {expected} variable values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("row {row} references variable index {index} outside [0, {n})")]
    IndexOutOfRange { row: usize, index: usize, n: usize },
    #[error("non-finite coefficient in row {row}")]
    NonFiniteCoefficient { row: usize },
    #[error("non-finite objective coefficient for variable {index}")]
    NonFiniteObjective { index: usize },
    #[error("neighborhood radius {k} outside [1, {n}]")]
    InvalidRadius { k: usize, n: usize },
    #[error("incumbent violates row {row} by {violation}")]
    InfeasibleIncumbent { row: usize, violation: f64 },
    #[error("fixing all variables of row {row} leaves it violated by {violation}")]
    FixedRowViolated { row: usize, violation: f64 },
    #[error("fractional value {value} at index {index} outside [0, 1]")]
    ValueOutOfBounds { index: usize, value: f64 },
}

/// Constraint sense of one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "LE")]
    Le,
    #[serde(rename = "GE")]
    Ge,
    #[serde(rename = "EQ")]
    Eq,
}

impl Sense {
    /// Does `activity <sense> rhs` hold within `tol`?
    pub fn holds<S: Scalar>(self, activity: S, rhs: S, tol: S) -> bool {
        match self {
            Sense::Le => activity <= rhs + tol,
            Sense::Ge => activity >= rhs - tol,
            Sense::Eq => (activity - rhs).abs() <= tol,
        }
    }

    /// How far `activity` is past the boundary (zero when satisfied).
    pub fn violation<S: Scalar>(self, activity: S, rhs: S) -> S {
        let zero = S::zero();
        match self {
            Sense::Le => (activity - rhs).max(zero),
            Sense::Ge => (rhs - activity).max(zero),
            Sense::Eq => (activity - rhs).abs(),
        }
    }
}

/// Optimization direction of a source problem before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Declared kind of a variable in a raw (not yet normalized) problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Anything else, carried only so rejection can name it.
    Other(String),
}

/// A problem as read from an external source: any optimization direction,
/// mixed senses, possibly duplicated indices within a row.
#[derive(Debug, Clone)]
pub struct RawProblem<S> {
    pub name: String,
    pub direction: Direction,
    /// One entry per variable: display name plus declared kind.
    pub variables: Vec<(String, VarKind)>,
    pub objective: Vec<S>,
    pub rows: Vec<RawRow<S>>,
}

#[derive(Debug, Clone)]
pub struct RawRow<S> {
    pub terms: Vec<(usize, S)>,
    pub sense: Sense,
    pub rhs: S,
}

impl<S: Scalar> RawProblem<S> {
    /// A raw problem over `n` anonymous binary variables.
    pub fn binary(name: impl Into<String>, direction: Direction, objective: Vec<S>) -> Self {
        let variables = (0..objective.len())
            .map(|i| (format!("x{i}"), VarKind::Binary))
            .collect();
        RawProblem {
            name: name.into(),
            direction,
            variables,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, terms: Vec<(usize, S)>, sense: Sense, rhs: S) {
        self.rows.push(RawRow { terms, sense, rhs });
    }

    /// Normalize into the canonical minimization instance: reject non-binary
    /// variables, negate a maximization objective, merge duplicate indices
    /// within each row by summing coefficients.
    pub fn normalize(self) -> Result<IlpInstance<S>, ModelError> {
        for (name, kind) in &self.variables {
            if !matches!(kind, VarKind::Binary) {
                return Err(ModelError::NonBinaryVariable(name.clone()));
            }
        }
        let n = self.variables.len();
        let maximize = self.direction == Direction::Maximize;
        let objective: Vec<S> = if maximize {
            self.objective.iter().map(|&c| -c).collect()
        } else {
            self.objective.clone()
        };

        let mut rows = Vec::with_capacity(self.rows.len());
        let mut senses = Vec::with_capacity(self.rows.len());
        let mut rhs = Vec::with_capacity(self.rows.len());
        let mut merge = vec![S::zero(); n];
        for (r, raw) in self.rows.into_iter().enumerate() {
            let mut present: Vec<usize> = Vec::with_capacity(raw.terms.len());
            for &(idx, coef) in &raw.terms {
                if idx >= n {
                    return Err(ModelError::IndexOutOfRange { row: r, index: idx, n });
                }
                if merge[idx] == S::zero() && !present.contains(&idx) {
                    present.push(idx);
                }
                merge[idx] += coef;
            }
            present.sort_unstable();
            let merged: Vec<(usize, S)> = present
                .iter()
                .map(|&idx| {
                    let c = merge[idx];
                    merge[idx] = S::zero();
                    (idx, c)
                })
                .collect();
            rows.push(merged);
            senses.push(raw.sense);
            rhs.push(raw.rhs);
        }

        IlpInstance::from_normalized_parts(self.name, n, maximize, objective, rows, senses, rhs)
    }
}

/// A pure-binary ILP in canonical minimization form.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpInstance<S> {
    name: String,
    n: usize,
    maximize: bool,
    objective: Vec<S>,
    rows: Vec<Vec<(usize, S)>>,
    senses: Vec<Sense>,
    rhs: Vec<S>,
}

impl<S: Scalar> IlpInstance<S> {
    /// Assemble from already-normalized parts, validating the invariants:
    /// indices in range, no duplicates within a row, finite data.
    pub fn from_normalized_parts(
        name: String,
        n: usize,
        maximize: bool,
        objective: Vec<S>,
        rows: Vec<Vec<(usize, S)>>,
        senses: Vec<Sense>,
        rhs: Vec<S>,
    ) -> Result<Self, ModelError> {
        assert_eq!(objective.len(), n, "objective length must equal n");
        assert_eq!(rows.len(), senses.len());
        assert_eq!(rows.len(), rhs.len());
        for (i, &c) in objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(ModelError::NonFiniteObjective { index: i });
            }
        }
        for (r, row) in rows.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for &(idx, coef) in row {
                if idx >= n {
                    return Err(ModelError::IndexOutOfRange { row: r, index: idx, n });
                }
                if prev == Some(idx) {
                    return Err(ModelError::IndexOutOfRange { row: r, index: idx, n });
                }
                if prev.map_or(false, |p| idx < p) {
                    return Err(ModelError::IndexOutOfRange { row: r, index: idx, n });
                }
                if !coef.is_finite() {
                    return Err(ModelError::NonFiniteCoefficient { row: r });
                }
                prev = Some(idx);
            }
            if !rhs[r].is_finite() {
                return Err(ModelError::NonFiniteCoefficient { row: r });
            }
        }
        Ok(IlpInstance { name, n, maximize, objective, rows, senses, rhs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Whether the source problem was a maximization (objective already
    /// negated internally).
    pub fn is_maximization(&self) -> bool {
        self.maximize
    }

    pub fn objective(&self) -> &[S] {
        &self.objective
    }

    pub fn row(&self, i: usize) -> &[(usize, S)] {
        &self.rows[i]
    }

    pub fn sense(&self, i: usize) -> Sense {
        self.senses[i]
    }

    pub fn rhs(&self, i: usize) -> S {
        self.rhs[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[(usize, S)], Sense, S)> {
        self.rows
            .iter()
            .zip(&self.senses)
            .zip(&self.rhs)
            .map(|((row, &sense), &rhs)| (row.as_slice(), sense, rhs))
    }

    /// Internal (minimization) objective value of a 0/1 vector.
    pub fn objective_value(&self, values: &[u8]) -> S {
        debug_assert_eq!(values.len(), self.n);
        self.objective
            .iter()
            .zip(values)
            .filter(|(_, &v)| v != 0)
            .map(|(&c, _)| c)
            .sum()
    }

    /// Map an internal objective value back to the source problem's sense.
    pub fn original_objective(&self, internal: S) -> S {
        if self.maximize {
            -internal
        } else {
            internal
        }
    }

    pub fn row_activity(&self, i: usize, values: &[u8]) -> S {
        self.rows[i]
            .iter()
            .filter(|&&(idx, _)| values[idx] != 0)
            .map(|&(_, c)| c)
            .sum()
    }

    /// Check all rows within the absolute tolerance. On violation, reports
    /// the smallest violated row index and its violation magnitude.
    pub fn check_feasible(&self, values: &[u8]) -> Result<Feasibility<S>, ModelError> {
        if values.len() != self.n {
            return Err(ModelError::LengthMismatch { expected: self.n, got: values.len() });
        }
        let tol = S::of(FEASIBILITY_TOL);
        for i in 0..self.rows.len() {
            let activity = self.row_activity(i, values);
            if !self.senses[i].holds(activity, self.rhs[i], tol) {
                return Ok(Feasibility::Violated {
                    row: i,
                    violation: self.senses[i].violation(activity, self.rhs[i]),
                });
            }
        }
        Ok(Feasibility::Feasible)
    }

    pub fn is_feasible(&self, x: &Assignment<S>) -> Result<bool, ModelError> {
        Ok(matches!(self.check_feasible(x.values())?, Feasibility::Feasible))
    }

    /// Original instance plus one Hamming-ball row of radius `k` around the
    /// incumbent, in LE form with the constants moved to the right-hand side:
    /// sum over zero-valued incumbents of `x_i` minus sum over one-valued
    /// incumbents of `x_i` is at most `k - |ones|`.
    pub fn build_lb_ilp(&self, incumbent: &Assignment<S>, k: usize) -> Result<Self, ModelError> {
        if k < 1 || k > self.n {
            return Err(ModelError::InvalidRadius { k, n: self.n });
        }
        if let Feasibility::Violated { row, violation } = self.check_feasible(incumbent.values())? {
            return Err(ModelError::InfeasibleIncumbent {
                row,
                violation: violation.to_f64_lossy(),
            });
        }
        let mut out = self.clone();
        let mut ones = 0usize;
        let row: Vec<(usize, S)> = incumbent
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v != 0 {
                    ones += 1;
                    (i, -S::one())
                } else {
                    (i, S::one())
                }
            })
            .collect();
        out.rows.push(row);
        out.senses.push(Sense::Le);
        out.rhs.push(S::of(k as f64) - S::of(ones as f64));
        Ok(out)
    }

    /// Substitute fixed variables into the rows and the objective, keeping a
    /// sub-instance over the free variables only. Rows left with no free
    /// variable are dropped when satisfied and reported as errors otherwise.
    pub fn restrict(&self, fixed: &[Option<bool>]) -> Result<SubInstance<S>, ModelError> {
        if fixed.len() != self.n {
            return Err(ModelError::LengthMismatch { expected: self.n, got: fixed.len() });
        }
        let mut to_sub = vec![usize::MAX; self.n];
        let mut to_full = Vec::new();
        for (i, f) in fixed.iter().enumerate() {
            if f.is_none() {
                to_sub[i] = to_full.len();
                to_full.push(i);
            }
        }
        let mut offset = S::zero();
        for (i, f) in fixed.iter().enumerate() {
            if *f == Some(true) {
                offset += self.objective[i];
            }
        }
        let objective: Vec<S> = to_full.iter().map(|&i| self.objective[i]).collect();

        let tol = S::of(FEASIBILITY_TOL);
        let mut rows = Vec::new();
        let mut senses = Vec::new();
        let mut rhs = Vec::new();
        for (r, (row, sense, b)) in self.rows().enumerate() {
            let mut free_terms: Vec<(usize, S)> = Vec::new();
            let mut fixed_activity = S::zero();
            for &(idx, coef) in row {
                match fixed[idx] {
                    None => free_terms.push((to_sub[idx], coef)),
                    Some(true) => fixed_activity += coef,
                    Some(false) => {}
                }
            }
            let new_rhs = b - fixed_activity;
            if free_terms.is_empty() {
                if !sense.holds(S::zero(), new_rhs, tol) {
                    return Err(ModelError::FixedRowViolated {
                        row: r,
                        violation: sense.violation(S::zero(), new_rhs).to_f64_lossy(),
                    });
                }
                continue;
            }
            rows.push(free_terms);
            senses.push(sense);
            rhs.push(new_rhs);
        }

        let instance = IlpInstance {
            name: format!("{}#sub", self.name),
            n: to_full.len(),
            maximize: false,
            objective,
            rows,
            senses,
            rhs,
        };
        Ok(SubInstance { instance, to_full, fixed: fixed.to_vec(), offset })
    }

    /// Reduce to the destroyed variables, fixing everything else to the
    /// incumbent. Lifting any feasible sub-solution yields a feasible full
    /// assignment with objective equal to the sub-objective plus the offset.
    pub fn fix_and_project(
        &self,
        incumbent: &Assignment<S>,
        destroy: &[usize],
    ) -> Result<SubInstance<S>, ModelError> {
        if incumbent.values().len() != self.n {
            return Err(ModelError::LengthMismatch {
                expected: self.n,
                got: incumbent.values().len(),
            });
        }
        let mut fixed: Vec<Option<bool>> =
            incumbent.values().iter().map(|&v| Some(v != 0)).collect();
        for &i in destroy {
            if i >= self.n {
                return Err(ModelError::IndexOutOfRange { row: 0, index: i, n: self.n });
            }
            fixed[i] = None;
        }
        self.restrict(&fixed)
    }
}

/// Outcome of a feasibility check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feasibility<S> {
    Feasible,
    Violated { row: usize, violation: S },
}

/// A sub-instance over the free variables of a restriction, with the data
/// needed to lift sub-solutions back to the full space.
#[derive(Debug, Clone)]
pub struct SubInstance<S> {
    pub instance: IlpInstance<S>,
    /// Sub index -> original index.
    pub to_full: Vec<usize>,
    fixed: Vec<Option<bool>>,
    /// Objective contribution of the fixed variables.
    pub offset: S,
}

impl<S: Scalar> SubInstance<S> {
    /// Lift a sub-space 0/1 vector into the full space.
    pub fn lift(&self, full: &IlpInstance<S>, sub_values: &[u8]) -> Result<Assignment<S>, ModelError> {
        if sub_values.len() != self.to_full.len() {
            return Err(ModelError::LengthMismatch {
                expected: self.to_full.len(),
                got: sub_values.len(),
            });
        }
        let mut values: Vec<u8> = self
            .fixed
            .iter()
            .map(|f| match f {
                Some(true) => 1,
                Some(false) => 0,
                None => 0,
            })
            .collect();
        for (s, &i) in self.to_full.iter().enumerate() {
            values[i] = sub_values[s];
        }
        Assignment::new(full, values)
    }

    /// Restrict a full 0/1 vector to the free variables (used to warm-start
    /// the repair solver with the incumbent).
    pub fn project(&self, values: &[u8]) -> Vec<u8> {
        self.to_full.iter().map(|&i| values[i]).collect()
    }
}

/// A full 0/1 assignment with its cached internal objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment<S> {
    values: Vec<u8>,
    objective: S,
}

impl<S: Scalar> Assignment<S> {
    pub fn new(inst: &IlpInstance<S>, values: Vec<u8>) -> Result<Self, ModelError> {
        if values.len() != inst.num_vars() {
            return Err(ModelError::LengthMismatch {
                expected: inst.num_vars(),
                got: values.len(),
            });
        }
        debug_assert!(values.iter().all(|&v| v <= 1));
        let objective = inst.objective_value(&values);
        Ok(Assignment { values, objective })
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn objective(&self) -> S {
        self.objective
    }

    pub fn original_objective(&self, inst: &IlpInstance<S>) -> S {
        inst.original_objective(self.objective)
    }

    pub fn hamming_distance(&self, other: &Assignment<S>) -> usize {
        self.values
            .iter()
            .zip(other.values())
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// A vector in the relaxed box `[0,1]^n` with its cached objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalAssignment<S> {
    values: Vec<S>,
    objective: S,
}

impl<S: Scalar> FractionalAssignment<S> {
    /// Entries must lie in `[-1e-9, 1+1e-9]`; they are clamped to `[0,1]`.
    pub fn new(inst: &IlpInstance<S>, values: Vec<S>) -> Result<Self, ModelError> {
        if values.len() != inst.num_vars() {
            return Err(ModelError::LengthMismatch {
                expected: inst.num_vars(),
                got: values.len(),
            });
        }
        let slack = S::of(1e-9);
        let mut clamped = values;
        for (i, v) in clamped.iter_mut().enumerate() {
            if *v < -slack || *v > S::one() + slack {
                return Err(ModelError::ValueOutOfBounds {
                    index: i,
                    value: v.to_f64_lossy(),
                });
            }
            *v = v.max(S::zero()).min(S::one());
        }
        let objective = inst
            .objective()
            .iter()
            .zip(&clamped)
            .map(|(&c, &v)| c * v)
            .sum();
        Ok(FractionalAssignment { values: clamped, objective })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn objective(&self) -> S {
        self.objective
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(rows: Vec<(Vec<(usize, f64)>, Sense, f64)>, obj: Vec<f64>) -> IlpInstance<f64> {
        let mut raw = RawProblem::binary("toy", Direction::Minimize, obj);
        for (terms, sense, rhs) in rows {
            raw.push_row(terms, sense, rhs);
        }
        raw.normalize().unwrap()
    }

    #[test]
    fn maximization_negates_objective_and_sets_flag() {
        let raw = RawProblem::binary("max", Direction::Maximize, vec![3.0, 2.0]);
        let inst = raw.normalize().unwrap();
        assert!(inst.is_maximization());
        assert_eq!(inst.objective(), &[-3.0, -2.0]);
        let x = Assignment::new(&inst, vec![1, 1]).unwrap();
        assert_eq!(x.objective(), -5.0);
        assert_eq!(x.original_objective(&inst), 5.0);
    }

    #[test]
    fn duplicate_indices_merge_by_summation() {
        let inst = toy(
            vec![(vec![(0, 1.0), (0, 1.0)], Sense::Le, 1.0)],
            vec![0.0],
        );
        assert_eq!(inst.row(0), &[(0, 2.0)]);
    }

    #[test]
    fn eq_sense_survives_normalization() {
        let inst = toy(vec![(vec![(0, 1.0)], Sense::Eq, 1.0)], vec![1.0]);
        assert_eq!(inst.sense(0), Sense::Eq);
    }

    #[test]
    fn non_binary_variable_rejected_by_name() {
        let mut raw = RawProblem::binary("bad", Direction::Minimize, vec![1.0, 1.0]);
        raw.variables[1] = ("y".to_string(), VarKind::Other("continuous".to_string()));
        match raw.normalize() {
            Err(ModelError::NonBinaryVariable(name)) => assert_eq!(name, "y"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn feasibility_reports_first_violated_row() {
        let inst = toy(
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0)],
            vec![0.0, 0.0],
        );
        assert_eq!(inst.check_feasible(&[0, 0]).unwrap(), Feasibility::Feasible);
        match inst.check_feasible(&[1, 1]).unwrap() {
            Feasibility::Violated { row, violation } => {
                assert_eq!(row, 0);
                assert!((violation - 1.0).abs() < 1e-12);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn ge_row_feasibility() {
        let inst = toy(
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)],
            vec![0.0, 0.0],
        );
        assert_eq!(inst.check_feasible(&[1, 0]).unwrap(), Feasibility::Feasible);
    }

    #[test]
    fn feasibility_length_mismatch_is_error() {
        let inst = toy(vec![], vec![0.0, 0.0]);
        assert!(inst.check_feasible(&[0]).is_err());
    }

    #[test]
    fn lb_row_matches_rearranged_form() {
        // x^t = (1,0,1), k=1: -x1 + x2 - x3 <= 1 - 2 = -1
        let inst = toy(vec![], vec![0.0, 0.0, 0.0]);
        let x = Assignment::new(&inst, vec![1, 0, 1]).unwrap();
        let lb = inst.build_lb_ilp(&x, 1).unwrap();
        assert_eq!(lb.num_rows(), 1);
        assert_eq!(lb.row(0), &[(0, -1.0), (1, 1.0), (2, -1.0)]);
        assert_eq!(lb.sense(0), Sense::Le);
        assert_eq!(lb.rhs(0), -1.0);
    }

    #[test]
    fn lb_full_radius_ball_is_vacuous_row() {
        let inst = toy(vec![], vec![0.0, 0.0]);
        let x = Assignment::new(&inst, vec![0, 0]).unwrap();
        let lb = inst.build_lb_ilp(&x, 2).unwrap();
        assert_eq!(lb.row(0), &[(0, 1.0), (1, 1.0)]);
        assert_eq!(lb.rhs(0), 2.0);
    }

    #[test]
    fn lb_rejects_radius_zero() {
        let inst = toy(vec![], vec![0.0, 0.0]);
        let x = Assignment::new(&inst, vec![1, 1]).unwrap();
        assert!(matches!(
            inst.build_lb_ilp(&x, 0),
            Err(ModelError::InvalidRadius { .. })
        ));
    }

    #[test]
    fn lb_rejects_infeasible_incumbent() {
        let inst = toy(
            vec![(vec![(0, 1.0)], Sense::Le, 0.0)],
            vec![0.0],
        );
        let x = Assignment::new(&inst, vec![1]).unwrap();
        assert!(matches!(
            inst.build_lb_ilp(&x, 1),
            Err(ModelError::InfeasibleIncumbent { .. })
        ));
    }

    #[test]
    fn lb_ball_membership_exhaustive() {
        // Every feasible solution of the LB ILP lies within the Hamming ball.
        let inst = toy(
            vec![
                (vec![(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Le, 2.0),
                (vec![(2, 1.0), (3, 1.0)], Sense::Ge, 1.0),
            ],
            vec![1.0, -1.0, 2.0, -2.0],
        );
        let n = inst.num_vars();
        let incumbent = Assignment::new(&inst, vec![0, 1, 0, 1]).unwrap();
        for k in 1..=n {
            let lb = inst.build_lb_ilp(&incumbent, k).unwrap();
            for mask in 0u32..(1 << n) {
                let values: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                if matches!(lb.check_feasible(&values).unwrap(), Feasibility::Feasible) {
                    let y = Assignment::new(&inst, values).unwrap();
                    assert!(y.hamming_distance(&incumbent) <= k);
                }
            }
        }
    }

    #[test]
    fn fix_and_project_substitutes_into_rhs_and_offset() {
        let inst = toy(
            vec![(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Le, 2.0)],
            vec![3.0, 5.0, 7.0],
        );
        let x = Assignment::new(&inst, vec![1, 0, 1]).unwrap();
        let sub = inst.fix_and_project(&x, &[2]).unwrap();
        assert_eq!(sub.instance.num_vars(), 1);
        assert_eq!(sub.instance.num_rows(), 1);
        assert_eq!(sub.instance.row(0), &[(0, 1.0)]);
        assert_eq!(sub.instance.rhs(0), 1.0);
        assert_eq!(sub.offset, 3.0);
        assert_eq!(sub.to_full, vec![2]);
    }

    #[test]
    fn fix_and_project_all_variables_is_identity() {
        let inst = toy(
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0)],
            vec![1.0, 2.0],
        );
        let x = Assignment::new(&inst, vec![0, 0]).unwrap();
        let sub = inst.fix_and_project(&x, &[0, 1]).unwrap();
        assert_eq!(sub.instance.num_vars(), 2);
        assert_eq!(sub.instance.num_rows(), 1);
        assert_eq!(sub.offset, 0.0);
        assert_eq!(sub.instance.row(0), inst.row(0));
    }

    #[test]
    fn fix_and_project_empty_destroy_lifts_incumbent() {
        let inst = toy(
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)],
            vec![1.0, 2.0],
        );
        let x = Assignment::new(&inst, vec![1, 0]).unwrap();
        let sub = inst.fix_and_project(&x, &[]).unwrap();
        assert_eq!(sub.instance.num_vars(), 0);
        let lifted = sub.lift(&inst, &[]).unwrap();
        assert_eq!(lifted, x);
    }

    #[test]
    fn lift_round_trip_objective_is_exact() {
        let inst = toy(
            vec![
                (vec![(0, 2.0), (1, 1.0), (2, 3.0)], Sense::Le, 4.0),
                (vec![(1, 1.0), (3, 1.0)], Sense::Ge, 1.0),
            ],
            vec![1.5, -2.0, 4.0, 0.5],
        );
        let x = Assignment::new(&inst, vec![0, 1, 0, 1]).unwrap();
        let destroy = vec![0, 2];
        let sub = inst.fix_and_project(&x, &destroy).unwrap();
        let m = sub.instance.num_vars();
        for mask in 0u32..(1 << m) {
            let sv: Vec<u8> = (0..m).map(|i| ((mask >> i) & 1) as u8).collect();
            if matches!(sub.instance.check_feasible(&sv).unwrap(), Feasibility::Feasible) {
                let sub_obj = sub.instance.objective_value(&sv);
                let lifted = sub.lift(&inst, &sv).unwrap();
                assert!(matches!(
                    inst.check_feasible(lifted.values()).unwrap(),
                    Feasibility::Feasible
                ));
                assert!((lifted.objective() - (sub_obj + sub.offset)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn fixed_row_violation_detected() {
        let inst = toy(
            vec![(vec![(0, 1.0)], Sense::Ge, 1.0)],
            vec![0.0],
        );
        let sub = inst.restrict(&[Some(false)]);
        assert!(matches!(sub, Err(ModelError::FixedRowViolated { row: 0, .. })));
    }
}
