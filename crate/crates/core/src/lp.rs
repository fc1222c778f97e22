//! Certified convex-hull membership.
//!
//! Given vertices `V_1..V_n` and a target `p`, decide whether `p = sum_j w_j V_j`
//! with `w >= 0` and `sum_j w_j = 1`. A positive answer carries the weights; a
//! negative answer carries a functional `y` with `y.p > max_j y.V_j`. Both are
//! re-checked before being returned, so a result that leaves this module is
//! either self-certifying or an explicit [`Error::NumericalFailure`].
//!
//! The decision procedure is a dense phase-one simplex with Bland's rule.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::fmt;

use crate::error::{Error, Result};

/// Reduced costs and pivot elements below this magnitude are treated as zero.
pub const PIVOT_TOL: f64 = 1e-10;
/// Default feasibility tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Vertices stored column-major (`dim` entries per vertex) plus a target.
#[derive(Clone, Debug)]
pub struct FeasibilityProblem<'a> {
    vertices: Cow<'a, [f64]>,
    dim: usize,
    target: Cow<'a, [f64]>,
    pub tol: f64,
}

impl<'a> FeasibilityProblem<'a> {
    pub fn new(
        vertices: impl Into<Cow<'a, [f64]>>,
        dim: usize,
        target: impl Into<Cow<'a, [f64]>>,
        tol: f64,
    ) -> Result<Self> {
        let vertices = vertices.into();
        let target = target.into();
        if dim == 0 || target.len() != dim {
            return Err(Error::Shape(format!("target has {} entries, dim is {dim}", target.len())));
        }
        if vertices.is_empty() || vertices.len() % dim != 0 {
            return Err(Error::Shape(format!(
                "{} vertex entries do not split into columns of {dim}",
                vertices.len()
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
        }
        Ok(Self { vertices, dim, target, tol })
    }

    pub fn from_columns(columns: &[Vec<f64>], target: Vec<f64>, tol: f64) -> Result<Self> {
        let dim = target.len();
        if let Some(c) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::Shape(format!("column of length {} in dimension {dim}", c.len())));
        }
        Self::new(columns.concat(), dim, target, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len() / self.dim
    }

    pub fn vertex(&self, j: usize) -> &[f64] {
        &self.vertices[j * self.dim..(j + 1) * self.dim]
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    In,
    Out,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::In => "In",
            Verdict::Out => "Out",
        })
    }
}

/// Separating functional: `functional . target = offset + margin` while
/// `functional . V_j <= offset` for every vertex. Scaled so that its largest
/// coefficient has magnitude one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub functional: Vec<f64>,
    pub offset: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipResult {
    pub verdict: Verdict,
    pub weights: Option<Vec<f64>>,
    pub witness: Option<Witness>,
}

impl MembershipResult {
    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    pub(crate) fn inside(weights: Vec<f64>) -> Self {
        Self { verdict: Verdict::In, weights: Some(weights), witness: None }
    }

    pub(crate) fn outside(witness: Witness) -> Self {
        Self { verdict: Verdict::Out, weights: None, witness: Some(witness) }
    }
}

/// Dense equality system `A x = b, x >= 0`, `A` row-major.
#[derive(Clone, Debug)]
pub struct EqualitySystem {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl EqualitySystem {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, a: vec![0.0; rows * cols], b: vec![0.0; rows] }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] = v;
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }
}

/// Raw phase-one outcome, before any certificate checks.
#[derive(Clone, Debug)]
pub enum SystemOutcome {
    /// `x >= 0` (clamped) with residual `|A x - b|_inf`.
    Feasible { x: Vec<f64>, residual: f64 },
    /// `y` with `y^T A_j <= ~0` for all columns and `y^T b = infeasibility > 0`.
    Infeasible { y: Vec<f64>, infeasibility: f64 },
}

/// Phase-one simplex on `A x + s = b` (rows flipped so `b >= 0`), minimizing
/// the sum of artificials `s`. Bland's rule; artificials never re-enter.
pub fn solve_equality_system(sys: &EqualitySystem, tol: f64) -> Result<SystemOutcome> {
    let (m, n) = (sys.rows, sys.cols);
    if m == 0 || n == 0 || sys.a.len() != m * n || sys.b.len() != m {
        return Err(Error::Shape(format!("equality system {m}x{n} is malformed")));
    }
    let width = n + m;
    let sign: Vec<f64> = sys.b.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();

    let mut t = vec![0.0; m * width];
    let mut rhs = vec![0.0; m];
    for r in 0..m {
        let row = &mut t[r * width..(r + 1) * width];
        for c in 0..n {
            row[c] = sign[r] * sys.a[r * n + c];
        }
        row[n + r] = 1.0;
        rhs[r] = sign[r] * sys.b[r];
    }
    // reduced costs of the phase-one objective
    let mut cost = vec![0.0; width];
    for c in 0..n {
        cost[c] = -(0..m).map(|r| t[r * width + c]).sum::<f64>();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iter = 50 * (m + n) + 10_000;
    let mut iter = 0;
    loop {
        let Some(enter) = (0..n).find(|&c| cost[c] < -PIVOT_TOL) else { break };

        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            let a = t[r * width + enter];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = rhs[r] / a;
            let better = match leave {
                None => true,
                Some(l) => ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[r] < basis[l]),
            };
            if better {
                best = ratio;
                leave = Some(r);
            }
        }
        let Some(pr) = leave else {
            return Err(Error::NumericalFailure("phase-one objective unbounded".into()));
        };

        pivot(&mut t, &mut rhs, &mut cost, width, pr, enter);
        basis[pr] = enter;

        iter += 1;
        if iter > max_iter {
            return Err(Error::NumericalFailure(format!("no convergence after {iter} pivots")));
        }
    }

    // Recompute primal and dual values from the final basis to shed the
    // drift accumulated by repeated row operations.
    let column = |j: usize, r: usize| -> f64 {
        if j < n {
            sign[r] * sys.a[r * n + j]
        } else if j - n == r {
            1.0
        } else {
            0.0
        }
    };
    let bmat = DMatrix::from_fn(m, m, |r, k| column(basis[k], r));
    let lu = bmat.clone().lu();
    let x_b = lu.solve(&DVector::from_column_slice(&rhs_original(sys, &sign))).unwrap_or_else(|| {
        DVector::from_column_slice(&rhs)
    });
    let c_b = DVector::from_iterator(m, basis.iter().map(|&j| if j >= n { 1.0 } else { 0.0 }));
    let y_flipped = bmat.transpose().lu().solve(&c_b);

    let infeasibility: f64 =
        basis.iter().zip(x_b.iter()).filter(|(j, _)| **j >= n).map(|(_, v)| v.max(0.0)).sum();

    if infeasibility <= tol {
        let mut x = vec![0.0; n];
        for (k, &j) in basis.iter().enumerate() {
            if j < n {
                x[j] = x_b[k].max(0.0);
            }
        }
        let residual = (0..m)
            .map(|r| ((0..n).map(|c| sys.a[r * n + c] * x[c]).sum::<f64>() - sys.b[r]).abs())
            .fold(0.0, f64::max);
        Ok(SystemOutcome::Feasible { x, residual })
    } else {
        let y_flipped = match y_flipped {
            Some(y) => y,
            None => {
                // fall back to the tableau's reduced costs of the artificials
                DVector::from_iterator(m, (0..m).map(|r| 1.0 - cost[n + r]))
            }
        };
        let y: Vec<f64> = y_flipped.iter().zip(&sign).map(|(v, s)| v * s).collect();
        let value: f64 = y.iter().zip(&sys.b).map(|(a, b)| a * b).sum();
        Ok(SystemOutcome::Infeasible { y, infeasibility: value })
    }
}

fn rhs_original(sys: &EqualitySystem, sign: &[f64]) -> Vec<f64> {
    sys.b.iter().zip(sign).map(|(b, s)| b * s).collect()
}

fn pivot(t: &mut [f64], rhs: &mut [f64], cost: &mut [f64], width: usize, pr: usize, pc: usize) {
    let m = rhs.len();
    let inv = 1.0 / t[pr * width + pc];
    for v in &mut t[pr * width..(pr + 1) * width] {
        *v *= inv;
    }
    rhs[pr] *= inv;
    t[pr * width + pc] = 1.0;

    let (before, rest) = t.split_at_mut(pr * width);
    let (prow, after) = rest.split_at_mut(width);
    let eliminate = |row: &mut [f64], rhs_r: &mut f64, rhs_p: f64| {
        let f = row[pc];
        if f == 0.0 {
            return;
        }
        for (v, p) in row.iter_mut().zip(prow.iter()) {
            *v -= f * p;
        }
        row[pc] = 0.0;
        *rhs_r -= f * rhs_p;
    };
    let rhs_p = rhs[pr];
    for r in 0..pr {
        eliminate(&mut before[r * width..(r + 1) * width], &mut rhs[r], rhs_p);
    }
    for r in pr + 1..m {
        let k = r - pr - 1;
        eliminate(&mut after[k * width..(k + 1) * width], &mut rhs[r], rhs_p);
    }
    let f = cost[pc];
    if f != 0.0 {
        for (v, p) in cost.iter_mut().zip(prow.iter()) {
            *v -= f * p;
        }
        cost[pc] = 0.0;
    }
}

/// Stacks `[V_1; ...; V_k; 1^T] w = [p_1; ...; p_k; 1]`.
fn stack(problems: &[FeasibilityProblem]) -> Result<EqualitySystem> {
    let first = problems.first().ok_or_else(|| Error::Shape("no problems given".into()))?;
    let n = first.n_vertices();
    if let Some(p) = problems.iter().find(|p| p.n_vertices() != n) {
        return Err(Error::Shape(format!(
            "problems disagree on vertex count: {n} vs {}",
            p.n_vertices()
        )));
    }
    let d_total: usize = problems.iter().map(|p| p.dim).sum();
    let mut sys = EqualitySystem::zeros(d_total + 1, n);
    let mut offset = 0;
    for p in problems {
        for j in 0..n {
            for (k, v) in p.vertex(j).iter().enumerate() {
                sys.set(offset + k, j, *v);
            }
        }
        sys.b[offset..offset + p.dim].copy_from_slice(&p.target);
        offset += p.dim;
    }
    for j in 0..n {
        sys.set(d_total, j, 1.0);
    }
    sys.b[d_total] = 1.0;
    Ok(sys)
}

/// Builds a normalized witness from a functional on the stacked coordinates,
/// computing its offset by scanning every vertex.
pub(crate) fn witness_from_functional(
    problems: &[FeasibilityProblem],
    mut functional: Vec<f64>,
) -> Witness {
    let scale = functional.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale > 0.0 {
        for v in &mut functional {
            *v /= scale;
        }
    }
    let (value, offset) = evaluate_functional(problems, &functional);
    Witness { functional, offset, margin: value - offset }
}

/// Returns `(functional . target, max_j functional . V_j)` on stacked coordinates.
fn evaluate_functional(problems: &[FeasibilityProblem], functional: &[f64]) -> (f64, f64) {
    let n = problems[0].n_vertices();
    let mut value = 0.0;
    let mut best = vec![0.0; n];
    let mut offset = 0;
    for p in problems {
        let y = &functional[offset..offset + p.dim];
        value += dot(y, &p.target);
        for (j, b) in best.iter_mut().enumerate() {
            *b += dot(y, p.vertex(j));
        }
        offset += p.dim;
    }
    (value, best.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn solve_feasibility(problem: &FeasibilityProblem) -> Result<MembershipResult> {
    solve_joint_feasibility(std::slice::from_ref(problem))
}

/// One weight vector must reproduce every target from its own vertex system.
pub fn solve_joint_feasibility(problems: &[FeasibilityProblem]) -> Result<MembershipResult> {
    let sys = stack(problems)?;
    let tol = problems[0].tol;
    let d_total = sys.rows - 1;
    let result = match solve_equality_system(&sys, tol)? {
        SystemOutcome::Feasible { x, .. } => MembershipResult::inside(x),
        SystemOutcome::Infeasible { y, .. } => {
            MembershipResult::outside(witness_from_functional(problems, y[..d_total].to_vec()))
        }
    };
    verify_certificate(problems, &result)?;
    Ok(result)
}

/// Re-checks a result against the problems from scratch.
pub fn verify_certificate(problems: &[FeasibilityProblem], result: &MembershipResult) -> Result<()> {
    let first = problems.first().ok_or_else(|| Error::Shape("no problems given".into()))?;
    let tol = first.tol;
    let n = first.n_vertices();
    match result.verdict {
        Verdict::In => {
            let w = result
                .weights
                .as_ref()
                .ok_or_else(|| Error::NumericalFailure("In verdict without weights".into()))?;
            if w.len() != n {
                return Err(Error::NumericalFailure(format!("{} weights for {n} vertices", w.len())));
            }
            if let Some(v) = w.iter().find(|v| !(**v >= 0.0)) {
                return Err(Error::NumericalFailure(format!("negative weight {v:e}")));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > tol {
                return Err(Error::NumericalFailure(format!("weights sum to {total}")));
            }
            for p in problems {
                let err = reconstruction_error(p, w);
                if err > tol {
                    return Err(Error::NumericalFailure(format!(
                        "reconstruction error {err:e} exceeds {tol:e}"
                    )));
                }
            }
        }
        Verdict::Out => {
            let wit = result
                .witness
                .as_ref()
                .ok_or_else(|| Error::NumericalFailure("Out verdict without witness".into()))?;
            let d_total: usize = problems.iter().map(|p| p.dim).sum();
            if wit.functional.len() != d_total {
                return Err(Error::NumericalFailure(format!(
                    "witness has {} coefficients for dimension {d_total}",
                    wit.functional.len()
                )));
            }
            let (value, max_vertex) = evaluate_functional(problems, &wit.functional);
            if !(value > max_vertex + tol / 2.0) {
                return Err(Error::NumericalFailure(format!(
                    "witness separates by {:e}, need more than {:e}",
                    value - max_vertex,
                    tol / 2.0
                )));
            }
        }
    }
    Ok(())
}

/// `|V w - target|_inf`.
pub fn reconstruction_error(problem: &FeasibilityProblem, weights: &[f64]) -> f64 {
    let mut acc = vec![0.0; problem.dim];
    for (j, w) in weights.iter().enumerate() {
        if *w != 0.0 {
            for (a, v) in acc.iter_mut().zip(problem.vertex(j)) {
                *a += w * v;
            }
        }
    }
    acc.iter().zip(problem.target()).map(|(a, t)| (a - t).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis4() -> Vec<Vec<f64>> {
        (0..4).map(|k| (0..4).map(|i| if i == k { 1.0 } else { 0.0 }).collect()).collect()
    }

    #[test]
    fn barycenter_of_simplex() {
        let p = FeasibilityProblem::from_columns(&basis4(), vec![0.25; 4], DEFAULT_TOL).unwrap();
        let r = solve_feasibility(&p).unwrap();
        assert!(r.is_in());
        for w in r.weights.unwrap() {
            assert!((w - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn vertex_is_its_own_decomposition() {
        let cols = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5], vec![0.2, 0.8]];
        let p = FeasibilityProblem::from_columns(&cols, vec![0.2, 0.8], DEFAULT_TOL).unwrap();
        let r = solve_feasibility(&p).unwrap();
        assert!(r.is_in());
        assert!(reconstruction_error(&p, r.weights.as_ref().unwrap()) < 1e-12);
    }

    #[test]
    fn point_outside_segment_is_separated() {
        let cols = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let p = FeasibilityProblem::from_columns(&cols, vec![0.5, 0.3], DEFAULT_TOL).unwrap();
        let r = solve_feasibility(&p).unwrap();
        assert_eq!(r.verdict, Verdict::Out);
        let w = r.witness.unwrap();
        assert!(w.margin > 0.1);
        assert_eq!(w.functional.iter().fold(0.0f64, |a, v| a.max(v.abs())), 1.0);
    }

    #[test]
    fn negative_targets_are_handled() {
        let cols = vec![vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.0, -2.0]];
        let inside = FeasibilityProblem::from_columns(&cols, vec![0.0, -0.5], DEFAULT_TOL).unwrap();
        assert!(solve_feasibility(&inside).unwrap().is_in());
        let outside = FeasibilityProblem::from_columns(&cols, vec![0.0, -2.5], DEFAULT_TOL).unwrap();
        assert!(!solve_feasibility(&outside).unwrap().is_in());
    }

    #[test]
    fn joint_with_identical_problems_matches_single() {
        let p = FeasibilityProblem::from_columns(&basis4(), vec![0.1, 0.2, 0.3, 0.4], DEFAULT_TOL)
            .unwrap();
        let single = solve_feasibility(&p).unwrap();
        let joint = solve_joint_feasibility(&[p.clone(), p.clone()]).unwrap();
        assert_eq!(single.verdict, joint.verdict);
    }

    #[test]
    fn joint_can_be_infeasible_when_parts_are_not() {
        // each target alone is a vertex, but they need different weights
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let a = FeasibilityProblem::from_columns(&cols, vec![1.0, 0.0], DEFAULT_TOL).unwrap();
        let b = FeasibilityProblem::from_columns(&cols, vec![0.0, 1.0], DEFAULT_TOL).unwrap();
        assert!(solve_feasibility(&a).unwrap().is_in());
        assert!(solve_feasibility(&b).unwrap().is_in());
        let r = solve_joint_feasibility(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(r.verdict, Verdict::Out);
        verify_certificate(&[a, b], &r).unwrap();
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let p = FeasibilityProblem::from_columns(&basis4(), vec![0.25; 4], DEFAULT_TOL).unwrap();
        let bad_in = MembershipResult::inside(vec![1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(verify_certificate(&[p.clone()], &bad_in), Err(Error::NumericalFailure(_))));
        let bad_out = MembershipResult::outside(Witness {
            functional: vec![1.0, 0.0, 0.0, 0.0],
            offset: 0.0,
            margin: 1.0,
        });
        assert!(matches!(verify_certificate(&[p], &bad_out), Err(Error::NumericalFailure(_))));
    }

    #[test]
    fn malformed_problems_are_rejected() {
        assert!(FeasibilityProblem::new(vec![1.0, 2.0, 3.0], 2, vec![0.0, 0.0], 1e-9).is_err());
        assert!(FeasibilityProblem::new(vec![1.0, 2.0], 2, vec![0.0], 1e-9).is_err());
        assert!(FeasibilityProblem::new(vec![1.0, 2.0], 2, vec![0.0, 0.0], 0.0).is_err());
        let a = FeasibilityProblem::new(vec![1.0, 2.0], 2, vec![1.0, 2.0], 1e-9).unwrap();
        let b = FeasibilityProblem::new(vec![1.0, 2.0, 3.0, 4.0], 2, vec![1.0, 2.0], 1e-9).unwrap();
        assert!(matches!(solve_joint_feasibility(&[a, b]), Err(Error::Shape(_))));
    }
}
