//! Public LP entry points on top of the simplex engine.

use nalgebra::{DMatrix, DVector};

use super::simplex::{solve_standard, StandardLp};
use super::{LpProblem, SolveOutcome, SolveStatus};

/// Solves a general bounded-variable LP.
///
/// On `Optimal` the status carries the primal solution, the objective, the
/// active inequality rows and the multipliers `μ = dual_ineq ≥ 0` and
/// `ν = dual_eq` of the stationarity condition
/// `c + A_ineqᵀ μ + A_eqᵀ ν ∈ normal cone of the bounds at x`
/// (see `check_lp_kkt`).
pub fn solve_lp(p: &LpProblem, tol: f64, max_iter: usize) -> SolveStatus {
    debug_assert!(p.validate().is_ok());
    let n = p.num_vars();
    let n_eq = p.a_eq.nrows();
    let n_in = p.a_ineq.nrows();
    let m = n_eq + n_in;

    // Standard form: [A_eq; A_ineq] x + [0; I] s = [b_eq; b_ineq], s >= 0.
    let mut cols = DMatrix::zeros(m, n + n_in);
    cols.view_mut((0, 0), (n_eq, n)).copy_from(&p.a_eq);
    cols.view_mut((n_eq, 0), (n_in, n)).copy_from(&p.a_ineq);
    for i in 0..n_in {
        cols[(n_eq + i, n + i)] = 1.0;
    }
    let mut rhs = DVector::zeros(m);
    rhs.rows_mut(0, n_eq).copy_from(&p.b_eq);
    rhs.rows_mut(n_eq, n_in).copy_from(&p.b_ineq);

    let mut lower = DVector::from_element(n + n_in, 0.0);
    let mut upper = DVector::from_element(n + n_in, f64::INFINITY);
    lower.rows_mut(0, n).copy_from(&p.lower);
    upper.rows_mut(0, n).copy_from(&p.upper);

    let mut cost = DVector::zeros(n + n_in);
    cost.rows_mut(0, n).copy_from(&p.cost);

    let std = StandardLp {
        cols,
        rhs,
        lower,
        upper,
        cost,
    };
    let res = solve_standard(&std, tol, max_iter);

    if res.outcome != SolveOutcome::Optimal {
        return SolveStatus::failed(res.outcome, res.iterations);
    }

    let x = res.values.rows(0, n).into_owned();
    let slacks = res.values.rows(n, n_in);
    let act_tol = (tol * 10.0).max(1e-8);
    let active_set: Vec<usize> = (0..n_in).filter(|&i| slacks[i] <= act_tol).collect();
    // Simplex row duals y give reduced costs d = c - yᵀA; the user-facing
    // multipliers are mu = -y_ineq (nonnegative), nu = -y_eq.
    let dual_eq = -res.row_duals.rows(0, n_eq).into_owned();
    let dual_ineq = -res.row_duals.rows(n_eq, n_in).into_owned();
    SolveStatus {
        outcome: SolveOutcome::Optimal,
        objective: Some(res.objective),
        solution: Some(x),
        active_set,
        dual_ineq: Some(dual_ineq),
        dual_eq: Some(dual_eq),
        iterations: res.iterations,
    }
}

/// An inequality-form LP `min cᵀx s.t. rows·x ≤ rhs` with free variables.
///
/// This is the shape every geometric query (support functions, redundancy,
/// membership) takes: few variables, many rows.
#[derive(Debug, Clone)]
pub struct IneqLp {
    pub cost: DVector<f64>,
    pub rows: DMatrix<f64>,
    pub rhs: DVector<f64>,
}

/// Solves an inequality-form LP through its dual.
///
/// The dual `min rhsᵀy s.t. rowsᵀy = -c, y ≥ 0` has as many equality rows as
/// the primal has variables, so the simplex basis stays tiny no matter how
/// many inequality rows the primal carries. The primal solution is recovered
/// from the dual's row multipliers; `dual_ineq` of the returned status holds
/// the primal row multipliers y.
pub fn solve_ineq_lp(p: &IneqLp, tol: f64, max_iter: usize) -> SolveStatus {
    let n = p.cost.len();
    let q = p.rhs.len();
    debug_assert_eq!(p.rows.ncols(), n);
    debug_assert_eq!(p.rows.nrows(), q);

    let mut dual = LpProblem::new(p.rhs.clone());
    dual.a_eq = p.rows.transpose();
    dual.b_eq = -p.cost.clone();
    dual.lower = DVector::from_element(q, 0.0);
    dual.upper = DVector::from_element(q, f64::INFINITY);

    let res = solve_lp(&dual, tol, max_iter);
    match res.outcome {
        SolveOutcome::Optimal => {}
        // Dual infeasible <=> primal unbounded; dual unbounded <=> primal
        // infeasible.
        SolveOutcome::Infeasible => {
            return SolveStatus::failed(SolveOutcome::Unbounded, res.iterations)
        }
        SolveOutcome::Unbounded => {
            return SolveStatus::failed(SolveOutcome::Infeasible, res.iterations)
        }
        SolveOutcome::IterLimit => {
            return SolveStatus::failed(SolveOutcome::IterLimit, res.iterations)
        }
    }

    let y = res.solution.expect("optimal dual has a solution");
    let x = -res.dual_eq.expect("optimal dual has row multipliers");
    let objective = p.cost.dot(&x);
    let act_tol = (tol * 10.0).max(1e-8);
    let active_set: Vec<usize> = (0..q)
        .filter(|&i| {
            let r = p.rhs[i] - p.rows.row(i).transpose().dot(&x);
            r.abs() <= act_tol
        })
        .collect();
    SolveStatus {
        outcome: SolveOutcome::Optimal,
        objective: Some(objective),
        solution: Some(x),
        active_set,
        dual_ineq: Some(y),
        dual_eq: None,
        iterations: res.iterations,
    }
}
