//! Primal active-set method for convex QPs.
//!
//! The Hessian gets a 1e-10 regularization floor so that the equality-
//! constrained subproblems stay solvable when the true Hessian is only
//! positive semidefinite (condensed horizon costs with Q ⪰ 0 can be
//! near-singular). A feasible starting point comes from a min-max-violation
//! LP solved in dual form, so row-heavy problems never build a large simplex
//! basis.

use nalgebra::{DMatrix, DVector};

use super::lp::{solve_ineq_lp, IneqLp};
use super::{QpProblem, SolveOutcome, SolveStatus};

const HESSIAN_FLOOR: f64 = 1e-10;
const STEP_TOL: f64 = 1e-11;

pub fn solve_qp(p: &QpProblem, tol: f64, max_iter: usize) -> SolveStatus {
    let n = p.num_vars();
    let n_in = p.a_ineq.nrows();
    let n_eq = p.a_eq.nrows();

    let mut hess = p.hessian.clone();
    for i in 0..n {
        hess[(i, i)] += HESSIAN_FLOOR;
    }

    // Phase 1: minimize the largest violation t over (z, t), with t >= -1 so
    // the LP stays bounded on strictly feasible interiors.
    let mut z = match phase1(p, tol) {
        Ok(z0) => z0,
        Err(outcome) => return SolveStatus::failed(outcome, 0),
    };

    let mut working: Vec<usize> = Vec::new(); // sorted inequality indices
    let mut iterations = 0usize;

    while iterations < max_iter {
        iterations += 1;
        let grad = &hess * &z + &p.linear;

        // Equality-constrained subproblem on the working set.
        let k = n_eq + working.len();
        let mut c_mat = DMatrix::zeros(k, n);
        c_mat.view_mut((0, 0), (n_eq, n)).copy_from(&p.a_eq);
        for (r, &i) in working.iter().enumerate() {
            c_mat.row_mut(n_eq + r).copy_from(&p.a_ineq.row(i));
        }

        let step = constrained_newton(&hess, &grad, &c_mat);

        if step.amax() <= STEP_TOL * (1.0 + z.amax()) {
            // Stationary on the working set; check multipliers.
            let lambda = multipliers(&c_mat, &grad);
            let mut drop_idx: Option<(usize, f64)> = None;
            for (r, &row) in working.iter().enumerate() {
                let mu = lambda[n_eq + r];
                if mu < -tol {
                    match drop_idx {
                        Some((_, worst)) if mu >= worst - 1e-12 => {}
                        _ => drop_idx = Some((row, mu)),
                    }
                }
            }
            match drop_idx {
                None => {
                    // KKT satisfied.
                    let objective =
                        0.5 * (&p.hessian * &z).dot(&z) + p.linear.dot(&z);
                    let act_tol = (tol * 10.0).max(1e-8);
                    let active_set: Vec<usize> = (0..n_in)
                        .filter(|&i| {
                            (p.b_ineq[i] - p.a_ineq.row(i).transpose().dot(&z)).abs() <= act_tol
                        })
                        .collect();
                    let mut mu_full = DVector::zeros(n_in);
                    for (r, &i) in working.iter().enumerate() {
                        mu_full[i] = lambda[n_eq + r].max(0.0);
                    }
                    return SolveStatus {
                        outcome: SolveOutcome::Optimal,
                        objective: Some(objective),
                        solution: Some(z),
                        active_set,
                        dual_ineq: Some(mu_full),
                        dual_eq: Some(lambda.rows(0, n_eq).into_owned()),
                        iterations,
                    };
                }
                Some((row, _)) => {
                    working.retain(|&i| i != row);
                    continue;
                }
            }
        }

        // Ratio test against rows outside the working set.
        let mut alpha = 1.0f64;
        let mut blocking: Option<usize> = None;
        for i in 0..n_in {
            if working.binary_search(&i).is_ok() {
                continue;
            }
            let denom = p.a_ineq.row(i).transpose().dot(&step);
            if denom > 1e-12 {
                let slack = p.b_ineq[i] - p.a_ineq.row(i).transpose().dot(&z);
                let a = (slack / denom).max(0.0);
                if a < alpha - 1e-12 || (a < alpha + 1e-12 && blocking.map_or(false, |b| b > i)) {
                    alpha = a.min(alpha);
                    blocking = Some(i);
                }
            }
        }

        z += &step * alpha;
        if let Some(i) = blocking {
            if alpha < 1.0 {
                let pos = working.binary_search(&i).unwrap_err();
                working.insert(pos, i);
            }
        }
    }

    SolveStatus::failed(SolveOutcome::IterLimit, iterations)
}

/// Feasible point via `min t s.t. Az - t·1 ≤ b, ±(A_eq z - b_eq) - t·1 ≤ 0,
/// -t ≤ 1`.
fn phase1(p: &QpProblem, tol: f64) -> Result<DVector<f64>, SolveOutcome> {
    let n = p.num_vars();
    let n_in = p.a_ineq.nrows();
    let n_eq = p.a_eq.nrows();
    let q = n_in + 2 * n_eq + 1;

    let mut rows = DMatrix::zeros(q, n + 1);
    let mut rhs = DVector::zeros(q);
    rows.view_mut((0, 0), (n_in, n)).copy_from(&p.a_ineq);
    rhs.rows_mut(0, n_in).copy_from(&p.b_ineq);
    rows.view_mut((n_in, 0), (n_eq, n)).copy_from(&p.a_eq);
    rhs.rows_mut(n_in, n_eq).copy_from(&p.b_eq);
    rows.view_mut((n_in + n_eq, 0), (n_eq, n))
        .copy_from(&(-&p.a_eq));
    rhs.rows_mut(n_in + n_eq, n_eq).copy_from(&(-&p.b_eq));
    for i in 0..(n_in + 2 * n_eq) {
        rows[(i, n)] = -1.0;
    }
    rows[(q - 1, n)] = -1.0;
    rhs[q - 1] = 1.0;

    let mut cost = DVector::zeros(n + 1);
    cost[n] = 1.0;

    let lp = IneqLp { cost, rows, rhs };
    let res = solve_ineq_lp(&lp, tol.min(1e-9), 50_000);
    if res.outcome != SolveOutcome::Optimal {
        return Err(res.outcome);
    }
    let sol = res.solution.expect("optimal");
    let t = sol[n];
    if t > tol.max(1e-8) {
        return Err(SolveOutcome::Infeasible);
    }
    Ok(sol.rows(0, n).into_owned())
}

/// Minimizer of ½pᵀHp + gᵀp subject to Cp = 0 (H positive definite after the
/// floor). The nullspace of C comes from the eigendecomposition of CᵀC, so
/// rank-deficient working sets (near-duplicate rows) are harmless.
fn constrained_newton(
    hess: &DMatrix<f64>,
    grad: &DVector<f64>,
    c_mat: &DMatrix<f64>,
) -> DVector<f64> {
    let n = grad.len();
    if c_mat.nrows() == 0 {
        return solve_pd(hess, &(-grad));
    }
    let gram = c_mat.transpose() * c_mat;
    let eig = gram.symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let e_tol = emax * 1e-12 + 1e-14;
    let null_cols: Vec<usize> = (0..n).filter(|&j| eig.eigenvalues[j] <= e_tol).collect();
    if null_cols.is_empty() {
        return DVector::zeros(n);
    }
    let mut z_basis = DMatrix::zeros(n, null_cols.len());
    for (k, &j) in null_cols.iter().enumerate() {
        z_basis.set_column(k, &eig.eigenvectors.column(j));
    }
    let hr = z_basis.transpose() * hess * &z_basis;
    let gr = z_basis.transpose() * grad;
    let pr = solve_pd(&hr, &(-gr));
    &z_basis * pr
}

/// Least-squares multipliers of Cᵀλ = -g.
fn multipliers(c_mat: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    if c_mat.nrows() == 0 {
        return DVector::zeros(0);
    }
    let svd = c_mat.transpose().svd(true, true);
    svd.solve(&(-grad), 1e-12).expect("svd solve")
}

fn solve_pd(m: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    match m.clone().cholesky() {
        Some(ch) => ch.solve(rhs),
        None => m
            .clone()
            .svd(true, true)
            .solve(rhs, 1e-13)
            .expect("svd solve"),
    }
}
