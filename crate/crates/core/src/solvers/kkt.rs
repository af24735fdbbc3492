//! Independent first-order optimality checks.
//!
//! These recompute every residual from the raw problem data and the returned
//! solution/multipliers; they share no code with the solvers they audit.

use nalgebra::DVector;

use super::{LpProblem, QpProblem, SolveStatus};

#[derive(Debug, Clone)]
pub struct KktReport {
    pub stationarity: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub complementarity: f64,
}

impl KktReport {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.stationarity <= tol
            && self.primal_infeasibility <= tol
            && self.dual_infeasibility <= tol
            && self.complementarity <= tol
    }
}

/// Verifies `status` as a KKT point of `p`.
///
/// Stationarity convention: `g = c + A_ineqᵀμ + A_eqᵀν` must satisfy
/// `g_j ≥ 0` where `x_j` sits at its lower bound, `g_j ≤ 0` at its upper
/// bound, and `g_j = 0` in between.
pub fn check_lp_kkt(p: &LpProblem, status: &SolveStatus, tol: f64) -> KktReport {
    let x = status.solution.as_ref().expect("solution");
    let mu = status.dual_ineq.as_ref().expect("ineq multipliers");
    let nu = status.dual_eq.as_ref().expect("eq multipliers");

    let mut primal: f64 = 0.0;
    let res_in = &p.a_ineq * x - &p.b_ineq;
    for v in res_in.iter() {
        primal = primal.max(*v);
    }
    let res_eq = &p.a_eq * x - &p.b_eq;
    for v in res_eq.iter() {
        primal = primal.max(v.abs());
    }
    for j in 0..x.len() {
        primal = primal.max(p.lower[j] - x[j]).max(x[j] - p.upper[j]);
    }

    let mut dual: f64 = 0.0;
    for v in mu.iter() {
        dual = dual.max(-*v);
    }

    let g = &p.cost + p.a_ineq.transpose() * mu + p.a_eq.transpose() * nu;
    let at_tol = tol.max(1e-7);
    let mut stat: f64 = 0.0;
    for j in 0..x.len() {
        let at_lower = x[j] <= p.lower[j] + at_tol;
        let at_upper = x[j] >= p.upper[j] - at_tol;
        if at_lower && at_upper {
            continue; // fixed variable: g_j unrestricted
        }
        if at_lower {
            stat = stat.max(-g[j]);
        } else if at_upper {
            stat = stat.max(g[j]);
        } else {
            stat = stat.max(g[j].abs());
        }
    }

    let mut comp: f64 = 0.0;
    for i in 0..mu.len() {
        comp = comp.max((mu[i] * res_in[i]).abs());
    }

    KktReport {
        stationarity: stat,
        primal_infeasibility: primal,
        dual_infeasibility: dual,
        complementarity: comp,
    }
}

/// Verifies `status` as a KKT point of the QP: stationarity
/// `Hz + f + A_ineqᵀμ + A_eqᵀν = 0`, primal feasibility, `μ ≥ 0` and
/// complementary slackness.
pub fn check_qp_kkt(p: &QpProblem, status: &SolveStatus) -> KktReport {
    let z = status.solution.as_ref().expect("solution");
    let mu = status.dual_ineq.as_ref().expect("ineq multipliers");
    let nu = status.dual_eq.as_ref().expect("eq multipliers");

    let res_in = &p.a_ineq * z - &p.b_ineq;
    let res_eq = &p.a_eq * z - &p.b_eq;
    let mut primal: f64 = 0.0;
    for v in res_in.iter() {
        primal = primal.max(*v);
    }
    for v in res_eq.iter() {
        primal = primal.max(v.abs());
    }

    let mut dual: f64 = 0.0;
    for v in mu.iter() {
        dual = dual.max(-*v);
    }

    let g: DVector<f64> =
        &p.hessian * z + &p.linear + p.a_ineq.transpose() * mu + p.a_eq.transpose() * nu;
    let stat = g.amax();

    let mut comp: f64 = 0.0;
    for i in 0..mu.len() {
        comp = comp.max((mu[i] * res_in[i]).abs());
    }

    KktReport {
        stationarity: stat,
        primal_infeasibility: primal,
        dual_infeasibility: dual,
        complementarity: comp,
    }
}
