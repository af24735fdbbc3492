//! Dense linear- and quadratic-program solvers.
//!
//! Every LP and QP in the crate goes through these routines: a
//! bounded-variable revised simplex (with a Bland's-rule fallback for
//! anti-cycling) and a primal active-set QP method. Both are deterministic:
//! ties in pivot and constraint selection are broken by lowest index.

mod kkt;
mod lp;
mod qp;
mod simplex;
#[cfg(test)]
mod tests;

pub use kkt::{check_lp_kkt, check_qp_kkt, KktReport};
pub use lp::{solve_ineq_lp, solve_lp, IneqLp};
pub use qp::solve_qp;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("problem data not finite: {0}")]
    NotFinite(String),
    #[error("Hessian is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("Hessian is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
}

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

/// Result of an LP or QP solve. `solution` is present iff the outcome is
/// `Optimal`.
#[derive(Debug, Clone)]
pub struct SolveStatus {
    pub outcome: SolveOutcome,
    pub solution: Option<DVector<f64>>,
    pub objective: Option<f64>,
    /// Indices of inequality rows active at the solution.
    pub active_set: Vec<usize>,
    /// Multipliers for the inequality rows (nonnegative at an optimum).
    pub dual_ineq: Option<DVector<f64>>,
    /// Multipliers for the equality rows.
    pub dual_eq: Option<DVector<f64>>,
    pub iterations: usize,
}

impl SolveStatus {
    pub fn is_optimal(&self) -> bool {
        self.outcome == SolveOutcome::Optimal
    }

    pub(crate) fn failed(outcome: SolveOutcome, iterations: usize) -> Self {
        SolveStatus {
            outcome,
            solution: None,
            objective: None,
            active_set: Vec::new(),
            dual_ineq: None,
            dual_eq: None,
            iterations,
        }
    }
}

/// A linear program
/// `min cᵀx  s.t.  A_ineq x ≤ b_ineq,  A_eq x = b_eq,  lo ≤ x ≤ hi`,
/// with ±∞ allowed in the bounds.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub cost: DVector<f64>,
    pub a_ineq: DMatrix<f64>,
    pub b_ineq: DVector<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
    pub lower: DVector<f64>,
    pub upper: DVector<f64>,
}

impl LpProblem {
    /// An LP with no rows and free variables; add constraints on the fields.
    pub fn new(cost: DVector<f64>) -> Self {
        let n = cost.len();
        LpProblem {
            cost,
            a_ineq: DMatrix::zeros(0, n),
            b_ineq: DVector::zeros(0),
            a_eq: DMatrix::zeros(0, n),
            b_eq: DVector::zeros(0),
            lower: DVector::from_element(n, f64::NEG_INFINITY),
            upper: DVector::from_element(n, f64::INFINITY),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.num_vars();
        for (name, m) in [("a_ineq", &self.a_ineq), ("a_eq", &self.a_eq)] {
            if m.ncols() != n {
                return Err(SolverError::DimensionMismatch(format!(
                    "{name} has {} columns, expected {n}",
                    m.ncols()
                )));
            }
        }
        if self.a_ineq.nrows() != self.b_ineq.len() || self.a_eq.nrows() != self.b_eq.len() {
            return Err(SolverError::DimensionMismatch(
                "row counts of A and b disagree".into(),
            ));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(SolverError::DimensionMismatch("bound lengths".into()));
        }
        if self.b_ineq.iter().any(|v| !v.is_finite()) || self.b_eq.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NotFinite("right-hand sides".into()));
        }
        if self.cost.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NotFinite("cost".into()));
        }
        Ok(())
    }
}

/// A convex quadratic program
/// `min ½ zᵀHz + fᵀz  s.t.  A_ineq z ≤ b_ineq,  A_eq z = b_eq`.
#[derive(Debug, Clone)]
pub struct QpProblem {
    pub hessian: DMatrix<f64>,
    pub linear: DVector<f64>,
    pub a_ineq: DMatrix<f64>,
    pub b_ineq: DVector<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
}

impl QpProblem {
    /// Builds the problem and checks the Hessian: symmetric within 1e-10 and
    /// minimum eigenvalue ≥ -1e-8.
    pub fn new(
        hessian: DMatrix<f64>,
        linear: DVector<f64>,
        a_ineq: DMatrix<f64>,
        b_ineq: DVector<f64>,
    ) -> Result<Self, SolverError> {
        let n = linear.len();
        let p = QpProblem {
            hessian,
            linear,
            a_ineq,
            b_ineq,
            a_eq: DMatrix::zeros(0, n),
            b_eq: DVector::zeros(0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_equalities(mut self, a_eq: DMatrix<f64>, b_eq: DVector<f64>) -> Self {
        self.a_eq = a_eq;
        self.b_eq = b_eq;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.num_vars();
        if self.hessian.nrows() != n || self.hessian.ncols() != n {
            return Err(SolverError::DimensionMismatch("hessian shape".into()));
        }
        if self.a_ineq.ncols() != n && self.a_ineq.nrows() > 0 {
            return Err(SolverError::DimensionMismatch("a_ineq columns".into()));
        }
        if self.a_ineq.nrows() != self.b_ineq.len() {
            return Err(SolverError::DimensionMismatch("b_ineq length".into()));
        }
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                asym = asym.max((self.hessian[(i, j)] - self.hessian[(j, i)]).abs());
            }
        }
        if asym > 1e-10 {
            return Err(SolverError::NotSymmetric(asym));
        }
        let eig = self.hessian.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-8 {
            return Err(SolverError::NotPsd(min_eig));
        }
        Ok(())
    }
}
