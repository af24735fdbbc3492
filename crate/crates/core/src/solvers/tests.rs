use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

#[test]
fn lp_scalar_lower_bound() {
    // min x s.t. x >= 1
    let mut p = LpProblem::new(dvec(&[1.0]));
    p.lower[0] = 1.0;
    let s = solve_lp(&p, 1e-9, 1000);
    assert!(s.is_optimal());
    assert_relative_eq!(s.objective.unwrap(), 1.0, epsilon = 1e-9);
    assert_relative_eq!(s.solution.as_ref().unwrap()[0], 1.0, epsilon = 1e-9);
}

#[test]
fn lp_simplex_facet() {
    // min -x1-x2 s.t. x >= 0, x1+x2 <= 1  -> objective -1
    let mut p = LpProblem::new(dvec(&[-1.0, -1.0]));
    p.a_ineq = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    p.b_ineq = dvec(&[1.0]);
    p.lower = dvec(&[0.0, 0.0]);
    let s = solve_lp(&p, 1e-9, 1000);
    assert!(s.is_optimal());
    assert_relative_eq!(s.objective.unwrap(), -1.0, epsilon = 1e-9);
    let r = check_lp_kkt(&p, &s, 1e-7);
    assert!(r.satisfied(1e-7), "{r:?}");
}

#[test]
fn lp_infeasible_and_unbounded() {
    // x <= -1 and x >= 0 is infeasible
    let mut p = LpProblem::new(dvec(&[1.0]));
    p.a_ineq = DMatrix::from_row_slice(1, 1, &[1.0]);
    p.b_ineq = dvec(&[-1.0]);
    p.lower[0] = 0.0;
    assert_eq!(solve_lp(&p, 1e-9, 1000).outcome, SolveOutcome::Infeasible);

    // min x with x free and no constraints is unbounded
    let p = LpProblem::new(dvec(&[1.0]));
    assert_eq!(solve_lp(&p, 1e-9, 1000).outcome, SolveOutcome::Unbounded);
}

#[test]
fn lp_equality_and_bounds() {
    // min x1 + 2 x2 s.t. x1 + x2 = 1, 0 <= x <= 1  -> x = (1, 0)
    let mut p = LpProblem::new(dvec(&[1.0, 2.0]));
    p.a_eq = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    p.b_eq = dvec(&[1.0]);
    p.lower = dvec(&[0.0, 0.0]);
    p.upper = dvec(&[1.0, 1.0]);
    let s = solve_lp(&p, 1e-9, 1000);
    assert!(s.is_optimal());
    assert_relative_eq!(s.objective.unwrap(), 1.0, epsilon = 1e-9);
    let x = s.solution.as_ref().unwrap();
    assert_relative_eq!(x[0], 1.0, epsilon = 1e-9);
    assert_relative_eq!(x[1], 0.0, epsilon = 1e-9);
}

/// Brute-force oracle: enumerate all vertex candidates (d-subsets of active
/// rows) of an inequality-form LP and take the best feasible one.
fn brute_force_ineq(cost: &DVector<f64>, rows: &DMatrix<f64>, rhs: &DVector<f64>) -> f64 {
    let d = cost.len();
    let q = rhs.len();
    let mut best = f64::INFINITY;
    let mut subset = vec![0usize; d];
    fn rec(
        start: usize,
        k: usize,
        subset: &mut Vec<usize>,
        d: usize,
        q: usize,
        cost: &DVector<f64>,
        rows: &DMatrix<f64>,
        rhs: &DVector<f64>,
        best: &mut f64,
    ) {
        if k == d {
            let mut a = DMatrix::zeros(d, d);
            let mut b = DVector::zeros(d);
            for (i, &r) in subset.iter().enumerate() {
                a.row_mut(i).copy_from(&rows.row(r));
                b[i] = rhs[r];
            }
            if let Some(x) = a.lu().solve(&b) {
                let feasible = (0..q).all(|r| rows.row(r).transpose().dot(&x) <= rhs[r] + 1e-7);
                if feasible {
                    *best = best.min(cost.dot(&x));
                }
            }
            return;
        }
        for r in start..q {
            subset[k] = r;
            rec(r + 1, k + 1, subset, d, q, cost, rows, rhs, best);
        }
    }
    rec(0, 0, &mut subset, d, q, cost, rows, rhs, &mut best);
    best
}

#[test]
fn lp_matches_vertex_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..20 {
        let d = 4;
        // Box rows keep the polytope bounded; extra random cuts make the
        // optimum land on nontrivial vertices.
        let mut row_list: Vec<Vec<f64>> = Vec::new();
        let mut rhs_list: Vec<f64> = Vec::new();
        for j in 0..d {
            for sgn in [1.0, -1.0] {
                let mut r = vec![0.0; d];
                r[j] = sgn;
                row_list.push(r);
                rhs_list.push(1.0 + rng.gen::<f64>());
            }
        }
        for _ in 0..8 {
            let r: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            row_list.push(r.iter().map(|v| v / norm).collect());
            rhs_list.push(rng.gen_range(0.2..1.5));
        }
        let q = rhs_list.len();
        let rows = DMatrix::from_fn(q, d, |i, j| row_list[i][j]);
        let rhs = DVector::from_vec(rhs_list);
        let cost = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0f64));

        let expected = brute_force_ineq(&cost, &rows, &rhs);
        assert!(expected.is_finite(), "trial {trial}: oracle found no vertex");

        let lp = IneqLp {
            cost: cost.clone(),
            rows: rows.clone(),
            rhs: rhs.clone(),
        };
        let s = solve_ineq_lp(&lp, 1e-9, 10_000);
        assert!(s.is_optimal(), "trial {trial}: {:?}", s.outcome);
        assert_relative_eq!(s.objective.unwrap(), expected, epsilon = 1e-6);

        // Same instance through the bounded-variable path.
        let mut p = LpProblem::new(cost);
        p.a_ineq = rows;
        p.b_ineq = rhs;
        let s2 = solve_lp(&p, 1e-9, 10_000);
        assert!(s2.is_optimal());
        assert_relative_eq!(s2.objective.unwrap(), expected, epsilon = 1e-6);
        let r = check_lp_kkt(&p, &s2, 1e-6);
        assert!(r.satisfied(1e-6), "trial {trial}: {r:?}");
    }
}

/// The two LP code paths (primal with slacks, dual-form) must agree: this is
/// the duality-gap check, since the dual-form objective is recovered from the
/// dual solution.
#[test]
fn lp_duality_gap_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let d = rng.gen_range(2..5);
        let extra = rng.gen_range(2..8);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..d {
            for sgn in [1.0, -1.0] {
                let mut r = vec![0.0; d];
                r[j] = sgn;
                rows.push(r);
                rhs.push(rng.gen_range(0.5..2.0));
            }
        }
        for _ in 0..extra {
            let r: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            rows.push(r);
            rhs.push(rng.gen_range(0.1..1.0));
        }
        let q = rhs.len();
        let a = DMatrix::from_fn(q, d, |i, j| rows[i][j]);
        let b = DVector::from_vec(rhs);
        let c = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0f64));

        let via_dual = solve_ineq_lp(
            &IneqLp {
                cost: c.clone(),
                rows: a.clone(),
                rhs: b.clone(),
            },
            1e-9,
            10_000,
        );
        let mut p = LpProblem::new(c);
        p.a_ineq = a;
        p.b_ineq = b;
        let via_primal = solve_lp(&p, 1e-9, 10_000);
        // 0 is always feasible here (rhs > 0 except random rows... those can
        // exclude it), so allow infeasible agreement too.
        assert_eq!(via_dual.outcome, via_primal.outcome);
        if via_dual.is_optimal() {
            assert_relative_eq!(
                via_dual.objective.unwrap(),
                via_primal.objective.unwrap(),
                epsilon = 1e-6
            );
            // Feasibility of the recovered dual-form solution.
            let x = via_dual.solution.as_ref().unwrap();
            let resid = &p.a_ineq * x - &p.b_ineq;
            assert!(resid.iter().all(|v| *v <= 1e-7));
        }
    }
}

#[test]
fn qp_scalar_bound() {
    // min u^2 s.t. u >= 1  -> u = 1
    let p = QpProblem::new(
        DMatrix::from_row_slice(1, 1, &[2.0]),
        dvec(&[0.0]),
        DMatrix::from_row_slice(1, 1, &[-1.0]),
        dvec(&[-1.0]),
    )
    .unwrap();
    let s = solve_qp(&p, 1e-9, 100);
    assert!(s.is_optimal());
    assert_relative_eq!(s.solution.as_ref().unwrap()[0], 1.0, epsilon = 1e-8);
    let r = check_qp_kkt(&p, &s);
    assert!(r.satisfied(1e-7), "{r:?}");
}

#[test]
fn qp_projection_onto_box() {
    // min ||x - (2,0)||^2 s.t. ||x||_inf <= 1  -> x = (1, 0)
    let a = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]);
    let b = dvec(&[1.0, 1.0, 1.0, 1.0]);
    let p = QpProblem::new(
        DMatrix::identity(2, 2) * 2.0,
        dvec(&[-4.0, 0.0]),
        a,
        b,
    )
    .unwrap();
    let s = solve_qp(&p, 1e-9, 100);
    assert!(s.is_optimal());
    let x = s.solution.as_ref().unwrap();
    assert_relative_eq!(x[0], 1.0, epsilon = 1e-8);
    assert_relative_eq!(x[1], 0.0, epsilon = 1e-8);
}

#[test]
fn qp_equality_constrained_symmetric() {
    // min x'x s.t. 1'x = 1 in dimension 3 -> x = (1/3, 1/3, 1/3)
    let p = QpProblem::new(
        DMatrix::identity(3, 3) * 2.0,
        dvec(&[0.0, 0.0, 0.0]),
        DMatrix::zeros(0, 3),
        dvec(&[]),
    )
    .unwrap()
    .with_equalities(DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]), dvec(&[1.0]));
    let s = solve_qp(&p, 1e-9, 100);
    assert!(s.is_optimal());
    for i in 0..3 {
        assert_relative_eq!(s.solution.as_ref().unwrap()[i], 1.0 / 3.0, epsilon = 1e-8);
    }
}

#[test]
fn qp_infeasible() {
    let p = QpProblem::new(
        DMatrix::identity(1, 1),
        dvec(&[0.0]),
        DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
        dvec(&[-1.0, -1.0]), // x <= -1 and x >= 1
    )
    .unwrap();
    assert_eq!(solve_qp(&p, 1e-9, 100).outcome, SolveOutcome::Infeasible);
}

#[test]
fn qp_rejects_bad_hessians() {
    let asym = QpProblem::new(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]),
        dvec(&[0.0, 0.0]),
        DMatrix::zeros(0, 2),
        dvec(&[]),
    );
    assert!(matches!(asym, Err(SolverError::NotSymmetric(_))));

    let indef = QpProblem::new(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        dvec(&[0.0, 0.0]),
        DMatrix::zeros(0, 2),
        dvec(&[]),
    );
    assert!(matches!(indef, Err(SolverError::NotPsd(_))));
}

/// A QP with zero Hessian is an LP; the two solvers must agree.
#[test]
fn qp_zero_hessian_reduces_to_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let d = rng.gen_range(2..4);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..d {
            for sgn in [1.0, -1.0] {
                let mut r = vec![0.0; d];
                r[j] = sgn;
                rows.push(r);
                rhs.push(rng.gen_range(0.5..2.0));
            }
        }
        let q = rhs.len();
        let a = DMatrix::from_fn(q, d, |i, j| rows[i][j]);
        let b = DVector::from_vec(rhs.clone());
        let c = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0f64));

        let qp = QpProblem::new(DMatrix::zeros(d, d), c.clone(), a.clone(), b.clone()).unwrap();
        let sq = solve_qp(&qp, 1e-9, 1000);
        assert!(sq.is_optimal());

        let sl = solve_ineq_lp(
            &IneqLp {
                cost: c,
                rows: a,
                rhs: b,
            },
            1e-9,
            10_000,
        );
        assert!(sl.is_optimal());
        assert_relative_eq!(
            sq.objective.unwrap(),
            sl.objective.unwrap(),
            epsilon = 1e-6
        );
    }
}

/// Random strictly convex QPs over boxes: every Optimal result must pass the
/// independent KKT audit.
#[test]
fn qp_kkt_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let d = rng.gen_range(2..6);
        let m_raw = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0f64));
        let hess = &m_raw * m_raw.transpose() + DMatrix::identity(d, d) * 0.1;
        let f = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0f64));
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..d {
            for sgn in [1.0, -1.0] {
                let mut r = vec![0.0; d];
                r[j] = sgn;
                rows.push(r);
                rhs.push(rng.gen_range(0.1..1.0));
            }
        }
        let q = rhs.len();
        let a = DMatrix::from_fn(q, d, |i, j| rows[i][j]);
        let b = DVector::from_vec(rhs);
        let p = QpProblem::new(hess, f, a, b).unwrap();
        let s = solve_qp(&p, 1e-9, 1000);
        assert!(s.is_optimal());
        let r = check_qp_kkt(&p, &s);
        assert!(r.satisfied(1e-6), "{r:?}");
    }
}
