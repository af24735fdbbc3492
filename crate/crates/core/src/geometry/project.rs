//! Fourier–Motzkin projection and LP-based redundancy removal.

use nalgebra::{DMatrix, DVector};

use super::{GeometryError, HPolytope, DEFAULT_TOL, LP_ITER_LIMIT};
use crate::solvers::{solve_ineq_lp, IneqLp, SolveOutcome};

/// Drops every redundant row: row i is redundant when maximizing `H_i x`
/// over the set without row i stays below `h_i + tol`. Rows whose removal
/// makes that maximum unbounded are kept.
pub fn remove_redundant(p: &HPolytope, tol: f64) -> Result<HPolytope, GeometryError> {
    let q = p.num_rows();
    let d = p.dim();
    let h = p.rows();
    let off = p.offsets();
    let mut keep: Vec<bool> = vec![true; q];

    for i in 0..q {
        let others: Vec<usize> = (0..q).filter(|&j| j != i && keep[j]).collect();
        if others.is_empty() {
            continue;
        }
        let mut rows = DMatrix::zeros(others.len(), d);
        let mut rhs = DVector::zeros(others.len());
        for (r, &j) in others.iter().enumerate() {
            rows.row_mut(r).copy_from(&h.row(j));
            rhs[r] = off[j];
        }
        let lp = IneqLp {
            cost: -h.row(i).transpose(),
            rows,
            rhs,
        };
        let s = solve_ineq_lp(&lp, DEFAULT_TOL, LP_ITER_LIMIT);
        match s.outcome {
            SolveOutcome::Optimal => {
                let maxval = -s.objective.expect("optimal");
                if maxval <= off[i] + tol {
                    keep[i] = false;
                }
            }
            SolveOutcome::Unbounded => {} // row i is essential for boundedness
            SolveOutcome::Infeasible => return Err(GeometryError::EmptySet),
            SolveOutcome::IterLimit => return Err(GeometryError::SolverStall),
        }
    }

    let kept: Vec<usize> = (0..q).filter(|&i| keep[i]).collect();
    let mut h2 = DMatrix::zeros(kept.len(), d);
    let mut off2 = DVector::zeros(kept.len());
    for (r, &i) in kept.iter().enumerate() {
        h2.row_mut(r).copy_from(&h.row(i));
        off2[r] = off[i];
    }
    HPolytope::from_rows_unchecked(h2, off2)
}

/// Eliminates coordinate `col` by combining rows of opposite sign, keeping
/// rows with a zero coefficient as they are. The result is *not* reduced;
/// callers follow up with [`remove_redundant`].
pub fn fourier_motzkin_eliminate(
    p: &HPolytope,
    col: usize,
) -> Result<HPolytope, GeometryError> {
    let d = p.dim();
    assert!(col < d);
    let h = p.rows();
    let off = p.offsets();
    let q = p.num_rows();

    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut zer = Vec::new();
    for i in 0..q {
        let a = h[(i, col)];
        if a > 1e-12 {
            pos.push(i);
        } else if a < -1e-12 {
            neg.push(i);
        } else {
            zer.push(i);
        }
    }

    let keep_col = |row: usize| -> DVector<f64> {
        let mut r = DVector::zeros(d - 1);
        let mut c = 0;
        for j in 0..d {
            if j != col {
                r[c] = h[(row, j)];
                c += 1;
            }
        }
        r
    };

    let mut new_rows: Vec<(DVector<f64>, f64)> = Vec::with_capacity(zer.len() + pos.len() * neg.len());
    for &i in &zer {
        new_rows.push((keep_col(i), off[i]));
    }
    for &i in &pos {
        for &j in &neg {
            let a_pos = h[(i, col)];
            let a_neg = -h[(j, col)];
            // a_neg * row_i + a_pos * row_j eliminates the column.
            let r = keep_col(i) * a_neg + keep_col(j) * a_pos;
            let o = off[i] * a_neg + off[j] * a_pos;
            new_rows.push((r, o));
        }
    }

    if new_rows.is_empty() {
        return Err(GeometryError::UnboundedSet);
    }
    let mut h2 = DMatrix::zeros(new_rows.len(), d - 1);
    let mut off2 = DVector::zeros(new_rows.len());
    for (r, (row, o)) in new_rows.into_iter().enumerate() {
        h2.row_mut(r).copy_from(&row.transpose());
        off2[r] = o;
    }
    HPolytope::from_rows_unchecked(h2, off2)
}

/// Orthogonal projection onto the first `keep` coordinates: eliminates the
/// remaining coordinates one at a time with redundancy removal after each
/// elimination.
pub fn project(p: &HPolytope, keep: usize, tol: f64) -> Result<HPolytope, GeometryError> {
    assert!(keep >= 1 && keep <= p.dim());
    let mut cur = p.clone();
    while cur.dim() > keep {
        let col = cur.dim() - 1;
        let eliminated = fourier_motzkin_eliminate(&cur, col)?;
        cur = remove_redundant(&eliminated, tol)?;
    }
    Ok(cur)
}
