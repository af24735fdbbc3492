//! Polytope computations in H- and V-representation.
//!
//! Everything is tolerance-disciplined floating point: rows are normalized to
//! unit Euclidean norm on construction, and all membership/inclusion
//! predicates take an explicit absolute tolerance that applies to those
//! normalized rows. The default used across the crate is [`DEFAULT_TOL`].

mod convert;
mod project;
mod sample;

pub use convert::{convex_hull_2d, hrep_from_vrep, vrep_from_hrep};
pub use project::{fourier_motzkin_eliminate, project, remove_redundant};
pub use sample::SampleMode;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::solvers::{solve_ineq_lp, IneqLp, SolveOutcome};

/// Absolute tolerance on unit-norm constraint rows.
pub const DEFAULT_TOL: f64 = 1e-9;

const LP_ITER_LIMIT: usize = 200_000;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("set is unbounded")]
    UnboundedSet,
    #[error("set is empty")]
    EmptySet,
    #[error("set is degenerate (not full-dimensional)")]
    DegenerateSet,
    #[error("operation unsupported: {0}")]
    Unsupported(String),
    #[error("origin is not in the interior of the set")]
    OriginNotInterior,
    #[error("LP solver stalled during a geometric query")]
    SolverStall,
}

/// Compact convex polyhedron `{x | Hx ≤ h}` with unit-norm rows.
#[derive(Debug, Clone)]
pub struct HPolytope {
    h_mat: DMatrix<f64>,
    offsets: DVector<f64>,
}

/// Polytope as a `d × v` matrix of vertex columns.
#[derive(Debug, Clone)]
pub struct VPolytope {
    vertices: DMatrix<f64>,
}

impl HPolytope {
    /// Builds a polytope, normalizing and deduplicating rows and checking
    /// that the set is nonempty and bounded (both via LP).
    pub fn new(h_mat: DMatrix<f64>, offsets: DVector<f64>) -> Result<Self, GeometryError> {
        let p = Self::from_rows_unchecked(h_mat, offsets)?;
        p.assert_compact()?;
        Ok(p)
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn from_box(lo: &DVector<f64>, hi: &DVector<f64>) -> Result<Self, GeometryError> {
        let d = lo.len();
        assert_eq!(d, hi.len());
        let mut h = DMatrix::zeros(2 * d, d);
        let mut off = DVector::zeros(2 * d);
        for i in 0..d {
            h[(2 * i, i)] = 1.0;
            off[2 * i] = hi[i];
            h[(2 * i + 1, i)] = -1.0;
            off[2 * i + 1] = -lo[i];
        }
        Self::new(h, off)
    }

    /// Normalizes and deduplicates rows without the compactness LPs. For
    /// intermediate results whose invariants are maintained by the caller.
    pub(crate) fn from_rows_unchecked(
        h_mat: DMatrix<f64>,
        offsets: DVector<f64>,
    ) -> Result<Self, GeometryError> {
        assert_eq!(h_mat.nrows(), offsets.len());
        let d = h_mat.ncols();
        let mut rows: Vec<(DVector<f64>, f64)> = Vec::with_capacity(h_mat.nrows());
        for i in 0..h_mat.nrows() {
            let r = h_mat.row(i).transpose();
            let norm = r.norm();
            if norm < 1e-12 {
                if offsets[i] < -1e-12 {
                    // 0 ≤ negative constant: empty set.
                    return Err(GeometryError::EmptySet);
                }
                continue; // vacuous row
            }
            let rn = r / norm;
            let on = offsets[i] / norm;
            // Coalesce parallel rows, keeping the most restrictive offset.
            let mut merged = false;
            for (er, eo) in rows.iter_mut() {
                if (&rn - &*er).norm() < 1e-9 {
                    *eo = eo.min(on);
                    merged = true;
                    break;
                }
            }
            if !merged {
                rows.push((rn, on));
            }
        }
        if rows.is_empty() {
            return Err(GeometryError::UnboundedSet);
        }
        let q = rows.len();
        let mut h = DMatrix::zeros(q, d);
        let mut off = DVector::zeros(q);
        for (i, (r, o)) in rows.into_iter().enumerate() {
            h.row_mut(i).copy_from(&r.transpose());
            off[i] = o;
        }
        Ok(HPolytope {
            h_mat: h,
            offsets: off,
        })
    }

    fn assert_compact(&self) -> Result<(), GeometryError> {
        let d = self.dim();
        for i in 0..d {
            for sgn in [1.0, -1.0] {
                let mut dir = DVector::zeros(d);
                dir[i] = sgn;
                match self.support(&dir) {
                    Ok(_) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.h_mat.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.h_mat.nrows()
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.h_mat
    }

    pub fn offsets(&self) -> &DVector<f64> {
        &self.offsets
    }

    /// Maximum of `dirᵀx` over the set with a maximizer.
    pub fn support(&self, dir: &DVector<f64>) -> Result<(f64, DVector<f64>), GeometryError> {
        let lp = IneqLp {
            cost: -dir,
            rows: self.h_mat.clone(),
            rhs: self.offsets.clone(),
        };
        let s = solve_ineq_lp(&lp, DEFAULT_TOL, LP_ITER_LIMIT);
        match s.outcome {
            SolveOutcome::Optimal => {
                let x = s.solution.expect("optimal");
                Ok((dir.dot(&x), x))
            }
            SolveOutcome::Infeasible => Err(GeometryError::EmptySet),
            SolveOutcome::Unbounded => Err(GeometryError::UnboundedSet),
            SolveOutcome::IterLimit => Err(GeometryError::SolverStall),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        let r = &self.h_mat * x - &self.offsets;
        r.iter().all(|v| *v <= tol)
    }

    /// `other ⊆ self` within `tol`, decided by maximizing each row of `self`
    /// over `other`.
    pub fn contains_set(&self, other: &HPolytope, tol: f64) -> Result<bool, GeometryError> {
        for i in 0..self.num_rows() {
            let dir = self.h_mat.row(i).transpose();
            let (val, _) = other.support(&dir)?;
            if val > self.offsets[i] + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scales the set about the origin by `s > 0`. Requires the origin in the
    /// interior (all offsets strictly positive).
    pub fn scale(&self, s: f64) -> Result<HPolytope, GeometryError> {
        assert!(s > 0.0, "scale factor must be positive");
        if self.offsets.iter().any(|o| *o <= 0.0) {
            return Err(GeometryError::OriginNotInterior);
        }
        Ok(HPolytope {
            h_mat: self.h_mat.clone(),
            offsets: &self.offsets * s,
        })
    }

    /// Intersection, with redundant rows removed.
    pub fn intersect(&self, other: &HPolytope, tol: f64) -> Result<HPolytope, GeometryError> {
        assert_eq!(self.dim(), other.dim());
        let q = self.num_rows() + other.num_rows();
        let mut h = DMatrix::zeros(q, self.dim());
        let mut off = DVector::zeros(q);
        h.view_mut((0, 0), (self.num_rows(), self.dim()))
            .copy_from(&self.h_mat);
        off.rows_mut(0, self.num_rows()).copy_from(&self.offsets);
        h.view_mut((self.num_rows(), 0), (other.num_rows(), self.dim()))
            .copy_from(&other.h_mat);
        off.rows_mut(self.num_rows(), other.num_rows())
            .copy_from(&other.offsets);
        let stacked = HPolytope::from_rows_unchecked(h, off)?;
        remove_redundant(&stacked, tol)
    }

    /// Gauge value `max_i H_i x / h_i` when the origin is interior. This is
    /// the Minkowski functional of the set.
    pub fn gauge(&self, x: &DVector<f64>) -> Result<f64, GeometryError> {
        if self.offsets.iter().any(|o| *o <= 0.0) {
            return Err(GeometryError::OriginNotInterior);
        }
        let vals = &self.h_mat * x;
        Ok((0..self.num_rows())
            .map(|i| vals[i] / self.offsets[i])
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0))
    }

    pub fn vertices(&self, tol: f64) -> Result<VPolytope, GeometryError> {
        vrep_from_hrep(self, tol)
    }
}

impl VPolytope {
    pub fn new(vertices: DMatrix<f64>) -> Self {
        VPolytope { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.nrows()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.ncols()
    }

    pub fn vertices(&self) -> &DMatrix<f64> {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> DVector<f64> {
        self.vertices.column(j).into_owned()
    }

    pub fn scale(&self, s: f64) -> VPolytope {
        VPolytope {
            vertices: &self.vertices * s,
        }
    }

    /// Image under the linear map `m` (the hull of mapped vertices).
    pub fn affine_image(&self, m: &DMatrix<f64>) -> VPolytope {
        VPolytope {
            vertices: m * &self.vertices,
        }
    }

    pub fn hrep(&self) -> Result<HPolytope, GeometryError> {
        hrep_from_vrep(self)
    }

    /// Checks by LP that each column is a true vertex (not in the convex hull
    /// of the others). Returns offending column indices.
    pub fn non_vertex_columns(&self, tol: f64) -> Result<Vec<usize>, GeometryError> {
        let v = self.num_vertices();
        let d = self.dim();
        let mut bad = Vec::new();
        for j in 0..v {
            if v == 1 {
                break;
            }
            // Feasibility: theta >= 0, sum theta = 1, V_{-j} theta = v_j.
            // Encoded as an inequality-form LP in theta with two-sided rows.
            let others: Vec<usize> = (0..v).filter(|&k| k != j).collect();
            let k = others.len();
            let mut rows = DMatrix::zeros(2 * d + 2 + k, k);
            let mut rhs = DVector::zeros(2 * d + 2 + k);
            for (c, &o) in others.iter().enumerate() {
                for r in 0..d {
                    rows[(r, c)] = self.vertices[(r, o)];
                    rows[(d + r, c)] = -self.vertices[(r, o)];
                }
                rows[(2 * d, c)] = 1.0;
                rows[(2 * d + 1, c)] = -1.0;
                rows[(2 * d + 2 + c, c)] = -1.0;
            }
            for r in 0..d {
                rhs[r] = self.vertices[(r, j)] + tol;
                rhs[d + r] = -self.vertices[(r, j)] + tol;
            }
            rhs[2 * d] = 1.0 + tol;
            rhs[2 * d + 1] = -1.0 + tol;
            let lp = IneqLp {
                cost: DVector::zeros(k),
                rows,
                rhs,
            };
            let s = solve_ineq_lp(&lp, DEFAULT_TOL, LP_ITER_LIMIT);
            match s.outcome {
                SolveOutcome::Optimal => bad.push(j), // representable: not a vertex
                SolveOutcome::Infeasible => {}
                SolveOutcome::Unbounded => unreachable!("feasibility LP with zero cost"),
                SolveOutcome::IterLimit => return Err(GeometryError::SolverStall),
            }
        }
        Ok(bad)
    }
}

/// Minkowski sum of two 2-D polytopes, as the hull of pairwise vertex sums.
pub fn minkowski_sum_2d(a: &VPolytope, b: &VPolytope) -> Result<VPolytope, GeometryError> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(GeometryError::Unsupported(
            "Minkowski sum implemented for 2-D only".into(),
        ));
    }
    let mut pts = Vec::with_capacity(a.num_vertices() * b.num_vertices());
    for i in 0..a.num_vertices() {
        for j in 0..b.num_vertices() {
            let s = a.vertices.column(i) + b.vertices.column(j);
            pts.push([s[0], s[1]]);
        }
    }
    let hull = convex_hull_2d(&pts);
    let mut m = DMatrix::zeros(2, hull.len());
    for (c, p) in hull.iter().enumerate() {
        m[(0, c)] = p[0];
        m[(1, c)] = p[1];
    }
    Ok(VPolytope::new(m))
}
