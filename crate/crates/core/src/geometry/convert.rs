//! Conversions between H- and V-representation (dimensions 1 to 3).

use nalgebra::{DMatrix, DVector};

use super::{GeometryError, HPolytope, VPolytope};

/// All vertices of a bounded polytope, found by enumerating d-subsets of
/// rows and keeping feasible nonsingular intersections. Supported for
/// `dim ≤ 3`; higher dimensions return `Unsupported`.
///
/// In 2-D the vertices come back in counterclockwise order around the
/// centroid, which downstream sector computations rely on.
pub fn vrep_from_hrep(p: &HPolytope, tol: f64) -> Result<VPolytope, GeometryError> {
    let d = p.dim();
    if d > 3 {
        return Err(GeometryError::Unsupported(format!(
            "vertex enumeration limited to dimension 3, got {d}"
        )));
    }
    let q = p.num_rows();
    if q < d {
        return Err(GeometryError::UnboundedSet);
    }
    let h = p.rows();
    let off = p.offsets();

    let mut verts: Vec<DVector<f64>> = Vec::new();
    let mut subset = vec![0usize; d];
    enumerate_subsets(q, d, &mut subset, &mut |rows_idx| {
        let mut a = DMatrix::zeros(d, d);
        let mut b = DVector::zeros(d);
        for (i, &r) in rows_idx.iter().enumerate() {
            a.row_mut(i).copy_from(&h.row(r));
            b[i] = off[r];
        }
        let lu = a.lu();
        if lu.determinant().abs() < 1e-10 {
            return;
        }
        let x = match lu.solve(&b) {
            Some(x) => x,
            None => return,
        };
        if !p.contains(&x, tol.max(1e-9)) {
            return;
        }
        let dedup = (tol * 10.0).max(1e-9);
        if verts.iter().all(|v| (v - &x).norm() > dedup) {
            verts.push(x);
        }
    });

    if verts.is_empty() {
        return Err(GeometryError::EmptySet);
    }
    if d == 2 {
        let cx = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
        let cy = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
        verts.sort_by(|a, b| {
            let aa = (a[1] - cy).atan2(a[0] - cx);
            let bb = (b[1] - cy).atan2(b[0] - cx);
            aa.partial_cmp(&bb).unwrap()
        });
    } else {
        verts.sort_by(|a, b| a.as_slice().partial_cmp(b.as_slice()).unwrap());
    }
    let mut m = DMatrix::zeros(d, verts.len());
    for (c, v) in verts.iter().enumerate() {
        m.set_column(c, v);
    }
    Ok(VPolytope::new(m))
}

fn enumerate_subsets(q: usize, d: usize, subset: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        k: usize,
        q: usize,
        d: usize,
        subset: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if k == d {
            f(subset);
            return;
        }
        for r in start..q {
            subset[k] = r;
            rec(r + 1, k + 1, q, d, subset, f);
        }
    }
    rec(0, 0, q, d, subset, f);
}

/// Minimal H-representation of the hull of the given vertices. Requires a
/// full-dimensional set (`≥ d+1` affinely independent vertices); supported
/// for `dim ≤ 3`.
pub fn hrep_from_vrep(p: &VPolytope) -> Result<HPolytope, GeometryError> {
    let d = p.dim();
    let v = p.num_vertices();
    if d > 3 {
        return Err(GeometryError::Unsupported(format!(
            "facet enumeration limited to dimension 3, got {d}"
        )));
    }

    // Full-dimensionality: rank of (v_j - centroid) must be d.
    if v < d + 1 {
        return Err(GeometryError::DegenerateSet);
    }
    let verts = p.vertices();
    let centroid = verts.column_mean();
    let mut centered = verts.clone();
    for mut c in centered.column_iter_mut() {
        c -= &centroid;
    }
    let rank = centered.svd(false, false).rank(1e-9);
    if rank < d {
        return Err(GeometryError::DegenerateSet);
    }

    match d {
        1 => {
            let lo = verts.row(0).min();
            let hi = verts.row(0).max();
            HPolytope::new(
                DMatrix::from_column_slice(2, 1, &[1.0, -1.0]),
                DVector::from_column_slice(&[hi, -lo]),
            )
        }
        2 => {
            let pts: Vec<[f64; 2]> = (0..v).map(|j| [verts[(0, j)], verts[(1, j)]]).collect();
            let hull = convex_hull_2d(&pts);
            let k = hull.len();
            if k < 3 {
                return Err(GeometryError::DegenerateSet);
            }
            let mut h = DMatrix::zeros(k, 2);
            let mut off = DVector::zeros(k);
            for i in 0..k {
                let p0 = hull[i];
                let p1 = hull[(i + 1) % k];
                let e = [p1[0] - p0[0], p1[1] - p0[1]];
                // Outward normal of a CCW hull edge.
                let n = [e[1], -e[0]];
                h[(i, 0)] = n[0];
                h[(i, 1)] = n[1];
                off[i] = n[0] * p0[0] + n[1] * p0[1];
            }
            HPolytope::new(h, off)
        }
        3 => {
            let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
            for i in 0..v {
                for j in (i + 1)..v {
                    for k in (j + 1)..v {
                        let a = verts.column(i);
                        let b = verts.column(j);
                        let c = verts.column(k);
                        let ab = b - a;
                        let ac = c - a;
                        let n = DVector::from_column_slice(&[
                            ab[1] * ac[2] - ab[2] * ac[1],
                            ab[2] * ac[0] - ab[0] * ac[2],
                            ab[0] * ac[1] - ab[1] * ac[0],
                        ]);
                        let norm = n.norm();
                        if norm < 1e-10 {
                            continue;
                        }
                        let n = n / norm;
                        let o = n.dot(&a.into_owned());
                        // Keep the orientation with all points on or below.
                        let (n, o) = {
                            let maxv = (0..v)
                                .map(|c2| n.dot(&verts.column(c2).into_owned()))
                                .fold(f64::NEG_INFINITY, f64::max);
                            let minv = (0..v)
                                .map(|c2| n.dot(&verts.column(c2).into_owned()))
                                .fold(f64::INFINITY, f64::min);
                            if maxv <= o + 1e-9 {
                                (n, o)
                            } else if minv >= o - 1e-9 {
                                (-n, -o)
                            } else {
                                continue;
                            }
                        };
                        if rows
                            .iter()
                            .all(|(rn, ro)| (rn - &n).norm() > 1e-8 || (ro - o).abs() > 1e-8)
                        {
                            rows.push((n, o));
                        }
                    }
                }
            }
            if rows.len() < 4 {
                return Err(GeometryError::DegenerateSet);
            }
            let mut h = DMatrix::zeros(rows.len(), 3);
            let mut off = DVector::zeros(rows.len());
            for (r, (n, o)) in rows.into_iter().enumerate() {
                h.row_mut(r).copy_from(&n.transpose());
                off[r] = o;
            }
            HPolytope::new(h, off)
        }
        _ => unreachable!(),
    }
}

/// Andrew's monotone chain; returns the hull in counterclockwise order.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-14
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-14
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
