use nalgebra::{DMatrix, DVector};

use super::{simplex, solve_lp, HPolytope, LinearProgram, VPolytope};
use crate::error::{Error, Result};
use crate::normed_space::{dot, Vector};

pub const MAX_VERTEX_DIM: usize = 4;

const VERTEX_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-8;

/// All vertices of a bounded nonempty polytope, by brute force over row subsets.
pub fn enumerate_vertices(p: &HPolytope) -> Result<VPolytope> {
    let n = p.dim();
    if n > MAX_VERTEX_DIM {
        return Err(Error::DimTooLarge { dim: n, max: MAX_VERTEX_DIM });
    }
    if n == 0 {
        return Err(Error::InvalidInput("zero-dimensional polytope".into()));
    }
    let (a, b) = p.raw_rows();
    // bounded and nonempty iff every coordinate is bounded both ways
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut c = vec![0.0; n];
            c[i] = sign;
            simplex::solve(&c, &a, &b)?;
        }
    }
    let (a, b) = dedup_rows(&a, &b);
    let m = a.len();
    let mut out: Vec<Vector> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if m < n {
        return Err(Error::Unbounded);
    }
    loop {
        let mat = DMatrix::from_fn(n, n, |r, c| a[idx[r]][c]);
        let rhs = DVector::from_fn(n, |r, _| b[idx[r]]);
        if let Some(x) = mat.clone().lu().solve(&rhs) {
            let x: Vec<f64> = x.iter().copied().collect();
            let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let residual = (&mat * DVector::from_column_slice(&x) - &rhs).amax();
            let feasible = a.iter().zip(&b).all(|(row, bi)| dot(row, &x) - bi <= VERTEX_TOL * scale);
            if residual <= 1e-9 * scale && feasible && x.iter().all(|v| v.is_finite()) {
                push_unique(&mut out, Vector::from_vec_unchecked(x));
            }
        }
        if !next_combination(&mut idx, m) {
            break;
        }
    }
    out.sort_by(|u, v| u.lex_cmp(v));
    VPolytope::new(out)
}

/// Vertices of the optimal face `{x ∈ P : ⟨c, x⟩ ≤ value + 1e-9}`.
pub fn enumerate_optimal_face(lp: &LinearProgram) -> Result<VPolytope> {
    let sol = solve_lp(lp)?;
    let mut face = lp.feasible.clone();
    for (normal, value) in &lp.equalities {
        face.push_equality(normal.clone(), *value)?;
    }
    face.push(lp.objective.clone(), sol.value + 1e-9)?;
    enumerate_vertices(&face)
}

/// Facet description of the convex hull of a full-dimensional point set (dim ≤ 4).
pub fn hull_hrep(v: &VPolytope) -> Result<HPolytope> {
    let n = v.dim();
    if n > MAX_VERTEX_DIM {
        return Err(Error::DimTooLarge { dim: n, max: MAX_VERTEX_DIM });
    }
    let pts = v.vertices();
    let mut poly = HPolytope::new(n);
    let mut normals: Vec<(Vec<f64>, f64)> = Vec::new();
    if pts.len() <= n {
        return Err(Error::InvalidInput("point set is not full-dimensional".into()));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        if let Some((normal, offset)) = hyperplane_through(pts, &idx) {
            for sign in [1.0, -1.0] {
                let nrm: Vec<f64> = normal.iter().map(|c| sign * c).collect();
                let off = sign * offset;
                let supporting = pts.iter().all(|p| dot(&nrm, p.as_slice()) <= off + 1e-9);
                let dup = normals
                    .iter()
                    .any(|(m, o)| (o - off).abs() < 1e-9 && m.iter().zip(&nrm).all(|(x, y)| (x - y).abs() < 1e-9));
                if supporting && !dup {
                    normals.push((nrm, off));
                }
            }
        }
        if !next_combination(&mut idx, pts.len()) {
            break;
        }
    }
    for (nrm, off) in normals {
        poly.push(Vector::from_vec_unchecked(nrm), off)?;
    }
    Ok(poly)
}

/// Unit normal and offset of the affine hyperplane through `n` points, if unique.
fn hyperplane_through(pts: &[Vector], idx: &[usize]) -> Option<(Vec<f64>, f64)> {
    let n = pts[0].dim();
    let base = &pts[idx[0]];
    let diffs = DMatrix::from_fn(n, n, |r, c| if r + 1 < n { pts[idx[r + 1]][c] - base[c] } else { 0.0 });
    let svd = diffs.svd(false, true);
    let vt = svd.v_t?;
    let sv = &svd.singular_values;
    if sv.iter().filter(|s| **s > 1e-10).count() != n - 1 {
        return None;
    }
    let k = (0..n).min_by(|&i, &j| sv[i].total_cmp(&sv[j]))?;
    let normal: Vec<f64> = vt.row(k).iter().copied().collect();
    let len = dot(&normal, &normal).sqrt();
    let normal: Vec<f64> = normal.iter().map(|c| c / len).collect();
    let offset = dot(&normal, base.as_slice());
    Some((normal, offset))
}

fn dedup_rows(a: &[Vec<f64>], b: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, bi) in a.iter().zip(b) {
        let len = dot(row, row).sqrt();
        if len < 1e-14 {
            continue;
        }
        let nrm: Vec<f64> = row.iter().map(|c| c / len).collect();
        let off = bi / len;
        match rows.iter_mut().find(|(m, _)| m.iter().zip(&nrm).all(|(x, y)| (x - y).abs() < 1e-12)) {
            Some((_, o)) => *o = o.min(off),
            None => rows.push((nrm, off)),
        }
    }
    rows.into_iter().unzip()
}

fn push_unique(out: &mut Vec<Vector>, x: Vector) {
    if !out.iter().any(|v| (v - &x).max_abs() <= DEDUP_TOL) {
        out.push(x);
    }
}

/// Advances a sorted k-subset of `0..m` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_four_vertices() {
        let v = enumerate_vertices(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        assert_eq!(v.vertices().len(), 4);
        for p in v.vertices() {
            assert!((p[0].abs() - 1.0).abs() < 1e-12 && (p[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_from_equality_pair() {
        let mut p = HPolytope::new(2);
        p.push_equality(Vector::from([0.0, 1.0]), 0.0).unwrap();
        p.push(Vector::from([1.0, 0.0]), 1.0).unwrap();
        p.push(Vector::from([-1.0, 0.0]), 1.0).unwrap();
        let v = enumerate_vertices(&p).unwrap();
        assert_eq!(v.vertices(), &[Vector::from([-1.0, 0.0]), Vector::from([1.0, 0.0])]);
    }

    #[test]
    fn simplex_in_three_dimensions() {
        let mut p = HPolytope::new(3);
        for i in 0..3 {
            p.push(-&Vector::basis(3, i), 0.0).unwrap();
        }
        p.push(Vector::from([1.0, 1.0, 1.0]), 1.0).unwrap();
        assert_eq!(enumerate_vertices(&p).unwrap().vertices().len(), 4);
    }

    #[test]
    fn errors() {
        assert_eq!(enumerate_vertices(&HPolytope::cube(5, 0.0, 1.0)), Err(Error::DimTooLarge { dim: 5, max: 4 }));
        let half = HPolytope::from_rows(2, vec![(Vector::from([1.0, 0.0]), 1.0)]).unwrap();
        assert_eq!(enumerate_vertices(&half), Err(Error::Unbounded));
        let empty = HPolytope::from_rows(1, vec![(Vector::from([1.0]), -1.0), (Vector::from([-1.0]), 0.0)]).unwrap();
        assert_eq!(enumerate_vertices(&empty), Err(Error::Infeasible));
    }

    #[test]
    fn optimal_face_of_box_edge() {
        let lp = LinearProgram::new(Vector::from([0.0, 1.0]), HPolytope::cube(2, -1.0, 1.0));
        let face = enumerate_optimal_face(&lp).unwrap();
        assert_eq!(face.vertices(), &[Vector::from([-1.0, -1.0]), Vector::from([1.0, -1.0])]);
    }

    #[test]
    fn hull_roundtrip_on_a_triangle() {
        let tri =
            VPolytope::new(vec![Vector::from([0.0, 0.0]), Vector::from([2.0, 0.0]), Vector::from([0.0, 1.0])]).unwrap();
        let h = hull_hrep(&tri).unwrap();
        assert_eq!(h.rows().len(), 3);
        let back = enumerate_vertices(&h).unwrap();
        assert_eq!(back.vertices().len(), 3);
    }
}
