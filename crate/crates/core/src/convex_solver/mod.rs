//! Linear programming, vertex enumeration and convex feasibility.
//!
//! The LP kernel is a dense two-phase simplex with Bland's rule. Programs that
//! involve smooth norms go through a log-barrier interior-point method instead;
//! [`model`] chooses between the two.

mod conic;
mod feasibility;
pub(crate) mod model;
mod simplex;
mod vertices;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::normed_space::{dot, Vector};

pub use feasibility::{convex_feasibility, Ball, FeasibilityResult, FEASIBILITY_TOL};
pub use vertices::{enumerate_optimal_face, enumerate_vertices, hull_hrep, MAX_VERTEX_DIM};

/// Closed half-space `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vector,
    pub offset: f64,
}

/// Intersection of finitely many closed half-spaces; possibly empty or unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<HalfSpace>,
}

impl HPolytope {
    /// The whole of `ℝ^dim` (no rows yet).
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn from_rows(dim: usize, rows: Vec<(Vector, f64)>) -> Result<Self> {
        let mut poly = Self::new(dim);
        for (normal, offset) in rows {
            poly.push(normal, offset)?;
        }
        Ok(poly)
    }

    pub fn push(&mut self, normal: Vector, offset: f64) -> Result<()> {
        check_dim(self.dim, normal.dim())?;
        if !offset.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite offset {offset}")));
        }
        self.rows.push(HalfSpace { normal, offset });
        Ok(())
    }

    /// Adds `⟨normal, x⟩ = value` as the pair of opposite inequalities.
    pub fn push_equality(&mut self, normal: Vector, value: f64) -> Result<()> {
        let neg = -&normal;
        self.push(normal, value)?;
        self.push(neg, -value)
    }

    /// Axis-aligned box `lo ≤ x_i ≤ hi`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        let mut poly = Self::new(dim);
        for i in 0..dim {
            let e = Vector::basis(dim, i);
            poly.rows.push(HalfSpace { normal: -&e, offset: -lo });
            poly.rows.push(HalfSpace { normal: e, offset: hi });
        }
        poly
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HalfSpace] {
        &self.rows
    }

    /// Largest positive part of `⟨a, x⟩ - b` over all rows.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(dot(r.normal.as_slice(), x) - r.offset))
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.dim() == self.dim && self.violation(x.as_slice()) <= tol
    }

    pub(crate) fn raw_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let a = self.rows.iter().map(|r| r.normal.as_slice().to_vec()).collect();
        let b = self.rows.iter().map(|r| r.offset).collect();
        (a, b)
    }

    /// Center and radius of the largest Euclidean ball inside the polytope.
    pub fn chebyshev_center(&self) -> Result<(Vector, f64)> {
        let n = self.dim;
        let mut a = Vec::with_capacity(self.rows.len() + 1);
        let mut b = Vec::with_capacity(self.rows.len() + 1);
        for r in &self.rows {
            let mut row = r.normal.as_slice().to_vec();
            row.push(r.normal.euclidean_len());
            a.push(row);
            b.push(r.offset);
        }
        // cap the radius so unbounded polytopes still have a center
        let mut cap = vec![0.0; n + 1];
        cap[n] = 1.0;
        a.push(cap);
        b.push(1e6);
        let mut c = vec![0.0; n + 1];
        c[n] = -1.0;
        let sol = simplex::solve(&c, &a, &b)?;
        let radius = sol.x[n];
        if radius < 0.0 {
            return Err(Error::Infeasible);
        }
        Ok((Vector::from_vec_unchecked(sol.x[..n].to_vec()), radius))
    }
}

/// Convex hull of finitely many points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    vertices: Vec<Vector>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let first =
            vertices.first().ok_or_else(|| Error::InvalidInput("a V-polytope needs at least one vertex".into()))?;
        let dim = first.dim();
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// Minimize `⟨objective, x⟩` over `feasible ∩ {⟨a_j, x⟩ = b_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vector,
    pub feasible: HPolytope,
    pub equalities: Vec<(Vector, f64)>,
}

impl LinearProgram {
    pub fn new(objective: Vector, feasible: HPolytope) -> Self {
        Self { objective, feasible, equalities: Vec::new() }
    }

    pub fn with_equality(mut self, normal: Vector, value: f64) -> Self {
        self.equalities.push((normal, value));
        self
    }

    fn validate(&self) -> Result<()> {
        let dim = self.objective.dim();
        check_dim(dim, self.feasible.dim())?;
        for (a, b) in &self.equalities {
            check_dim(dim, a.dim())?;
            if !b.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite equality value {b}")));
            }
        }
        Ok(())
    }

    /// All constraints as inequality rows; each equality becomes a pair.
    fn inequality_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let (mut a, mut b) = self.feasible.raw_rows();
        for (normal, value) in &self.equalities {
            a.push(normal.as_slice().to_vec());
            b.push(*value);
            a.push(normal.iter().map(|c| -c).collect());
            b.push(-value);
        }
        (a, b)
    }
}

/// Optimal value, optimal point and dual certificate of an LP.
///
/// The multipliers satisfy `objective + Σ λ_i a_i + Σ μ_j e_j = 0` with
/// `λ ≥ 0` on the inequality rows and free `μ` on the equalities.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vector,
    pub multipliers: Vec<f64>,
    pub equality_multipliers: Vec<f64>,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let (a, b) = lp.inequality_rows();
    let sol = simplex::solve(lp.objective.as_slice(), &a, &b)?;
    let m = lp.feasible.rows().len();
    let equality_multipliers =
        (0..lp.equalities.len()).map(|j| sol.lambda[m + 2 * j] - sol.lambda[m + 2 * j + 1]).collect();
    Ok(LpSolution {
        value: sol.value,
        point: Vector::from_vec_unchecked(sol.x),
        multipliers: sol.lambda[..m].to_vec(),
        equality_multipliers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> HPolytope {
        HPolytope::cube(2, -1.0, 1.0)
    }

    #[test]
    fn lp_on_the_square() {
        let lp = LinearProgram::new(Vector::from([1.0, 0.0]), square());
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value + 1.0).abs() < 1e-12);
        assert!(square().contains(&sol.point, 1e-12));
    }

    #[test]
    fn lp_with_lower_bounds() {
        let poly = HPolytope::from_rows(
            2,
            vec![
                (Vector::from([-1.0, 0.0]), 0.0),
                (Vector::from([0.0, -1.0]), 0.0),
                (Vector::from([-1.0, -1.0]), -2.0),
            ],
        )
        .unwrap();
        let sol = solve_lp(&LinearProgram::new(Vector::from([1.0, 1.0]), poly)).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lp_infeasible_and_unbounded() {
        let poly = HPolytope::from_rows(1, vec![(Vector::from([1.0]), -1.0), (Vector::from([-1.0]), 0.0)]).unwrap();
        assert_eq!(solve_lp(&LinearProgram::new(Vector::from([1.0]), poly)), Err(Error::Infeasible));
        let half = HPolytope::from_rows(1, vec![(Vector::from([1.0]), 3.0)]).unwrap();
        assert_eq!(solve_lp(&LinearProgram::new(Vector::from([1.0]), half)), Err(Error::Unbounded));
    }

    #[test]
    fn lp_with_equality_reports_free_multiplier() {
        let lp = LinearProgram::new(Vector::from([1.0, 2.0]), square()).with_equality(Vector::from([1.0, 1.0]), 0.5);
        let sol = solve_lp(&lp).unwrap();
        // x2 = 0.5 - x1, objective 1 - x1 + ... minimized at x1 = 1, x2 = -0.5
        assert!((sol.value - 0.0).abs() < 1e-12);
        assert!((sol.point[0] - 1.0).abs() < 1e-12);
        let mut recon = lp.objective.as_slice().to_vec();
        for (lam, row) in sol.multipliers.iter().zip(lp.feasible.rows()) {
            assert!(*lam >= 0.0);
            for (r, a) in recon.iter_mut().zip(row.normal.iter()) {
                *r += lam * a;
            }
        }
        for (mu, (a, _)) in sol.equality_multipliers.iter().zip(&lp.equalities) {
            for (r, ai) in recon.iter_mut().zip(a.iter()) {
                *r += mu * ai;
            }
        }
        assert!(recon.iter().all(|r| r.abs() < 1e-10), "{recon:?}");
    }

    #[test]
    fn chebyshev_center_of_square() {
        let (c, r) = square().chebyshev_center().unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(c.max_abs() < 1e-12);
    }
}
