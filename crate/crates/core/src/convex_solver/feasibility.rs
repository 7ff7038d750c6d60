use serde::{Deserialize, Serialize};

use super::model::{Affine, Model};
use crate::error::{check_dim, Error, Result};
use crate::normed_space::{NormSpec, Vector};
use crate::projection::ConvexBody;

/// Largest optimal slack still reported as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-7;

/// Closed ball `B[center, radius]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Self {
        Self { center, radius }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub witness: Option<Vector>,
    /// `max_i(‖z - c_i‖ - r_i, body violation)` at the witness.
    pub slack: f64,
}

/// Decides whether `∩ B[c_i, r_i] ∩ body` is nonempty by minimizing the
/// common slack `s` in `‖z - c_i‖ ≤ r_i + s`.
pub fn convex_feasibility(balls: &[Ball], body: Option<&ConvexBody>, n: &NormSpec) -> Result<FeasibilityResult> {
    n.validate()?;
    if balls.is_empty() {
        return Err(Error::InvalidInput("at least one ball is required".into()));
    }
    let dim = n.dim();
    for b in balls {
        check_dim(dim, b.center.dim())?;
        if b.radius.is_nan() || b.radius < 0.0 {
            return Err(Error::InvalidInput(format!("negative radius {}", b.radius)));
        }
    }
    if let Some(c) = body {
        c.validate(n)?;
    }
    let mut model = Model::new();
    let (coeffs, z): (Vec<usize>, Vec<Affine>) = match body {
        Some(c) => {
            let v = model.vars(c.coeff_dim(dim));
            let z = c.embed_affine(&v, dim);
            (v, z)
        }
        None => {
            let v = model.vars(dim);
            let z = v.iter().map(|&i| Affine::var(i)).collect();
            (v, z)
        }
    };
    let s = model.var();
    model.minimize(s, 1.0);
    for b in balls {
        let diff: Vec<Affine> = z.iter().zip(b.center.iter()).map(|(e, ci)| e.clone().plus(-ci)).collect();
        model.norm_le(n, &diff, Affine::var(s).plus(b.radius));
    }
    if let Some(c) = body {
        c.constrain(&mut model, &coeffs, n, Some(s));
    }
    let sol = model.solve()?;
    let cvals: Vec<f64> = coeffs.iter().map(|&i| sol.v[i]).collect();
    let witness = match body {
        Some(c) => c.embed(&cvals),
        None => cvals.clone(),
    };
    let mut slack =
        balls.iter().map(|b| n.eval_diff(&witness, b.center.as_slice()) - b.radius).fold(f64::NEG_INFINITY, f64::max);
    if let Some(c) = body {
        slack = slack.max(body_slack(c, &cvals, n));
    }
    Ok(FeasibilityResult {
        feasible: slack <= FEASIBILITY_TOL,
        witness: Some(Vector::from_vec_unchecked(witness)),
        slack,
    })
}

fn body_slack(c: &ConvexBody, coeffs: &[f64], n: &NormSpec) -> f64 {
    match c {
        ConvexBody::Subspace { .. } => f64::NEG_INFINITY,
        ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => n.eval(&c.embed(coeffs)) - radius,
        ConvexBody::Polytope(h) => h
            .rows()
            .iter()
            .map(|r| r.normal.iter().zip(coeffs).map(|(a, x)| a * x).sum::<f64>() - r.offset)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linf_three_balls_meet() {
        let n = NormSpec::linf(2);
        let balls = [
            Ball::new(Vector::from([0.0, 0.0]), 1.0),
            Ball::new(Vector::from([2.0, 0.0]), 1.0),
            Ball::new(Vector::from([1.0, 1.0]), 1.0),
        ];
        let r = convex_feasibility(&balls, None, &n).unwrap();
        assert!(r.feasible);
        let w = r.witness.unwrap();
        for b in &balls {
            assert!(n.eval_diff(w.as_slice(), b.center.as_slice()) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn euclidean_triangle_is_infeasible() {
        let n = NormSpec::euclidean(2);
        let h = 3f64.sqrt();
        let balls = [
            Ball::new(Vector::from([0.0, 0.0]), 1.0),
            Ball::new(Vector::from([2.0, 0.0]), 1.0),
            Ball::new(Vector::from([1.0, h]), 1.0),
        ];
        let r = convex_feasibility(&balls, None, &n).unwrap();
        assert!(!r.feasible);
        assert!((r.slack - (2.0 / h - 1.0)).abs() < 1e-6, "{}", r.slack);
        let w = r.witness.unwrap();
        assert!((w[0] - 1.0).abs() < 1e-4 && (w[1] - 1.0 / h).abs() < 1e-4);
    }

    #[test]
    fn single_ball_witness_is_center() {
        for n in [NormSpec::linf(2), NormSpec::euclidean(2)] {
            let r = convex_feasibility(&[Ball::new(Vector::from([0.5, -1.0]), 0.7)], None, &n).unwrap();
            assert!(r.feasible);
            let w = r.witness.unwrap();
            assert!((&w - &Vector::from([0.5, -1.0])).max_abs() < 1e-6);
        }
    }

    #[test]
    fn body_restricts_the_witness() {
        let n = NormSpec::linf(2);
        let y = ConvexBody::subspace(vec![Vector::from([1.0, 0.0])]).unwrap();
        let r = convex_feasibility(&[Ball::new(Vector::from([0.0, 2.0]), 1.0)], Some(&y), &n).unwrap();
        assert!(!r.feasible);
        assert!((r.slack - 1.0).abs() < 1e-12);
    }
}
