use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::normed_space::{NormSpec, Vector};
use crate::projection::{distance, distance_to_projection_set, ConvexBody, MEMBERSHIP_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityResidual {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, residual: (lhs - rhs).abs() }
    }
}

/// Residual of `‖x - y‖ = d(x, Y) + d(y, P_Y(x))`.
///
/// `Y` is a subspace (then `y ∈ Y` is required) or a subspace ball `B_Y`; for
/// balls `y` only has to lie in the ambient ball of the same radius, which
/// admits the direct-sum counterexample whose `y` leaves the subspace.
pub fn half_ball_residual(y_body: &ConvexBody, n: &NormSpec, x: &Vector, y: &Vector) -> Result<IdentityResidual> {
    y_body.validate(n)?;
    check_dim(n.dim(), x.dim())?;
    check_dim(n.dim(), y.dim())?;
    let violation = match y_body {
        ConvexBody::Subspace { .. } => y_body.violation(y, n)?,
        ConvexBody::SubspaceBall { radius, .. } => n.eval(y.as_slice()) - radius,
        _ => return Err(Error::InvalidInput("the identity is defined for subspaces and subspace balls".into())),
    };
    if violation > MEMBERSHIP_TOL {
        return Err(Error::NotInBody { violation });
    }
    let lhs = n.eval_diff(x.as_slice(), y.as_slice());
    let rhs = distance(x, y_body, n)? + distance_to_projection_set(y, x, y_body, n)?;
    Ok(IdentityResidual::new(lhs, rhs))
}
