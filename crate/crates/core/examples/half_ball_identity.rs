//! The identity `‖x - y‖ = d(x, Y) + d(y, P_Y(x))` for `y` in the body.

use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use proxilab::properties::half_ball_residual;
use proxilab::Result;

fn main() -> Result<()> {
    let plane = ConvexBody::coordinate_subspace(3, &[0, 1])?;
    let r = half_ball_residual(
        &plane,
        &NormSpec::linf(3),
        &Vector::from([0.3, -1.0, 2.0]),
        &Vector::from([4.0, 1.0, 0.0]),
    )?;
    println!("l_inf plane:      lhs {:.6}, rhs {:.6}, residual {:.2e}", r.lhs, r.rhs, r.residual);

    let n = NormSpec::sup_direct_sum(NormSpec::euclidean(2), 1)?;
    let ball = ConvexBody::subspace_ball(vec![Vector::basis(3, 0), Vector::basis(3, 1)], 1.0)?;
    let h = 0.5f64.sqrt();
    let r = half_ball_residual(&ball, &n, &Vector::from([1.0, 1.0, 0.0]), &Vector::from([h, h, 1.0]))?;
    println!("sup-sum ball:     lhs {:.6}, rhs {:.6}, residual {:.6}", r.lhs, r.rhs, r.residual);
    Ok(())
}
