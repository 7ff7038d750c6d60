//! Step functions in `L_p(I, X)`: distance formulas against direct programs.

use proxilab::bochner::{
    average, dist_lifted_ball, dist_lifted_subspace, dist_to_projection_set, lp_norm, LpIndex, Method, StepFunction,
};
use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use proxilab::Result;

fn main() -> Result<()> {
    let n = NormSpec::euclidean(2);
    let y = ConvexBody::subspace(vec![Vector::from([1.0, 0.0])])?;
    let f = StepFunction::equal_weights(vec![
        Vector::from([1.0, 2.0]),
        Vector::from([-3.0, 0.5]),
        Vector::from([0.0, -1.0]),
    ])?;
    println!("average {:?}", average(&f).as_slice());
    for p in [LpIndex::ONE, LpIndex::TWO, LpIndex::INFINITY] {
        println!(
            "p = {p}: |f| = {:.4}, d(f, L_p(Y)) formula {:.6} direct {:.6}",
            lp_norm(&f, p, &n)?,
            dist_lifted_subspace(&f, &y, &n, p, Method::Formula)?,
            dist_lifted_subspace(&f, &y, &n, p, Method::Direct)?
        );
    }

    // The pointwise formula for the unit ball is only exact for constant functions.
    let line = ConvexBody::subspace(vec![Vector::from([1.0])])?;
    let g = StepFunction::equal_weights(vec![Vector::from([3.0]), Vector::from([0.0])])?;
    let real = NormSpec::euclidean(1);
    println!(
        "d(g, unit ball of L_1): formula {:.4}, coupled program {:.4}",
        dist_lifted_ball(&g, &line, &real, LpIndex::ONE, Method::Formula)?,
        dist_lifted_ball(&g, &line, &real, LpIndex::ONE, Method::Direct)?
    );

    let h = StepFunction::equal_weights(vec![Vector::from([0.0, 1.0]), Vector::from([2.0, -1.0])])?;
    let target = StepFunction::equal_weights(vec![Vector::from([1.0, 0.0]), Vector::from([0.0, 0.0])])?;
    println!(
        "distance to the lifted projection set: formula {:.6}, direct {:.6}",
        dist_to_projection_set(&target, &h, &y, &n, LpIndex::TWO, false, Method::Formula)?,
        dist_to_projection_set(&target, &h, &y, &n, LpIndex::TWO, false, Method::Direct)?
    );
    Ok(())
}
