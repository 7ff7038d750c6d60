//! Hausdorff continuity of the projection map under small perturbations of `x`.

use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use proxilab::properties::{continuity_sweep, projection_continuity_probe, SamplingBudget};
use proxilab::Result;

fn main() -> Result<()> {
    let budget = SamplingBudget::default();
    let disk = ConvexBody::norm_ball(1.0)?;
    let n = NormSpec::euclidean(2);
    let x = Vector::from([2.0, 0.0]);
    let probe = projection_continuity_probe(&disk, &n, &x, 0.1, &budget)?;
    println!(
        "disk: max Hausdorff {:.6} at perturbation {:?}",
        probe.max_hausdorff,
        probe.argmax_perturbation.as_slice()
    );
    println!("disk sweep over halving radii: {:?}", continuity_sweep(&disk, &n, &x, 0.1, &budget)?);

    let axis = ConvexBody::coordinate_subspace(2, &[0])?;
    let probe = projection_continuity_probe(&axis, &NormSpec::linf(2), &Vector::from([0.0, 1.0]), 0.1, &budget)?;
    println!("l_inf axis: max Hausdorff {:.6}", probe.max_hausdorff);
    Ok(())
}
