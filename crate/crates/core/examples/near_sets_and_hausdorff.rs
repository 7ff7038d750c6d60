//! Near-minimizer sets `P_C(x, δ)` and Hausdorff distances between them.

use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::{excess, hausdorff_distance, near_minimizer_set, project, ConvexBody, NearSetSpec};
use proxilab::Result;

fn main() -> Result<()> {
    let n = NormSpec::linf(3);
    let plane = ConvexBody::coordinate_subspace(3, &[0, 1])?;
    let x = Vector::from([0.5, -0.25, 1.0]);
    let proj = project(&x, &plane, &n)?.minimizers;
    for delta in [0.0, 0.1, 0.5] {
        let near = near_minimizer_set(&x, &plane, &n, NearSetSpec::new(delta)?)?;
        println!(
            "delta = {delta:.1}: {} vertices, excess over P(x) = {:.6}, Hausdorff = {:.6}",
            near.points().len(),
            excess(&near, &proj, &n)?,
            hausdorff_distance(&near, &proj, &n)?
        );
    }
    Ok(())
}
