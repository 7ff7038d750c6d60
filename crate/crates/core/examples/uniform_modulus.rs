//! Uniform proximinality moduli estimated over sampled points within distance `R`.

use proxilab::normed_space::NormSpec;
use proxilab::projection::ConvexBody;
use proxilab::properties::{uniform_prox_modulus, SamplingBudget};
use proxilab::Result;

fn main() -> Result<()> {
    let budget = SamplingBudget { x_samples: 16, y_rays: 16, y_levels: 8, ..Default::default() };
    let plane = ConvexBody::coordinate_subspace(3, &[0, 1])?;
    let m = uniform_prox_modulus(&plane, &NormSpec::linf(3), 0.3, 2.0, &budget)?;
    println!("l_inf M-ideal: delta = {} from {} samples", m.delta, m.samples_used);

    let disk = ConvexBody::norm_ball(1.0)?;
    let m = uniform_prox_modulus(&disk, &NormSpec::euclidean(2), 0.5, 2.0, &budget)?;
    println!("disk: delta = {}, worst x = {:?}", m.delta, m.worst_witness.x.as_slice());
    Ok(())
}
