use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SamplingBudget;
use crate::error::{Error, Result};
use crate::normed_space::{sample_unit_vector, NormSpec, Vector};
use crate::projection::{check_inputs, hausdorff_distance, project_with, ConvexBody, SamplingOptions};

/// Rays used for sampled projection sets inside the probe.
const PROBE_RAYS: usize = 400;
/// Number of halvings in [`continuity_sweep`].
pub const SWEEP_LEVELS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbe {
    pub max_hausdorff: f64,
    /// `x' - x` for the worst sample.
    pub argmax_perturbation: Vector,
}

/// Largest Hausdorff distance between `P_C(x')` and `P_C(x)` over sampled
/// `x'` with `‖x' - x‖ ≤ radius`. Uses `budget.x_samples` perturbations.
pub fn projection_continuity_probe(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    radius: f64,
    budget: &SamplingBudget,
) -> Result<ContinuityProbe> {
    check_inputs(x, c, n)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let opts = SamplingOptions { rays: PROBE_RAYS, probes: 0, seed: budget.seed };
    let base = project_with(x, c, n, opts)?.minimizers;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let perturbations: Vec<Vector> = (0..budget.x_samples.max(1))
        .map(|i| {
            let u = sample_unit_vector(n, &mut rng);
            let rho = if i % 2 == 0 { 1.0 } else { rng.gen::<f64>() };
            u.scaled(radius * rho)
        })
        .collect();
    let dists: Vec<f64> = perturbations
        .par_iter()
        .map(|p| {
            let moved = project_with(&(x + p), c, n, opts)?.minimizers;
            hausdorff_distance(&moved, &base, n)
        })
        .collect::<Result<_>>()?;
    let mut worst = 0;
    for (i, d) in dists.iter().enumerate() {
        if *d > dists[worst] {
            worst = i;
        }
    }
    Ok(ContinuityProbe { max_hausdorff: dists[worst], argmax_perturbation: perturbations[worst].clone() })
}

/// Probe maxima on the radii `radius · 2^{-k}`, `k = 0..SWEEP_LEVELS`.
pub fn continuity_sweep(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    radius: f64,
    budget: &SamplingBudget,
) -> Result<Vec<f64>> {
    (0..SWEEP_LEVELS)
        .map(|k| Ok(projection_continuity_probe(c, n, x, radius * 0.5f64.powi(k as i32), budget)?.max_hausdorff))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_probe_is_small() {
        let c = ConvexBody::norm_ball(1.0).unwrap();
        let n = NormSpec::euclidean(2);
        let p =
            projection_continuity_probe(&c, &n, &Vector::from([2.0, 0.0]), 0.1, &SamplingBudget::default()).unwrap();
        assert!(p.max_hausdorff <= 0.1);
        let sweep = continuity_sweep(&c, &n, &Vector::from([2.0, 0.0]), 0.1, &SamplingBudget::default()).unwrap();
        assert!(sweep.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{sweep:?}");
    }

    #[test]
    fn linf_segment_probe() {
        let c = ConvexBody::coordinate_subspace(2, &[0]).unwrap();
        let n = NormSpec::linf(2);
        let p =
            projection_continuity_probe(&c, &n, &Vector::from([0.0, 1.0]), 0.1, &SamplingBudget::default()).unwrap();
        assert!(p.max_hausdorff <= 0.2 + 1e-6, "{}", p.max_hausdorff);
    }
}
