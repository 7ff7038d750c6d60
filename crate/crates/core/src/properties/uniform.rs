use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{grid_below, Bound, ModulusEstimate, Witness, GRID, STRICT_MARGIN};
use crate::error::{Error, Result};
use crate::normed_space::{gaussian_direction, sample_unit_vector, NormSpec, Vector};
use crate::projection::{constrained_distance, solve_distance, ConvexBody, RayCaster};

/// How many pairs `(x, y)` the uniform estimator examines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingBudget {
    pub x_samples: usize,
    /// Ray directions per level set around each `x`.
    pub y_rays: usize,
    /// Number of levels `R + t` with `t` evenly spaced in `(0, delta_cap]`.
    pub y_levels: usize,
    /// Largest δ examined; defaults to `2ε`.
    pub delta_cap: Option<f64>,
    pub seed: u64,
}

impl Default for SamplingBudget {
    fn default() -> Self {
        Self { x_samples: 48, y_rays: 32, y_levels: 12, delta_cap: None, seed: 0 }
    }
}

struct Pair {
    margin: f64,
    g: f64,
    x: Vector,
    y: Vector,
}

/// Sampled estimate of the uniform modulus `δ(ε, R)`.
///
/// For each pair `(x, y)` with `d(x, C) ≤ R`, `y ∈ C`, the value
/// `g = d(y, C ∩ B[x, R])` is computed and the pair is bad when
/// `g > ε - STRICT_MARGIN`. The returned δ is the largest grid value strictly
/// below `‖x - y‖ - R` for every bad pair, hence an upper bound.
pub fn uniform_prox_modulus(
    c: &ConvexBody,
    n: &NormSpec,
    epsilon: f64,
    radius: f64,
    budget: &SamplingBudget,
) -> Result<ModulusEstimate> {
    c.validate(n)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("R must be positive, got {radius}")));
    }
    let cap = budget.delta_cap.unwrap_or(2.0 * epsilon);
    if cap.is_nan() || cap <= 0.0 {
        return Err(Error::InvalidInput(format!("delta cap must be positive, got {cap}")));
    }
    let per_x: Vec<Vec<Pair>> = (0..budget.x_samples.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(i as u64);
            let x = sample_x(c, n, radius, i, &mut rng)?;
            pairs_for(c, n, &x, radius, cap, budget, &mut rng)
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<Pair> = per_x.into_iter().flatten().collect();

    let min_bad =
        pairs.iter().filter(|p| p.g > epsilon - STRICT_MARGIN).map(|p| p.margin).fold(f64::INFINITY, f64::min);
    let top = (cap / GRID + 1e-9).floor() * GRID;
    let (delta, capped) = if min_bad.is_finite() { (grid_below(min_bad).min(top), false) } else { (top, true) };

    let admitted = pairs.iter().filter(|p| p.margin <= delta);
    let worst = admitted
        .max_by(|a, b| a.g.total_cmp(&b.g).then_with(|| b.x.lex_cmp(&a.x)).then_with(|| b.y.lex_cmp(&a.y)))
        .or_else(|| pairs.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)))
        .ok_or_else(|| Error::InvalidInput("no pairs were sampled".into()))?;
    Ok(ModulusEstimate {
        epsilon,
        radius_r: Some(radius),
        delta,
        worst_witness: Witness { x: worst.x.clone(), y: Some(worst.y.clone()), achieved_excess: worst.g },
        samples_used: pairs.len(),
        bound: Bound::UpperBound,
        capped,
    })
}

/// Alternates points pushed out to `d(x, C) = R` along random rays with
/// points drawn from a box around a point of `C`.
fn sample_x(c: &ConvexBody, n: &NormSpec, radius: f64, index: usize, rng: &mut ChaCha8Rng) -> Result<Vector> {
    let q = body_point(c, n, radius, rng);
    let dist = |z: &Vector| -> Result<f64> { Ok(solve_distance(z, c, n)?.0) };
    if index.is_multiple_of(2) {
        let v = sample_unit_vector(n, rng);
        let at = |s: f64| &q + &v.scaled(s);
        let mut hi = radius;
        let mut doublings = 0;
        while dist(&at(hi))? < radius {
            hi *= 2.0;
            doublings += 1;
            if doublings > 40 {
                return Ok(at(radius));
            }
        }
        let mut lo = 0.0;
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if dist(&at(mid))? <= radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(at(lo));
    }
    for _ in 0..100 {
        let w: Vec<f64> = (0..n.dim()).map(|_| rng.gen_range(-1.0..1.0) * radius).collect();
        let x = &q + &Vector::from_vec_unchecked(w);
        if dist(&x)? <= radius {
            return Ok(x);
        }
    }
    Ok(q)
}

/// A point of `C`, on the relative boundary half of the time when `C` is bounded.
fn body_point(c: &ConvexBody, n: &NormSpec, radius: f64, rng: &mut ChaCha8Rng) -> Vector {
    let dim = n.dim();
    let k = c.coeff_dim(dim);
    let rho = if rng.gen_bool(0.5) { 1.0 } else { rng.gen::<f64>() };
    match c {
        ConvexBody::Subspace { .. } => {
            let coeffs = gaussian_direction(k, rng).scaled(radius * rng.gen::<f64>());
            Vector::from_vec_unchecked(c.embed(coeffs.as_slice()))
        }
        ConvexBody::SubspaceBall { radius: r, .. } => {
            let z = c.embed(gaussian_direction(k, rng).as_slice());
            let len = n.eval(&z);
            Vector::from_vec_unchecked(z.iter().map(|v| v * rho * r / len).collect())
        }
        ConvexBody::NormBall { radius: r } => sample_unit_vector(n, rng).scaled(rho * r),
        ConvexBody::Polytope(h) => {
            let center = h.chebyshev_center().map(|(p, _)| p).unwrap_or_else(|_| Vector::zeros(k));
            let u = gaussian_direction(k, rng);
            let at = |s: f64| &center + &u.scaled(s);
            let mut hi = 1.0;
            while h.violation(at(hi).as_slice()) <= 0.0 && hi < 1e3 {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if h.violation(at(mid).as_slice()) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            at(lo * rho)
        }
    }
}

fn pairs_for(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    radius: f64,
    cap: f64,
    budget: &SamplingBudget,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Pair>> {
    let (d, coeffs) = solve_distance(x, c, n)?;
    let polyhedral = n.is_polyhedral() && c.is_polyhedral(n);
    let eta = if polyhedral { 1e-10 } else { 1e-9 * radius.max(1.0) };
    let inner = radius.max(d) + eta;
    let proj = Vector::from_vec_unchecked(c.embed(&coeffs));
    let on_sphere = n.is_strictly_convex() && (radius - d).abs() <= 1e-9 * radius.max(1.0);
    let levels = budget.y_levels.max(1);
    let mut out = Vec::new();
    for j in 0..levels {
        let t = cap * (j + 1) as f64 / levels as f64;
        let caster = RayCaster::new(x, c, n, d, &coeffs, radius + t);
        for u in caster.directions(budget.y_rays.max(2), rng) {
            let y = caster.ambient(&caster.boundary(&u));
            let margin = n.eval_diff(x.as_slice(), y.as_slice()) - radius;
            let g = if margin <= 0.0 {
                0.0
            } else if on_sphere {
                n.eval_diff(y.as_slice(), proj.as_slice())
            } else {
                constrained_distance(&y, x, c, n, inner)?
            };
            out.push(Pair { margin, g, x: x.clone(), y });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mideal_modulus_is_epsilon() {
        let c = ConvexBody::coordinate_subspace(3, &[0, 1]).unwrap();
        let n = NormSpec::linf(3);
        let budget = SamplingBudget { x_samples: 16, y_rays: 16, y_levels: 8, ..Default::default() };
        let m = uniform_prox_modulus(&c, &n, 0.3, 2.0, &budget).unwrap();
        assert!(m.delta >= 0.3 - 1e-3, "{m:?}");
        assert_eq!(m.bound, Bound::UpperBound);
        assert!(m.worst_witness.achieved_excess <= 0.3 + 1e-6);
    }

    #[test]
    fn disk_modulus_is_positive() {
        let c = ConvexBody::norm_ball(1.0).unwrap();
        let n = NormSpec::euclidean(2);
        let budget = SamplingBudget { x_samples: 8, y_rays: 16, y_levels: 6, ..Default::default() };
        let m = uniform_prox_modulus(&c, &n, 0.5, 2.0, &budget).unwrap();
        assert!(m.delta > 0.0, "{m:?}");
    }

    #[test]
    fn large_epsilon_bound() {
        let c = ConvexBody::norm_ball(1.0).unwrap();
        let n = NormSpec::euclidean(2);
        let budget = SamplingBudget { x_samples: 8, y_rays: 8, y_levels: 4, ..Default::default() };
        let m = uniform_prox_modulus(&c, &n, 0.5, 0.1, &budget).unwrap();
        assert!(m.delta >= 0.5 - 0.2 - GRID, "{m:?}");
    }
}
