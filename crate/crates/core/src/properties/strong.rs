use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{grid_search, Bound, ModulusEstimate, Witness};
use crate::convex_solver::{enumerate_vertices, HPolytope, VPolytope, MAX_VERTEX_DIM};
use crate::error::{Error, Result};
use crate::normed_space::{NormSpec, Vector};
use crate::projection::{
    check_inputs, constrained_distance, distance_to_projection_set, distance_to_set, hausdorff_distance,
    level_polytope, level_set, solve_distance, ConvexBody, MinimizerSet, RayCaster, SamplingOptions, FACE_LEVEL_TOL,
};

/// Number of best rays refined by local search in the sampled excess.
const POLISHED_RAYS: usize = 8;
/// Cap on the number of sample points representing a sampled projection set.
const TARGET_RAYS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessReport {
    pub value: f64,
    /// Point of the near set realizing `value`.
    pub witness: Vector,
    pub exact: bool,
    pub samples: usize,
}

enum Target {
    Set(MinimizerSet),
    /// `d(y, C ∩ B[x, level])` solved per query.
    Program(f64),
}

/// Everything about `x` and `C` that does not depend on δ.
pub(crate) struct ExcessContext<'a> {
    x: &'a Vector,
    body: &'a ConvexBody,
    n: &'a NormSpec,
    d: f64,
    coeffs: Vec<f64>,
    exact: bool,
    target: Target,
}

impl<'a> ExcessContext<'a> {
    pub(crate) fn new(x: &'a Vector, body: &'a ConvexBody, n: &'a NormSpec, opts: SamplingOptions) -> Result<Self> {
        check_inputs(x, body, n)?;
        let (d, coeffs) = solve_distance(x, body, n)?;
        let k = body.coeff_dim(n.dim());
        let polyhedral = n.is_polyhedral() && body.is_polyhedral(n);
        let exact = polyhedral && k <= MAX_VERTEX_DIM;
        let target = if exact || d <= 1e-12 || n.is_strictly_convex() {
            Target::Set(level_set(x, body, n, d, &coeffs, 0.0, opts)?)
        } else if polyhedral {
            Target::Program(d + 1e-10)
        } else {
            let small = SamplingOptions { rays: opts.rays.min(TARGET_RAYS), ..opts };
            Target::Set(level_set(x, body, n, d, &coeffs, 0.0, small)?)
        };
        Ok(Self { x, body, n, d, coeffs, exact, target })
    }

    fn dist(&self, y: &Vector) -> Result<f64> {
        match &self.target {
            Target::Set(s) => distance_to_set(y, s, self.n),
            Target::Program(level) => constrained_distance(y, self.x, self.body, self.n, *level),
        }
    }

    fn projection_point(&self) -> Vector {
        if self.d <= 1e-12 {
            self.x.clone()
        } else {
            Vector::from_vec_unchecked(self.body.embed(&self.coeffs))
        }
    }

    pub(crate) fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn report(&self, delta: f64, opts: SamplingOptions) -> Result<ExcessReport> {
        if delta == 0.0 {
            return Ok(ExcessReport { value: 0.0, witness: self.projection_point(), exact: true, samples: 0 });
        }
        if self.exact {
            let near = level_set(self.x, self.body, self.n, self.d, &self.coeffs, delta, opts)?;
            let mut best = (f64::NEG_INFINITY, self.projection_point());
            for v in near.points() {
                let e = self.dist(v)?;
                if e > best.0 {
                    best = (e, v.clone());
                }
            }
            return Ok(ExcessReport {
                value: best.0.max(0.0),
                witness: best.1,
                exact: true,
                samples: near.points().len(),
            });
        }
        self.sampled(delta, opts)
    }

    fn sampled(&self, delta: f64, opts: SamplingOptions) -> Result<ExcessReport> {
        let level = self.d + delta.max(FACE_LEVEL_TOL * self.d.max(1.0));
        let caster = RayCaster::new(self.x, self.body, self.n, self.d, &self.coeffs, level);
        let rays = match self.target {
            Target::Program(_) => opts.rays.min(1000),
            Target::Set(_) => opts.rays,
        }
        .max(2);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let dirs = caster.directions(rays, &mut rng);
        let score = |u: &[f64]| -> Result<(f64, Vector)> {
            let y = caster.ambient(&caster.boundary(u));
            Ok((self.dist(&y)?, y))
        };
        let scored: Vec<(f64, Vector)> = dirs.par_iter().map(|u| score(u)).collect::<Result<_>>()?;
        let mut order: Vec<usize> = (0..scored.len()).collect();
        order.sort_by(|&a, &b| scored[b].0.total_cmp(&scored[a].0).then(a.cmp(&b)));
        let k = caster.coeff_dim();
        let mut evals = scored.len();
        let mut best = scored[order[0]].clone();
        if k > 1 {
            let start_step = if k == 2 { 2.0 * PI / rays as f64 } else { 0.5 };
            let polished: Vec<(f64, Vector, usize)> = order
                .iter()
                .take(POLISHED_RAYS)
                .map(|&i| (dirs[i].clone(), scored[i].clone()))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(u, start)| polish(u, start, start_step, &score))
                .collect::<Result<_>>()?;
            for (v, y, used) in polished {
                evals += used;
                if v > best.0 {
                    best = (v, y);
                }
            }
        }
        Ok(ExcessReport { value: best.0.max(0.0), witness: best.1, exact: false, samples: evals })
    }
}

/// Pattern search over ray directions, maximizing `score`.
fn polish<F>(mut u: Vec<f64>, start: (f64, Vector), mut step: f64, score: &F) -> Result<(f64, Vector, usize)>
where
    F: Fn(&[f64]) -> Result<(f64, Vector)>,
{
    let (mut best, mut point) = start;
    let mut used = 0;
    while step > 1e-10 && used < 600 {
        let mut improved = false;
        for cand in neighbours(&u, step) {
            let (v, y) = score(&cand)?;
            used += 1;
            if v > best {
                best = v;
                point = y;
                u = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((best, point, used))
}

fn neighbours(u: &[f64], step: f64) -> Vec<Vec<f64>> {
    if u.len() == 2 {
        let th = u[1].atan2(u[0]);
        return [th + step, th - step].iter().map(|t| vec![t.cos(), t.sin()]).collect();
    }
    let mut out = Vec::with_capacity(2 * u.len());
    for j in 0..u.len() {
        for s in [step, -step] {
            let mut v = u.to_vec();
            v[j] += s;
            let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            out.push(v.into_iter().map(|a| a / len).collect());
        }
    }
    out
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("delta must be finite and nonnegative, got {delta}")))
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("epsilon must be finite and positive, got {epsilon}")))
    }
}

/// One-sided excess `e(P_C(x, δ), P_C(x))`.
pub fn strong_prox_excess(c: &ConvexBody, n: &NormSpec, x: &Vector, delta: f64) -> Result<f64> {
    Ok(strong_prox_excess_report(c, n, x, delta, SamplingOptions::default())?.value)
}

pub fn strong_prox_excess_report(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    delta: f64,
    opts: SamplingOptions,
) -> Result<ExcessReport> {
    check_delta(delta)?;
    ExcessContext::new(x, c, n, opts)?.report(delta, opts)
}

/// Largest grid δ with `e(P_C(x, δ), P_C(x)) ≤ ε`.
pub fn strong_prox_modulus(c: &ConvexBody, n: &NormSpec, x: &Vector, epsilon: f64) -> Result<ModulusEstimate> {
    strong_prox_modulus_with(c, n, x, epsilon, SamplingOptions::default())
}

pub fn strong_prox_modulus_with(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    epsilon: f64,
    opts: SamplingOptions,
) -> Result<ModulusEstimate> {
    check_epsilon(epsilon)?;
    let ctx = ExcessContext::new(x, c, n, opts)?;
    let mut used = 0;
    let (delta, report, capped) = grid_search(epsilon, |delta| {
        let r = ctx.report(delta, opts)?;
        used += r.samples;
        Ok((r.value, r))
    })?;
    Ok(ModulusEstimate {
        epsilon,
        radius_r: None,
        delta,
        worst_witness: Witness { x: x.clone(), y: Some(report.witness), achieved_excess: report.value },
        samples_used: used,
        bound: if ctx.exact { Bound::Exact } else { Bound::UpperBound },
        capped,
    })
}

/// Searches for `w ∈ C` with `‖w - x‖ ≤ α` and `d(w, P_C(x)) > ε`.
///
/// Such a point lies within `α + δ` of `x` for every `δ > 0`, so it refutes the
/// condition "`‖x - w‖ < α + δ` implies `d(w, P_C(x)) < ε`".
pub fn lz_falsifier(c: &ConvexBody, n: &NormSpec, x: &Vector, alpha: f64, epsilon: f64) -> Result<Option<Vector>> {
    check_epsilon(epsilon)?;
    check_inputs(x, c, n)?;
    let (d, coeffs) = solve_distance(x, c, n)?;
    if !alpha.is_finite() || alpha < d - 1e-12 {
        return Err(Error::InvalidInput(format!("alpha {alpha} is below d(x, C) = {d}")));
    }
    if alpha - d <= 1e-12 {
        return Ok(None);
    }
    if d > 1e-12 {
        // walk from x through its projection until the distance to x reaches alpha
        let p = c.embed(&coeffs);
        let gap = n.eval_diff(&p, x.as_slice());
        let w: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + alpha / gap * (pi - xi)).collect();
        let w = Vector::from_vec_unchecked(w);
        if c.violation(&w, n)? <= 1e-9 && distance_to_projection_set(&w, x, c, n)? > epsilon {
            return Ok(Some(w));
        }
    }
    let report = strong_prox_excess_report(c, n, x, alpha - d, SamplingOptions::default())?;
    Ok((report.value > epsilon).then_some(report.witness))
}

/// Hausdorff distance between `P_C(x, δ)` and `(P_C(x) + δ B_X) ∩ C`.
///
/// Both sets are exact polytopes; the enlargement is the projection of a
/// polytope in `(c, c')` coordinates and needs `2k ≤ 4`.
pub fn enlargement_gap(c: &ConvexBody, n: &NormSpec, x: &Vector, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    check_inputs(x, c, n)?;
    let dim = n.dim();
    let k = c.coeff_dim(dim);
    if !(n.is_polyhedral() && c.is_polyhedral(n)) {
        return Err(Error::InvalidInput("enlargement check needs a polyhedral norm and body".into()));
    }
    if 2 * k > MAX_VERTEX_DIM {
        return Err(Error::DimTooLarge { dim: 2 * k, max: MAX_VERTEX_DIM });
    }
    let (d, coeffs) = solve_distance(x, c, n)?;
    let opts = SamplingOptions::default();
    let near = level_set(x, c, n, d, &coeffs, delta, opts)?;

    let face = level_polytope(x, c, n, d + FACE_LEVEL_TOL)?;
    let rows = n.gauge_rows()?;
    let mut lifted = HPolytope::new(2 * k);
    let pad = |left: &[f64], right: &[f64]| -> Vector {
        Vector::from_vec_unchecked(left.iter().chain(right).copied().collect())
    };
    let zeros = vec![0.0; k];
    for r in face.rows() {
        lifted.push(pad(&zeros, r.normal.as_slice()), r.offset)?;
    }
    match c {
        ConvexBody::Subspace { .. } => {}
        ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => {
            for g in &rows {
                let gm = c.coeffs_transpose(g.as_slice());
                let neg: Vec<f64> = gm.iter().map(|v| -v).collect();
                lifted.push(pad(&gm, &zeros), *radius)?;
                lifted.push(pad(&neg, &zeros), *radius)?;
            }
        }
        ConvexBody::Polytope(h) => {
            for r in h.rows() {
                lifted.push(pad(r.normal.as_slice(), &zeros), r.offset)?;
            }
        }
    }
    for g in &rows {
        let gm = c.coeffs_transpose(g.as_slice());
        let neg: Vec<f64> = gm.iter().map(|v| -v).collect();
        lifted.push(pad(&gm, &neg), delta)?;
        lifted.push(pad(&neg, &gm), delta)?;
    }
    let verts = enumerate_vertices(&lifted)?;
    let mut points: Vec<Vector> = Vec::new();
    for v in verts.vertices() {
        let z = Vector::from_vec_unchecked(c.embed(&v.as_slice()[..k]));
        if !points.iter().any(|p| (p - &z).max_abs() <= 1e-9) {
            points.push(z);
        }
    }
    let enlarged = MinimizerSet::Face(VPolytope::new(points)?);
    hausdorff_distance(&near, &enlarged, n)
}
